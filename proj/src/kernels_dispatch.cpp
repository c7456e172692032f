#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "aoakey/kernels.hpp"

namespace aoakey::kernels {

#if !defined(AOAKEY_HAVE_AVX2)
// Stubs keep the symbols linkable; avx2_available() is false so they are never reached.
namespace avx2 {
void projection_energy(const SteeringBlock& b, std::span<const std::complex<double>> u, std::span<double> o) {
  scalar::projection_energy(b, u, o);
}
void inner_products(const SteeringBlock& b, std::span<const std::complex<double>> v,
                    std::span<std::complex<double>> o) {
  scalar::inner_products(b, v, o);
}
std::complex<double> cross_correlation(std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y) {
  return scalar::cross_correlation(x, y);
}
std::size_t mismatch_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return scalar::mismatch_count(a, b);
}
}  // namespace avx2
#endif

namespace {

Backend default_backend() noexcept {
  if (const char* env = std::getenv("AOAKEY_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() noexcept {
  static std::atomic<Backend> slot{default_backend()};
  return slot;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if defined(AOAKEY_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() noexcept { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available()) {
    throw std::invalid_argument("kernels: AVX2 backend not available on this build or CPU");
  }
  backend_slot().store(b, std::memory_order_relaxed);
}

void projection_energy(const SteeringBlock& block, std::span<const std::complex<double>> basis,
                       std::span<double> out) {
  if (out.size() < block.count) throw std::invalid_argument("projection_energy: output too small");
  if (block.elements == 0 || basis.size() % block.elements != 0) {
    throw std::invalid_argument("projection_energy: basis size is not a multiple of the element count");
  }
  if (active_backend() == Backend::Avx2) {
    avx2::projection_energy(block, basis, out);
  } else {
    scalar::projection_energy(block, basis, out);
  }
}

void inner_products(const SteeringBlock& block, std::span<const std::complex<double>> v,
                    std::span<std::complex<double>> out) {
  if (out.size() < block.count || v.size() < block.elements) {
    throw std::invalid_argument("inner_products: size mismatch");
  }
  if (active_backend() == Backend::Avx2) {
    avx2::inner_products(block, v, out);
  } else {
    scalar::inner_products(block, v, out);
  }
}

std::complex<double> cross_correlation(std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y) {
  if (x.size() != y.size()) throw std::invalid_argument("cross_correlation: length mismatch");
  return active_backend() == Backend::Avx2 ? avx2::cross_correlation(x, y) : scalar::cross_correlation(x, y);
}

std::size_t mismatch_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mismatch_count: length mismatch");
  return active_backend() == Backend::Avx2 ? avx2::mismatch_count(a, b) : scalar::mismatch_count(a, b);
}

}  // namespace aoakey::kernels
