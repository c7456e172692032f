#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference implementation and,
// on x86-64, an AVX2+FMA variant chosen at runtime. The variants agree with the
// reference to rounding (FMA contraction) and exactly for integer kernels.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace aoakey::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b) noexcept;

/// True when the AVX2 variants were compiled in and the CPU supports AVX2 and FMA.
bool avx2_available() noexcept;

/// Backend used by the dispatching entry points. Defaults to the best available one;
/// the AOAKEY_SIMD environment variable (scalar|avx2) overrides the default.
Backend active_backend() noexcept;

/// Forces a backend. Throws std::invalid_argument if it is not available.
void set_backend(Backend b);

/// Steering vectors of `count` grid points laid out as `elements` planes; the value for
/// element m at grid point g is (re[m*plane_stride + g], im[m*plane_stride + g]).
struct SteeringBlock {
  const double* re = nullptr;
  const double* im = nullptr;
  std::size_t plane_stride = 0;
  std::size_t count = 0;
  std::size_t elements = 0;
};

/// out[g] = sum_k |b_k^H a_g|^2, with basis vector k stored at basis[k*elements ...].
void projection_energy(const SteeringBlock& block, std::span<const std::complex<double>> basis,
                       std::span<double> out);

/// out[g] = v^H a_g.
void inner_products(const SteeringBlock& block, std::span<const std::complex<double>> v,
                    std::span<std::complex<double>> out);

/// sum_n x[n] * conj(y[n]).
std::complex<double> cross_correlation(std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y);

/// Number of positions where a and b differ.
std::size_t mismatch_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

namespace scalar {
void projection_energy(const SteeringBlock&, std::span<const std::complex<double>>, std::span<double>);
void inner_products(const SteeringBlock&, std::span<const std::complex<double>>,
                    std::span<std::complex<double>>);
std::complex<double> cross_correlation(std::span<const std::complex<double>>,
                                       std::span<const std::complex<double>>);
std::size_t mismatch_count(std::span<const std::uint8_t>, std::span<const std::uint8_t>);
}  // namespace scalar

namespace avx2 {
void projection_energy(const SteeringBlock&, std::span<const std::complex<double>>, std::span<double>);
void inner_products(const SteeringBlock&, std::span<const std::complex<double>>,
                    std::span<std::complex<double>>);
std::complex<double> cross_correlation(std::span<const std::complex<double>>,
                                       std::span<const std::complex<double>>);
std::size_t mismatch_count(std::span<const std::uint8_t>, std::span<const std::uint8_t>);
}  // namespace avx2

}  // namespace aoakey::kernels
