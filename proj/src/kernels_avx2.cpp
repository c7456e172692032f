#include <immintrin.h>

#include <bit>

#include "aoakey/kernels.hpp"

namespace aoakey::kernels::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void projection_energy(const SteeringBlock& block, std::span<const std::complex<double>> basis,
                       std::span<double> out) {
  const std::size_t m_count = block.elements;
  const std::size_t k_count = m_count == 0 ? 0 : basis.size() / m_count;
  const std::size_t vec_end = block.count - block.count % 4;
  for (std::size_t g = 0; g < vec_end; g += 4) {
    __m256d energy = _mm256_setzero_pd();
    for (std::size_t k = 0; k < k_count; ++k) {
      const std::complex<double>* b = basis.data() + k * m_count;
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (std::size_t m = 0; m < m_count; ++m) {
        const __m256d ar = _mm256_loadu_pd(block.re + m * block.plane_stride + g);
        const __m256d ai = _mm256_loadu_pd(block.im + m * block.plane_stride + g);
        const __m256d br = _mm256_set1_pd(b[m].real());
        const __m256d bi = _mm256_set1_pd(b[m].imag());
        acc_re = _mm256_fmadd_pd(br, ar, acc_re);
        acc_re = _mm256_fmadd_pd(bi, ai, acc_re);
        acc_im = _mm256_fmadd_pd(br, ai, acc_im);
        acc_im = _mm256_fnmadd_pd(bi, ar, acc_im);
      }
      energy = _mm256_fmadd_pd(acc_re, acc_re, energy);
      energy = _mm256_fmadd_pd(acc_im, acc_im, energy);
    }
    _mm256_storeu_pd(out.data() + g, energy);
  }
  if (vec_end < block.count) {
    SteeringBlock tail = block;
    tail.re += vec_end;
    tail.im += vec_end;
    tail.count = block.count - vec_end;
    scalar::projection_energy(tail, basis, out.subspan(vec_end));
  }
}

void inner_products(const SteeringBlock& block, std::span<const std::complex<double>> v,
                    std::span<std::complex<double>> out) {
  const std::size_t vec_end = block.count - block.count % 4;
  alignas(32) double re[4];
  alignas(32) double im[4];
  for (std::size_t g = 0; g < vec_end; g += 4) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t m = 0; m < block.elements; ++m) {
      const __m256d ar = _mm256_loadu_pd(block.re + m * block.plane_stride + g);
      const __m256d ai = _mm256_loadu_pd(block.im + m * block.plane_stride + g);
      const __m256d vr = _mm256_set1_pd(v[m].real());
      const __m256d vi = _mm256_set1_pd(v[m].imag());
      acc_re = _mm256_fmadd_pd(vr, ar, acc_re);
      acc_re = _mm256_fmadd_pd(vi, ai, acc_re);
      acc_im = _mm256_fmadd_pd(vr, ai, acc_im);
      acc_im = _mm256_fnmadd_pd(vi, ar, acc_im);
    }
    _mm256_store_pd(re, acc_re);
    _mm256_store_pd(im, acc_im);
    for (int j = 0; j < 4; ++j) out[g + static_cast<std::size_t>(j)] = {re[j], im[j]};
  }
  if (vec_end < block.count) {
    SteeringBlock tail = block;
    tail.re += vec_end;
    tail.im += vec_end;
    tail.count = block.count - vec_end;
    scalar::inner_products(tail, v, out.subspan(vec_end));
  }
}

std::complex<double> cross_correlation(std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y) {
  // Interleaved layout: two complex samples per register.
  // x*y lanes give xr*yr, xi*yi (real part); x*swap(y) gives xr*yi, xi*yr (imag part).
  const auto* xp = reinterpret_cast<const double*>(x.data());
  const auto* yp = reinterpret_cast<const double*>(y.data());
  const std::size_t n = x.size();
  const std::size_t vec_end = n - n % 4;
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d xa = _mm256_loadu_pd(xp + 2 * i);
    const __m256d ya = _mm256_loadu_pd(yp + 2 * i);
    const __m256d xb = _mm256_loadu_pd(xp + 2 * i + 4);
    const __m256d yb = _mm256_loadu_pd(yp + 2 * i + 4);
    re0 = _mm256_fmadd_pd(xa, ya, re0);
    re1 = _mm256_fmadd_pd(xb, yb, re1);
    im0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0b0101), im0);
    im1 = _mm256_fmadd_pd(xb, _mm256_permute_pd(yb, 0b0101), im1);
  }
  const __m256d re = _mm256_add_pd(re0, re1);
  const __m256d im = _mm256_add_pd(im0, im1);
  // im lanes: [xr*yi, xi*yr, ...]; imaginary part is sum(odd) - sum(even).
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::complex<double> acc{horizontal_sum(re), horizontal_sum(_mm256_mul_pd(im, sign))};
  if (vec_end < n) acc += scalar::cross_correlation(x.subspan(vec_end), y.subspan(vec_end));
  return acc;
}

std::size_t mismatch_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  const std::size_t n = a.size();
  const std::size_t vec_end = n - n % 32;
  std::size_t count = 0;
  for (std::size_t i = 0; i < vec_end; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    count += static_cast<std::size_t>(std::popcount(~equal));
  }
  if (vec_end < n) count += scalar::mismatch_count(a.subspan(vec_end), b.subspan(vec_end));
  return count;
}

}  // namespace aoakey::kernels::avx2
