#include "aoakey/kernels.hpp"

namespace aoakey::kernels::scalar {

void projection_energy(const SteeringBlock& block, std::span<const std::complex<double>> basis,
                       std::span<double> out) {
  const std::size_t m_count = block.elements;
  const std::size_t k_count = m_count == 0 ? 0 : basis.size() / m_count;
  for (std::size_t g = 0; g < block.count; ++g) {
    double energy = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const std::complex<double>* b = basis.data() + k * m_count;
      double acc_re = 0.0;
      double acc_im = 0.0;
      for (std::size_t m = 0; m < m_count; ++m) {
        const double ar = block.re[m * block.plane_stride + g];
        const double ai = block.im[m * block.plane_stride + g];
        const double br = b[m].real();
        const double bi = b[m].imag();
        acc_re += br * ar + bi * ai;
        acc_im += br * ai - bi * ar;
      }
      energy += acc_re * acc_re + acc_im * acc_im;
    }
    out[g] = energy;
  }
}

void inner_products(const SteeringBlock& block, std::span<const std::complex<double>> v,
                    std::span<std::complex<double>> out) {
  for (std::size_t g = 0; g < block.count; ++g) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t m = 0; m < block.elements; ++m) {
      const double ar = block.re[m * block.plane_stride + g];
      const double ai = block.im[m * block.plane_stride + g];
      acc_re += v[m].real() * ar + v[m].imag() * ai;
      acc_im += v[m].real() * ai - v[m].imag() * ar;
    }
    out[g] = {acc_re, acc_im};
  }
}

std::complex<double> cross_correlation(std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    re += x[n].real() * y[n].real() + x[n].imag() * y[n].imag();
    im += x[n].imag() * y[n].real() - x[n].real() * y[n].imag();
  }
  return {re, im};
}

std::size_t mismatch_count(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += a[i] != b[i] ? 1U : 0U;
  return count;
}

}  // namespace aoakey::kernels::scalar
