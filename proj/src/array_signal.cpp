#include "aoakey/array_signal.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "aoakey/rng.hpp"

namespace aoakey {

ArrayGeometry::ArrayGeometry(int element_count, double radius_wavelengths) : radius_(radius_wavelengths) {
  if (element_count < 2) throw std::invalid_argument("array geometry: need at least 2 elements");
  if (!(radius_wavelengths > 0.0) || !std::isfinite(radius_wavelengths)) {
    throw std::invalid_argument("array geometry: radius must be positive");
  }
  element_azimuths_.resize(static_cast<std::size_t>(element_count));
  for (int m = 1; m <= element_count; ++m) {
    element_azimuths_[static_cast<std::size_t>(m - 1)] = kTwoPi * m / element_count;
  }
}

ArrayGeometry ArrayGeometry::from_spacing(int element_count, double spacing_wavelengths) {
  if (element_count < 2) throw std::invalid_argument("array geometry: need at least 2 elements");
  return ArrayGeometry(element_count, spacing_wavelengths / (2.0 * std::sin(kPi / element_count)));
}

double ArrayGeometry::spacing() const noexcept {
  return 2.0 * radius_ * std::sin(kPi / element_count());
}

ComplexVector steering_vector(const ArrayGeometry& geom, const AngleOfArrival& aoa) {
  const double k = geom.wavenumber() * geom.radius() * std::sin(aoa.elevation);
  const auto& phi = geom.element_azimuths();
  ComplexVector a(geom.element_count());
  for (int m = 0; m < geom.element_count(); ++m) {
    a[m] = std::polar(1.0, k * std::cos(aoa.azimuth - phi[static_cast<std::size_t>(m)]));
  }
  return a;
}

ComplexVector steering_vector_azimuth_only(const ArrayGeometry& geom, double azimuth) {
  return steering_vector(geom, AngleOfArrival::make(azimuth, kPi / 2.0));
}

SignalModel SignalModel::from_snr_db(double snr_db, double source_power, Waveform waveform) {
  SignalModel m;
  m.source_power = source_power;
  m.waveform = waveform;
  m.noise_variance = std::isinf(snr_db) && snr_db > 0 ? 0.0 : source_power * std::pow(10.0, -snr_db / 10.0);
  m.validate();
  return m;
}

double SignalModel::snr_db() const noexcept {
  if (noise_variance == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(source_power / noise_variance);
}

void SignalModel::validate() const {
  if (!(source_power > 0.0) || !std::isfinite(source_power)) {
    throw std::invalid_argument("signal model: source power must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("signal model: noise variance must be finite and >= 0");
  }
}

void SnapshotMatrix::validate() const {
  if (data.rows() == 0 || data.cols() == 0) throw std::invalid_argument("snapshot matrix: empty");
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const cplx v = data.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("snapshot matrix: non-finite sample");
    }
  }
}

std::vector<cplx> draw_symbols(const SignalModel& model, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synthesis: sample count must be >= 1");
  Rng rng(derive_seed(seed, {stream::kSymbols}));
  std::vector<cplx> s(static_cast<std::size_t>(n));
  if (model.waveform == Waveform::RandomPhase) {
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    const double amp = std::sqrt(model.source_power);
    for (auto& v : s) v = std::polar(amp, phase(rng));
  } else {
    for (auto& v : s) v = complex_normal(rng, model.source_power);
  }
  return s;
}

void add_receiver_noise(std::span<cplx> samples, double variance, std::uint64_t seed,
                        std::uint64_t receiver_index) {
  if (variance == 0.0) return;
  Rng rng(derive_seed(seed, {stream::kNoise, receiver_index}));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  for (auto& v : samples) {
    const double re = normal(rng);
    const double im = normal(rng);
    v += cplx(re, im);
  }
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const AngleOfArrival& aoa,
                                    const SignalModel& model, int n, std::uint64_t seed) {
  model.validate();
  const auto s = draw_symbols(model, n, seed);
  const ComplexVector a = steering_vector(geom, aoa);
  SnapshotMatrix out;
  out.snr_db = model.snr_db();
  out.data.resize(geom.element_count(), n);
  for (int m = 0; m < geom.element_count(); ++m) {
    cplx* row = out.data.row(m).data();
    for (int t = 0; t < n; ++t) row[t] = a[m] * s[static_cast<std::size_t>(t)];
    add_receiver_noise({row, static_cast<std::size_t>(n)}, model.noise_variance, seed,
                       static_cast<std::uint64_t>(m));
  }
  return out;
}

SnapshotMatrix synthesize_beam_signal(const ArrayGeometry& geom, const AngleOfArrival& aoa,
                                      std::span<const cplx> beam_weights, const SignalModel& model,
                                      int n, std::uint64_t seed, std::uint64_t receiver_index) {
  model.validate();
  if (beam_weights.size() != static_cast<std::size_t>(geom.element_count())) {
    throw std::invalid_argument("beam signal: weight count does not match element count");
  }
  const auto s = draw_symbols(model, n, seed);
  const ComplexVector a = steering_vector(geom, aoa);
  cplx gain{0.0, 0.0};
  for (int m = 0; m < geom.element_count(); ++m) gain += beam_weights[static_cast<std::size_t>(m)] * a[m];
  SnapshotMatrix out;
  out.snr_db = model.snr_db();
  out.data.resize(1, n);
  cplx* row = out.data.data();
  for (int t = 0; t < n; ++t) row[t] = gain * s[static_cast<std::size_t>(t)];
  add_receiver_noise({row, static_cast<std::size_t>(n)}, model.noise_variance, seed, receiver_index);
  return out;
}

}  // namespace aoakey
