#include "aoakey/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoakey/rng.hpp"

namespace aoakey {

namespace {
constexpr double kBelowOne = 1.0 - 1e-12;
}

ReciprocalChannelModel ReciprocalChannelModel::from_snr_db(double snr_db, std::size_t block_count) {
  ReciprocalChannelModel m;
  m.coherence_block_count = block_count;
  m.noise_variance = std::isinf(snr_db) && snr_db > 0 ? 0.0 : std::pow(10.0, -snr_db / 10.0);
  return m;
}

ChannelObservations simulate_channel_observations(const ReciprocalChannelModel& model, double snr_db,
                                                  std::size_t block_count, std::uint64_t seed) {
  if (block_count < 1) throw std::invalid_argument("channel: block count must be >= 1");
  if (model.fading != Fading::Rayleigh) throw std::invalid_argument("channel: unsupported fading model");
  const double noise = ReciprocalChannelModel::from_snr_db(snr_db, block_count).noise_variance;
  Rng channel(derive_seed(seed, {stream::kChannel}));
  Rng na(derive_seed(seed, {stream::kAlice}));
  Rng nb(derive_seed(seed, {stream::kBob}));
  ChannelObservations obs;
  obs.alice.resize(block_count);
  obs.bob.resize(block_count);
  for (std::size_t i = 0; i < block_count; ++i) {
    const cplx h = complex_normal(channel, 1.0);
    obs.alice[i] = h;
    obs.bob[i] = h;
    if (noise > 0.0) {
      obs.alice[i] += complex_normal(na, noise);
      obs.bob[i] += complex_normal(nb, noise);
    }
  }
  return obs;
}

ScaledSequence extract_amplitude(std::span<const cplx> obs) {
  if (obs.empty()) throw std::invalid_argument("amplitude: empty observation");
  std::vector<double> amp(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) amp[i] = std::abs(obs[i]);
  std::vector<double> sorted = amp;
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
  const double norm = sorted[rank];
  ScaledSequence s;
  s.source = Provenance::Amplitude;
  s.values.resize(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    s.values[i] = norm > 0.0 ? std::min(amp[i] / norm, kBelowOne) : 0.0;
  }
  return s;
}

ScaledSequence extract_phase(std::span<const cplx> obs) {
  if (obs.empty()) throw std::invalid_argument("phase: empty observation");
  ScaledSequence s;
  s.source = Provenance::Phase;
  s.values.resize(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double v = (std::arg(obs[i]) + kPi) / kTwoPi;
    if (v >= 1.0) v -= 1.0;
    s.values[i] = std::clamp(v, 0.0, kBelowOne);
  }
  return s;
}

std::string_view to_string(BaselineSource s) noexcept {
  switch (s) {
    case BaselineSource::Amplitude: return "amplitude";
    case BaselineSource::Phase: return "phase";
    case BaselineSource::Combined: return "amp-phase-combined";
  }
  return "amp-phase-combined";
}

namespace {

BitStream baseline_bits(std::span<const cplx> obs, BaselineSource source, const PipelineConfig& cfg) {
  switch (source) {
    case BaselineSource::Amplitude: return bits_from_scaled(extract_amplitude(obs), cfg);
    case BaselineSource::Phase: return bits_from_scaled(extract_phase(obs), cfg);
    case BaselineSource::Combined: return bits_from_scaled(extract_amplitude(obs), extract_phase(obs), cfg);
  }
  throw std::invalid_argument("baseline: unknown source");
}

}  // namespace

KeyPair baseline_key_pair(BaselineSource source, double snr_db, const PipelineConfig& cfg,
                          std::size_t block_count, std::uint64_t seed) {
  cfg.validate();
  const auto model = ReciprocalChannelModel::from_snr_db(snr_db, block_count);
  const auto obs = simulate_channel_observations(model, snr_db, block_count, seed);
  KeyPair k;
  k.alice = baseline_bits(obs.alice, source, cfg);
  k.bob = baseline_bits(obs.bob, source, cfg);
  k.bmr = bit_mismatch_rate(k.alice, k.bob);
  return k;
}

}  // namespace aoakey
