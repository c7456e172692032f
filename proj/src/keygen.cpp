#include "aoakey/keygen.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "aoakey/rng.hpp"

namespace aoakey {

std::string_view to_string(AngleSource s) noexcept {
  switch (s) {
    case AngleSource::Azimuth: return "azimuth";
    case AngleSource::Elevation: return "elevation";
    case AngleSource::Combined: return "combined";
  }
  return "combined";
}

AngleSource parse_angle_source(std::string_view name) {
  if (name == "azimuth") return AngleSource::Azimuth;
  if (name == "elevation") return AngleSource::Elevation;
  if (name == "combined") return AngleSource::Combined;
  throw std::invalid_argument("unknown angle source '" + std::string(name) + "'");
}

std::vector<AngleOfArrival> random_aoa_sequence(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("mobility: sequence length must be >= 1");
  Rng rng(derive_seed(seed, {stream::kMobility}));
  std::uniform_real_distribution<double> az(0.0, kTwoPi);
  std::uniform_real_distribution<double> el(0.0, kPi / 2.0);
  std::vector<AngleOfArrival> seq;
  seq.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double a = az(rng);
    seq.push_back(AngleOfArrival::make(a, el(rng)));
  }
  return seq;
}

AngleOfArrival bob_local_truth(const AngleOfArrival& common, const ReferenceConvention& conv) {
  if (conv.mode == ReferenceMode::OppositeReference) return common;
  return AngleOfArrival::make(wrap_two_pi(common.azimuth + kPi), common.elevation);
}

NodeEstimates observe_sequence(std::span<const AngleOfArrival> common, const AngleEstimator& alice,
                               const AngleEstimator& bob, const ReferenceConvention& conv,
                               const SignalModel& model, int samples, std::uint64_t seed, bool two_dimensional) {
  if (common.empty()) throw std::invalid_argument("keygen: empty AoA sequence");
  NodeEstimates out;
  out.alice.reserve(common.size());
  out.bob.reserve(common.size());
  auto estimate = [&](const AngleEstimator& est, const Observation& obs) {
    if (two_dimensional) return est.estimate_2d(obs);
    return AngleOfArrival::make(est.estimate_azimuth(obs).angle, kPi / 2.0);
  };
  for (std::size_t i = 0; i < common.size(); ++i) {
    const Observation oa{common[i], model, samples, derive_seed(seed, {stream::kAlice, i})};
    const Observation ob{bob_local_truth(common[i], conv), model, samples, derive_seed(seed, {stream::kBob, i})};
    out.alice.push_back(align_reference(estimate(alice, oa), conv, Node::Alice));
    out.bob.push_back(align_reference(estimate(bob, ob), conv, Node::Bob));
  }
  return out;
}

namespace {

BitStream node_bits(std::span<const AngleOfArrival> est, AngleSource source, const PipelineConfig& cfg) {
  switch (source) {
    case AngleSource::Azimuth: return bits_from_scaled(scale_azimuths(est), cfg);
    case AngleSource::Elevation: return bits_from_scaled(scale_elevations(est), cfg);
    case AngleSource::Combined: return bits_from_scaled(scale_azimuths(est), scale_elevations(est), cfg);
  }
  throw std::invalid_argument("keygen: unknown source");
}

}  // namespace

KeyPair derive_key_pair(const NodeEstimates& est, AngleSource source, const PipelineConfig& cfg) {
  if (est.alice.size() != est.bob.size()) throw std::invalid_argument("keygen: estimate sequences differ in length");
  KeyPair k;
  k.alice = node_bits(est.alice, source, cfg);
  k.bob = node_bits(est.bob, source, cfg);
  k.bmr = bit_mismatch_rate(k.alice, k.bob);
  return k;
}

KeyPair generate_key_pair(std::span<const AngleOfArrival> common, const AngleEstimator& alice,
                          const AngleEstimator& bob, const ReferenceConvention& conv, const PipelineConfig& cfg,
                          AngleSource source, double snr_db, int samples, std::uint64_t seed) {
  cfg.validate();
  const auto model = SignalModel::from_snr_db(snr_db);
  return derive_key_pair(observe_sequence(common, alice, bob, conv, model, samples, seed), source, cfg);
}

}  // namespace aoakey
