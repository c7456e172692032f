#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/key_pipeline.hpp"
#include "aoakey/spectrum.hpp"

namespace aoakey {

/// Which angles feed the key: azimuth, elevation, or both combined.
enum class AngleSource { Azimuth, Elevation, Combined };

std::string_view to_string(AngleSource s) noexcept;
AngleSource parse_angle_source(std::string_view name);

/// Mobility model: azimuth i.i.d. U[0, 2pi) and elevation i.i.d. U[0, pi/2] per key sample.
std::vector<AngleOfArrival> random_aoa_sequence(std::size_t length, std::uint64_t seed);

/// Aligned per-sample estimates of both nodes.
struct NodeEstimates {
  std::vector<AngleOfArrival> alice;
  std::vector<AngleOfArrival> bob;
};

/// Direction of the other node as seen from Bob's own array, for a common angle phi_c.
AngleOfArrival bob_local_truth(const AngleOfArrival& common, const ReferenceConvention& conv);

/// Each node estimates every sample of the common sequence from its own noisy observation
/// (independent noise and symbols per node and sample) and aligns it to the agreed
/// reference. `two_dimensional` selects the 2-D search; otherwise only azimuth is
/// estimated, with elevation reported as pi/2.
NodeEstimates observe_sequence(std::span<const AngleOfArrival> common, const AngleEstimator& alice,
                               const AngleEstimator& bob, const ReferenceConvention& conv,
                               const SignalModel& model, int samples, std::uint64_t seed,
                               bool two_dimensional = true);

/// Bits for both nodes through the shared scaled-sequence path.
KeyPair derive_key_pair(const NodeEstimates& est, AngleSource source, const PipelineConfig& cfg);

KeyPair generate_key_pair(std::span<const AngleOfArrival> common, const AngleEstimator& alice,
                          const AngleEstimator& bob, const ReferenceConvention& conv, const PipelineConfig& cfg,
                          AngleSource source, double snr_db, int samples, std::uint64_t seed);

}  // namespace aoakey
