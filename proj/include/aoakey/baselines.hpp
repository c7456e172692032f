#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/key_pipeline.hpp"

namespace aoakey {

enum class Fading { Rayleigh };

/// Reciprocal block-fading channel: one h ~ CN(0, 1) per coherence block, observed by each
/// node with its own independent CN(0, noise_variance) estimation noise.
struct ReciprocalChannelModel {
  Fading fading = Fading::Rayleigh;
  std::size_t coherence_block_count = 64;
  double noise_variance = 0.0;

  static ReciprocalChannelModel from_snr_db(double snr_db, std::size_t block_count);
};

struct ChannelObservations {
  std::vector<cplx> alice;
  std::vector<cplx> bob;
};

/// The noise variance follows `snr_db`; the model supplies the fading kind.
ChannelObservations simulate_channel_observations(const ReciprocalChannelModel& model, double snr_db,
                                                  std::size_t block_count, std::uint64_t seed);

/// |obs| divided by the node's own 99th-percentile amplitude (nearest rank), kept below 1.
ScaledSequence extract_amplitude(std::span<const cplx> obs);
/// (arg(obs) + pi) / 2pi, wrapped into [0, 1).
ScaledSequence extract_phase(std::span<const cplx> obs);

enum class BaselineSource { Amplitude, Phase, Combined };

std::string_view to_string(BaselineSource s) noexcept;

KeyPair baseline_key_pair(BaselineSource source, double snr_db, const PipelineConfig& cfg,
                          std::size_t block_count, std::uint64_t seed);

}  // namespace aoakey
