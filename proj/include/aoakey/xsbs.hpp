#pragma once

#include <cstdint>
#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/spectrum.hpp"

namespace aoakey {

/// How directional-beam outputs are produced.
/// Literal synthesizes every beam's N samples and correlates them with the reference.
/// SufficientStatistic draws each correlation directly from its exact conditional
/// distribution given the reference output; the two paths are equal in distribution.
enum class BeamSynthesis { Literal, SufficientStatistic };

std::string_view to_string(BeamSynthesis s) noexcept;
BeamSynthesis parse_beam_synthesis(std::string_view name);

/// Switched-beam scan. A fixed omnidirectional reference is formed by summing the
/// elements in `omni_elements` (0-based); each directional beam steers the remaining
/// elements with conj(a) weights. Beam power is |(1/N) sum_n x_k[n] conj(x_o[n])|.
struct XsbsConfig {
  std::vector<double> beam_azimuths;  // radians, strictly increasing
  double beam_elevation = kPi / 2.0;
  std::vector<int> omni_elements{0, 2, 4, 6, 8};
  BeamSynthesis synthesis = BeamSynthesis::Literal;

  /// 360 beams at 1 degree steps on the horizon.
  static XsbsConfig standard();
  void validate(const ArrayGeometry& geom) const;
};

std::vector<cplx> xsbs_omni_weights(const ArrayGeometry& geom, const XsbsConfig& cfg);
std::vector<cplx> xsbs_beam_weights(const ArrayGeometry& geom, const XsbsConfig& cfg, const AngleOfArrival& center);

/// Receiver-noise stream of the beam centred at `center` during scan stage `stage`.
/// Keyed by direction, so beam outputs do not depend on scan order. Stream 0 is the
/// omnidirectional reference.
std::uint64_t xsbs_beam_receiver(int stage, const AngleOfArrival& center) noexcept;

SpatialSpectrum xsbs_spectrum(const ArrayGeometry& geom, const XsbsConfig& cfg, const AngleOfArrival& truth,
                              const SignalModel& model, int n, std::uint64_t seed);

/// XSBS with beam gains cached for one geometry and grid. The azimuth spectrum scans
/// grid.azimuth on the horizon; the 2-D search uses the two-stage scheme, with a fresh
/// set of beam outputs in stage 2.
class XsbsEstimator final : public AngleEstimator {
 public:
  XsbsEstimator(ArrayGeometry geom, XsbsConfig cfg, AngleGrid grid, TwoStageOptions options = {});

  EstimatorKind kind() const noexcept override { return EstimatorKind::Xsbs; }
  SpatialSpectrum azimuth_spectrum(const Observation& obs) const override;
  AngleOfArrival estimate_2d(const Observation& obs) const override;

  const ArrayGeometry& geometry() const noexcept { return geom_; }
  const XsbsConfig& config() const noexcept { return cfg_; }

 private:
  ArrayGeometry geom_;
  XsbsConfig cfg_;
  AngleGrid grid_;
  TwoStageOptions options_;
  std::vector<cplx> mask_;  // 1 on directional elements, 0 on the reference elements
  SteeringTable azimuth_table_;
  SteeringTable table_2d_;
};

}  // namespace aoakey
