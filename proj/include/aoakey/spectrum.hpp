#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/kernels.hpp"

namespace aoakey {

enum class SpectrumKind { Music, Xsbs };
enum class EstimatorKind { Music, Xsbs };

std::string_view to_string(EstimatorKind kind) noexcept;
EstimatorKind parse_estimator_kind(std::string_view name);

/// Power over a 1-D angle grid (radians, strictly increasing).
/// `periodic` marks a grid that wraps (a full azimuth circle).
struct SpatialSpectrum {
  std::vector<double> grid;
  std::vector<double> power;
  SpectrumKind kind = SpectrumKind::Music;
  bool periodic = false;

  void validate() const;
};

/// Power over an azimuth x elevation grid, stored elevation-major:
/// power[e * azimuth_grid.size() + a].
struct SpatialSpectrum2d {
  std::vector<double> azimuth_grid;
  std::vector<double> elevation_grid;
  std::vector<double> power;
  SpectrumKind kind = SpectrumKind::Music;

  double at(std::size_t az, std::size_t el) const { return power[el * azimuth_grid.size() + az]; }
};

struct AngleEstimate {
  double angle = 0.0;       // radians
  double resolution = 0.0;  // grid step at the estimate, radians
  std::size_t index = 0;
};

/// Grid angle of the maximum; ties go to the smallest angle.
AngleEstimate estimate_azimuth(const SpatialSpectrum& spectrum);

/// Peak-to-floor ratio: max(power) over the median of the values more than `guard`
/// grid points away from the peak (circular distance on periodic grids). When the guard
/// would exclude everything, only the peak itself is excluded.
/// Throws std::domain_error("degenerate spectrum") for a constant spectrum.
double pfr(const SpatialSpectrum& spectrum, std::size_t guard = 5);

/// Uniform degree grids: azimuth [0, 360) and elevation [0, 90] inclusive, in radians.
struct AngleGrid {
  std::vector<double> azimuth;
  std::vector<double> elevation;

  static AngleGrid uniform_degrees(double azimuth_step_deg = 1.0, double elevation_step_deg = 1.0);
};

std::vector<double> azimuth_grid_degrees(double step_deg);

/// Steering vectors of a geometry precomputed over azimuth x elevation, in the planar
/// layout the kernels consume. Grid point g = e * n_az + a.
class SteeringTable {
 public:
  SteeringTable(const ArrayGeometry& geom, std::span<const double> azimuths,
                std::span<const double> elevations);

  std::size_t azimuth_count() const noexcept { return n_az_; }
  std::size_t elevation_count() const noexcept { return n_el_; }
  std::size_t element_count() const noexcept { return n_m_; }
  std::size_t size() const noexcept { return n_az_ * n_el_; }

  kernels::SteeringBlock block() const noexcept;
  /// Azimuth scan at elevation index `el`.
  kernels::SteeringBlock azimuth_row(std::size_t el) const noexcept;

 private:
  std::size_t n_az_;
  std::size_t n_el_;
  std::size_t n_m_;
  std::vector<double> re_;
  std::vector<double> im_;
};

/// One node's view of a single AoA measurement: the direction as seen from its own
/// array, the link's signal model, the sample count and the observation seed.
struct Observation {
  AngleOfArrival truth;
  SignalModel model;
  int samples = 1000;
  std::uint64_t seed = 0;
};

enum class StageOrder { ElevationFirst, AzimuthFirst };

/// Sequential 2-D search. Stage 1 scans the 2-D grid with the marginalized axis
/// decimated by `coarse_stride` and keeps only the first angle; stage 2 fixes it and
/// scans the other axis at full resolution.
struct TwoStageOptions {
  StageOrder order = StageOrder::ElevationFirst;
  std::size_t coarse_stride = 1;
};

class AngleEstimator {
 public:
  virtual ~AngleEstimator() = default;

  virtual EstimatorKind kind() const noexcept = 0;
  /// Azimuth spectrum with elevation fixed at pi/2.
  virtual SpatialSpectrum azimuth_spectrum(const Observation& obs) const = 0;
  virtual AngleOfArrival estimate_2d(const Observation& obs) const = 0;

  AngleEstimate estimate_azimuth(const Observation& obs) const {
    return aoakey::estimate_azimuth(azimuth_spectrum(obs));
  }
};

/// (azimuth index, elevation index) of the 2-D maximum over the cells whose index along
/// the decimated axis is a multiple of `stride`. Ties go to the first cell in
/// elevation-major order.
std::pair<std::size_t, std::size_t> argmax_2d(const SpatialSpectrum2d& s, StageOrder order, std::size_t stride);

}  // namespace aoakey
