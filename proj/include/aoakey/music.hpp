#pragma once

#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/spectrum.hpp"

namespace aoakey {

/// Sample covariance (1/N) X X^H, Hermitian by construction.
struct CovarianceMatrix {
  ComplexMatrix data;
  Eigen::Index sample_count = 0;
};

CovarianceMatrix estimate_covariance(const SnapshotMatrix& snapshots);

/// Eigenvalues in descending order; the leading `source_count` eigenvectors span the
/// signal subspace and the rest the noise subspace. Bases have orthonormal columns.
struct SubspaceDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix signal_basis;
  ComplexMatrix noise_basis;

  int source_count() const noexcept { return static_cast<int>(signal_basis.cols()); }
  int element_count() const noexcept { return static_cast<int>(signal_basis.rows()); }
};

/// Throws std::invalid_argument for a non-Hermitian or indefinite matrix, or a source
/// count outside [1, M-1].
SubspaceDecomposition eigendecompose(const CovarianceMatrix& r, int source_count = 1);

/// How the MUSIC denominator a^H P_v a is evaluated. Both are exact; the signal-complement
/// form ||a||^2 - ||U_s^H a||^2 touches fewer basis vectors when S <= M/2.
enum class MusicProjection { Auto, NoiseSubspace, SignalComplement };

/// P(g) = 1 / (a_g^H U_v U_v^H a_g) over every point of the block, clamped below at 1e-15.
void music_pseudospectrum(const SubspaceDecomposition& d, const kernels::SteeringBlock& block,
                          std::span<double> out, MusicProjection projection = MusicProjection::Auto);

SpatialSpectrum music_spectrum(const SubspaceDecomposition& d, const ArrayGeometry& geom,
                               std::span<const double> azimuths, double elevation);

SpatialSpectrum2d music_spectrum_2d(const SubspaceDecomposition& d, const ArrayGeometry& geom,
                                    std::span<const double> azimuths, std::span<const double> elevations);

/// Sequential 2-D MUSIC search over `grid`.
AngleOfArrival estimate_2d_music(const ArrayGeometry& geom, const SnapshotMatrix& snapshots,
                                 const AngleGrid& grid, const TwoStageOptions& options = {});

/// Resolves a 2-D spectrum with the two-stage search.
AngleOfArrival resolve_two_stage(const SpatialSpectrum2d& s, const TwoStageOptions& options);

/// MUSIC with steering tables cached for one geometry and grid.
class MusicEstimator final : public AngleEstimator {
 public:
  MusicEstimator(ArrayGeometry geom, AngleGrid grid, TwoStageOptions options = {}, int source_count = 1);

  EstimatorKind kind() const noexcept override { return EstimatorKind::Music; }
  SpatialSpectrum azimuth_spectrum(const Observation& obs) const override;
  AngleOfArrival estimate_2d(const Observation& obs) const override;

  SpatialSpectrum azimuth_spectrum(const SnapshotMatrix& snapshots) const;
  SpatialSpectrum2d spectrum_2d(const SnapshotMatrix& snapshots) const;

  const ArrayGeometry& geometry() const noexcept { return geom_; }
  const AngleGrid& grid() const noexcept { return grid_; }

 private:
  SnapshotMatrix observe(const Observation& obs) const;

  ArrayGeometry geom_;
  AngleGrid grid_;
  TwoStageOptions options_;
  int source_count_;
  SteeringTable azimuth_table_;
  SteeringTable table_2d_;
};

}  // namespace aoakey
