#include "aoakey/music.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aoakey {

namespace {

constexpr double kDenominatorFloor = 1e-15;

std::span<const cplx> columns(const ComplexMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

CovarianceMatrix estimate_covariance(const SnapshotMatrix& snapshots) {
  snapshots.validate();
  const Eigen::Index m = snapshots.receiver_count();
  const Eigen::Index n = snapshots.sample_count();
  const auto len = static_cast<std::size_t>(n);
  CovarianceMatrix r;
  r.sample_count = n;
  r.data.resize(m, m);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::span<const cplx> xi{snapshots.data.row(i).data(), len};
    for (Eigen::Index j = i; j < m; ++j) {
      std::span<const cplx> xj{snapshots.data.row(j).data(), len};
      const cplx v = kernels::cross_correlation(xi, xj) * inv_n;
      if (i == j) {
        r.data(i, i) = cplx(v.real(), 0.0);
      } else {
        r.data(i, j) = v;
        r.data(j, i) = std::conj(v);
      }
    }
  }
  return r;
}

SubspaceDecomposition eigendecompose(const CovarianceMatrix& r, int source_count) {
  const Eigen::Index m = r.data.rows();
  if (m < 2 || r.data.cols() != m) throw std::invalid_argument("eigendecompose: matrix must be square, M >= 2");
  if (source_count < 1 || source_count >= m) {
    throw std::invalid_argument("eigendecompose: source count must be in [1, M-1]");
  }
  if (!r.data.allFinite()) throw std::invalid_argument("eigendecompose: non-finite entries");
  const double scale = std::max(r.data.norm(), 1e-300);
  if ((r.data - r.data.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r.data);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver did not converge");
  const auto& ev = solver.eigenvalues();  // ascending
  if (ev[0] < -1e-9 * scale) throw std::invalid_argument("eigendecompose: matrix is not positive semidefinite");

  SubspaceDecomposition d;
  d.eigenvalues.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) d.eigenvalues[static_cast<std::size_t>(i)] = ev[m - 1 - i];
  const auto& vec = solver.eigenvectors();
  d.signal_basis.resize(m, source_count);
  for (int k = 0; k < source_count; ++k) d.signal_basis.col(k) = vec.col(m - 1 - k);
  const Eigen::Index noise = m - source_count;
  d.noise_basis.resize(m, noise);
  for (Eigen::Index k = 0; k < noise; ++k) d.noise_basis.col(k) = vec.col(noise - 1 - k);
  return d;
}

void music_pseudospectrum(const SubspaceDecomposition& d, const kernels::SteeringBlock& block,
                          std::span<double> out, MusicProjection projection) {
  if (block.elements != static_cast<std::size_t>(d.element_count())) {
    throw std::invalid_argument("MUSIC: steering table and decomposition disagree on M");
  }
  if (out.size() != block.count) throw std::invalid_argument("MUSIC: output length mismatch");
  if (projection == MusicProjection::Auto) {
    projection = 2 * d.source_count() <= d.element_count() ? MusicProjection::SignalComplement
                                                           : MusicProjection::NoiseSubspace;
  }
  if (projection == MusicProjection::NoiseSubspace) {
    kernels::projection_energy(block, columns(d.noise_basis), out);
    for (double& v : out) v = 1.0 / std::max(v, kDenominatorFloor);
    return;
  }
  kernels::projection_energy(block, columns(d.signal_basis), out);
  // Steering entries are unit modulus, so ||a||^2 = M.
  const double norm2 = static_cast<double>(block.elements);
  for (double& v : out) v = 1.0 / std::max(norm2 - v, kDenominatorFloor);
}

SpatialSpectrum music_spectrum(const SubspaceDecomposition& d, const ArrayGeometry& geom,
                               std::span<const double> azimuths, double elevation) {
  const double el[] = {elevation};
  SteeringTable table(geom, azimuths, el);
  SpatialSpectrum s;
  s.kind = SpectrumKind::Music;
  s.grid.assign(azimuths.begin(), azimuths.end());
  s.power.resize(azimuths.size());
  music_pseudospectrum(d, table.block(), s.power);
  s.periodic = azimuths.size() > 1 && azimuths.back() - azimuths.front() + (azimuths[1] - azimuths[0]) >= kTwoPi - 1e-9;
  return s;
}

SpatialSpectrum2d music_spectrum_2d(const SubspaceDecomposition& d, const ArrayGeometry& geom,
                                    std::span<const double> azimuths, std::span<const double> elevations) {
  SteeringTable table(geom, azimuths, elevations);
  SpatialSpectrum2d s;
  s.kind = SpectrumKind::Music;
  s.azimuth_grid.assign(azimuths.begin(), azimuths.end());
  s.elevation_grid.assign(elevations.begin(), elevations.end());
  s.power.resize(table.size());
  music_pseudospectrum(d, table.block(), s.power);
  return s;
}

AngleOfArrival resolve_two_stage(const SpatialSpectrum2d& s, const TwoStageOptions& options) {
  const auto [a0, e0] = argmax_2d(s, options.order, options.coarse_stride);
  const std::size_t n_az = s.azimuth_grid.size();
  const std::size_t n_el = s.elevation_grid.size();
  std::size_t a = a0, e = e0;
  if (options.order == StageOrder::ElevationFirst) {
    double best = -1.0;
    for (std::size_t i = 0; i < n_az; ++i) {
      if (s.at(i, e0) > best) {
        best = s.at(i, e0);
        a = i;
      }
    }
  } else {
    double best = -1.0;
    for (std::size_t i = 0; i < n_el; ++i) {
      if (s.at(a0, i) > best) {
        best = s.at(a0, i);
        e = i;
      }
    }
  }
  return AngleOfArrival::make(s.azimuth_grid[a], s.elevation_grid[e]);
}

AngleOfArrival estimate_2d_music(const ArrayGeometry& geom, const SnapshotMatrix& snapshots,
                                 const AngleGrid& grid, const TwoStageOptions& options) {
  const auto d = eigendecompose(estimate_covariance(snapshots));
  return resolve_two_stage(music_spectrum_2d(d, geom, grid.azimuth, grid.elevation), options);
}

namespace {
const double kBroadside[] = {kPi / 2.0};
}

MusicEstimator::MusicEstimator(ArrayGeometry geom, AngleGrid grid, TwoStageOptions options, int source_count)
    : geom_(geom),
      grid_(std::move(grid)),
      options_(options),
      source_count_(source_count),
      azimuth_table_(geom_, grid_.azimuth, kBroadside),
      table_2d_(geom_, grid_.azimuth, grid_.elevation) {
  if (source_count_ < 1 || source_count_ >= geom_.element_count()) {
    throw std::invalid_argument("MUSIC: source count must be in [1, M-1]");
  }
}

SnapshotMatrix MusicEstimator::observe(const Observation& obs) const {
  return synthesize_snapshots(geom_, obs.truth, obs.model, obs.samples, obs.seed);
}

SpatialSpectrum MusicEstimator::azimuth_spectrum(const SnapshotMatrix& snapshots) const {
  const auto d = eigendecompose(estimate_covariance(snapshots), source_count_);
  SpatialSpectrum s;
  s.kind = SpectrumKind::Music;
  s.grid = grid_.azimuth;
  s.periodic = true;
  s.power.resize(grid_.azimuth.size());
  music_pseudospectrum(d, azimuth_table_.block(), s.power);
  return s;
}

SpatialSpectrum2d MusicEstimator::spectrum_2d(const SnapshotMatrix& snapshots) const {
  const auto d = eigendecompose(estimate_covariance(snapshots), source_count_);
  SpatialSpectrum2d s;
  s.kind = SpectrumKind::Music;
  s.azimuth_grid = grid_.azimuth;
  s.elevation_grid = grid_.elevation;
  s.power.resize(table_2d_.size());
  music_pseudospectrum(d, table_2d_.block(), s.power);
  return s;
}

SpatialSpectrum MusicEstimator::azimuth_spectrum(const Observation& obs) const {
  return azimuth_spectrum(observe(obs));
}

AngleOfArrival MusicEstimator::estimate_2d(const Observation& obs) const {
  return resolve_two_stage(spectrum_2d(observe(obs)), options_);
}

}  // namespace aoakey
