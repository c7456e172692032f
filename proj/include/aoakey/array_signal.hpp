#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aoakey/angles.hpp"

namespace aoakey {

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RowMajorComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform circular array. Lengths are in wavelengths, so the wavenumber is 2pi.
/// Element m (1-based) sits at azimuth 2*pi*m/M.
class ArrayGeometry {
 public:
  ArrayGeometry(int element_count, double radius_wavelengths);

  /// Array whose adjacent elements are `spacing_wavelengths` apart (chord length).
  static ArrayGeometry from_spacing(int element_count, double spacing_wavelengths);

  int element_count() const noexcept { return static_cast<int>(element_azimuths_.size()); }
  double radius() const noexcept { return radius_; }
  double wavenumber() const noexcept { return kTwoPi; }
  double spacing() const noexcept;
  const std::vector<double>& element_azimuths() const noexcept { return element_azimuths_; }

 private:
  double radius_;
  std::vector<double> element_azimuths_;
};

/// a_m = exp(j * beta * r * sin(theta) * cos(phi - phi_m)).
ComplexVector steering_vector(const ArrayGeometry& geom, const AngleOfArrival& aoa);
ComplexVector steering_vector_azimuth_only(const ArrayGeometry& geom, double azimuth);

enum class Waveform { RandomPhase, ComplexGaussian };

struct SignalModel {
  double source_power = 1.0;
  double noise_variance = 0.0;
  Waveform waveform = Waveform::RandomPhase;

  /// Per-element SNR, pre-beamforming.
  static SignalModel from_snr_db(double snr_db, double source_power = 1.0,
                                 Waveform waveform = Waveform::RandomPhase);
  /// +infinity when noise_variance == 0.
  double snr_db() const noexcept;
  void validate() const;
};

/// Complex baseband samples, one row per receiver.
struct SnapshotMatrix {
  RowMajorComplexMatrix data;
  double snr_db = 0.0;

  Eigen::Index sample_count() const noexcept { return data.cols(); }
  Eigen::Index receiver_count() const noexcept { return data.rows(); }
  /// Throws std::invalid_argument on an empty matrix or non-finite entries.
  void validate() const;
};

/// Transmitted symbols s[0..n) for `seed`; shared by every receiver of one observation.
std::vector<cplx> draw_symbols(const SignalModel& model, int n, std::uint64_t seed);

/// Adds i.i.d. CN(0, variance) noise from the stream of receiver `receiver_index`.
void add_receiver_noise(std::span<cplx> samples, double variance, std::uint64_t seed,
                        std::uint64_t receiver_index);

/// X = a s + V. Row m carries the noise stream of receiver m.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geom, const AngleOfArrival& aoa,
                                    const SignalModel& model, int n, std::uint64_t seed);

/// Single-receiver output of a beam: x[n] = sum_m w_m a_m s[n] + v[n], where w holds the
/// per-element multipliers applied by the combiner (conj(a) steers toward a). The noise is
/// added after combining, from the stream of `receiver_index`.
SnapshotMatrix synthesize_beam_signal(const ArrayGeometry& geom, const AngleOfArrival& aoa,
                                      std::span<const cplx> beam_weights, const SignalModel& model,
                                      int n, std::uint64_t seed, std::uint64_t receiver_index = 0);

}  // namespace aoakey
