#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aoakey/array_signal.hpp"
#include "aoakey/rng.hpp"

using namespace aoakey;

TEST_CASE("steering vector of a 4-element array broadside to element 4") {
  // kr = pi: a_m = exp(j*pi*cos(-pi*m/2)) = {1, -1, 1, -1}
  const ArrayGeometry geom(4, 0.5);
  const auto a = steering_vector(geom, AngleOfArrival::make(0.0, kPi / 2));
  const double expect[] = {1.0, -1.0, 1.0, -1.0};
  for (int m = 0; m < 4; ++m) {
    CHECK(a[m].real() == doctest::Approx(expect[m]).epsilon(1e-12));
    CHECK(std::abs(a[m].imag()) < 1e-12);
  }
}

TEST_CASE("steering vector entries have unit modulus and zenith gives all ones") {
  const auto geom = ArrayGeometry::from_spacing(16, 0.5);
  for (double az : {0.0, 1.0, 4.7}) {
    for (double el : {0.0, 0.3, kPi / 2}) {
      const auto a = steering_vector(geom, AngleOfArrival::make(az, el));
      for (int m = 0; m < a.size(); ++m) CHECK(std::abs(a[m]) == doctest::Approx(1.0).epsilon(1e-14));
      if (el == 0.0) {
        for (int m = 0; m < a.size(); ++m) CHECK(std::abs(a[m] - cplx(1.0, 0.0)) < 1e-14);
      }
    }
  }
}

TEST_CASE("geometry from element spacing") {
  const auto geom = ArrayGeometry::from_spacing(16, 0.5);
  CHECK(geom.spacing() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(geom.radius() == doctest::Approx(0.5 / (2 * std::sin(kPi / 16))).epsilon(1e-14));
  CHECK(geom.element_azimuths().back() == doctest::Approx(kTwoPi));
  CHECK_THROWS_AS(ArrayGeometry(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ArrayGeometry(4, 0.0), std::invalid_argument);
}

TEST_CASE("angle of arrival validation") {
  CHECK_THROWS_AS(AngleOfArrival::make(0.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(AngleOfArrival::make(0.0, kPi / 2 + 0.1), std::invalid_argument);
  CHECK_THROWS_AS(AngleOfArrival::make(NAN, 0.0), std::invalid_argument);
  CHECK(wrapped_difference_deg(359.0, 1.0) == doctest::Approx(-2.0));
  CHECK(wrapped_difference_deg(1.0, 359.0) == doctest::Approx(2.0));
  CHECK(wrapped_difference_deg(90.0, 270.0) == doctest::Approx(180.0));
}

TEST_CASE("signal model from SNR") {
  const auto m = SignalModel::from_snr_db(-10.0);
  CHECK(m.noise_variance == doctest::Approx(10.0));
  CHECK(m.snr_db() == doctest::Approx(-10.0));
  CHECK(std::isinf(SignalModel::from_snr_db(INFINITY).snr_db()));
  SignalModel bad;
  bad.noise_variance = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("noiseless snapshots are the rank-one product a s^T") {
  const auto geom = ArrayGeometry::from_spacing(8, 0.5);
  const auto aoa = AngleOfArrival::from_degrees(123.0, 40.0);
  const auto x = synthesize_snapshots(geom, aoa, SignalModel{}, 50, 9);
  const auto a = steering_vector(geom, aoa);
  const auto s = draw_symbols(SignalModel{}, 50, 9);
  for (int m = 0; m < 8; ++m) {
    for (int t = 0; t < 50; ++t) CHECK(std::abs(x.data(m, t) - a[m] * s[static_cast<std::size_t>(t)]) < 1e-14);
  }
  for (const auto& v : s) CHECK(std::abs(v) == doctest::Approx(1.0));
}

TEST_CASE("snapshot row m equals a beam selecting element m on receiver stream m") {
  const auto geom = ArrayGeometry::from_spacing(6, 0.5);
  const auto aoa = AngleOfArrival::from_degrees(200.0, 70.0);
  const auto model = SignalModel::from_snr_db(-5.0);
  const auto x = synthesize_snapshots(geom, aoa, model, 64, 42);
  for (int m = 0; m < 6; ++m) {
    std::vector<cplx> w(6, 0.0);
    w[static_cast<std::size_t>(m)] = 1.0;
    const auto b = synthesize_beam_signal(geom, aoa, w, model, 64, 42, static_cast<std::uint64_t>(m));
    for (int t = 0; t < 64; ++t) CHECK(std::abs(b.data(0, t) - x.data(m, t)) < 1e-12);
  }
}

TEST_CASE("matched beam output has amplitude M for unit symbols") {
  const auto geom = ArrayGeometry::from_spacing(12, 0.5);
  const auto aoa = AngleOfArrival::from_degrees(33.0, 90.0);
  const auto a = steering_vector(geom, aoa);
  std::vector<cplx> w(12);
  for (int m = 0; m < 12; ++m) w[static_cast<std::size_t>(m)] = std::conj(a[m]);
  const auto b = synthesize_beam_signal(geom, aoa, w, SignalModel{}, 10, 1);
  for (int t = 0; t < 10; ++t) CHECK(std::abs(b.data(0, t)) == doctest::Approx(12.0));
  CHECK_THROWS_AS(synthesize_beam_signal(geom, aoa, std::vector<cplx>(3), SignalModel{}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("receiver noise has the configured variance") {
  std::vector<cplx> v(100000, 0.0);
  add_receiver_noise(v, 2.5, 77, 3);
  double p = 0.0;
  cplx mean = 0.0;
  for (const auto& z : v) {
    p += std::norm(z);
    mean += z;
  }
  p /= static_cast<double>(v.size());
  mean /= static_cast<double>(v.size());
  CHECK(p == doctest::Approx(2.5).epsilon(0.05));
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("synthesis rejects bad sample counts and is seed-deterministic") {
  const auto geom = ArrayGeometry::from_spacing(4, 0.5);
  const auto aoa = AngleOfArrival::from_degrees(10.0, 90.0);
  const auto model = SignalModel::from_snr_db(0.0);
  CHECK_THROWS_AS(synthesize_snapshots(geom, aoa, model, 0, 1), std::invalid_argument);
  const auto x1 = synthesize_snapshots(geom, aoa, model, 20, 5);
  const auto x2 = synthesize_snapshots(geom, aoa, model, 20, 5);
  const auto x3 = synthesize_snapshots(geom, aoa, model, 20, 6);
  CHECK(x1.data == x2.data);
  CHECK(x1.data != x3.data);
}

TEST_CASE("complex Gaussian waveform has the configured power") {
  const auto s = draw_symbols(SignalModel{2.0, 0.0, Waveform::ComplexGaussian}, 50000, 3);
  double p = 0.0;
  for (const auto& v : s) p += std::norm(v);
  CHECK(p / 50000.0 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("derived seeds differ across tag paths") {
  CHECK(derive_seed(1, {stream::kNoise, 0}) != derive_seed(1, {stream::kNoise, 1}));
  CHECK(derive_seed(1, {stream::kNoise}) != derive_seed(2, {stream::kNoise}));
  CHECK(derive_seed(1, {1, 2}) != derive_seed(1, {2, 1}));
}
