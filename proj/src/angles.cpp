#include "aoakey/angles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoakey {

double wrap_two_pi(double rad) noexcept {
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrapped_difference_deg(double a_deg, double b_deg) noexcept {
  double d = std::fmod(a_deg - b_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

AngleOfArrival AngleOfArrival::make(double azimuth_rad, double elevation_rad) {
  if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad)) {
    throw std::invalid_argument("angle of arrival: non-finite angle");
  }
  // Tolerate rounding from degree conversions at the domain edges.
  constexpr double kSlack = 1e-12;
  if (elevation_rad < -kSlack || elevation_rad > kPi / 2.0 + kSlack) {
    throw std::invalid_argument("angle of arrival: elevation outside [0, pi/2]");
  }
  AngleOfArrival a;
  a.azimuth = wrap_two_pi(azimuth_rad);
  a.elevation = std::clamp(elevation_rad, 0.0, kPi / 2.0);
  return a;
}

}  // namespace aoakey
