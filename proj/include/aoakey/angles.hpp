#pragma once

#include <numbers>

namespace aoakey {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double rad) noexcept;

/// Signed difference a - b wrapped into (-180, 180] degrees.
double wrapped_difference_deg(double a_deg, double b_deg) noexcept;

/// Azimuth in [0, 2pi), elevation in [0, pi/2]. Elevation is measured from the
/// array normal (zenith); pi/2 is the array plane. A planar circular array cannot
/// tell theta from pi - theta, so the upper hemisphere is the whole domain.
struct AngleOfArrival {
  double azimuth = 0.0;
  double elevation = kPi / 2.0;

  /// Normalizes azimuth and validates elevation. Throws std::invalid_argument on
  /// non-finite input or elevation outside [0, pi/2].
  static AngleOfArrival make(double azimuth_rad, double elevation_rad);
  static AngleOfArrival from_degrees(double azimuth_deg, double elevation_deg) {
    return make(deg_to_rad(azimuth_deg), deg_to_rad(elevation_deg));
  }

  friend bool operator==(const AngleOfArrival&, const AngleOfArrival&) = default;
};

}  // namespace aoakey
