#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "aoakey/spectrum.hpp"

namespace aoakey {

std::string_view to_string(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::Music ? "music" : "xsbs";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "music" || name == "MUSIC") return EstimatorKind::Music;
  if (name == "xsbs" || name == "XSBS") return EstimatorKind::Xsbs;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

void SpatialSpectrum::validate() const {
  if (grid.empty()) throw std::invalid_argument("spatial spectrum: empty grid");
  if (grid.size() != power.size()) throw std::invalid_argument("spatial spectrum: grid/power length mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("spatial spectrum: grid not strictly increasing");
  }
  for (double p : power) {
    if (!(p >= 0.0)) throw std::invalid_argument("spatial spectrum: negative or NaN power");
  }
}

AngleEstimate estimate_azimuth(const SpatialSpectrum& spectrum) {
  spectrum.validate();
  // max_element returns the first maximum, i.e. the smallest angle on ties.
  const auto it = std::max_element(spectrum.power.begin(), spectrum.power.end());
  const auto idx = static_cast<std::size_t>(it - spectrum.power.begin());
  AngleEstimate e;
  e.index = idx;
  e.angle = spectrum.grid[idx];
  if (spectrum.grid.size() > 1) {
    const std::size_t j = idx + 1 < spectrum.grid.size() ? idx + 1 : idx;
    const std::size_t i = j == idx ? idx - 1 : idx;
    e.resolution = spectrum.grid[j] - spectrum.grid[i];
  }
  return e;
}

double pfr(const SpatialSpectrum& spectrum, std::size_t guard) {
  spectrum.validate();
  const auto& p = spectrum.power;
  const std::size_t n = p.size();
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*lo == *hi) throw std::domain_error("degenerate spectrum");
  const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());

  auto collect = [&](std::size_t g) {
    std::vector<double> floor;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t d = i > peak ? i - peak : peak - i;
      if (spectrum.periodic) d = std::min(d, n - d);
      if (d > g) floor.push_back(p[i]);
    }
    return floor;
  };
  auto floor = collect(guard);
  if (floor.empty()) floor = collect(0);

  const std::size_t mid = floor.size() / 2;
  std::nth_element(floor.begin(), floor.begin() + static_cast<std::ptrdiff_t>(mid), floor.end());
  double median = floor[mid];
  if (floor.size() % 2 == 0) {
    const double below = *std::max_element(floor.begin(), floor.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + below);
  }
  if (median <= 0.0) return std::numeric_limits<double>::infinity();
  return *hi / median;
}

std::vector<double> azimuth_grid_degrees(double step_deg) {
  if (!(step_deg > 0.0)) throw std::invalid_argument("azimuth grid: step must be positive");
  const auto count = static_cast<std::size_t>(std::llround(std::floor(360.0 / step_deg - 1e-9)) + 1);
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = deg_to_rad(static_cast<double>(i) * step_deg);
  return g;
}

AngleGrid AngleGrid::uniform_degrees(double azimuth_step_deg, double elevation_step_deg) {
  if (!(elevation_step_deg > 0.0)) throw std::invalid_argument("elevation grid: step must be positive");
  AngleGrid g;
  g.azimuth = azimuth_grid_degrees(azimuth_step_deg);
  const auto count = static_cast<std::size_t>(std::llround(std::floor(90.0 / elevation_step_deg + 1e-9)) + 1);
  g.elevation.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    g.elevation[i] = std::min(deg_to_rad(static_cast<double>(i) * elevation_step_deg), kPi / 2.0);
  }
  return g;
}

SteeringTable::SteeringTable(const ArrayGeometry& geom, std::span<const double> azimuths,
                             std::span<const double> elevations)
    : n_az_(azimuths.size()), n_el_(elevations.size()), n_m_(static_cast<std::size_t>(geom.element_count())) {
  if (n_az_ == 0 || n_el_ == 0) throw std::invalid_argument("steering table: empty grid");
  const std::size_t g_count = n_az_ * n_el_;
  re_.resize(n_m_ * g_count);
  im_.resize(n_m_ * g_count);
  const double kr = geom.wavenumber() * geom.radius();
  const auto& phi = geom.element_azimuths();
  for (std::size_t e = 0; e < n_el_; ++e) {
    const double k = kr * std::sin(elevations[e]);
    for (std::size_t a = 0; a < n_az_; ++a) {
      const std::size_t g = e * n_az_ + a;
      for (std::size_t m = 0; m < n_m_; ++m) {
        const double arg = k * std::cos(azimuths[a] - phi[m]);
        re_[m * g_count + g] = std::cos(arg);
        im_[m * g_count + g] = std::sin(arg);
      }
    }
  }
}

kernels::SteeringBlock SteeringTable::block() const noexcept {
  return {re_.data(), im_.data(), size(), size(), n_m_};
}

kernels::SteeringBlock SteeringTable::azimuth_row(std::size_t el) const noexcept {
  const std::size_t off = el * n_az_;
  return {re_.data() + off, im_.data() + off, size(), n_az_, n_m_};
}

std::pair<std::size_t, std::size_t> argmax_2d(const SpatialSpectrum2d& s, StageOrder order, std::size_t stride) {
  const std::size_t n_az = s.azimuth_grid.size();
  const std::size_t n_el = s.elevation_grid.size();
  if (n_az == 0 || n_el == 0 || s.power.size() != n_az * n_el) {
    throw std::invalid_argument("2-D spectrum: malformed grid");
  }
  stride = std::max<std::size_t>(stride, 1);
  const std::size_t az_step = order == StageOrder::ElevationFirst ? stride : 1;
  const std::size_t el_step = order == StageOrder::AzimuthFirst ? stride : 1;
  std::size_t best_a = 0, best_e = 0;
  double best = -1.0;
  for (std::size_t e = 0; e < n_el; e += el_step) {
    for (std::size_t a = 0; a < n_az; a += az_step) {
      const double v = s.power[e * n_az + a];
      if (v > best) {
        best = v;
        best_a = a;
        best_e = e;
      }
    }
  }
  return {best_a, best_e};
}

}  // namespace aoakey
