#include "aoakey/xsbs.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aoakey/rng.hpp"

namespace aoakey {

std::string_view to_string(BeamSynthesis s) noexcept {
  return s == BeamSynthesis::Literal ? "literal" : "sufficient";
}

BeamSynthesis parse_beam_synthesis(std::string_view name) {
  if (name == "literal") return BeamSynthesis::Literal;
  if (name == "sufficient") return BeamSynthesis::SufficientStatistic;
  throw std::invalid_argument("unknown beam synthesis '" + std::string(name) + "' (literal|sufficient)");
}

XsbsConfig XsbsConfig::standard() {
  XsbsConfig c;
  c.beam_azimuths = azimuth_grid_degrees(1.0);
  return c;
}

void XsbsConfig::validate(const ArrayGeometry& geom) const {
  const int m = geom.element_count();
  if (beam_azimuths.size() < 2) throw std::invalid_argument("xsbs: need at least 2 beams");
  for (std::size_t i = 1; i < beam_azimuths.size(); ++i) {
    if (!(beam_azimuths[i] > beam_azimuths[i - 1])) {
      throw std::invalid_argument("xsbs: beam azimuths must be strictly increasing");
    }
  }
  AngleOfArrival::make(0.0, beam_elevation);
  if (omni_elements.empty()) throw std::invalid_argument("xsbs: reference needs at least one element");
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int e : omni_elements) {
    if (e < 0 || e >= m) throw std::invalid_argument("xsbs: reference element index out of range");
    if (used[static_cast<std::size_t>(e)]) throw std::invalid_argument("xsbs: duplicate reference element");
    used[static_cast<std::size_t>(e)] = true;
  }
  if (static_cast<int>(omni_elements.size()) >= m) {
    throw std::invalid_argument("xsbs: no elements left for directional beams");
  }
}

namespace {

std::vector<cplx> directional_mask(const ArrayGeometry& geom, const XsbsConfig& cfg) {
  std::vector<cplx> mask(static_cast<std::size_t>(geom.element_count()), cplx(1.0, 0.0));
  for (int e : cfg.omni_elements) mask[static_cast<std::size_t>(e)] = 0.0;
  return mask;
}

cplx omni_gain(const ComplexVector& a, const XsbsConfig& cfg) {
  cplx g{0.0, 0.0};
  for (int e : cfg.omni_elements) g += a[e];
  return g;
}

/// Per-observation state shared by every beam: the symbols, the reference output and,
/// for the sufficient-statistic path, the quantities the beam correlations depend on.
struct ReferenceState {
  const SignalModel* model;
  std::uint64_t seed;
  std::vector<cplx> symbols;
  std::vector<cplx> reference;
  cplx signal_term;        // (1/N) sum s conj(x_o)
  double residual_std2;    // variance of (1/N) sum v_k conj(x_o) given x_o
  mutable std::vector<cplx> scratch;

  ReferenceState(const ComplexVector& truth_steering, const XsbsConfig& cfg, const SignalModel& m, int n,
                 std::uint64_t s)
      : model(&m), seed(s), symbols(draw_symbols(m, n, s)) {
    const cplx g_o = omni_gain(truth_steering, cfg);
    reference.resize(symbols.size());
    for (std::size_t t = 0; t < symbols.size(); ++t) reference[t] = g_o * symbols[t];
    add_receiver_noise(reference, m.noise_variance, s, 0);
    const double inv_n = 1.0 / static_cast<double>(n);
    signal_term = kernels::cross_correlation(symbols, reference) * inv_n;
    double energy = 0.0;
    for (const cplx& v : reference) energy += std::norm(v);
    residual_std2 = m.noise_variance * energy * inv_n * inv_n;
    scratch.resize(symbols.size());
  }

  double power(cplx gain, std::uint64_t receiver, BeamSynthesis synthesis) const {
    if (synthesis == BeamSynthesis::SufficientStatistic) {
      cplx r = gain * signal_term;
      if (residual_std2 > 0.0) {
        SplitMix64 gen(derive_seed(seed, {stream::kBeamNoise, receiver}));
        r += complex_normal(gen, residual_std2);
      }
      return std::sqrt(std::norm(r));
    }
    for (std::size_t t = 0; t < symbols.size(); ++t) scratch[t] = gain * symbols[t];
    add_receiver_noise(scratch, model->noise_variance, seed, receiver);
    return std::sqrt(std::norm(kernels::cross_correlation(scratch, reference))) / static_cast<double>(symbols.size());
  }
};

/// Beam gains g_k = sum_m w_km a_m(truth) with w_k = conj(a(center_k)) on directional
/// elements, for every point of the block: conj(t'^H a_k) where t' is the masked truth.
void beam_gains(const kernels::SteeringBlock& block, const ComplexVector& truth, const std::vector<cplx>& mask,
                std::vector<cplx>& gains) {
  std::vector<cplx> masked(mask.size());
  for (std::size_t m = 0; m < mask.size(); ++m) masked[m] = mask[m] * truth[static_cast<Eigen::Index>(m)];
  gains.resize(block.count);
  kernels::inner_products(block, masked, gains);
  for (auto& g : gains) g = std::conj(g);
}

}  // namespace

std::vector<cplx> xsbs_omni_weights(const ArrayGeometry& geom, const XsbsConfig& cfg) {
  cfg.validate(geom);
  std::vector<cplx> w(static_cast<std::size_t>(geom.element_count()), cplx(0.0, 0.0));
  for (int e : cfg.omni_elements) w[static_cast<std::size_t>(e)] = 1.0;
  return w;
}

std::vector<cplx> xsbs_beam_weights(const ArrayGeometry& geom, const XsbsConfig& cfg, const AngleOfArrival& center) {
  cfg.validate(geom);
  const ComplexVector a = steering_vector(geom, center);
  auto w = directional_mask(geom, cfg);
  for (std::size_t m = 0; m < w.size(); ++m) w[m] *= std::conj(a[static_cast<Eigen::Index>(m)]);
  return w;
}

namespace {

std::uint64_t beam_receiver(int stage, double azimuth, double elevation) noexcept {
  const std::uint64_t key = derive_seed(static_cast<std::uint64_t>(stage), {std::bit_cast<std::uint64_t>(azimuth),
                                                                            std::bit_cast<std::uint64_t>(elevation)});
  return key == 0 ? 1 : key;
}

}  // namespace

std::uint64_t xsbs_beam_receiver(int stage, const AngleOfArrival& center) noexcept {
  return beam_receiver(stage, center.azimuth, center.elevation);
}

SpatialSpectrum xsbs_spectrum(const ArrayGeometry& geom, const XsbsConfig& cfg, const AngleOfArrival& truth,
                              const SignalModel& model, int n, std::uint64_t seed) {
  cfg.validate(geom);
  model.validate();
  const double el[] = {cfg.beam_elevation};
  SteeringTable table(geom, cfg.beam_azimuths, el);
  const ComplexVector t = steering_vector(geom, truth);
  std::vector<cplx> gains;
  beam_gains(table.block(), t, directional_mask(geom, cfg), gains);
  ReferenceState ref(t, cfg, model, n, seed);

  SpatialSpectrum s;
  s.kind = SpectrumKind::Xsbs;
  s.grid = cfg.beam_azimuths;
  const auto& g = s.grid;
  s.periodic = g.size() > 1 && g.back() - g.front() + (g[1] - g[0]) >= kTwoPi - 1e-9;
  s.power.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto center = AngleOfArrival::make(g[k], cfg.beam_elevation);
    s.power[k] = ref.power(gains[k], xsbs_beam_receiver(0, center), cfg.synthesis);
  }
  return s;
}

namespace {
const double kHorizon[] = {kPi / 2.0};
}

XsbsEstimator::XsbsEstimator(ArrayGeometry geom, XsbsConfig cfg, AngleGrid grid, TwoStageOptions options)
    : geom_(geom),
      cfg_(std::move(cfg)),
      grid_(std::move(grid)),
      options_(options),
      azimuth_table_(geom_, grid_.azimuth, kHorizon),
      table_2d_(geom_, grid_.azimuth, grid_.elevation) {
  cfg_.beam_azimuths = grid_.azimuth;
  cfg_.beam_elevation = kPi / 2.0;
  cfg_.validate(geom_);
  mask_ = directional_mask(geom_, cfg_);
}

SpatialSpectrum XsbsEstimator::azimuth_spectrum(const Observation& obs) const {
  obs.model.validate();
  const ComplexVector t = steering_vector(geom_, obs.truth);
  std::vector<cplx> gains;
  beam_gains(azimuth_table_.block(), t, mask_, gains);
  ReferenceState ref(t, cfg_, obs.model, obs.samples, obs.seed);
  SpatialSpectrum s;
  s.kind = SpectrumKind::Xsbs;
  s.grid = grid_.azimuth;
  s.periodic = true;
  s.power.resize(s.grid.size());
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const auto center = AngleOfArrival::make(s.grid[k], kPi / 2.0);
    s.power[k] = ref.power(gains[k], xsbs_beam_receiver(0, center), cfg_.synthesis);
  }
  return s;
}

AngleOfArrival XsbsEstimator::estimate_2d(const Observation& obs) const {
  obs.model.validate();
  const ComplexVector t = steering_vector(geom_, obs.truth);
  std::vector<cplx> gains;
  beam_gains(table_2d_.block(), t, mask_, gains);
  ReferenceState ref(t, cfg_, obs.model, obs.samples, obs.seed);

  const std::size_t n_az = grid_.azimuth.size();
  const std::size_t n_el = grid_.elevation.size();
  const std::size_t stride = std::max<std::size_t>(options_.coarse_stride, 1);
  const bool el_first = options_.order == StageOrder::ElevationFirst;

  // Stage 1: decimated 2-D scan; only the marginal angle is kept.
  SpatialSpectrum2d stage1;
  stage1.kind = SpectrumKind::Xsbs;
  stage1.azimuth_grid = grid_.azimuth;
  stage1.elevation_grid = grid_.elevation;
  stage1.power.assign(n_az * n_el, 0.0);
  for (std::size_t e = 0; e < n_el; e += el_first ? 1 : stride) {
    for (std::size_t a = 0; a < n_az; a += el_first ? stride : 1) {
      const std::size_t g = e * n_az + a;
      stage1.power[g] = ref.power(gains[g], beam_receiver(1, grid_.azimuth[a], grid_.elevation[e]), cfg_.synthesis);
    }
  }
  const auto [a1, e1] = argmax_2d(stage1, options_.order, stride);

  // Stage 2: fresh beam outputs along the remaining axis.
  std::size_t best_a = a1, best_e = e1;
  double best = -1.0;
  const std::size_t count = el_first ? n_az : n_el;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = el_first ? i : a1;
    const std::size_t e = el_first ? e1 : i;
    const std::size_t g = e * n_az + a;
    const double p = ref.power(gains[g], beam_receiver(2, grid_.azimuth[a], grid_.elevation[e]), cfg_.synthesis);
    if (p > best) {
      best = p;
      best_a = a;
      best_e = e;
    }
  }
  return AngleOfArrival::make(grid_.azimuth[best_a], grid_.elevation[best_e]);
}

}  // namespace aoakey
