// Acceptance suite: one PASS/FAIL line per criterion, fixed seed, 100 Monte Carlo trials.
// Detail lines (indented) show the measured values behind each verdict.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aoakey/experiment.hpp"
#include "aoakey/kernels.hpp"
#include "aoakey/keygen.hpp"
#include "aoakey/music.hpp"
#include "aoakey/privacy_amplification.hpp"
#include "aoakey/reconciliation.hpp"
#include "aoakey/rng.hpp"
#include "aoakey/xsbs.hpp"

using namespace aoakey;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 2024;
constexpr int kTrials = 100;
constexpr double kBmrThreshold = 0.15;

int g_parallel = 1;

#define detail(...)         \
  do {                        \
    std::printf("    ");      \
    std::printf(__VA_ARGS__); \
    std::printf("\n");        \
    std::fflush(stdout);      \
  } while (0)

ExperimentSpec make_spec(ExperimentKind kind, std::vector<std::string> overrides) {
  overrides.insert(overrides.begin(), {"experiment.seed=" + std::to_string(kSeed),
                                       "experiment.trials=" + std::to_string(kTrials),
                                       "experiment.parallel=" + std::to_string(g_parallel)});
  return load_spec("", kind, overrides);
}

const RmseRow& find_rmse(const std::vector<RmseRow>& rows, EstimatorKind e, const std::string& angle, double snr,
                         int n) {
  for (const auto& r : rows) {
    if (r.estimator == e && r.angle == angle && r.snr_db == snr && r.samples == n) return r;
  }
  throw std::runtime_error("missing rmse row");
}

const BmrRow& find_bmr(const std::vector<BmrRow>& rows, const std::string& est, KeySource src, double snr,
                       const PipelineConfig& p) {
  for (const auto& r : rows) {
    if (r.estimator == est && r.source == src && r.snr_db == snr && r.pipeline.n_quan == p.n_quan &&
        r.pipeline.n_encod == p.n_encod && r.pipeline.n_comb == p.n_comb) {
      return r;
    }
  }
  throw std::runtime_error("missing bmr row");
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

bool criterion_rmse_table() {
  const auto spec = make_spec(ExperimentKind::RmseSweep, {"estimators=[music, xsbs]", "signal.snr_db=[-10, -20, -30]",
                                                          "signal.samples=[100, 1000, 2000]", "rmse.angles=[azimuth]"});
  const auto rows = run_rmse_sweep(spec);
  bool ok = true;
  for (int n : {100, 1000, 2000}) {
    for (auto e : {EstimatorKind::Music, EstimatorKind::Xsbs}) {
      const double v = find_rmse(rows, e, "azimuth", -10, n).rmse_deg;
      const bool pass = v <= 2.0;
      ok &= pass;
      detail("-10 dB N=%d %s rmse=%.3f (<= 2) %s", n, std::string(to_string(e)).c_str(), v, pass ? "ok" : "MISS");
    }
  }
  {
    const double x = find_rmse(rows, EstimatorKind::Xsbs, "azimuth", -20, 1000).rmse_deg;
    const double m = find_rmse(rows, EstimatorKind::Music, "azimuth", -20, 1000).rmse_deg;
    const bool px = x <= 2.0;
    // Reference value 29 with +-50% relative tolerance; the lower bound is pinned at 15.
    const bool pm = m >= 15.0 && m <= 29.0 * 1.5;
    ok &= px && pm;
    detail("-20 dB N=1000 xsbs rmse=%.3f (<= 2) %s", x, px ? "ok" : "MISS");
    detail("-20 dB N=1000 music rmse=%.3f (in [15, 43.5]) %s", m, pm ? "ok" : "MISS");
  }
  for (int n : {100, 1000, 2000}) {
    for (auto e : {EstimatorKind::Music, EstimatorKind::Xsbs}) {
      const double v = find_rmse(rows, e, "azimuth", -30, n).rmse_deg;
      const bool pass = v >= 50.0;
      ok &= pass;
      detail("-30 dB N=%d %s rmse=%.3f (>= 50) %s", n, std::string(to_string(e)).c_str(), v, pass ? "ok" : "MISS");
    }
  }
  return ok;
}

bool criterion_elevation_rmse() {
  // The exhaustive 2-D literal beam scan costs ~3 s per trial on one core; the sufficient
  // statistic draws the same beam outputs in distribution.
  const auto spec = make_spec(ExperimentKind::RmseSweep,
                              {"estimators=[music, xsbs]", "signal.snr_db=[-20]", "signal.samples=[1000]",
                               "rmse.angles=[elevation]", "array.xsbs.synthesis=sufficient"});
  const auto rows = run_rmse_sweep(spec);
  const double m = find_rmse(rows, EstimatorKind::Music, "elevation", -20, 1000).rmse_deg;
  const double x = find_rmse(rows, EstimatorKind::Xsbs, "elevation", -20, 1000).rmse_deg;
  const bool pm = m >= 3.0 && m <= 16.0;
  const bool px = x <= 2.0;
  detail("music elevation rmse=%.3f (in [3, 16]) %s", m, pm ? "ok" : "MISS");
  detail("xsbs elevation rmse=%.3f (<= 2) %s", x, px ? "ok" : "MISS");
  return pm && px;
}

bool criterion_pfr() {
  const auto spec = make_spec(ExperimentKind::Spectrum, {"estimators=[music, xsbs]", "signal.snr_db=[-15]",
                                                         "signal.samples=[100, 1000, 2000]", "truth.azimuth_deg=270"});
  const auto runs = run_spectrum(spec);
  std::map<std::pair<EstimatorKind, int>, double> pfr;
  for (const auto& r : runs) {
    pfr[{r.estimator, r.samples}] = r.pfr_median;
    detail("%s N=%d pfr_median=%.3f first-trial argmax=%.0f deg", std::string(to_string(r.estimator)).c_str(),
           r.samples, r.pfr_median, r.estimate_deg);
  }
  const auto M = EstimatorKind::Music, X = EstimatorKind::Xsbs;
  const bool mono = pfr[{M, 100}] < pfr[{M, 1000}] && pfr[{M, 1000}] < pfr[{M, 2000}];
  bool order = true;
  for (int n : {100, 1000, 2000}) order &= pfr[{X, n}] > pfr[{M, n}];
  const bool music_mag = pfr[{M, 2000}] >= 6.0;
  const bool xsbs_mag = pfr[{X, 2000}] >= 12.0;
  {
    // Noise-free spectra bound what any trial count can reach: the beam pattern sets the floor.
    auto clean = make_spec(ExperimentKind::Spectrum, {"estimators=[xsbs]", "signal.snr_db=[.inf]",
                                                      "signal.samples=[100]", "truth.azimuth_deg=270"});
    clean.trials = 1;
    detail("xsbs noiseless pfr=%.3f (beam-pattern ceiling)", run_spectrum(clean).front().pfr);
  }
  detail("music monotone in N: %s", mono ? "ok" : "MISS");
  detail("xsbs > music at every N: %s", order ? "ok" : "MISS");
  detail("music N=2000 pfr >= 6: %s", music_mag ? "ok" : "MISS");
  detail("xsbs N=2000 pfr >= 12: %s", xsbs_mag ? "ok" : "MISS");
  return mono && order && music_mag && xsbs_mag;
}

bool criterion_operating_range() {
  // Crossover tolerance: the check point X may move by up to 3 dB, so BMR <= 0.15 is
  // required no later than X + 3 dB. The interpolated crossover is printed next to the
  // quoted operating limit.
  struct Claim {
    EstimatorKind est;
    double check_point;
    double quoted_limit;
  };
  bool ok = true;
  for (const Claim c : {Claim{EstimatorKind::Music, -15.0, -17.0}, Claim{EstimatorKind::Xsbs, -25.0, -27.0}}) {
    const std::string name(to_string(c.est));
    std::vector<double> snrs;
    for (double d = c.check_point + 3; d > -30; d -= 3) snrs.push_back(d);
    snrs.push_back(-30);
    std::ostringstream list;
    list << "signal.snr_db=[";
    for (std::size_t i = 0; i < snrs.size(); ++i) list << (i ? ", " : "") << snrs[i];
    list << "]";
    const auto spec = make_spec(ExperimentKind::BmrSweep,
                                {"estimators=[" + name + "]", list.str(), "signal.samples=[1000]",
                                 "keygen.sources=[combined]", "pipeline.n_quan=[7]", "pipeline.n_encod=[2]",
                                 "pipeline.n_comb=[2]"});
    const auto rows = run_bmr_sweep(spec);
    const PipelineConfig p{7, 2, 2};
    auto at = [&](double snr) { return find_bmr(rows, name, KeySource::Combined, snr, p).bmr_mean; };
    std::ostringstream curve;
    double crossover = NAN;
    for (std::size_t i = 0; i < snrs.size(); ++i) {
      curve << ' ' << snrs[i] << ':' << at(snrs[i]);
      if (i > 0 && std::isnan(crossover) && at(snrs[i - 1]) <= kBmrThreshold && at(snrs[i]) > kBmrThreshold) {
        const double t = (kBmrThreshold - at(snrs[i - 1])) / (at(snrs[i]) - at(snrs[i - 1]));
        crossover = snrs[i - 1] + t * (snrs[i] - snrs[i - 1]);
      }
    }
    const double mid = at(c.check_point);
    const bool within = at(c.check_point + 3) <= kBmrThreshold;
    const bool fails = at(-30) > kBmrThreshold;
    ok &= within && fails;
    detail("%s bmr by snr:%s", name.c_str(), curve.str().c_str());
    detail("%s crossover ~ %.1f dB (quoted limit %.0f dB)", name.c_str(), crossover, c.quoted_limit);
    detail("%s at %+.0f dB %s; threshold met within +3 dB: %s; failure at -30 dB: %s", name.c_str(), c.check_point,
           mid <= kBmrThreshold ? "met" : "missed", within ? "ok" : "MISS", fails ? "ok" : "MISS");
  }
  return ok;
}

bool criterion_baseline_separation() {
  const auto spec = make_spec(ExperimentKind::BmrSweep,
                              {"estimators=[music, xsbs]", "signal.snr_db=[-15]", "signal.samples=[1000]",
                               "keygen.sources=[azimuth, amplitude, phase]", "pipeline.n_quan=[7]",
                               "pipeline.n_encod=[2]", "pipeline.n_comb=[2]"});
  const auto rows = run_bmr_sweep(spec);
  const PipelineConfig p{7, 2, 2};
  const double amp = find_bmr(rows, "channel", KeySource::Amplitude, -15, p).bmr_mean;
  const double ph = find_bmr(rows, "channel", KeySource::Phase, -15, p).bmr_mean;
  const double am = find_bmr(rows, "music", KeySource::Azimuth, -15, p).bmr_mean;
  const double ax = find_bmr(rows, "xsbs", KeySource::Azimuth, -15, p).bmr_mean;
  detail("amplitude bmr=%.4f (> 0.15) %s", amp, amp > kBmrThreshold ? "ok" : "MISS");
  detail("phase bmr=%.4f (> 0.15) %s", ph, ph > kBmrThreshold ? "ok" : "MISS");
  detail("azimuth (music) bmr=%.4f (<= 0.15) %s", am, am <= kBmrThreshold ? "ok" : "MISS");
  detail("azimuth (xsbs) bmr=%.4f (<= 0.15) %s", ax, ax <= kBmrThreshold ? "ok" : "MISS");
  return amp > kBmrThreshold && ph > kBmrThreshold && am <= kBmrThreshold && ax <= kBmrThreshold;
}

bool criterion_parameter_trends() {
  // Sweeps hold the other two parameters at the reference settings of each sweep. After
  // combining, only the top n_comb + n_encod - 1 encoded bits survive, and those do not
  // depend on n_quan; an exactly flat series therefore counts as monotone.
  const auto spec = make_spec(ExperimentKind::BmrSweep,
                              {"estimators=[xsbs]", "signal.snr_db=[-20]", "signal.samples=[1000]",
                               "keygen.sources=[azimuth, elevation, combined]", "pipeline.n_quan=[6, 7, 8, 9]",
                               "pipeline.n_encod=[1, 2, 3, 4]", "pipeline.n_comb=[3, 4, 5, 6]"});
  const auto rows = run_bmr_sweep(spec);
  struct Sweep {
    const char* name;
    std::vector<int> values;
    std::function<PipelineConfig(int)> cfg;
    int sign;  // +1 non-decreasing, -1 non-increasing
  };
  const std::vector<Sweep> sweeps{
      {"n_quan (n_encod=2, n_comb=5)", {6, 7, 8, 9}, [](int v) { return PipelineConfig{v, 2, 5}; }, +1},
      {"n_encod (n_quan=7, n_comb=5)", {1, 2, 3, 4}, [](int v) { return PipelineConfig{7, v, 5}; }, -1},
      {"n_comb (n_quan=7, n_encod=2)", {3, 4, 5, 6}, [](int v) { return PipelineConfig{7, 2, v}; }, -1},
  };
  bool ok = true;
  for (const auto& s : sweeps) {
    for (auto src : {KeySource::Azimuth, KeySource::Elevation, KeySource::Combined}) {
      std::vector<double> x, y;
      std::ostringstream vals;
      for (int v : s.values) {
        x.push_back(v);
        y.push_back(find_bmr(rows, "xsbs", src, -20, s.cfg(v)).bmr_mean);
        vals << ' ' << v << ':' << y.back();
      }
      const bool flat = std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
      const double rho = spearman(x, y);
      const bool pass = flat || (s.sign > 0 ? rho > 0 : rho < 0);
      ok &= pass;
      detail("%s %s bmr%s  spearman=%+.3f%s (%s) %s", s.name, std::string(to_string(src)).c_str(),
             vals.str().c_str(), rho, flat ? " flat" : "", s.sign > 0 ? "> 0" : "< 0", pass ? "ok" : "MISS");
    }
  }
  return ok;
}

bool criterion_property_suite() {
  bool ok = true;
  auto report = [&](const char* what, bool pass, const std::string& value) {
    ok &= pass;
    detail("%s: %s %s", what, value.c_str(), pass ? "ok" : "MISS");
  };

  {
    // Elevations inside the zenith grid cell leave azimuth undefined (the steering vector
    // is all-ones), so the end-to-end check draws the mobility model outside that cell
    // and reports the unrestricted value alongside.
    const auto grid = AngleGrid::uniform_degrees(1.0, 1.0);
    auto cfg = XsbsConfig::standard();
    cfg.synthesis = BeamSynthesis::SufficientStatistic;
    const XsbsEstimator xsbs(ArrayGeometry::from_spacing(17, 0.5), cfg, grid);
    const MusicEstimator music(ArrayGeometry::from_spacing(16, 0.5), grid);
    std::size_t mismatched = 0, total = 0, mismatched_all = 0, total_all = 0;
    for (int s = 0; s < 10; ++s) {
      const auto all = random_aoa_sequence(64, derive_seed(kSeed, {stream::kMobility, static_cast<std::uint64_t>(s)}));
      std::vector<AngleOfArrival> observable;
      for (const auto& a : all) {
        if (a.elevation >= 0.5 * kPi / 180.0) observable.push_back(a);
      }
      for (const AngleEstimator* est : {static_cast<const AngleEstimator*>(&music), static_cast<const AngleEstimator*>(&xsbs)}) {
        const auto k = generate_key_pair(observable, *est, *est, {}, {7, 2, 2}, AngleSource::Combined, INFINITY, 50,
                                         derive_seed(kSeed, {stream::kTrial, static_cast<std::uint64_t>(s)}));
        mismatched += static_cast<std::size_t>(std::lround(k.bmr * static_cast<double>(k.alice.size())));
        total += k.alice.size();
        const auto ka = generate_key_pair(all, *est, *est, {}, {7, 2, 2}, AngleSource::Combined, INFINITY, 50,
                                          derive_seed(kSeed, {stream::kTrial, static_cast<std::uint64_t>(s)}));
        mismatched_all += static_cast<std::size_t>(std::lround(ka.bmr * static_cast<double>(ka.alice.size())));
        total_all += ka.alice.size();
      }
    }
    report("noiseless end-to-end BMR, elevation outside the zenith cell", mismatched == 0,
           std::to_string(mismatched) + "/" + std::to_string(total) + " bits");
    detail("  (unrestricted mobility draw: %zu/%zu bits mismatched)", mismatched_all, total_all);
  }
  {
    Rng rng(derive_seed(kSeed, {101}));
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> a(10000), b(10000);
    for (auto& v : a) v = coin(rng);
    for (auto& v : b) v = coin(rng);
    const double r = bit_mismatch_rate(a, b);
    report("independent streams BMR at 1e4 bits (0.5 +- 0.03)", std::abs(r - 0.5) <= 0.03, std::to_string(r));
  }
  {
    Rng rng(derive_seed(kSeed, {102}));
    std::bernoulli_distribution coin(0.5);
    int clean = 0;
    for (int run = 0; run < 200; ++run) {
      std::vector<std::uint8_t> a(512);
      for (auto& v : a) v = coin(rng);
      auto b = a;
      std::vector<std::size_t> idx(512);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (int i = 0; i < 51; ++i) b[idx[static_cast<std::size_t>(i)]] ^= 1;  // 10% of 512
      const ReconciliationSession session{rng(), estimate_initial_block_size(0.1, 512), 4};
      const auto res = reconcile(a, b, session);
      if (res.corrected == a) ++clean;
    }
    report("Cascade, 512 bits at 10% mismatch, 4 passes (>= 95% of 200 clean)", clean >= 190,
           std::to_string(clean) + "/200");
  }
  {
    Rng rng(derive_seed(kSeed, {103}));
    std::bernoulli_distribution coin(0.5);
    const HashFunctionFamily family{64, 8};
    int collisions = 0;
    const int pairs = 10000;
    for (int i = 0; i < pairs; ++i) {
      std::vector<std::uint8_t> x(64), y(64);
      for (auto& v : x) v = coin(rng);
      do {
        for (auto& v : y) v = coin(rng);
      } while (y == x);
      const std::uint64_t index = rng();
      if (toeplitz_hash(x, family, index) == toeplitz_hash(y, family, index)) ++collisions;
    }
    const double frac = static_cast<double>(collisions) / pairs;
    report("8-bit Toeplitz collision fraction over 1e4 pairs (<= 2/256)", frac <= 2.0 / 256.0, std::to_string(frac));
  }
  {
    std::mt19937_64 rng(derive_seed(kSeed, {104}));
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const int m = 16;
      ComplexMatrix g(m, m);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) g(r, c) = cplx(nd(rng), nd(rng));
      }
      const ComplexMatrix a = g * g.adjoint();
      const auto d = eigendecompose({a, m}, 1 + i % (m - 1));
      ComplexMatrix basis(m, m);
      basis << d.signal_basis, d.noise_basis;
      Eigen::VectorXd lambda(m);
      for (int k = 0; k < m; ++k) lambda(k) = d.eigenvalues[static_cast<std::size_t>(k)];
      const ComplexMatrix r = basis * lambda.asDiagonal() * basis.adjoint();
      worst = std::max(worst, (r - a).norm() / a.norm());
    }
    std::ostringstream v;
    v << worst;
    report("eigendecomposition relative Frobenius error, 1000 matrices (< 1e-8)", worst < 1e-8, v.str());
  }
  {
    const auto grid = AngleGrid::uniform_degrees(1.0, 1.0);
    const MusicEstimator music(ArrayGeometry::from_spacing(16, 0.5), grid);
    const XsbsEstimator xsbs(ArrayGeometry::from_spacing(17, 0.5), XsbsConfig::standard(), grid);
    const auto az = azimuth_grid_degrees(1.0);
    int music_hits = 0, xsbs_hits = 0;
    for (std::size_t i = 0; i < az.size(); ++i) {
      const Observation obs{AngleOfArrival::make(az[i], kPi / 2), SignalModel{}, 50, i};
      music_hits += music.estimate_azimuth(obs).index == i;
      xsbs_hits += xsbs.estimate_azimuth(obs).index == i;
    }
    report("noiseless MUSIC argmax on 360 grid angles", music_hits == 360, std::to_string(music_hits) + "/360");
    report("noiseless XSBS argmax on 360 grid angles", xsbs_hits == 360, std::to_string(xsbs_hits) + "/360");
  }
  return ok;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool criterion_determinism(const std::string& cli, const std::string& data_dir) {
  if (cli.empty() || data_dir.empty()) {
    detail("CLI path or data directory not given");
    return false;
  }
  const fs::path work = fs::temp_directory_path() / ("aoakey_acceptance_" + std::to_string(kSeed));
  bool ok = true;
  for (const std::string kind : {"spectrum", "rmse", "bmr", "keygen"}) {
    const std::string config = data_dir + "/" + kind + "_small.yaml";
    std::vector<std::string> files{"results.csv", "spec.resolved"};
    if (kind == "keygen") files.push_back("transcript.log");
    bool same = true;
    std::string dir_a;
    for (const std::string run : {"a", "b"}) {
      const fs::path out = work / kind / run;
      fs::remove_all(out);
      const std::string cmd = "\"" + cli + "\" " + kind + " --config \"" + config + "\" --seed " +
                              std::to_string(kSeed) + " --out \"" + out.string() + "\" -q > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        detail("%s: CLI run failed", kind.c_str());
        same = false;
      }
    }
    const fs::path a = work / kind / "a", b = work / kind / "b";
    if (same) {
      for (const auto& entry : fs::directory_iterator(a)) {
        const auto id = entry.path().filename();
        for (const auto& f : files) {
          const auto fa = a / id / f, fb = b / id / f;
          if (!fs::exists(fa) || slurp(fa) != slurp(fb)) same = false;
        }
      }
    }
    ok &= same;
    detail("%s rerun byte-identical (%zu files): %s", kind.c_str(), files.size(), same ? "ok" : "MISS");
  }
  fs::remove_all(work);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aoakey acceptance suite"};
  std::string cli, data_dir;
  std::vector<int> only;
  g_parallel = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--cli", cli, "path to the aoakey CLI binary");
  app.add_option("--data", data_dir, "directory holding the *_small.yaml CLI configs");
  app.add_option("--only", only, "run only these criterion numbers");
  app.add_option("--parallel", g_parallel, "worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "azimuth RMSE table", criterion_rmse_table},
      {2, "elevation RMSE", criterion_elevation_rmse},
      {3, "PFR ordering and magnitude", criterion_pfr},
      {4, "operating range", criterion_operating_range},
      {5, "baseline separation", criterion_baseline_separation},
      {6, "parameter trends", criterion_parameter_trends},
      {7, "pipeline and protocol properties", criterion_property_suite},
      {8, "CLI determinism", [&] { return criterion_determinism(cli, data_dir); }},
  };

  std::printf("seed %llu, %d trials, %d threads, kernels %s\n", static_cast<unsigned long long>(kSeed), kTrials,
              g_parallel, std::string(kernels::backend_name(kernels::active_backend())).c_str());
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = c.run();
    } catch (const std::exception& e) {
      detail("error: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, secs);
    std::fflush(stdout);
    failed += !pass;
    ++ran;
  }
  std::printf("acceptance: %d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
