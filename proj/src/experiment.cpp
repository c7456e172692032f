#include "aoakey/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aoakey/baselines.hpp"
#include "aoakey/music.hpp"
#include "aoakey/privacy_amplification.hpp"
#include "aoakey/rng.hpp"
#include "aoakey/xsbs.hpp"

namespace aoakey {

namespace {

ArrayGeometry geometry_for(EstimatorKind kind, const ExperimentSpec& spec) {
  const auto& a = kind == EstimatorKind::Music ? spec.music_array : spec.xsbs_array;
  return ArrayGeometry::from_spacing(a.elements, a.spacing);
}

AngleGrid grid_for(const ExperimentSpec& spec) {
  return AngleGrid::uniform_degrees(spec.azimuth_step_deg, spec.elevation_step_deg);
}

TwoStageOptions options_for(const ExperimentSpec& spec) {
  return {spec.stage_order, static_cast<std::size_t>(spec.coarse_stride)};
}

SignalModel model_for(const ExperimentSpec& spec, double snr_db) {
  return SignalModel::from_snr_db(snr_db, 1.0, spec.waveform);
}

AngleOfArrival truth_for(const ExperimentSpec& spec) {
  return AngleOfArrival::from_degrees(spec.truth_azimuth_deg, spec.truth_elevation_deg);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double pfr_or_nan(const SpatialSpectrum& s) {
  try {
    return pfr(s);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::unique_ptr<AngleEstimator> make_estimator(EstimatorKind kind, const ExperimentSpec& spec) {
  const auto geom = geometry_for(kind, spec);
  if (kind == EstimatorKind::Music) {
    return std::make_unique<MusicEstimator>(geom, grid_for(spec), options_for(spec));
  }
  XsbsConfig cfg;
  cfg.omni_elements = spec.omni_elements;
  cfg.synthesis = spec.synthesis;
  return std::make_unique<XsbsEstimator>(geom, cfg, grid_for(spec), options_for(spec));
}

std::uint64_t trial_seed(std::uint64_t master, double snr_db, int samples, int trial) noexcept {
  return derive_seed(master, {stream::kTrial, std::bit_cast<std::uint64_t>(snr_db),
                              static_cast<std::uint64_t>(samples), static_cast<std::uint64_t>(trial)});
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SpectrumRun> run_spectrum(const ExperimentSpec& spec) {
  spec.validate();
  const auto truth = truth_for(spec);
  std::vector<SpectrumRun> runs;
  for (auto kind : spec.estimators) {
    const auto est = make_estimator(kind, spec);
    for (double snr : spec.snr_db) {
      const auto model = model_for(spec, snr);
      for (int n : spec.samples) {
        std::vector<SpatialSpectrum> spectra(static_cast<std::size_t>(spec.trials));
        parallel_for(spectra.size(), spec.parallel, [&](std::size_t t) {
          spectra[t] = est->azimuth_spectrum({truth, model, n, trial_seed(spec.seed, snr, n, static_cast<int>(t))});
        });
        std::vector<double> pfrs;
        for (const auto& s : spectra) pfrs.push_back(pfr_or_nan(s));
        SpectrumRun r;
        r.estimator = kind;
        r.snr_db = snr;
        r.samples = n;
        r.spectrum = std::move(spectra.front());
        r.pfr = pfrs.front();
        r.pfr_median = median(pfrs);
        r.estimate_deg = rad_to_deg(estimate_azimuth(r.spectrum).angle);
        runs.push_back(std::move(r));
      }
    }
  }
  return runs;
}

std::vector<RmseRow> run_rmse_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto truth = truth_for(spec);
  std::vector<RmseRow> rows;
  for (auto kind : spec.estimators) {
    const auto est = make_estimator(kind, spec);
    for (const auto& angle : spec.rmse_angles) {
      const bool azimuth = angle == "azimuth";
      for (double snr : spec.snr_db) {
        const auto model = model_for(spec, snr);
        for (int n : spec.samples) {
          std::vector<double> err(static_cast<std::size_t>(spec.trials));
          std::vector<double> pfrs(err.size(), std::numeric_limits<double>::quiet_NaN());
          parallel_for(err.size(), spec.parallel, [&](std::size_t t) {
            const Observation obs{truth, model, n, trial_seed(spec.seed, snr, n, static_cast<int>(t))};
            if (azimuth) {
              const auto s = est->azimuth_spectrum(obs);
              err[t] = wrapped_difference_deg(rad_to_deg(estimate_azimuth(s).angle), spec.truth_azimuth_deg);
              pfrs[t] = pfr_or_nan(s);
            } else {
              err[t] = rad_to_deg(est->estimate_2d(obs).elevation) - spec.truth_elevation_deg;
            }
          });
          RmseRow r;
          r.estimator = kind;
          r.angle = angle;
          r.snr_db = snr;
          r.samples = n;
          r.trials = spec.trials;
          double sq = 0.0, ab = 0.0;
          for (double e : err) {
            sq += e * e;
            ab += std::abs(e);
          }
          r.rmse_deg = std::sqrt(sq / static_cast<double>(err.size()));
          r.mean_abs_error_deg = ab / static_cast<double>(err.size());
          r.pfr_median = azimuth ? median(pfrs) : std::numeric_limits<double>::quiet_NaN();
          rows.push_back(r);
        }
      }
    }
  }
  return rows;
}

namespace {

BaselineSource baseline_of(KeySource s) {
  switch (s) {
    case KeySource::Amplitude: return BaselineSource::Amplitude;
    case KeySource::Phase: return BaselineSource::Phase;
    default: return BaselineSource::Combined;
  }
}

AngleSource angle_of(KeySource s) {
  switch (s) {
    case KeySource::Azimuth: return AngleSource::Azimuth;
    case KeySource::Elevation: return AngleSource::Elevation;
    default: return AngleSource::Combined;
  }
}

std::uint64_t mobility_seed(std::uint64_t master, int trial) {
  return derive_seed(master, {stream::kMobility, static_cast<std::uint64_t>(trial)});
}

std::uint64_t channel_seed(std::uint64_t master, double snr_db, int trial) {
  return derive_seed(master, {stream::kChannel, std::bit_cast<std::uint64_t>(snr_db), static_cast<std::uint64_t>(trial)});
}

struct Stat {
  double mean;
  double std;
};

Stat mean_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace

std::vector<BmrRow> run_bmr_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto pipelines = spec.pipelines();
  const ReferenceConvention conv{spec.reference, Rotation::Clockwise};
  const auto length = static_cast<std::size_t>(spec.sequence_length);
  std::vector<KeySource> angle_sources, channel_sources;
  for (auto s : spec.sources) (is_angle_source(s) ? angle_sources : channel_sources).push_back(s);

  std::vector<BmrRow> rows;
  auto push_row = [&](std::string estimator, KeySource src, double snr, int n, const PipelineConfig& p,
                      const std::vector<double>& bmrs, std::size_t bits) {
    const auto st = mean_std(bmrs);
    rows.push_back({std::move(estimator), src, snr, n, p, spec.trials, bits, st.mean, st.std});
  };

  if (!angle_sources.empty()) {
    for (auto kind : spec.estimators) {
      const auto est = make_estimator(kind, spec);
      for (double snr : spec.snr_db) {
        const auto model = model_for(spec, snr);
        for (int n : spec.samples) {
          // bmr[t][source][pipeline]
          const std::size_t per_trial = angle_sources.size() * pipelines.size();
          std::vector<double> bmr(static_cast<std::size_t>(spec.trials) * per_trial);
          std::vector<std::size_t> bits(per_trial);
          parallel_for(static_cast<std::size_t>(spec.trials), spec.parallel, [&](std::size_t t) {
            const int trial = static_cast<int>(t);
            const auto common = random_aoa_sequence(length, mobility_seed(spec.seed, trial));
            const auto estimates =
                observe_sequence(common, *est, *est, conv, model, n, trial_seed(spec.seed, snr, n, trial));
            for (std::size_t s = 0; s < angle_sources.size(); ++s) {
              for (std::size_t p = 0; p < pipelines.size(); ++p) {
                const auto k = derive_key_pair(estimates, angle_of(angle_sources[s]), pipelines[p]);
                bmr[t * per_trial + s * pipelines.size() + p] = k.bmr;
                if (t == 0) bits[s * pipelines.size() + p] = k.alice.size();
              }
            }
          });
          for (std::size_t s = 0; s < angle_sources.size(); ++s) {
            for (std::size_t p = 0; p < pipelines.size(); ++p) {
              std::vector<double> v;
              for (std::size_t t = 0; t < static_cast<std::size_t>(spec.trials); ++t) {
                v.push_back(bmr[t * per_trial + s * pipelines.size() + p]);
              }
              push_row(std::string(to_string(kind)), angle_sources[s], snr, n, pipelines[p], v,
                       bits[s * pipelines.size() + p]);
            }
          }
        }
      }
    }
  }

  for (auto src : channel_sources) {
    for (double snr : spec.snr_db) {
      for (const auto& p : pipelines) {
        std::vector<double> v(static_cast<std::size_t>(spec.trials));
        std::size_t bits = 0;
        parallel_for(v.size(), spec.parallel, [&](std::size_t t) {
          const auto k = baseline_key_pair(baseline_of(src), snr, p, length,
                                           channel_seed(spec.seed, snr, static_cast<int>(t)));
          v[t] = k.bmr;
          if (t == 0) bits = k.alice.size();
        });
        push_row("channel", src, snr, 0, p, v, bits);
      }
    }
  }
  return rows;
}

KeygenRun finish_key_agreement(KeyPair keys, const ExperimentSpec& spec, int trial) {
  KeygenRun run;
  run.trial = trial;
  const std::size_t len = keys.alice.size();
  std::vector<std::uint8_t> bob = keys.bob.bits;
  if (spec.reconciliation) {
    // The true pre-reconciliation BMR stands in for the sampled estimate a deployment
    // would exchange.
    const std::size_t k1 = estimate_initial_block_size(std::min(keys.bmr, 0.5), len);
    const ReconciliationSession session{derive_seed(spec.seed, {stream::kPermutation, static_cast<std::uint64_t>(trial)}),
                                        k1, spec.passes};
    auto rec = reconcile(keys.alice.bits, keys.bob.bits, session);
    bob = std::move(rec.corrected);
    run.transcript = std::move(rec.transcript);
  }
  run.leakage = leakage_bits(run.transcript);
  run.bmr_post = bit_mismatch_rate(keys.alice.bits, bob);

  std::size_t out_len = spec.hash_output_bits > 0 ? static_cast<std::size_t>(spec.hash_output_bits)
                                                  : (len > run.leakage ? len - run.leakage : 0);
  if (out_len >= len) out_len = len > 0 ? len - 1 : 0;
  run.alice_final.provenance = run.bob_final.provenance = keys.alice.provenance;
  if (out_len >= 1) {
    const std::uint64_t index = spec.hash_index != 0
                                    ? spec.hash_index
                                    : derive_seed(spec.seed, {stream::kHash, static_cast<std::uint64_t>(trial)});
    const HashFunctionFamily family{len, out_len};
    run.transcript.records.push_back({TranscriptRecord::Kind::HashIndex, 0, 0, index});
    BitStream bob_stream = keys.bob;
    bob_stream.bits = bob;
    run.alice_final = privacy_amplify(keys.alice, family, index);
    run.bob_final = privacy_amplify(bob_stream, family, index);
    run.final_match = run.alice_final.bits == run.bob_final.bits;
  } else {
    run.exhausted = true;
  }
  run.keys = std::move(keys);
  return run;
}

std::vector<KeygenRun> run_keygen_demo(const ExperimentSpec& spec) {
  spec.validate();
  const auto cfg = spec.pipelines().front();
  const auto source = spec.sources.front();
  const double snr = spec.snr_db.front();
  const int n = spec.samples.front();
  const ReferenceConvention conv{spec.reference, Rotation::Clockwise};
  const auto length = static_cast<std::size_t>(spec.sequence_length);
  std::unique_ptr<AngleEstimator> est;
  if (is_angle_source(source)) est = make_estimator(spec.estimators.front(), spec);

  std::vector<KeygenRun> runs(static_cast<std::size_t>(spec.trials));
  parallel_for(runs.size(), spec.parallel, [&](std::size_t t) {
    const int trial = static_cast<int>(t);
    KeyPair keys;
    if (est) {
      const auto common = random_aoa_sequence(length, mobility_seed(spec.seed, trial));
      keys = generate_key_pair(common, *est, *est, conv, cfg, angle_of(source), snr, n,
                               trial_seed(spec.seed, snr, n, trial));
    } else {
      keys = baseline_key_pair(baseline_of(source), snr, cfg, length, channel_seed(spec.seed, snr, trial));
    }
    runs[t] = finish_key_agreement(std::move(keys), spec, trial);
  });
  return runs;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CsvTable to_table(const ExperimentSpec& spec, const std::vector<SpectrumRun>& runs) {
  CsvTable t;
  t.columns = {"experiment_id", "estimator", "snr_db", "samples", "azimuth_deg", "power", "power_normalized",
               "pfr", "pfr_median", "estimate_deg"};
  for (const auto& r : runs) {
    const double peak = *std::max_element(r.spectrum.power.begin(), r.spectrum.power.end());
    for (std::size_t i = 0; i < r.spectrum.grid.size(); ++i) {
      t.rows.push_back({spec.id, std::string(to_string(r.estimator)), format_number(r.snr_db),
                        std::to_string(r.samples), format_number(rad_to_deg(r.spectrum.grid[i])),
                        format_number(r.spectrum.power[i]),
                        format_number(peak > 0 ? r.spectrum.power[i] / peak : 0.0), format_number(r.pfr),
                        format_number(r.pfr_median), format_number(r.estimate_deg)});
    }
  }
  return t;
}

CsvTable to_table(const ExperimentSpec& spec, const std::vector<RmseRow>& rows) {
  CsvTable t;
  t.columns = {"experiment_id", "estimator", "angle", "snr_db", "samples", "trials",
               "rmse_deg", "mean_abs_error_deg", "pfr_median"};
  for (const auto& r : rows) {
    t.rows.push_back({spec.id, std::string(to_string(r.estimator)), r.angle, format_number(r.snr_db),
                      std::to_string(r.samples), std::to_string(r.trials), format_number(r.rmse_deg),
                      format_number(r.mean_abs_error_deg), format_number(r.pfr_median)});
  }
  return t;
}

CsvTable to_table(const ExperimentSpec& spec, const std::vector<BmrRow>& rows) {
  CsvTable t;
  t.columns = {"experiment_id", "estimator", "source", "snr_db", "samples", "n_quan", "n_encod", "n_comb",
               "trials", "key_bits", "bmr_mean", "bmr_std", "acceptable"};
  for (const auto& r : rows) {
    t.rows.push_back({spec.id, r.estimator, std::string(to_string(r.source)), format_number(r.snr_db),
                      std::to_string(r.samples), std::to_string(r.pipeline.n_quan),
                      std::to_string(r.pipeline.n_encod), std::to_string(r.pipeline.n_comb),
                      std::to_string(r.trials), std::to_string(r.key_bits), format_number(r.bmr_mean),
                      format_number(r.bmr_std), r.bmr_mean <= spec.bmr_threshold ? "1" : "0"});
  }
  return t;
}

CsvTable to_table(const ExperimentSpec& spec, const std::vector<KeygenRun>& runs) {
  CsvTable t;
  t.columns = {"experiment_id", "trial", "estimator", "source", "snr_db", "samples", "key_bits", "bmr_pre",
               "bmr_post", "leakage_bits", "final_key_bits", "alice_key", "bob_key", "alice_final", "bob_final",
               "final_match", "key_exhausted"};
  const std::string est =
      is_angle_source(spec.sources.front()) ? std::string(to_string(spec.estimators.front())) : "channel";
  for (const auto& r : runs) {
    t.rows.push_back({spec.id, std::to_string(r.trial), est, std::string(to_string(spec.sources.front())),
                      format_number(spec.snr_db.front()), std::to_string(spec.samples.front()),
                      std::to_string(r.keys.alice.size()), format_number(r.keys.bmr), format_number(r.bmr_post),
                      std::to_string(r.leakage), std::to_string(r.alice_final.size()), r.keys.alice.to_hex(),
                      r.keys.bob.to_hex(), r.alice_final.to_hex(), r.bob_final.to_hex(),
                      r.final_match ? "1" : "0", r.exhausted ? "1" : "0"});
  }
  return t;
}

std::string render_csv(const ExperimentSpec& spec, const CsvTable& table) {
  std::ostringstream os;
  std::istringstream resolved(dump_spec(spec));
  for (std::string line; std::getline(resolved, line);) os << "# " << line << '\n';
  if (spec.kind == ExperimentKind::BmrSweep) os << "# bmr_threshold: " << format_number(spec.bmr_threshold) << '\n';
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  emit(table.columns);
  for (const auto& r : table.rows) emit(r);
  return os.str();
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  ExperimentOutput out;
  std::ostringstream summary;
  switch (spec.kind) {
    case ExperimentKind::Spectrum: {
      const auto runs = run_spectrum(spec);
      out.table = to_table(spec, runs);
      for (const auto& r : runs) {
        summary << to_string(r.estimator) << " snr=" << format_number(r.snr_db) << " N=" << r.samples
                << " estimate=" << format_number(r.estimate_deg) << " pfr=" << format_number(r.pfr)
                << " pfr_median=" << format_number(r.pfr_median) << '\n';
      }
      break;
    }
    case ExperimentKind::RmseSweep: {
      const auto rows = run_rmse_sweep(spec);
      out.table = to_table(spec, rows);
      for (const auto& r : rows) {
        summary << to_string(r.estimator) << ' ' << r.angle << " snr=" << format_number(r.snr_db)
                << " N=" << r.samples << " rmse=" << format_number(r.rmse_deg) << '\n';
      }
      break;
    }
    case ExperimentKind::BmrSweep: {
      const auto rows = run_bmr_sweep(spec);
      out.table = to_table(spec, rows);
      for (const auto& r : rows) {
        summary << r.estimator << ' ' << to_string(r.source) << " snr=" << format_number(r.snr_db)
                << " n_quan=" << r.pipeline.n_quan << " n_encod=" << r.pipeline.n_encod
                << " n_comb=" << r.pipeline.n_comb << " bmr=" << format_number(r.bmr_mean) << '\n';
      }
      break;
    }
    case ExperimentKind::KeygenDemo: {
      const auto runs = run_keygen_demo(spec);
      out.table = to_table(spec, runs);
      std::ostringstream tr;
      for (const auto& r : runs) {
        tr << "# trial " << r.trial << '\n' << r.transcript.to_log();
        summary << "trial " << r.trial << '\n'
                << "  alice key     " << r.keys.alice.to_hex() << '\n'
                << "  bob key       " << r.keys.bob.to_hex() << '\n'
                << "  key bits      " << r.keys.alice.size() << '\n'
                << "  bmr pre/post  " << format_number(r.keys.bmr) << " / " << format_number(r.bmr_post) << '\n'
                << "  leaked bits   " << r.leakage << '\n'
                << "  alice final   " << r.alice_final.to_hex() << '\n'
                << "  bob final     " << r.bob_final.to_hex() << '\n'
                << "  final keys    "
                << (r.exhausted ? "none (leakage consumed the key)" : r.final_match ? "match" : "differ") << '\n';
      }
      out.transcript = tr.str();
      break;
    }
  }
  out.summary = summary.str();
  return out;
}

std::filesystem::path write_outputs(const ExperimentSpec& spec, const ExperimentOutput& out,
                                    const std::filesystem::path& out_root, double wall_seconds) {
  const auto dir = out_root / spec.id;
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + (dir / name).string());
  };
  write("results.csv", render_csv(spec, out.table));
  write("spec.resolved", dump_spec(spec));
  if (spec.kind == ExperimentKind::KeygenDemo) write("transcript.log", out.transcript);
  write("timing.log", "wall_seconds=" + format_number(wall_seconds) + "\n");
  return dir;
}

}  // namespace aoakey
