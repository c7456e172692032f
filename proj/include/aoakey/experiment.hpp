#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "aoakey/experiment_spec.hpp"
#include "aoakey/keygen.hpp"
#include "aoakey/reconciliation.hpp"

namespace aoakey {

/// Builds the estimator an experiment uses for `kind`.
std::unique_ptr<AngleEstimator> make_estimator(EstimatorKind kind, const ExperimentSpec& spec);

/// Seed of Monte Carlo trial `trial` at one grid point. Independent of thread count and
/// of the other grid points present in the spec.
std::uint64_t trial_seed(std::uint64_t master, double snr_db, int samples, int trial) noexcept;

/// Runs fn(0..count) on up to `threads` workers. Exceptions are rethrown on the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct SpectrumRun {
  EstimatorKind estimator = EstimatorKind::Music;
  double snr_db = 0.0;
  int samples = 0;
  SpatialSpectrum spectrum;  // first trial
  double pfr = 0.0;          // of `spectrum`
  double pfr_median = 0.0;   // over all trials
  double estimate_deg = 0.0;
};

struct RmseRow {
  EstimatorKind estimator = EstimatorKind::Music;
  std::string angle;
  double snr_db = 0.0;
  int samples = 0;
  int trials = 0;
  double rmse_deg = 0.0;
  double mean_abs_error_deg = 0.0;
  double pfr_median = 0.0;  // azimuth rows only, NaN otherwise
};

struct BmrRow {
  std::string estimator;  // "music", "xsbs", or "channel" for baseline sources
  KeySource source = KeySource::Combined;
  double snr_db = 0.0;
  int samples = 0;
  PipelineConfig pipeline;
  int trials = 0;
  std::size_t key_bits = 0;
  double bmr_mean = 0.0;
  double bmr_std = 0.0;
};

struct KeygenRun {
  int trial = 0;
  KeyPair keys;
  double bmr_post = 0.0;
  std::size_t leakage = 0;
  Transcript transcript;
  BitStream alice_final;
  BitStream bob_final;
  bool final_match = false;
  // Leakage consumed the whole key under the leakage-subtraction rule, so no final key exists.
  bool exhausted = false;
};

std::vector<SpectrumRun> run_spectrum(const ExperimentSpec& spec);
std::vector<RmseRow> run_rmse_sweep(const ExperimentSpec& spec);
std::vector<BmrRow> run_bmr_sweep(const ExperimentSpec& spec);
std::vector<KeygenRun> run_keygen_demo(const ExperimentSpec& spec);

/// Steps 5 and 6 on an existing key pair: optional reconciliation, then Toeplitz hashing
/// to (key length - leaked bits) unless an explicit output length is configured.
KeygenRun finish_key_agreement(KeyPair keys, const ExperimentSpec& spec, int trial);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable to_table(const ExperimentSpec& spec, const std::vector<SpectrumRun>& runs);
CsvTable to_table(const ExperimentSpec& spec, const std::vector<RmseRow>& rows);
CsvTable to_table(const ExperimentSpec& spec, const std::vector<BmrRow>& rows);
CsvTable to_table(const ExperimentSpec& spec, const std::vector<KeygenRun>& runs);

/// '#'-prefixed resolved spec, then the header and rows.
std::string render_csv(const ExperimentSpec& spec, const CsvTable& table);

std::string format_number(double v);

struct ExperimentOutput {
  CsvTable table;
  std::string transcript;  // keygen only
  std::string summary;     // human-readable, for stdout
};

ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// Writes results.csv, spec.resolved and (keygen) transcript.log under out/<id>/, plus
/// timing.log with the wall time, which is kept out of results.csv so reruns compare equal.
std::filesystem::path write_outputs(const ExperimentSpec& spec, const ExperimentOutput& out,
                                    const std::filesystem::path& out_root, double wall_seconds);

}  // namespace aoakey
