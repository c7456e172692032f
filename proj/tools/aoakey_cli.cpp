// Command-line front end: runs one experiment from a config file and writes its
// artifacts under <out>/<experiment-id>/.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoakey/experiment.hpp"
#include "aoakey/kernels.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out = "results";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> parallel;
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "YAML experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "Master seed (overrides experiment.seed)");
  cmd->add_option("--out", a.out, "Output root directory")->capture_default_str();
  cmd->add_option("--trials", a.trials, "Monte Carlo trials per grid point");
  cmd->add_option("--parallel", a.parallel, "Worker threads");
  cmd->add_option("--set", a.overrides, "Override a config key, e.g. --set pipeline.n_quan=8");
  cmd->add_flag("-q,--quiet", a.quiet, "Do not print the summary");
}

int run(aoakey::ExperimentKind kind, const CommonArgs& a) {
  std::vector<std::string> overrides = a.overrides;
  if (a.seed) overrides.push_back("experiment.seed=" + std::to_string(*a.seed));
  if (a.trials) overrides.push_back("experiment.trials=" + std::to_string(*a.trials));
  if (a.parallel) overrides.push_back("experiment.parallel=" + std::to_string(*a.parallel));

  const auto spec = a.config.empty() ? aoakey::load_spec("", kind, overrides)
                                     : aoakey::load_spec_file(a.config, kind, overrides);
  const auto start = std::chrono::steady_clock::now();
  const auto out = aoakey::run_experiment(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto dir = aoakey::write_outputs(spec, out, a.out, wall);
  if (!a.quiet) std::cout << out.summary;
  std::cout << "wrote " << dir.string() << " (seed " << spec.seed << ", "
            << aoakey::kernels::backend_name(aoakey::kernels::active_backend()) << " kernels, "
            << aoakey::format_number(wall) << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AoA-based secret key generation experiments"};
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* help;
    aoakey::ExperimentKind kind;
    CommonArgs args;
    CLI::App* app = nullptr;
  };
  std::vector<Cmd> cmds{
      {"spectrum", "Spatial spectra and peak-to-floor ratios", aoakey::ExperimentKind::Spectrum, {}},
      {"rmse", "RMSE of the AoA estimate over SNR and sample count", aoakey::ExperimentKind::RmseSweep, {}},
      {"bmr", "Bit mismatch rate of the key pipeline over SNR", aoakey::ExperimentKind::BmrSweep, {}},
      {"keygen", "One end-to-end key agreement with reconciliation and hashing", aoakey::ExperimentKind::KeygenDemo, {}},
  };
  for (auto& c : cmds) {
    c.app = app.add_subcommand(c.name, c.help);
    add_common(c.app, c.args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (auto& c : cmds) {
    if (!c.app->parsed()) continue;
    try {
      return run(c.kind, c.args);
    } catch (const std::invalid_argument& e) {
      std::cerr << "aoakey " << c.name << ": invalid configuration: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "aoakey " << c.name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}
