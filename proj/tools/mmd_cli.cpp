// mmd: run, validate or describe experiments from JSON configs.

#include "mmd/config.hpp"
#include "mmd/results.hpp"
#include "mmd/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

int load(const std::string& path, mmd::ExperimentConfig& out) {
  try {
    out = mmd::load_config(path);
    return 0;
  } catch (const mmd::Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return mmd::exit_code_for(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric mean dimension and entropy estimators for symbolic systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> threads;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run an experiment and write results.json plus a CSV");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_dir, "Output directory, overriding output.dir");

  auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  app.add_subcommand("version", "Print the library and schema versions");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("version")) {
    std::cout << "mmd " << mmd::library_version() << " (config schema " << mmd::kConfigSchemaVersion
              << ", results schema " << mmd::kResultsSchemaVersion << ")\n";
    return 0;
  }

  mmd::ExperimentConfig config;
  if (int rc = load(config_path, config)) return rc;

  if (app.got_subcommand("validate")) {
    std::cout << "ok " << config.name << " (" << to_string(config.command) << ", digest " << config.digest << ")\n";
    return 0;
  }

  if (threads) config.settings.threads = *threads;
  if (!out_dir.empty()) config.output.dir = out_dir;

  const mmd::RunOutcome outcome = mmd::run_experiment(config);
  for (const auto& f : outcome.files) std::cout << f << "\n";
  if (!outcome.message.empty()) std::cerr << outcome.message << (outcome.message.back() == '\n' ? "" : "\n");
  std::fprintf(stderr, "wall time %.3f s\n", outcome.wall_seconds);
  return outcome.exit_code;
}
