// Command-line front end: one subcommand per experiment kind, plus `run`
// which takes the kind from the config file.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rdwb/error.hpp"
#include "rdwb/experiment.hpp"
#include "rdwb/parallel.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string csv;
  std::string cache_dir;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", f.out, "JSON report path (default: config output.json, else stdout)");
  cmd->add_option("--csv", f.csv, "CSV table path (default: next to the JSON report)");
  cmd->add_option("--workers", f.workers, "worker thread cap (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cache-dir", f.cache_dir, "ball cache directory (env RDWB_CACHE_DIR)");
  cmd->add_option("--seed", f.seed, "root seed, overrides the config");
  cmd->add_flag("--timing", f.timing, "include wall-clock timing in the report");
}

int run(const std::string& kind, const Flags& f) {
  rdwb::ExperimentConfig config = rdwb::ExperimentConfig::load(f.config);
  if (kind != "run") {
    if (!config.kind.empty() && config.kind != kind) {
      throw rdwb::ConfigError("kind", "config says '" + config.kind + "' but the subcommand is '" +
                                          kind + "'");
    }
    config.kind = kind;
  }
  if (f.seed) config.seed = *f.seed;

  rdwb::RunOptions options;
  options.workers = f.workers;
  options.timing = f.timing;
  // precedence: flag, environment, config
  if (!f.cache_dir.empty()) {
    options.cache_dir = f.cache_dir;
  } else if (const char* env = std::getenv("RDWB_CACHE_DIR"); env && *env) {
    options.cache_dir = env;
  } else {
    options.cache_dir = config.cache_dir;
  }
  rdwb::worker_limit().store(f.workers);

  const rdwb::ExperimentReport report = rdwb::run_experiment(config, options);

  fs::path json_path = !f.out.empty() ? fs::path(f.out) : fs::path(config.json_out);
  fs::path csv_path = !f.csv.empty() ? fs::path(f.csv) : fs::path(config.csv_out);
  if (csv_path.empty() && !json_path.empty() && report.csv) {
    csv_path = json_path;
    csv_path.replace_extension(".csv");
  }
  if (json_path.empty()) {
    std::cout << rdwb::dump(report.document);
    if (report.csv && !csv_path.empty()) rdwb::write_file(csv_path, report.csv->str());
  } else {
    rdwb::persist_report(report, json_path, csv_path);
  }
  std::cerr << report.summary << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rapid-decay workbench"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    add_flags(cmd, flags);
    cmd->callback([&chosen, name] { chosen = name; });
  };
  add("run", "run the experiment named by the config's kind");
  add("ball", "enumerate (and cache) a ball");
  add("star-verify", "check property (*) on all triangles in a ball");
  add("calibrate", "search the least (sigma, delta) for which (*) holds");
  add("decomp-count", "fit the central-decomposition count envelope");
  add("rd-profile", "bracket sphere convolution constants");
  add("opnorm", "operator-norm lower bounds of a characteristic function");
  add("tmap-verify", "verify conditions (i)-(iii) of a triangle-center map");
  add("trace", "trace the convolution-bound chain on seeded sphere pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rdwb::kExitConfig;
  }

  try {
    return run(chosen, flags);
  } catch (const rdwb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rdwb::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rdwb::exit_code_for(e);
  }
}
