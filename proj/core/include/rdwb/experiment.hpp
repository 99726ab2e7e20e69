#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rdwb/report.hpp"

namespace rdwb {

inline constexpr const char* kArtifactVersion = "rdwb 0.1.0";

// Exit-code contract shared by the CLI and run_experiment.
enum ExitCode : int { kExitPass = 0, kExitConfig = 1, kExitProperty = 2, kExitResource = 3 };

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"ball",     "star-verify", "calibrate",
                                              "decomp-count", "rd-profile", "opnorm",
                                              "tmap-verify",  "trace"};
  return kinds;
}

/// One experiment, read from a JSON file. Unset integers are -1 and get
/// per-kind defaults or a ConfigError from validate().
struct ExperimentConfig {
  std::string kind;
  std::string group;
  std::string order;                    // generator order, "" for the default
  std::string peripherals = "factors";

  int radius = -1;
  int sigma = -1, delta = -1;
  int sigma_max = -1, delta_max = -1;
  int p_max = -1, r1_max = -1, r2_max = -1, r_max = -1;
  std::vector<int> R_values;            // opnorm
  std::string mode = "canonical";       // star-verify geodesics
  std::string function = "sphere:1";    // opnorm: "sphere:r" or "ball:r"
  std::string tmap = "z2";              // z2 | polygrowth | star
  int geometry_radius = -1;             // tmap star / trace override
  int samples = 50;                     // trace
  std::vector<std::vector<double>> peripheral_bounds;  // trace overrides

  std::uint64_t seed = 0;
  std::size_t budget = kDefaultBallBudget;
  std::size_t restarts = 50;
  double tolerance = -1.0;              // module default when negative
  std::size_t max_iterations = 0;       // module default when 0

  std::string json_out, csv_out;
  std::string cache_dir;

  static ExperimentConfig from_json(const Json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  // Throws ConfigError naming the first offending field.
  void validate() const;
  Json echo() const;
};

struct RunOptions {
  std::filesystem::path cache_dir;      // empty: no ball cache
  int workers = 0;
  bool timing = false;
};

struct ExperimentReport {
  Json document;           // config echo, version, optional timing, payload
  std::optional<CsvTable> csv;
  int exit_code = kExitPass;
  std::string summary;     // one line for the terminal
};

// Resource and structural errors propagate; callers map them with exit_code_for.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Writes the JSON and, when present, the CSV table.
void persist_report(const ExperimentReport& report, const std::filesystem::path& json_path,
                    const std::filesystem::path& csv_path);

int exit_code_for(const std::exception& e);

}  // namespace rdwb
