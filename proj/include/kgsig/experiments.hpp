#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kgsig {

struct ExperimentConfig {
  // [grid]
  int num_points = 16;
  double length = 10.0;
  // [mass]
  double mass = 1.5;
  double m_lower = 1.0;
  double m_upper = 2.0;
  double delta = 0.05;
  // [quadrature]
  int mass_nodes = 200;
  double dt = 0.05;
  double t_initial = 200.0;
  double t_max = 51200.0;
  double tol = 1e-6;
  // [run]
  std::uint64_t seed = 1;
  int trials = 10;
  int state_trials = 20;
  double window = 8.0;
  double evolve_time = 100.0;
  int evolve_steps = 20;
  // [reconstruct]
  std::vector<double> deltas{0.05, 0.025};
  std::vector<std::pair<double, double>> intervals{{0.5, 2.5}, {0.9, 2.1}};
  // [masslimit]
  std::vector<double> masses{1.0, 0.5, 0.25, 0.125};
  // [wick]
  int wick_points = 4;

  /// Throws ConfigError on an invalid setting. Checks specific to `command` are
  /// applied when it is non-empty.
  void validate(const std::string& command = {}) const;
  nlohmann::ordered_json to_json() const;
};

/// Reads key = value pairs grouped in [sections] over `base`. Unknown keys and
/// unparsable values throw ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

const std::vector<std::string>& command_names();

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CommandResult {
  nlohmann::ordered_json results;
  std::vector<ResultTable> tables;
};

/// Runs one experiment. Throws ConfigError or ConvergenceError.
CommandResult execute(const std::string& command, const ExperimentConfig& config);

/// JSON text with every floating-point value printed to 17 significant digits.
std::string format_json(const nlohmann::ordered_json& value);
std::string format_csv(const ResultTable& table);

/// Validates, executes and writes <command>.json, <command>_<table>.csv and
/// <command>_timing.json into `out`. Returns 0, 2 (bad config) or 3 (no convergence).
int run(const std::string& command, const ExperimentConfig& config, const std::filesystem::path& out,
        bool quiet);

}  // namespace kgsig
