#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsv/data/config.hpp"

namespace fsv::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitBudget = 5;  // budget hit; checkpoint written

// Settings that live outside the model itself.
struct RunSettings {
  int chains = 1;
  int threads = 1;
  double time_budget_s = 0.0;
  CovarMode covar_mode = CovarMode::median_sigma;
  Interweaving interweaving = Interweaving::standard;
};

// Key-value-with-sections config file ([model] / [prior] / [run]); flags
// override file values, file values override defaults.
struct FileConfig {
  ModelConfig model;
  PriorConfig prior;
  RunSettings run;
};
FileConfig parse_config_file(const std::string& path);

struct FitArgs {
  std::string input_csv;
  std::string out_dir;
  std::string config_file;
  bool resume = false;
  std::optional<std::uint64_t> seed;
  std::optional<long> draws, burnin, thin;
  std::optional<int> factors, chains, threads;
  std::optional<std::vector<double>> quantiles;
  std::optional<std::string> ar_sign, covar_mode, interweaving;
  std::optional<double> time_budget_s;
};
int cmd_fit(const FitArgs& args);

struct SimulateArgs {
  std::string fixture;     // one of the named fixtures, or empty when
  std::string truth_file;  // a truth file drives the simulation
  std::string out_dir;
  std::uint64_t seed = 0;  // 0 keeps the fixture's own seed
};
int cmd_simulate(const SimulateArgs& args);

struct RiskArgs {
  std::string store_dir;
  std::string out_dir;
  std::string query_file;  // optional JSON query spec
  std::vector<double> levels;  // empty -> {0.01, 0.05, 0.95, 0.99}
  std::optional<int> single_target;       // conditioning series preset
  std::optional<std::vector<int>> cond_set;  // region preset
  std::optional<std::string> covar_mode;
};
int cmd_risk(const RiskArgs& args);

struct ReportArgs {
  std::string store_dir;
  std::string out_dir;
  std::vector<std::string> dates;  // correlation heatmap dates; empty -> spread
};
int cmd_report(const ReportArgs& args);

}  // namespace fsv::cli
