#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace medsim {

// Seed precedence: explicit flag, then the MEDSIM_SEED environment value,
// then 1.  A malformed environment value is an error, not a silent default.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_value, const char* env_value);

struct EstimateArgs {
  std::string estimator = "g_exp";
  int n = 0;
  double median = 0.0;
  std::optional<double> q1;
  std::optional<double> q3;
};

// Prints the standard error and fitted parameters as JSON on `out`.
int run_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;  // dataset CSV; the manifest lands next to it
};

// Simulates one dataset from a single-cell config and writes it as CSV.
int run_simulate(const SimulateArgs& args, std::ostream& err);

struct CoverageArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::optional<int> trials;  // overrides the config's trial count
  int workers = 1;
  bool progress = false;
  bool single_study = false;
};

// Runs the full coverage grid and writes summary.csv, summary.json,
// trials.csv, and manifest.json into out_dir.
int run_coverage(const CoverageArgs& args, std::ostream& err);

}  // namespace medsim
