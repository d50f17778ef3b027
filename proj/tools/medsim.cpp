#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "medsim/cli.hpp"
#include "medsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Coverage simulation for median-based meta-analysis"};
  app.set_version_flag("--version", medsim::kEngineVersion);
  app.require_subcommand(1);

  medsim::EstimateArgs estimate;
  auto* cmd_estimate =
      app.add_subcommand("estimate", "Standard error of one reported sample median");
  cmd_estimate->add_option("--estimator", estimate.estimator,
                           "g_exp, g_norm, g_lnorm, or g_cauchy")
      ->capture_default_str();
  cmd_estimate->add_option("--n", estimate.n, "sample size")->required();
  cmd_estimate->add_option("--median", estimate.median, "sample median")->required();
  cmd_estimate->add_option("--q1", estimate.q1, "first quartile");
  cmd_estimate->add_option("--q3", estimate.q3, "third quartile");

  medsim::SimulateArgs simulate;
  std::optional<std::uint64_t> simulate_seed;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Draw one meta-analytic dataset as CSV");
  cmd_simulate->add_option("--config", simulate.config_path, "JSON config (single cell)")
      ->required();
  cmd_simulate->add_option("--out", simulate.out_path, "output CSV path")->required();
  cmd_simulate->add_option("--seed", simulate_seed, "master seed");

  medsim::CoverageArgs coverage;
  std::optional<std::uint64_t> coverage_seed;
  auto* cmd_coverage =
      app.add_subcommand("coverage", "Coverage experiment over a config grid");
  cmd_coverage->add_option("--config", coverage.config_path, "JSON config")->required();
  cmd_coverage->add_option("--out", coverage.out_dir, "output directory")->required();
  cmd_coverage->add_option("--trials", coverage.trials, "trials per cell (overrides config)");
  cmd_coverage->add_option("--seed", coverage_seed, "master seed");
  cmd_coverage->add_option("--workers", coverage.workers, "worker threads")
      ->capture_default_str();
  cmd_coverage->add_flag("--progress,!--no-progress", coverage.progress,
                         "per-cell progress on stderr");
  cmd_coverage->add_flag("--single-study", coverage.single_study,
                         "one study per trial, interval straight from (y, v)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_estimate->parsed()) {
      return medsim::run_estimate(estimate, std::cout, std::cerr);
    }
    if (cmd_simulate->parsed()) {
      simulate.seed = medsim::resolve_seed(simulate_seed, std::getenv("MEDSIM_SEED"));
      return medsim::run_simulate(simulate, std::cerr);
    }
    coverage.seed = medsim::resolve_seed(coverage_seed, std::getenv("MEDSIM_SEED"));
    return medsim::run_coverage(coverage, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
