#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "medsim/pooling.hpp"
#include "medsim/rng.hpp"
#include "medsim/simulate.hpp"

namespace medsim {

struct TrialResult {
  int trial_index = 0;
  bool covered = false;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double effect_hat = 0.0;
  double true_effect = 0.0;
  PoolMethod method_used = PoolMethod::fixed_effect;
  bool fell_back = false;
  bool errored = false;     // data-dependent failure; excluded from coverage
  std::string error;
};

struct CoverageResult {
  int config_id = 0;
  int trials = 0;           // trials that produced an interval (requested - errors)
  int successes = 0;
  double coverage = 0.0;    // successes / trials, exactly
  double mean_ci_width = 0.0;
  int fallback_count = 0;
  int errors_count = 0;
};

struct EngineOptions {
  int workers = 1;
  bool progress = false;      // per-cell completion lines on stderr
  bool single_study = false;  // one study per trial, no pooling
  RemlOptions reml;
};

// One simulated meta-analysis: data, per-study effects, pooling per the
// config, and a z interval checked against the config's true effect.
// Data-dependent failures (an estimator or pooling rejecting a degenerate
// dataset) come back with errored set rather than thrown; the config itself
// must already be valid.
TrialResult metatrial(const SimConfig& config, RngStream& rng, const RemlOptions& reml = {});

// Single-study variant: K is forced to 1 and the interval comes straight
// from that study's (y, v); pooling never runs.
TrialResult singletrial(const SimConfig& config, RngStream& rng);

// Run `trials` independent trials of one config cell, each on its own
// stream derived from (master_seed, config_id, trial index), and aggregate.
// Throws if every trial errored, since coverage would be undefined.
CoverageResult metasim(const SimConfig& config, int trials, std::uint64_t master_seed,
                       int config_id = 0, const EngineOptions& options = {});

struct CoverageReport {
  std::vector<SimConfig> grid;
  std::vector<CoverageResult> results;             // one per cell, in grid order
  std::vector<std::vector<TrialResult>> trial_logs;  // [cell][trial], trial order
  std::uint64_t master_seed = 0;
  int trials = 0;  // requested per cell
  bool single_study = false;
  std::string engine_version;
};

// Run the whole grid.  Work is scheduled across options.workers threads at
// (cell, trial) granularity, but every result lands in a preassigned slot
// and aggregation runs in a fixed order, so the report is identical for any
// worker count.  All cells are validated before any trial runs.
CoverageReport metasims(std::span<const SimConfig> grid, int trials,
                        std::uint64_t master_seed, const EngineOptions& options = {});

}  // namespace medsim
