#include "medsim/engine.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "medsim/errors.hpp"
#include "medsim/version.hpp"

namespace medsim {

namespace {

TrialResult run_trial(const SimConfig& config, RngStream& rng, bool single_study,
                      const RemlOptions& reml) {
  return single_study ? singletrial(config, rng) : metatrial(config, rng, reml);
}

void validate_cell(const SimConfig& config, bool single_study) {
  config.validate();
  if (!single_study && config.pooling != Pooling::fixed_effect && config.studies < 2) {
    throw ConfigError("K", "random-effects pooling needs at least two studies");
  }
}

CoverageResult aggregate(const std::vector<TrialResult>& trials, int config_id) {
  CoverageResult res;
  res.config_id = config_id;
  double width_sum = 0.0;
  for (const auto& tr : trials) {
    if (tr.errored) {
      ++res.errors_count;
      continue;
    }
    ++res.trials;
    if (tr.covered) ++res.successes;
    if (tr.fell_back) ++res.fallback_count;
    width_sum += tr.ci_high - tr.ci_low;
  }
  if (res.trials == 0) {
    throw std::runtime_error("coverage undefined: every trial of config " +
                             std::to_string(config_id) + " errored (" +
                             (trials.empty() ? std::string("no trials") : trials.front().error) +
                             ")");
  }
  res.coverage = static_cast<double>(res.successes) / static_cast<double>(res.trials);
  res.mean_ci_width = width_sum / static_cast<double>(res.trials);
  return res;
}

// Run fn(0..jobs-1), claiming indices through a shared counter.  The first
// exception (there should be none: trial errors are captured in results) is
// rethrown after all threads join.
void parallel_for(int jobs, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, jobs));
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

TrialResult metatrial(const SimConfig& config, RngStream& rng, const RemlOptions& reml) {
  TrialResult tr;
  tr.true_effect = config.true_effect();
  try {
    const MetaSample data = sim_stats(config, rng);
    std::vector<StudyEffect> effects;
    effects.reserve(data.studies.size());
    for (const auto& study : data.studies) {
      effects.push_back(
          study_effect(study.control_stats, study.intervention_stats, config.estimator));
    }
    PooledEstimate pooled;
    switch (config.pooling) {
      case Pooling::fixed_effect:
        pooled = pool_fixed(effects);
        apply_ci(pooled, config.alpha);
        break;
      case Pooling::dersimonian_laird:
        pooled = pool_dl(effects);
        apply_ci(pooled, config.alpha);
        break;
      case Pooling::reml_with_fe_fallback:
        pooled = pool_reml(effects, config.alpha, reml);
        break;
    }
    tr.effect_hat = pooled.effect;
    tr.ci_low = pooled.ci_low;
    tr.ci_high = pooled.ci_high;
    tr.method_used = pooled.method_used;
    tr.fell_back = pooled.fell_back;
    tr.covered = tr.ci_low <= tr.true_effect && tr.true_effect <= tr.ci_high;
  } catch (const std::exception& e) {
    tr.errored = true;
    tr.error = e.what();
    tr.covered = false;
  }
  return tr;
}

TrialResult singletrial(const SimConfig& config, RngStream& rng) {
  SimConfig one = config;
  one.studies = 1;
  TrialResult tr;
  tr.true_effect = one.true_effect();
  try {
    const MetaSample data = sim_stats(one, rng);
    const StudyEffect e = study_effect(data.studies.front().control_stats,
                                       data.studies.front().intervention_stats,
                                       one.estimator);
    tr.effect_hat = e.y;
    const auto [low, high] = confidence_interval(e.y, e.v, one.alpha);
    tr.ci_low = low;
    tr.ci_high = high;
    tr.method_used = PoolMethod::fixed_effect;
    tr.covered = tr.ci_low <= tr.true_effect && tr.true_effect <= tr.ci_high;
  } catch (const std::exception& e) {
    tr.errored = true;
    tr.error = e.what();
    tr.covered = false;
  }
  return tr;
}

CoverageResult metasim(const SimConfig& config, int trials, std::uint64_t master_seed,
                       int config_id, const EngineOptions& options) {
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  validate_cell(config, options.single_study);
  std::vector<TrialResult> log(static_cast<std::size_t>(trials));
  parallel_for(trials, options.workers, [&](int trial) {
    RngStream rng = RngStream::derive(master_seed, static_cast<std::uint64_t>(config_id),
                                      static_cast<std::uint64_t>(trial));
    TrialResult tr = run_trial(config, rng, options.single_study, options.reml);
    tr.trial_index = trial;
    log[static_cast<std::size_t>(trial)] = tr;
  });
  if (options.progress) {
    std::cerr << "config " << config_id << ": " << trials << " trials done\n";
  }
  return aggregate(log, config_id);
}

CoverageReport metasims(std::span<const SimConfig> grid, int trials,
                        std::uint64_t master_seed, const EngineOptions& options) {
  if (grid.empty()) throw ConfigError("grid", "needs at least one config cell");
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  for (const auto& cell : grid) validate_cell(cell, options.single_study);

  CoverageReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.master_seed = master_seed;
  report.trials = trials;
  report.single_study = options.single_study;
  report.engine_version = kEngineVersion;
  report.trial_logs.assign(grid.size(), std::vector<TrialResult>(
                                            static_cast<std::size_t>(trials)));

  const int cells = static_cast<int>(grid.size());
  const int jobs = cells * trials;
  std::vector<std::atomic<int>> remaining(static_cast<std::size_t>(cells));
  for (auto& r : remaining) r.store(trials);
  std::mutex progress_mutex;

  parallel_for(jobs, options.workers, [&](int job) {
    const int cell = job / trials;
    const int trial = job % trials;
    RngStream rng = RngStream::derive(master_seed, static_cast<std::uint64_t>(cell),
                                      static_cast<std::uint64_t>(trial));
    TrialResult tr = run_trial(grid[static_cast<std::size_t>(cell)], rng,
                               options.single_study, options.reml);
    tr.trial_index = trial;
    report.trial_logs[static_cast<std::size_t>(cell)][static_cast<std::size_t>(trial)] = tr;
    if (remaining[static_cast<std::size_t>(cell)].fetch_sub(1) == 1 && options.progress) {
      const std::lock_guard<std::mutex> lock(progress_mutex);
      std::cerr << "config " << cell + 1 << "/" << cells << ": " << trials
                << " trials done\n";
    }
  });

  report.results.reserve(grid.size());
  for (int cell = 0; cell < cells; ++cell) {
    report.results.push_back(
        aggregate(report.trial_logs[static_cast<std::size_t>(cell)], cell));
  }
  return report;
}

}  // namespace medsim
