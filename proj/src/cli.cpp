#include "medsim/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "medsim/config.hpp"
#include "medsim/engine.hpp"
#include "medsim/errors.hpp"
#include "medsim/io.hpp"
#include "medsim/version.hpp"

namespace medsim {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_value, const char* env_value) {
  if (flag_value) return *flag_value;
  if (env_value != nullptr && *env_value != '\0') {
    std::uint64_t seed = 0;
    const char* end = env_value + std::string_view(env_value).size();
    const auto [ptr, ec] = std::from_chars(env_value, end, seed);
    if (ec != std::errc{} || ptr != end) {
      throw ConfigError("MEDSIM_SEED", "expected an unsigned integer, got '" +
                                           std::string(env_value) + "'");
    }
    return seed;
  }
  return 1;
}

int run_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const EstimatorId id = estimator_from_name(args.estimator);
    SeEstimate estimate;
    if (id == EstimatorId::g_exp) {
      estimate = g_exp(args.n, args.median);
    } else {
      if (!args.q1 || !args.q3) {
        throw std::invalid_argument(args.estimator + " needs --q1 and --q3");
      }
      switch (id) {
        case EstimatorId::g_norm:
          estimate = g_norm(args.n, args.median, *args.q1, *args.q3);
          break;
        case EstimatorId::g_lnorm:
          estimate = g_lnorm(args.n, args.median, *args.q1, *args.q3);
          break;
        default:
          estimate = g_cauchy(args.n, args.median, *args.q1, *args.q3);
          break;
      }
    }
    const nlohmann::json report = {{"estimator", args.estimator},
                                   {"n", args.n},
                                   {"median", args.median},
                                   {"se", estimate.se},
                                   {"assumed_family", family_name(estimate.assumed_family)},
                                   {"fitted_params", estimate.fitted_params}};
    out << report.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_simulate(const SimulateArgs& args, std::ostream& err) {
  const std::string started = iso8601_utc_now();
  try {
    const ParsedConfig parsed = parse_config(args.config_path);
    if (parsed.grid.size() != 1) {
      throw ConfigError("config", "simulate needs a single-cell config, got " +
                                      std::to_string(parsed.grid.size()) + " cells");
    }
    RngStream rng = RngStream::derive(args.seed, 0, 0);
    const MetaSample sample = sim_stats(parsed.grid.front(), rng);

    const fs::path out_path(args.out_path);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    auto out = open_out(out_path);
    write_meta_sample_csv(out, sample);

    RunManifest manifest{"simulate",           args.config_path,
                         out_path.string(),    args.seed,
                         kEngineVersion,       started,
                         iso8601_utc_now()};
    auto mout = open_out(out_path.string() + ".manifest.json");
    mout << manifest_json(manifest).dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_coverage(const CoverageArgs& args, std::ostream& err) {
  const std::string started = iso8601_utc_now();
  try {
    ParsedConfig parsed = parse_config(args.config_path);
    const int trials = args.trials.value_or(parsed.axes.trials);
    for (auto& cell : parsed.grid) cell.trials = trials;

    EngineOptions options;
    options.workers = args.workers;
    options.progress = args.progress;
    options.single_study = args.single_study;
    options.reml.max_iter = parsed.reml_max_iter;

    const CoverageReport report = metasims(parsed.grid, trials, args.seed, options);

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    {
      auto out = open_out(out_dir / "summary.csv");
      write_summary_csv(out, report);
    }
    {
      auto out = open_out(out_dir / "summary.json");
      out << summary_json(report).dump(2) << '\n';
    }
    {
      auto out = open_out(out_dir / "trials.csv");
      write_trial_log_csv(out, report);
    }
    RunManifest manifest{"coverage",        args.config_path, out_dir.string(), args.seed,
                         kEngineVersion,    started,          iso8601_utc_now()};
    auto mout = open_out(out_dir / "manifest.json");
    mout << manifest_json(manifest).dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace medsim
