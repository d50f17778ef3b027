#include "medsim/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>

namespace medsim {

std::string format_g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_trial_log_csv(std::ostream& out, const CoverageReport& report) {
  out << "config_id,trial,covered,ci_low,ci_high,effect_hat,method,fell_back\n";
  for (std::size_t cell = 0; cell < report.trial_logs.size(); ++cell) {
    for (const auto& tr : report.trial_logs[cell]) {
      out << cell << ',' << tr.trial_index << ',' << (tr.covered ? 1 : 0) << ',';
      if (tr.errored) {
        out << ",,,error,0\n";
      } else {
        out << format_g9(tr.ci_low) << ',' << format_g9(tr.ci_high) << ','
            << format_g9(tr.effect_hat) << ',' << pool_method_name(tr.method_used) << ','
            << (tr.fell_back ? 1 : 0) << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const CoverageReport& report) {
  out << "config_id,family,base_param1,base_param2,rho,tau2,K,n_min,n_max,"
         "alloc_beta1,alloc_beta2,alpha,estimator,pooling,trials,"
         "coverage,mean_ci_width,fallback_count,errors_count,seed\n";
  for (std::size_t cell = 0; cell < report.results.size(); ++cell) {
    const auto& cfg = report.grid[cell];
    const auto& res = report.results[cell];
    out << res.config_id << ',' << family_name(cfg.family) << ','
        << format_g9(cfg.base_params[0]) << ','
        << (cfg.base_params.size() > 1 ? format_g9(cfg.base_params[1]) : "") << ','
        << format_g9(cfg.rho) << ',' << format_g9(cfg.tau2) << ',' << cfg.studies << ','
        << cfg.n_min << ',' << cfg.n_max << ',' << format_g9(cfg.alloc_shape.beta1) << ','
        << format_g9(cfg.alloc_shape.beta2) << ',' << format_g9(cfg.alpha) << ','
        << estimator_name(cfg.estimator) << ',' << pooling_name(cfg.pooling) << ','
        << report.trials << ',' << format_g9(res.coverage) << ','
        << format_g9(res.mean_ci_width) << ',' << res.fallback_count << ','
        << res.errors_count << ',' << report.master_seed << '\n';
  }
}

nlohmann::json summary_json(const CoverageReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t cell = 0; cell < report.results.size(); ++cell) {
    const auto& cfg = report.grid[cell];
    const auto& res = report.results[cell];
    cells.push_back({{"config_id", res.config_id},
                     {"family", family_name(cfg.family)},
                     {"base_params", cfg.base_params},
                     {"rho", cfg.rho},
                     {"tau2", cfg.tau2},
                     {"K", cfg.studies},
                     {"n_min", cfg.n_min},
                     {"n_max", cfg.n_max},
                     {"alloc_shape", {cfg.alloc_shape.beta1, cfg.alloc_shape.beta2}},
                     {"alpha", cfg.alpha},
                     {"estimator", estimator_name(cfg.estimator)},
                     {"pooling", pooling_name(cfg.pooling)},
                     {"trials", report.trials},
                     {"interval_trials", res.trials},
                     {"successes", res.successes},
                     {"coverage", res.coverage},
                     {"mean_ci_width", res.mean_ci_width},
                     {"fallback_count", res.fallback_count},
                     {"errors_count", res.errors_count}});
  }
  return nlohmann::json{{"engine_version", report.engine_version},
                        {"master_seed", report.master_seed},
                        {"trials", report.trials},
                        {"single_study", report.single_study},
                        {"cells", cells}};
}

nlohmann::json manifest_json(const RunManifest& manifest) {
  return nlohmann::json{{"command", manifest.command},
                        {"config_path", manifest.config_path},
                        {"out_dir", manifest.out_dir},
                        {"master_seed", manifest.master_seed},
                        {"engine_version", manifest.engine_version},
                        {"started_at", manifest.started_at},
                        {"finished_at", manifest.finished_at}};
}

}  // namespace medsim
