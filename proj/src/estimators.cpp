#include "medsim/estimators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "medsim/normal.hpp"

namespace medsim {

namespace {

void check_n(int n, const char* fn) {
  if (n < 2) {
    throw std::domain_error(std::string(fn) + ": n must be at least 2, got " +
                            std::to_string(n));
  }
}

void check_finite(double x, const char* fn, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(fn) + ": " + what + " must be finite");
  }
}

void check_spread(double q1, double q3, const char* fn) {
  check_finite(q1, fn, "q1");
  check_finite(q3, fn, "q3");
  if (!(q1 < q3)) {
    throw std::domain_error(std::string(fn) + ": requires q1 < q3 (degenerate spread)");
  }
}

SeEstimate from_fit(int n, double median, DistributionSpec fitted) {
  const double f = density_at(fitted, median);
  const double se = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)) * f);
  return SeEstimate{se, fitted.family, std::move(fitted.params)};
}

}  // namespace

std::string_view estimator_name(EstimatorId id) {
  switch (id) {
    case EstimatorId::g_exp: return "g_exp";
    case EstimatorId::g_norm: return "g_norm";
    case EstimatorId::g_lnorm: return "g_lnorm";
    case EstimatorId::g_cauchy: return "g_cauchy";
  }
  throw std::invalid_argument("estimator_name: unknown estimator tag");
}

EstimatorId estimator_from_name(std::string_view name) {
  if (name == "g_exp") return EstimatorId::g_exp;
  if (name == "g_norm") return EstimatorId::g_norm;
  if (name == "g_lnorm") return EstimatorId::g_lnorm;
  if (name == "g_cauchy") return EstimatorId::g_cauchy;
  throw std::invalid_argument("estimator_from_name: unknown estimator '" +
                              std::string(name) + "'");
}

SeEstimate g_exp(int n, double median) {
  check_n(n, "g_exp");
  check_finite(median, "g_exp", "median");
  if (!(median > 0.0)) {
    throw std::domain_error("g_exp: median must be positive");
  }
  const double rate = std::numbers::ln2 / median;
  return from_fit(n, median, DistributionSpec::exponential(rate));
}

SeEstimate g_norm(int n, double median, double q1, double q3) {
  check_n(n, "g_norm");
  check_finite(median, "g_norm", "median");
  check_spread(q1, q3, "g_norm");
  const double sd = (q3 - q1) / (2.0 * normal_quantile(0.75));
  return from_fit(n, median, DistributionSpec::normal(median, sd));
}

SeEstimate g_lnorm(int n, double median, double q1, double q3) {
  check_n(n, "g_lnorm");
  check_finite(median, "g_lnorm", "median");
  if (!(median > 0.0) || !(q1 > 0.0) || !(q3 > 0.0)) {
    throw std::domain_error("g_lnorm: median and quartiles must be positive");
  }
  check_spread(q1, q3, "g_lnorm");
  const double log_sd = (std::log(q3) - std::log(q1)) / (2.0 * normal_quantile(0.75));
  return from_fit(n, median, DistributionSpec::lognormal(std::log(median), log_sd));
}

SeEstimate g_cauchy(int n, double median, double q1, double q3) {
  check_n(n, "g_cauchy");
  check_finite(median, "g_cauchy", "median");
  check_spread(q1, q3, "g_cauchy");
  const double scale = (q3 - q1) / 2.0;
  return from_fit(n, median, DistributionSpec::cauchy(median, scale));
}

SeEstimate estimate_se(EstimatorId id, const SummaryStats& stats) {
  stats.validate();
  switch (id) {
    case EstimatorId::g_exp: return g_exp(stats.n, stats.median);
    case EstimatorId::g_norm: return g_norm(stats.n, stats.median, stats.q1, stats.q3);
    case EstimatorId::g_lnorm: return g_lnorm(stats.n, stats.median, stats.q1, stats.q3);
    case EstimatorId::g_cauchy: return g_cauchy(stats.n, stats.median, stats.q1, stats.q3);
  }
  throw std::invalid_argument("estimate_se: unknown estimator tag");
}

}  // namespace medsim
