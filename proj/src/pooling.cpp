#include "medsim/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "medsim/normal.hpp"

namespace medsim {

namespace {

void check_nonempty(std::span<const StudyEffect> effects, const char* fn) {
  if (effects.empty()) {
    throw std::invalid_argument(std::string(fn) + ": needs at least one study");
  }
  for (const auto& e : effects) {
    if (!std::isfinite(e.y) || !std::isfinite(e.v) || !(e.v > 0.0)) {
      throw std::domain_error(std::string(fn) +
                              ": every study needs finite y and positive finite v");
    }
  }
}

void check_two(std::span<const StudyEffect> effects, const char* fn) {
  check_nonempty(effects, fn);
  if (effects.size() < 2) {
    throw std::invalid_argument(std::string(fn) + ": needs at least two studies");
  }
}

// Inverse-variance pooling at a given between-study variance.
std::pair<double, double> weighted_pool(std::span<const StudyEffect> effects, double tau2) {
  double wsum = 0.0, wysum = 0.0;
  for (const auto& e : effects) {
    const double w = 1.0 / (e.v + tau2);
    wsum += w;
    wysum += w * e.y;
  }
  return {wysum / wsum, 1.0 / wsum};
}

}  // namespace

std::string_view pool_method_name(PoolMethod method) {
  switch (method) {
    case PoolMethod::fixed_effect: return "fe";
    case PoolMethod::dersimonian_laird: return "dl";
    case PoolMethod::reml: return "reml";
  }
  throw std::invalid_argument("pool_method_name: unknown method tag");
}

StudyEffect study_effect(const SummaryStats& control, const SummaryStats& intervention,
                         EstimatorId estimator) {
  control.validate();
  intervention.validate();
  if (!(control.median > 0.0) || !(intervention.median > 0.0)) {
    throw std::domain_error("study_effect: both arm medians must be positive");
  }
  const double se_c = estimate_se(estimator, control).se;
  const double se_i = estimate_se(estimator, intervention).se;
  StudyEffect e;
  e.y = std::log(intervention.median / control.median);
  const double rel_c = se_c / control.median;
  const double rel_i = se_i / intervention.median;
  e.v = rel_c * rel_c + rel_i * rel_i;
  if (!std::isfinite(e.y) || !std::isfinite(e.v) || !(e.v > 0.0)) {
    throw std::domain_error("study_effect: produced a non-finite effect or variance");
  }
  return e;
}

PooledEstimate pool_fixed(std::span<const StudyEffect> effects) {
  check_nonempty(effects, "pool_fixed");
  PooledEstimate est;
  const auto [effect, variance] = weighted_pool(effects, 0.0);
  est.effect = effect;
  est.variance = variance;
  est.tau2_hat = 0.0;
  est.method_used = PoolMethod::fixed_effect;
  est.ci_low = est.ci_high = effect;
  return est;
}

double tau2_dl(std::span<const StudyEffect> effects) {
  check_two(effects, "tau2_dl");
  double wsum = 0.0, w2sum = 0.0, wysum = 0.0;
  for (const auto& e : effects) {
    const double w = 1.0 / e.v;
    wsum += w;
    w2sum += w * w;
    wysum += w * e.y;
  }
  const double mean = wysum / wsum;
  double q = 0.0;
  for (const auto& e : effects) {
    const double d = e.y - mean;
    q += d * d / e.v;
  }
  const auto k = static_cast<double>(effects.size());
  const double denom = wsum - w2sum / wsum;
  return std::max(0.0, (q - (k - 1.0)) / denom);
}

PooledEstimate pool_dl(std::span<const StudyEffect> effects) {
  const double tau2 = tau2_dl(effects);
  PooledEstimate est;
  const auto [effect, variance] = weighted_pool(effects, tau2);
  est.effect = effect;
  est.variance = variance;
  est.tau2_hat = tau2;
  est.method_used = PoolMethod::dersimonian_laird;
  est.ci_low = est.ci_high = effect;
  return est;
}

double reml_loglik(std::span<const StudyEffect> effects, double tau2) {
  check_two(effects, "reml_loglik");
  if (!std::isfinite(tau2) || tau2 < 0.0) {
    throw std::domain_error("reml_loglik: tau2 must be nonnegative and finite");
  }
  double wsum = 0.0, wysum = 0.0, logsum = 0.0;
  for (const auto& e : effects) {
    const double var = e.v + tau2;
    wsum += 1.0 / var;
    wysum += e.y / var;
    logsum += std::log(var);
  }
  const double mu = wysum / wsum;
  double quad = 0.0;
  for (const auto& e : effects) {
    const double d = e.y - mu;
    quad += d * d / (e.v + tau2);
  }
  return -0.5 * (logsum + std::log(wsum) + quad);
}

PooledEstimate pool_reml(std::span<const StudyEffect> effects, double alpha,
                         const RemlOptions& options) {
  check_two(effects, "pool_reml");

  const auto fall_back = [&] {
    PooledEstimate est = pool_fixed(effects);
    est.fell_back = true;
    apply_ci(est, alpha);
    return est;
  };
  if (options.max_iter <= 0) return fall_back();

  double v_max = 0.0, y_mean = 0.0;
  for (const auto& e : effects) {
    v_max = std::max(v_max, e.v);
    y_mean += e.y;
  }
  y_mean /= static_cast<double>(effects.size());
  double y_var = 0.0;
  for (const auto& e : effects) {
    const double d = e.y - y_mean;
    y_var += d * d;
  }
  y_var /= static_cast<double>(effects.size() - 1);
  const double upper = 10.0 * v_max + y_var;

  double best_tau2 = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool bad_objective = false;
  const auto eval = [&](double tau2) {
    const double ll = reml_loglik(effects, tau2);
    if (!std::isfinite(ll)) {
      bad_objective = true;
      return -std::numeric_limits<double>::infinity();
    }
    if (ll > best_ll) {
      best_ll = ll;
      best_tau2 = tau2;
    }
    return ll;
  };

  // Bracketing scan, then golden-section refinement around the scan argmax.
  constexpr int kScanPoints = 65;
  int arg = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double t = upper * static_cast<double>(i) / (kScanPoints - 1);
    const double ll = eval(t);
    if (bad_objective) return fall_back();
    if (ll >= best_ll) arg = i;
  }
  double lo = upper * static_cast<double>(std::max(0, arg - 1)) / (kScanPoints - 1);
  double hi = upper * static_cast<double>(std::min(kScanPoints - 1, arg + 1)) / (kScanPoints - 1);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double ll_c = eval(c), ll_d = eval(d);
  if (bad_objective) return fall_back();
  int iter = 0;
  while (hi - lo > options.tol) {
    if (iter++ >= options.max_iter) return fall_back();
    if (ll_c > ll_d) {
      hi = d;
      d = c;
      ll_d = ll_c;
      c = hi - inv_phi * (hi - lo);
      ll_c = eval(c);
    } else {
      lo = c;
      c = d;
      ll_c = ll_d;
      d = lo + inv_phi * (hi - lo);
      ll_d = eval(d);
    }
    if (bad_objective) return fall_back();
  }

  PooledEstimate est;
  const auto [effect, variance] = weighted_pool(effects, best_tau2);
  est.effect = effect;
  est.variance = variance;
  est.tau2_hat = best_tau2;
  est.method_used = PoolMethod::reml;
  est.fell_back = false;
  apply_ci(est, alpha);
  return est;
}

std::pair<double, double> confidence_interval(double effect, double variance, double alpha) {
  if (!std::isfinite(effect)) {
    throw std::domain_error("confidence_interval: effect must be finite");
  }
  if (!std::isfinite(variance) || !(variance > 0.0)) {
    throw std::domain_error("confidence_interval: variance must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("confidence_interval: alpha must lie strictly between 0 and 1");
  }
  const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance);
  return {effect - half, effect + half};
}

void apply_ci(PooledEstimate& estimate, double alpha) {
  const auto [low, high] = confidence_interval(estimate.effect, estimate.variance, alpha);
  estimate.ci_low = low;
  estimate.ci_high = high;
}

}  // namespace medsim
