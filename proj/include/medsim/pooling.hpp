#pragma once

#include <span>
#include <string_view>
#include <utility>

#include "medsim/distributions.hpp"
#include "medsim/estimators.hpp"

namespace medsim {

// One study's log median ratio and its delta-method variance.
struct StudyEffect {
  double y = 0.0;
  double v = 0.0;
};

enum class PoolMethod { fixed_effect, dersimonian_laird, reml };

std::string_view pool_method_name(PoolMethod method);  // "fe", "dl", "reml"

struct PooledEstimate {
  double effect = 0.0;
  double variance = 0.0;
  double tau2_hat = 0.0;
  PoolMethod method_used = PoolMethod::fixed_effect;
  bool fell_back = false;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// y = log(intervention median / control median); v is the sum of the two
// arms' squared relative standard errors.  Both arm medians must be
// positive; estimator failures (degenerate spread, bad summaries) propagate.
StudyEffect study_effect(const SummaryStats& control, const SummaryStats& intervention,
                         EstimatorId estimator);

// Inverse-variance fixed-effect pooling.  The returned interval is collapsed
// to the point estimate; use apply_ci to attach one at a chosen level.
PooledEstimate pool_fixed(std::span<const StudyEffect> effects);

// DerSimonian-Laird moment estimate of the between-study variance, truncated
// at zero.  Needs at least two studies.
double tau2_dl(std::span<const StudyEffect> effects);

// Random-effects pooling with the DerSimonian-Laird tau2.
PooledEstimate pool_dl(std::span<const StudyEffect> effects);

struct RemlOptions {
  int max_iter = 200;   // golden-section refinement budget; 0 disables REML
  double tol = 1e-8;    // bracket width at which the search stops
};

// Restricted log-likelihood of the random-effects model at the given tau2,
// up to an additive constant.
double reml_loglik(std::span<const StudyEffect> effects, double tau2);

// REML pooling: maximize the restricted likelihood over
// tau2 in [0, 10 max(v) + var(y)] by a bracketing scan plus golden-section
// refinement.  On a spent budget or a non-finite objective the result falls
// back to fixed-effect pooling with fell_back set.  Needs at least two
// studies.  The interval is filled at the given alpha.
PooledEstimate pool_reml(std::span<const StudyEffect> effects, double alpha,
                         const RemlOptions& options = {});

// Central z interval: effect -/+ z_{1 - alpha/2} sqrt(variance).
std::pair<double, double> confidence_interval(double effect, double variance, double alpha);

// Fill the estimate's interval at the given alpha.
void apply_ci(PooledEstimate& estimate, double alpha);

}  // namespace medsim
