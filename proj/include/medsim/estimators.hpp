#pragma once

#include <string_view>
#include <vector>

#include "medsim/distributions.hpp"

namespace medsim {

enum class EstimatorId { g_exp, g_norm, g_lnorm, g_cauchy };

std::string_view estimator_name(EstimatorId id);
EstimatorId estimator_from_name(std::string_view name);  // throws std::invalid_argument

struct SeEstimate {
  double se = 0.0;
  Family assumed_family = Family::exponential;
  std::vector<double> fitted_params;
};

// Density-based standard errors for the sample median: fit the assumed
// family to the reported summary, then apply se = 1 / (2 sqrt(n) f(median)).
//
// g_exp fits rate = log(2) / median from the median alone; the others also
// need the quartiles to recover a spread parameter:
//   g_norm:   sd    = (q3 - q1) / (2 z_{0.75})
//   g_lnorm:  log_sd = (log q3 - log q1) / (2 z_{0.75}),   log_mean = log median
//   g_cauchy: scale = (q3 - q1) / 2
// All throw std::domain_error on n < 2, non-finite input, a non-positive
// median where the family needs one, or a degenerate spread (q1 >= q3;
// g_lnorm additionally rejects non-positive quartiles).
SeEstimate g_exp(int n, double median);
SeEstimate g_norm(int n, double median, double q1, double q3);
SeEstimate g_lnorm(int n, double median, double q1, double q3);
SeEstimate g_cauchy(int n, double median, double q1, double q3);

// Dispatch on the estimator id after validating the summary.
SeEstimate estimate_se(EstimatorId id, const SummaryStats& stats);

}  // namespace medsim
