#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "medsim/rng.hpp"

namespace medsim {

enum class Family { exponential, normal, lognormal, cauchy };

std::string_view family_name(Family family);
Family family_from_name(std::string_view name);  // throws std::invalid_argument

// A parametric distribution: a family tag plus its ordered parameter vector.
//   exponential: {rate}
//   normal:      {mean, sd}
//   lognormal:   {log_mean, log_sd}   (parameters of log(X))
//   cauchy:      {location, scale}
struct DistributionSpec {
  Family family = Family::exponential;
  std::vector<double> params;

  static DistributionSpec exponential(double rate);
  static DistributionSpec normal(double mean, double sd);
  static DistributionSpec lognormal(double log_mean, double log_sd);
  static DistributionSpec cauchy(double location, double scale);

  // Throws std::domain_error on wrong arity, non-finite values, or a
  // non-positive rate/sd/log_sd/scale.
  void validate() const;
};

// Five-number-style summary of one simulated arm.
struct SummaryStats {
  int n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  void validate() const;  // n >= 2, finite values, q1 <= median <= q3
};

// Density at x; zero outside the support, never an error for valid specs.
double density_at(const DistributionSpec& dist, double x);

double cdf_at(const DistributionSpec& dist, double x);

// Inverse CDF for p strictly inside (0, 1).
double quantile_of(const DistributionSpec& dist, double p);

// Population median in closed form.
double median_of(const DistributionSpec& dist);

// n independent draws by inversion: one uniform from the stream per draw,
// in order, for every family.  Throws std::invalid_argument when n < 1.
std::vector<double> sample(const DistributionSpec& dist, int n, RngStream& rng);

// Median and quartiles by the linear-interpolation quantile rule
// (h = (n-1)p); requires at least two values.
SummaryStats summarize(std::span<const double> values);

// Standard normal draw by inversion.
double draw_normal(RngStream& rng);

// Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape must be positive.
double draw_gamma(double shape, RngStream& rng);

// Beta(a, b) as a gamma ratio; a and b must be positive.
double draw_beta(double a, double b, RngStream& rng);

// Uniform integer on the inclusive range [lo, hi].
int draw_uniform_int(int lo, int hi, RngStream& rng);

}  // namespace medsim
