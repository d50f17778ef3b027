#include "medsim/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "medsim/normal.hpp"

namespace medsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

void require_positive(double x, const char* what) {
  require_finite(x, what);
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::exponential: return "exponential";
    case Family::normal: return "normal";
    case Family::lognormal: return "lognormal";
    case Family::cauchy: return "cauchy";
  }
  throw std::invalid_argument("family_name: unknown family tag");
}

Family family_from_name(std::string_view name) {
  if (name == "exponential") return Family::exponential;
  if (name == "normal") return Family::normal;
  if (name == "lognormal") return Family::lognormal;
  if (name == "cauchy") return Family::cauchy;
  throw std::invalid_argument("family_from_name: unknown family '" + std::string(name) + "'");
}

DistributionSpec DistributionSpec::exponential(double rate) {
  DistributionSpec d{Family::exponential, {rate}};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::normal(double mean, double sd) {
  DistributionSpec d{Family::normal, {mean, sd}};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::lognormal(double log_mean, double log_sd) {
  DistributionSpec d{Family::lognormal, {log_mean, log_sd}};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::cauchy(double location, double scale) {
  DistributionSpec d{Family::cauchy, {location, scale}};
  d.validate();
  return d;
}

void DistributionSpec::validate() const {
  const auto arity = family == Family::exponential ? std::size_t{1} : std::size_t{2};
  if (params.size() != arity) {
    throw std::domain_error(std::string(family_name(family)) + " takes " +
                            std::to_string(arity) + " parameter(s), got " +
                            std::to_string(params.size()));
  }
  switch (family) {
    case Family::exponential:
      require_positive(params[0], "exponential rate");
      break;
    case Family::normal:
      require_finite(params[0], "normal mean");
      require_positive(params[1], "normal sd");
      break;
    case Family::lognormal:
      require_finite(params[0], "lognormal log_mean");
      require_positive(params[1], "lognormal log_sd");
      break;
    case Family::cauchy:
      require_finite(params[0], "cauchy location");
      require_positive(params[1], "cauchy scale");
      break;
  }
}

void SummaryStats::validate() const {
  if (n < 2) {
    throw std::domain_error("summary stats need n >= 2, got n = " + std::to_string(n));
  }
  if (!std::isfinite(median) || !std::isfinite(q1) || !std::isfinite(q3)) {
    throw std::domain_error("summary stats must be finite");
  }
  if (!(q1 <= median && median <= q3)) {
    throw std::domain_error("summary stats must satisfy q1 <= median <= q3");
  }
}

double density_at(const DistributionSpec& dist, double x) {
  dist.validate();
  switch (dist.family) {
    case Family::exponential: {
      const double rate = dist.params[0];
      return x < 0.0 ? 0.0 : rate * std::exp(-rate * x);
    }
    case Family::normal: {
      const double mean = dist.params[0], sd = dist.params[1];
      return normal_pdf((x - mean) / sd) / sd;
    }
    case Family::lognormal: {
      if (x <= 0.0) return 0.0;
      const double mu = dist.params[0], sigma = dist.params[1];
      return normal_pdf((std::log(x) - mu) / sigma) / (sigma * x);
    }
    case Family::cauchy: {
      const double loc = dist.params[0], scale = dist.params[1];
      const double z = (x - loc) / scale;
      return 1.0 / (kPi * scale * (1.0 + z * z));
    }
  }
  throw std::invalid_argument("density_at: unknown family tag");
}

double cdf_at(const DistributionSpec& dist, double x) {
  dist.validate();
  switch (dist.family) {
    case Family::exponential:
      return x < 0.0 ? 0.0 : -std::expm1(-dist.params[0] * x);
    case Family::normal:
      return normal_cdf((x - dist.params[0]) / dist.params[1]);
    case Family::lognormal:
      if (x <= 0.0) return 0.0;
      return normal_cdf((std::log(x) - dist.params[0]) / dist.params[1]);
    case Family::cauchy:
      return 0.5 + std::atan((x - dist.params[0]) / dist.params[1]) / kPi;
  }
  throw std::invalid_argument("cdf_at: unknown family tag");
}

double quantile_of(const DistributionSpec& dist, double p) {
  dist.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("quantile_of: p must lie strictly between 0 and 1");
  }
  switch (dist.family) {
    case Family::exponential:
      return -std::log1p(-p) / dist.params[0];
    case Family::normal:
      return dist.params[0] + dist.params[1] * normal_quantile(p);
    case Family::lognormal:
      return std::exp(dist.params[0] + dist.params[1] * normal_quantile(p));
    case Family::cauchy:
      return dist.params[0] + dist.params[1] * std::tan(kPi * (p - 0.5));
  }
  throw std::invalid_argument("quantile_of: unknown family tag");
}

double median_of(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::exponential: return std::numbers::ln2 / dist.params[0];
    case Family::normal: return dist.params[0];
    case Family::lognormal: return std::exp(dist.params[0]);
    case Family::cauchy: return dist.params[0];
  }
  throw std::invalid_argument("median_of: unknown family tag");
}

std::vector<double> sample(const DistributionSpec& dist, int n, RngStream& rng) {
  dist.validate();
  if (n < 1) {
    throw std::invalid_argument("sample: n must be at least 1, got " + std::to_string(n));
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(quantile_of(dist, rng.next_open()));
  }
  return out;
}

namespace {

// Quantile of a sorted sample by linear interpolation at h = (n-1)p.
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SummaryStats summarize(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("summarize: need at least 2 values, got " +
                                std::to_string(values.size()));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats stats;
  stats.n = static_cast<int>(sorted.size());
  stats.q1 = sorted_quantile(sorted, 0.25);
  stats.median = sorted_quantile(sorted, 0.5);
  stats.q3 = sorted_quantile(sorted, 0.75);
  return stats;
}

double draw_normal(RngStream& rng) { return normal_quantile(rng.next_open()); }

double draw_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::domain_error("draw_gamma: shape must be positive and finite");
  }
  if (shape < 1.0) {
    const double u = rng.next_open();
    return draw_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = draw_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double draw_beta(double a, double b, RngStream& rng) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("draw_beta: both shape parameters must be positive and finite");
  }
  const double x = draw_gamma(a, rng);
  const double y = draw_gamma(b, rng);
  return x / (x + y);
}

int draw_uniform_int(int lo, int hi, RngStream& rng) {
  if (lo > hi) {
    throw std::invalid_argument("draw_uniform_int: lo must not exceed hi");
  }
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return static_cast<int>(static_cast<std::int64_t>(lo) +
                          static_cast<std::int64_t>(rng.next_below(span)));
}

}  // namespace medsim
