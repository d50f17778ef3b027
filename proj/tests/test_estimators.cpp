#include "medsim/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "medsim/distributions.hpp"
#include "medsim/normal.hpp"
#include "medsim/rng.hpp"

using medsim::DistributionSpec;
using medsim::EstimatorId;
using medsim::Family;
using medsim::RngStream;
using medsim::SeEstimate;
using medsim::SummaryStats;

namespace {

constexpr double kZ75 = 0.6744897501960817;

}  // namespace

TEST_CASE("g_exp reference values") {
  const SeEstimate e = medsim::g_exp(10, 4.0);
  CHECK(e.se == doctest::Approx(1.8248809192955502).epsilon(1e-12));
  CHECK(e.assumed_family == Family::exponential);
  REQUIRE(e.fitted_params.size() == 1);
  CHECK(e.fitted_params[0] == doctest::Approx(std::numbers::ln2 / 4.0).epsilon(1e-15));

  CHECK(medsim::g_exp(50, 2.0).se == doctest::Approx(0.40805577863871579).epsilon(1e-12));
}

TEST_CASE("g_exp at the unit-rate median reduces to 1/sqrt(n)") {
  for (int n : {2, 4, 100, 1000000}) {
    CHECK(medsim::g_exp(n, std::numbers::ln2).se ==
          doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-12));
  }
}

TEST_CASE("g_exp scales linearly in the median") {
  RngStream rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_below(99));
    const double m = 0.1 + 10.0 * rng.next_double();
    const double c = 0.5 + 4.0 * rng.next_double();
    CHECK(medsim::g_exp(n, c * m).se ==
          doctest::Approx(c * medsim::g_exp(n, m).se).epsilon(1e-12));
  }
}

TEST_CASE("g_exp rejects bad input") {
  CHECK_THROWS_AS((void)medsim::g_exp(-3, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(0, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(1, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(10, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(10, -4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(10, std::nan("")), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_exp(10, std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("g_norm reference values") {
  const SeEstimate unit = medsim::g_norm(100, 0.0, -kZ75, kZ75);
  CHECK(unit.fitted_params[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.se == doctest::Approx(0.12533141373155003).epsilon(1e-12));

  const SeEstimate e = medsim::g_norm(25, 10.0, 9.0, 11.0);
  CHECK(e.assumed_family == Family::normal);
  REQUIRE(e.fitted_params.size() == 2);
  CHECK(e.fitted_params[0] == 10.0);
  CHECK(e.fitted_params[1] == doctest::Approx(1.4826022185056018).epsilon(1e-12));
  CHECK(e.se == doctest::Approx(0.37163326409367904).epsilon(1e-12));
}

TEST_CASE("g_lnorm reference values") {
  const SeEstimate unit = medsim::g_lnorm(100, 1.0, std::exp(-kZ75), std::exp(kZ75));
  CHECK(unit.fitted_params[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(unit.fitted_params[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.se == doctest::Approx(0.12533141373155003).epsilon(1e-12));

  const SeEstimate e = medsim::g_lnorm(50, 2.0, 1.0, 4.0);
  CHECK(e.assumed_family == Family::lognormal);
  CHECK(e.fitted_params[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(e.fitted_params[1] == doctest::Approx(1.0276615476490779).epsilon(1e-12));
  CHECK(e.se == doctest::Approx(0.36429653351162612).epsilon(1e-12));
}

TEST_CASE("g_cauchy reference values") {
  const SeEstimate unit = medsim::g_cauchy(100, 0.0, -1.0, 1.0);
  CHECK(unit.se == doctest::Approx(std::numbers::pi / 20.0).epsilon(1e-12));

  const SeEstimate e = medsim::g_cauchy(4, 5.0, 4.0, 6.0);
  CHECK(e.assumed_family == Family::cauchy);
  CHECK(e.fitted_params[0] == 5.0);
  CHECK(e.fitted_params[1] == 1.0);
  CHECK(e.se == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("quartile-based estimators reject degenerate or invalid spreads") {
  CHECK_THROWS_AS((void)medsim::g_norm(25, 10.0, 11.0, 9.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_norm(25, 10.0, 10.0, 10.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_norm(1, 10.0, 9.0, 11.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_lnorm(50, 2.0, 0.0, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_lnorm(50, 2.0, -1.0, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_lnorm(50, -2.0, 1.0, 4.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_lnorm(50, 2.0, 3.0, 3.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_cauchy(50, 2.0, 3.0, 3.0), std::domain_error);
  CHECK_THROWS_AS((void)medsim::g_cauchy(0, 2.0, 1.0, 3.0), std::domain_error);
}

TEST_CASE("closed forms match the density recipe") {
  RngStream rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_below(500));
    const double m = 0.2 + 8.0 * rng.next_double();
    const double spread = 0.1 + 2.0 * rng.next_double();
    const double q1 = m - spread, q3 = m + spread;
    const double root_n = std::sqrt(static_cast<double>(n));

    CHECK(medsim::g_exp(n, m).se ==
          doctest::Approx(m / (std::numbers::ln2 * root_n)).epsilon(1e-12));

    const double sd = (q3 - q1) / (2.0 * kZ75);
    CHECK(medsim::g_norm(n, m, q1, q3).se ==
          doctest::Approx(sd * std::sqrt(std::numbers::pi / 2.0) / root_n).epsilon(1e-12));

    if (q1 > 0.0) {
      const double log_sd = (std::log(q3) - std::log(q1)) / (2.0 * kZ75);
      CHECK(medsim::g_lnorm(n, m, q1, q3).se ==
            doctest::Approx(m * log_sd * std::sqrt(std::numbers::pi / 2.0) / root_n)
                .epsilon(1e-12));
    }

    CHECK(medsim::g_cauchy(n, m, q1, q3).se ==
          doctest::Approx(std::numbers::pi * spread / (2.0 * root_n)).epsilon(1e-12));
  }
}

TEST_CASE("fuzzed estimates are finite, positive, and shrink like 1/sqrt(n)") {
  RngStream rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_below(99));
    const double m = 0.05 + 20.0 * rng.next_double();
    const double se = medsim::g_exp(n, m).se;
    CHECK(std::isfinite(se));
    CHECK(se > 0.0);
    CHECK(medsim::g_exp(4 * n, m).se == doctest::Approx(se / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("dispatch matches the direct calls") {
  const SummaryStats stats{40, 2.5, 1.5, 4.0};
  CHECK(medsim::estimate_se(EstimatorId::g_exp, stats).se ==
        medsim::g_exp(40, 2.5).se);
  CHECK(medsim::estimate_se(EstimatorId::g_norm, stats).se ==
        medsim::g_norm(40, 2.5, 1.5, 4.0).se);
  CHECK(medsim::estimate_se(EstimatorId::g_lnorm, stats).se ==
        medsim::g_lnorm(40, 2.5, 1.5, 4.0).se);
  CHECK(medsim::estimate_se(EstimatorId::g_cauchy, stats).se ==
        medsim::g_cauchy(40, 2.5, 1.5, 4.0).se);

  const SummaryStats bad{1, 2.5, 1.5, 4.0};
  CHECK_THROWS_AS((void)medsim::estimate_se(EstimatorId::g_exp, bad), std::domain_error);
  const SummaryStats flat{40, 2.5, 2.5, 2.5};
  CHECK_THROWS_AS((void)medsim::estimate_se(EstimatorId::g_norm, flat), std::domain_error);
}

TEST_CASE("estimator names round-trip") {
  for (EstimatorId id : {EstimatorId::g_exp, EstimatorId::g_norm, EstimatorId::g_lnorm,
                         EstimatorId::g_cauchy}) {
    CHECK(medsim::estimator_from_name(medsim::estimator_name(id)) == id);
  }
  CHECK_THROWS_AS((void)medsim::estimator_from_name("g_weibull"), std::invalid_argument);
}

TEST_CASE("each estimator tracks the sampling spread of the median it assumes") {
  // Scaled-down consistency check: the estimator evaluated at the true
  // summary values should sit close to the Monte Carlo spread of the medians.
  const int sample_size = 1000;
  const int reps = 2000;
  struct Case {
    DistributionSpec spec;
    EstimatorId estimator;
  };
  const Case cases[] = {
      {DistributionSpec::exponential(2.0), EstimatorId::g_exp},
      {DistributionSpec::normal(3.0, 0.2), EstimatorId::g_norm},
      {DistributionSpec::lognormal(0.0, 1.0), EstimatorId::g_lnorm},
      {DistributionSpec::cauchy(3.0, 0.2), EstimatorId::g_cauchy},
  };
  int case_index = 0;
  for (const auto& c : cases) {
    double sum = 0.0, sum2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      RngStream rng = RngStream::derive(40, static_cast<std::uint64_t>(case_index),
                                        static_cast<std::uint64_t>(rep));
      const auto draws = medsim::sample(c.spec, sample_size, rng);
      const double m = medsim::summarize(draws).median;
      sum += m;
      sum2 += m * m;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sum2 - reps * mean * mean) / (reps - 1));

    const SummaryStats truth{sample_size, medsim::median_of(c.spec),
                             medsim::quantile_of(c.spec, 0.25),
                             medsim::quantile_of(c.spec, 0.75)};
    const double predicted = medsim::estimate_se(c.estimator, truth).se;
    CHECK(std::abs(sd / predicted - 1.0) < 0.10);
    ++case_index;
  }
}
