#include "medsim/simulate.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "medsim/errors.hpp"
#include "medsim/io.hpp"

namespace medsim {

std::string_view pooling_name(Pooling pooling) {
  switch (pooling) {
    case Pooling::fixed_effect: return "fe";
    case Pooling::dersimonian_laird: return "dl";
    case Pooling::reml_with_fe_fallback: return "reml";
  }
  throw std::invalid_argument("pooling_name: unknown pooling tag");
}

Pooling pooling_from_name(std::string_view name) {
  if (name == "fe") return Pooling::fixed_effect;
  if (name == "dl") return Pooling::dersimonian_laird;
  if (name == "reml") return Pooling::reml_with_fe_fallback;
  throw std::invalid_argument("pooling_from_name: unknown pooling '" + std::string(name) +
                              "'");
}

double SimConfig::true_effect() const { return -std::log(rho); }

void SimConfig::validate() const {
  DistributionSpec base{family, base_params};
  try {
    base.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("base_rate", e.what());
  }
  if (!(median_of(base) > 0.0)) {
    throw ConfigError("base_rate", "control-arm median must be positive");
  }
  if (!std::isfinite(rho) || !(rho > 0.0)) {
    throw ConfigError("rho", "must be positive and finite");
  }
  if (!std::isfinite(tau2) || tau2 < 0.0) {
    throw ConfigError("tau2", "must be nonnegative and finite");
  }
  if (studies < 1) {
    throw ConfigError("K", "must be at least 1");
  }
  if (n_min < 4) {
    throw ConfigError("n_min", "must be at least 4 so both arms can hold two subjects");
  }
  if (n_max < n_min) {
    throw ConfigError("n_max", "must be at least n_min");
  }
  if (!(alloc_shape.beta1 > 0.0) || !(alloc_shape.beta2 > 0.0) ||
      !std::isfinite(alloc_shape.beta1) || !std::isfinite(alloc_shape.beta2)) {
    throw ConfigError("alloc_shape", "both Beta shapes must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha", "must lie strictly between 0 and 1");
  }
  if (trials < 1) {
    throw ConfigError("trials", "must be at least 1");
  }
}

std::vector<std::pair<int, int>> sim_n(int k, int n_min, int n_max,
                                       const AllocShape& shape, RngStream& rng) {
  if (k < 1) throw ConfigError("K", "must be at least 1");
  if (n_min < 4) {
    throw ConfigError("n_min", "must be at least 4 so both arms can hold two subjects");
  }
  if (n_max < n_min) throw ConfigError("n_max", "must be at least n_min");
  if (!(shape.beta1 > 0.0) || !(shape.beta2 > 0.0)) {
    throw ConfigError("alloc_shape", "both Beta shapes must be positive and finite");
  }
  std::vector<std::pair<int, int>> sizes;
  sizes.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int total = draw_uniform_int(n_min, n_max, rng);
    const double frac = draw_beta(shape.beta1, shape.beta2, rng);
    auto n_intervention = static_cast<int>(std::nearbyint(frac * total));
    n_intervention = std::max(2, std::min(total - 2, n_intervention));
    sizes.emplace_back(total - n_intervention, n_intervention);
  }
  return sizes;
}

std::vector<double> draw_random_effects(int k, double tau2, RngStream& rng) {
  if (k < 1) throw ConfigError("K", "must be at least 1");
  if (!std::isfinite(tau2) || tau2 < 0.0) {
    throw std::domain_error("draw_random_effects: tau2 must be nonnegative and finite");
  }
  const double sd = std::sqrt(tau2);
  std::vector<double> gammas;
  gammas.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    // Always consume one normal draw so the stream stays aligned when
    // tau2 == 0, where the effect is exactly zero.
    const double z = draw_normal(rng);
    gammas.push_back(tau2 == 0.0 ? 0.0 : sd * z);
  }
  return gammas;
}

std::pair<double, double> solve_arm_rates(double base_rate, double rho, double gamma) {
  if (!std::isfinite(base_rate) || !(base_rate > 0.0)) {
    throw std::domain_error("solve_arm_rates: base_rate must be positive and finite");
  }
  if (!std::isfinite(rho) || !(rho > 0.0)) {
    throw std::domain_error("solve_arm_rates: rho must be positive and finite");
  }
  if (!std::isfinite(gamma)) {
    throw std::domain_error("solve_arm_rates: gamma must be finite");
  }
  const double intervention_rate = rho * base_rate;
  return {base_rate * std::exp(gamma / 2.0), intervention_rate * std::exp(-gamma / 2.0)};
}

namespace {

// Rebuild a family member whose median is the given target, keeping the base
// spread/shape parameter.
DistributionSpec with_median(const DistributionSpec& base, double target_median) {
  switch (base.family) {
    case Family::exponential:
      return DistributionSpec::exponential(std::numbers::ln2 / target_median);
    case Family::normal:
      return DistributionSpec::normal(target_median, base.params[1]);
    case Family::lognormal:
      return DistributionSpec::lognormal(std::log(target_median), base.params[1]);
    case Family::cauchy:
      return DistributionSpec::cauchy(target_median, base.params[1]);
  }
  throw std::invalid_argument("with_median: unknown family tag");
}

}  // namespace

StudyArms solve_study_arms(const DistributionSpec& control_base, double rho,
                           double gamma, int n_control, int n_intervention) {
  control_base.validate();
  if (!std::isfinite(rho) || !(rho > 0.0)) {
    throw std::domain_error("solve_study_arms: rho must be positive and finite");
  }
  if (!std::isfinite(gamma)) {
    throw std::domain_error("solve_study_arms: gamma must be finite");
  }
  const double base_median = median_of(control_base);
  if (!(base_median > 0.0)) {
    throw std::domain_error("solve_study_arms: control-arm median must be positive");
  }

  StudyArms arms;
  arms.gamma = gamma;
  arms.n_control = n_control;
  arms.n_intervention = n_intervention;
  if (control_base.family == Family::exponential) {
    const auto [rate_c, rate_i] = solve_arm_rates(control_base.params[0], rho, gamma);
    arms.control = DistributionSpec::exponential(rate_c);
    arms.intervention = DistributionSpec::exponential(rate_i);
  } else {
    arms.control = with_median(control_base, base_median * std::exp(-gamma / 2.0));
    arms.intervention =
        with_median(control_base, (base_median / rho) * std::exp(gamma / 2.0));
  }
  arms.median_control = median_of(arms.control);
  arms.median_intervention = median_of(arms.intervention);
  return arms;
}

MetaSample sim_stats(const SimConfig& config, RngStream& rng) {
  config.validate();
  const DistributionSpec base{config.family, config.base_params};

  const auto sizes =
      sim_n(config.studies, config.n_min, config.n_max, config.alloc_shape, rng);
  const auto gammas = draw_random_effects(config.studies, config.tau2, rng);

  MetaSample out;
  out.studies.reserve(sizes.size());
  for (int k = 0; k < config.studies; ++k) {
    StudyRecord rec;
    rec.arms = solve_study_arms(base, config.rho, gammas[static_cast<std::size_t>(k)],
                                sizes[static_cast<std::size_t>(k)].first,
                                sizes[static_cast<std::size_t>(k)].second);
    const auto control_draws = sample(rec.arms.control, rec.arms.n_control, rng);
    rec.control_stats = summarize(control_draws);
    const auto intervention_draws = sample(rec.arms.intervention, rec.arms.n_intervention, rng);
    rec.intervention_stats = summarize(intervention_draws);
    out.studies.push_back(std::move(rec));
  }
  return out;
}

std::vector<double> default_base_params(Family family) {
  switch (family) {
    case Family::exponential: return {1.0};
    case Family::normal: return {3.0, 0.2};
    case Family::lognormal: return {0.0, 1.0};
    case Family::cauchy: return {3.0, 0.2};
  }
  throw std::invalid_argument("default_base_params: unknown family tag");
}

std::vector<SimConfig> sim_df(const GridAxes& axes) {
  const auto check_axis = [](bool empty, const char* name) {
    if (empty) throw ConfigError(name, "axis must hold at least one value");
  };
  check_axis(axes.studies.empty(), "K");
  check_axis(axes.tau2.empty(), "tau2");
  check_axis(axes.rho.empty(), "rho");
  check_axis(axes.families.empty(), "family");
  check_axis(axes.estimators.empty(), "estimator");
  check_axis(axes.poolings.empty(), "pooling");

  std::vector<SimConfig> grid;
  for (Family family : axes.families) {
    const auto it = axes.base_params.find(family);
    const auto params = it != axes.base_params.end() ? it->second : default_base_params(family);
    for (EstimatorId estimator : axes.estimators) {
      for (Pooling pooling : axes.poolings) {
        for (int studies : axes.studies) {
          for (double tau2 : axes.tau2) {
            for (double rho : axes.rho) {
              SimConfig cell;
              cell.family = family;
              cell.base_params = params;
              cell.rho = rho;
              cell.tau2 = tau2;
              cell.studies = studies;
              cell.n_min = axes.n_min;
              cell.n_max = axes.n_max;
              cell.alloc_shape = axes.alloc_shape;
              cell.alpha = axes.alpha;
              cell.estimator = estimator;
              cell.pooling = pooling;
              cell.trials = axes.trials;
              cell.validate();
              grid.push_back(std::move(cell));
            }
          }
        }
      }
    }
  }
  return grid;
}

void write_meta_sample_csv(std::ostream& out, const MetaSample& sample) {
  out << "study,arm,n,median,q1,q3,gamma,rate\n";
  for (std::size_t i = 0; i < sample.studies.size(); ++i) {
    const auto& rec = sample.studies[i];
    const auto row = [&](const char* arm, const SummaryStats& stats,
                         const DistributionSpec& dist) {
      out << (i + 1) << ',' << arm << ',' << stats.n << ',' << format_g9(stats.median)
          << ',' << format_g9(stats.q1) << ',' << format_g9(stats.q3) << ','
          << format_g9(rec.arms.gamma) << ',' << format_g9(dist.params[0]) << '\n';
    };
    row("control", rec.control_stats, rec.arms.control);
    row("intervention", rec.intervention_stats, rec.arms.intervention);
  }
}

}  // namespace medsim
