#pragma once

#include <iosfwd>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "medsim/distributions.hpp"
#include "medsim/estimators.hpp"
#include "medsim/rng.hpp"

namespace medsim {

enum class Pooling { fixed_effect, dersimonian_laird, reml_with_fe_fallback };

std::string_view pooling_name(Pooling pooling);  // "fe", "dl", "reml"
Pooling pooling_from_name(std::string_view name);

struct AllocShape {
  double beta1 = 10.0;
  double beta2 = 10.0;
};

// One cell of the simulation grid.
struct SimConfig {
  Family family = Family::exponential;
  std::vector<double> base_params = {1.0};  // control-arm distribution parameters
  double rho = 1.0;                         // control/intervention median ratio
  double tau2 = 0.0;                        // between-study variance of the log ratio
  int studies = 3;                          // K
  int n_min = 20;                           // smallest total study size
  int n_max = 200;                          // largest total study size
  AllocShape alloc_shape;                   // Beta shape for the intervention fraction
  double alpha = 0.05;
  EstimatorId estimator = EstimatorId::g_exp;
  Pooling pooling = Pooling::reml_with_fe_fallback;
  int trials = 100;

  // True pooled effect log(intervention median / control median) = -log(rho).
  double true_effect() const;

  // Throws ConfigError naming the offending field.  n_min must be at least 4
  // so every study can give both arms two or more subjects.
  void validate() const;
};

// Draw K (control, intervention) arm sizes: total ~ uniform over
// [n_min, n_max], intervention fraction ~ Beta(alloc_shape), both arms
// clamped to hold at least 2 subjects.
std::vector<std::pair<int, int>> sim_n(int k, int n_min, int n_max,
                                       const AllocShape& shape, RngStream& rng);

// K study effects gamma_k ~ N(0, tau2); tau2 == 0 yields exact zeros but
// still consumes K normal draws, keeping the stream aligned across tau2
// values.  tau2 < 0 is a domain error.
std::vector<double> draw_random_effects(int k, double tau2, RngStream& rng);

// Exponential-rate form of the arm solver: splits gamma symmetrically so
// that log(rate_c_k) - log(rate_i_k) = log(base_rate / (rho * base_rate)) + gamma.
// Returns (control rate, intervention rate).
std::pair<double, double> solve_arm_rates(double base_rate, double rho, double gamma);

// One study's generating state: the study effect, both solved arm
// distributions and their medians, and the drawn arm sizes.
struct StudyArms {
  double gamma = 0.0;
  DistributionSpec control;
  DistributionSpec intervention;
  double median_control = 0.0;
  double median_intervention = 0.0;
  int n_control = 0;
  int n_intervention = 0;
};

// Family-general arm solver on the median scale: the control median is
// scaled by exp(-gamma/2), the intervention median (control median / rho) by
// exp(+gamma/2), and each arm keeps the base spread/shape parameter.  For
// the exponential family this reproduces solve_arm_rates exactly.
StudyArms solve_study_arms(const DistributionSpec& control_base, double rho,
                           double gamma, int n_control, int n_intervention);

struct StudyRecord {
  StudyArms arms;
  SummaryStats control_stats;
  SummaryStats intervention_stats;
};

struct MetaSample {
  std::vector<StudyRecord> studies;
};

// Simulate one meta-analytic dataset: sizes, study effects, then per-study
// control and intervention samples reduced to summary statistics.
MetaSample sim_stats(const SimConfig& config, RngStream& rng);

// Axes of a simulation grid; list-valued dimensions are crossed, the rest
// are shared by every cell.
struct GridAxes {
  std::vector<int> studies = {3};
  std::vector<double> tau2 = {0.0};
  std::vector<double> rho = {1.0};
  std::vector<Family> families = {Family::exponential};
  std::vector<EstimatorId> estimators = {EstimatorId::g_exp};
  std::vector<Pooling> poolings = {Pooling::reml_with_fe_fallback};
  std::map<Family, std::vector<double>> base_params;  // per-family control parameters
  int n_min = 20;
  int n_max = 200;
  AllocShape alloc_shape;
  double alpha = 0.05;
  int trials = 100;
};

// Default control-arm parameters used when a family has none configured.
std::vector<double> default_base_params(Family family);

// Cartesian product of the axes in a fixed order (family, estimator,
// pooling, studies, tau2, rho; rho varies fastest); the position in the
// returned vector is the cell's config_id.  Duplicated axis values produce
// duplicated cells.  Empty axes are a ConfigError.
std::vector<SimConfig> sim_df(const GridAxes& axes);

// One row per arm: study, arm, n, median, q1, q3, gamma, rate (the solved
// arm's first parameter).
void write_meta_sample_csv(std::ostream& out, const MetaSample& sample);

}  // namespace medsim
