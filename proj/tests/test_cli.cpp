#include "medsim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "medsim/config.hpp"
#include "medsim/errors.hpp"
#include "medsim/version.hpp"

using medsim::ConfigError;
using medsim::EstimatorId;
using medsim::Family;
using medsim::ParsedConfig;
using medsim::Pooling;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "medsim-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("a minimal config picks up every default") {
  const ParsedConfig parsed = medsim::parse_config_json(nlohmann::json::parse(R"({"K": 3})"));
  REQUIRE(parsed.grid.size() == 1);
  const auto& cell = parsed.grid.front();
  CHECK(cell.studies == 3);
  CHECK(cell.family == Family::exponential);
  CHECK(cell.base_params == std::vector<double>{1.0});
  CHECK(cell.rho == 1.0);
  CHECK(cell.tau2 == 0.0);
  CHECK(cell.n_min == 20);
  CHECK(cell.n_max == 200);
  CHECK(cell.alloc_shape.beta1 == 10.0);
  CHECK(cell.alloc_shape.beta2 == 10.0);
  CHECK(cell.alpha == 0.05);
  CHECK(cell.estimator == EstimatorId::g_exp);
  CHECK(cell.pooling == Pooling::reml_with_fe_fallback);
  CHECK(cell.trials == 100);
  CHECK(parsed.reml_max_iter == 200);
}

TEST_CASE("scalar axis values are promoted to one-element axes") {
  const auto doc = nlohmann::json::parse(
      R"({"K": 5, "tau2": 0.1, "rho": 2.0, "family": "lognormal",
          "estimator": "g_lnorm", "pooling": "dl"})");
  const ParsedConfig parsed = medsim::parse_config_json(doc);
  REQUIRE(parsed.grid.size() == 1);
  CHECK(parsed.grid[0].studies == 5);
  CHECK(parsed.grid[0].tau2 == 0.1);
  CHECK(parsed.grid[0].family == Family::lognormal);
  CHECK(parsed.grid[0].estimator == EstimatorId::g_lnorm);
  CHECK(parsed.grid[0].pooling == Pooling::dersimonian_laird);
}

TEST_CASE("list axes cross into a grid") {
  const auto doc = nlohmann::json::parse(
      R"({"K": [3, 7], "rho": [1.0, 1.5, 2.0], "trials": 10})");
  const ParsedConfig parsed = medsim::parse_config_json(doc);
  CHECK(parsed.grid.size() == 6);
  CHECK(parsed.axes.trials == 10);
}

TEST_CASE("config errors name the offending key") {
  const auto check_field = [](const std::string& text, const std::string& field) {
    try {
      (void)medsim::parse_config_json(nlohmann::json::parse(text));
      FAIL(("expected a config error for " + text));
    } catch (const ConfigError& e) {
      CHECK(e.field() == field);
    }
  };
  check_field(R"({"tau2": [-1.0]})", "tau2");
  check_field(R"({"rho": 0.0})", "rho");
  check_field(R"({"K": 0})", "K");
  check_field(R"({"K": "three"})", "K");
  check_field(R"({"banana": 1})", "banana");
  check_field(R"({"family": "weibull"})", "family");
  check_field(R"({"estimator": "median"})", "estimator");
  check_field(R"({"pooling": "bayes"})", "pooling");
  check_field(R"({"alpha": 2.0})", "alpha");
  check_field(R"({"n_min": 2})", "n_min");
  check_field(R"({"n_min": 50, "n_max": 20})", "n_max");
  check_field(R"({"alloc_shape": [1.0]})", "alloc_shape");
  check_field(R"({"trials": 0})", "trials");
  check_field(R"({"reml_max_iter": -1})", "reml_max_iter");
  check_field(R"({"K": []})", "K");
  check_field(R"({"base_rate": {"weibull": 1.0}})", "base_rate");
}

TEST_CASE("base_rate accepts number, list, and per-family forms") {
  const ParsedConfig number =
      medsim::parse_config_json(nlohmann::json::parse(R"({"base_rate": 2.5})"));
  CHECK(number.grid[0].base_params == std::vector<double>{2.5});

  const ParsedConfig list = medsim::parse_config_json(
      nlohmann::json::parse(R"({"family": "normal", "base_rate": [4.0, 0.5]})"));
  CHECK(list.grid[0].base_params == std::vector<double>{4.0, 0.5});

  const ParsedConfig per_family = medsim::parse_config_json(nlohmann::json::parse(
      R"({"family": ["exponential", "cauchy"], "base_rate": {"exponential": 3.0}})"));
  REQUIRE(per_family.grid.size() == 2);
  CHECK(per_family.grid[0].base_params == std::vector<double>{3.0});
  CHECK(per_family.grid[1].base_params == std::vector<double>{3.0, 0.2});

  // Wrong arity for the family is rejected at grid build time.
  CHECK_THROWS_AS((void)medsim::parse_config_json(
                      nlohmann::json::parse(R"({"family": "normal", "base_rate": 2.0})")),
                  ConfigError);
}

TEST_CASE("seed resolution prefers the flag, then the environment, then one") {
  CHECK(medsim::resolve_seed(7, "99") == 7);
  CHECK(medsim::resolve_seed(std::nullopt, "99") == 99);
  CHECK(medsim::resolve_seed(std::nullopt, nullptr) == 1);
  CHECK(medsim::resolve_seed(std::nullopt, "") == 1);
  CHECK_THROWS_AS((void)medsim::resolve_seed(std::nullopt, "not-a-seed"), ConfigError);
  CHECK_THROWS_AS((void)medsim::resolve_seed(std::nullopt, "12x"), ConfigError);
}

TEST_CASE("run_estimate prints the fit as JSON") {
  medsim::EstimateArgs args;
  args.estimator = "g_exp";
  args.n = 10;
  args.median = 4.0;
  std::ostringstream out, err;
  REQUIRE(medsim::run_estimate(args, out, err) == 0);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["se"].get<double>() == doctest::Approx(1.8248809192955502).epsilon(1e-9));
  CHECK(doc["assumed_family"] == "exponential");
  CHECK(doc["fitted_params"].size() == 1);

  medsim::EstimateArgs norm;
  norm.estimator = "g_norm";
  norm.n = 100;
  norm.median = 0.0;
  norm.q1 = -0.6744897501960817;
  norm.q3 = 0.6744897501960817;
  std::ostringstream out2, err2;
  REQUIRE(medsim::run_estimate(norm, out2, err2) == 0);
  const auto doc2 = nlohmann::json::parse(out2.str());
  CHECK(doc2["se"].get<double>() == doctest::Approx(0.12533141373155003).epsilon(1e-9));
}

TEST_CASE("run_estimate fails cleanly on bad input") {
  medsim::EstimateArgs args;
  args.estimator = "g_exp";
  args.n = -3;
  args.median = 4.0;
  std::ostringstream out, err;
  CHECK(medsim::run_estimate(args, out, err) == 1);
  CHECK(out.str().empty());
  CHECK(err.str().find("error:") != std::string::npos);

  medsim::EstimateArgs missing;
  missing.estimator = "g_norm";
  missing.n = 10;
  missing.median = 1.0;
  std::ostringstream out2, err2;
  CHECK(medsim::run_estimate(missing, out2, err2) == 1);
  CHECK(err2.str().find("q1") != std::string::npos);
}

TEST_CASE("run_simulate writes a deterministic dataset") {
  const fs::path dir = fresh_dir("simulate");
  const fs::path config = write_config(dir, R"({"K": 3, "trials": 1})");
  medsim::SimulateArgs args;
  args.config_path = config.string();
  args.seed = 4242;
  args.out_path = (dir / "sample.csv").string();
  std::ostringstream err;
  REQUIRE(medsim::run_simulate(args, err) == 0);
  const std::string first = slurp(dir / "sample.csv");
  CHECK(first.rfind("study,arm,n,median,q1,q3,gamma,rate\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 1 + 2 * 3);
  CHECK(fs::exists(dir / "sample.csv.manifest.json"));

  args.out_path = (dir / "again.csv").string();
  std::ostringstream err2;
  REQUIRE(medsim::run_simulate(args, err2) == 0);
  CHECK(slurp(dir / "again.csv") == first);
}

TEST_CASE("run_simulate wants exactly one cell") {
  const fs::path dir = fresh_dir("simulate-grid");
  const fs::path config = write_config(dir, R"({"K": [3, 5]})");
  medsim::SimulateArgs args;
  args.config_path = config.string();
  args.seed = 1;
  args.out_path = (dir / "sample.csv").string();
  std::ostringstream err;
  CHECK(medsim::run_simulate(args, err) == 1);
  CHECK(err.str().find("single-cell") != std::string::npos);
}

TEST_CASE("run_simulate reports a missing config file") {
  medsim::SimulateArgs args;
  args.config_path = "/nonexistent/config.json";
  args.out_path = "/tmp/medsim-tests/never.csv";
  std::ostringstream err;
  CHECK(medsim::run_simulate(args, err) == 1);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("run_coverage writes the full output set") {
  const fs::path dir = fresh_dir("coverage");
  const fs::path config = write_config(
      dir, R"({"K": [2, 3], "rho": [1.0, 2.0], "trials": 8, "n_min": 12, "n_max": 24})");
  medsim::CoverageArgs args;
  args.config_path = config.string();
  args.seed = 38;
  args.out_dir = (dir / "out").string();
  std::ostringstream err;
  REQUIRE(medsim::run_coverage(args, err) == 0);

  const std::string summary = slurp(dir / "out" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 1 + 4);
  const std::string trials = slurp(dir / "out" / "trials.csv");
  CHECK(std::count(trials.begin(), trials.end(), '\n') == 1 + 4 * 8);

  const auto doc = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(doc["master_seed"] == 38);
  CHECK(doc["trials"] == 8);
  CHECK(doc["cells"].size() == 4);

  const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest["command"] == "coverage");
  CHECK(manifest["master_seed"] == 38);
  CHECK(manifest["engine_version"] == medsim::kEngineVersion);
}

TEST_CASE("run_coverage honours the trials override and single-study mode") {
  const fs::path dir = fresh_dir("coverage-flags");
  const fs::path config =
      write_config(dir, R"({"K": 1, "trials": 50, "n_min": 12, "n_max": 24})");
  medsim::CoverageArgs args;
  args.config_path = config.string();
  args.seed = 7;
  args.out_dir = (dir / "out").string();
  args.trials = 5;
  args.single_study = true;
  std::ostringstream err;
  REQUIRE(medsim::run_coverage(args, err) == 0);
  const std::string trials = slurp(dir / "out" / "trials.csv");
  CHECK(std::count(trials.begin(), trials.end(), '\n') == 1 + 5);
  // Single-study intervals never pool, so every row reports fe.
  std::istringstream rows(trials);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    CHECK(line.find(",fe,") != std::string::npos);
  }
}

TEST_CASE("run_coverage rejects an invalid grid before any work") {
  const fs::path dir = fresh_dir("coverage-invalid");
  const fs::path config = write_config(dir, R"({"K": 1, "pooling": "reml"})");
  medsim::CoverageArgs args;
  args.config_path = config.string();
  args.out_dir = (dir / "out").string();
  std::ostringstream err;
  CHECK(medsim::run_coverage(args, err) == 1);
  CHECK(err.str().find("K") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "summary.csv"));
}
