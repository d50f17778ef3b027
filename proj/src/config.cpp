#include "medsim/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "medsim/errors.hpp"

namespace medsim {

namespace {

using nlohmann::json;

double as_double(const json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError(key, "expected a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) throw ConfigError(key, "expected an integer");
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& key) {
  if (!value.is_string()) throw ConfigError(key, "expected a string");
  return value.get<std::string>();
}

// Scalar-or-list axis values; a scalar is a one-element axis.
template <typename T, typename Convert>
std::vector<T> as_axis(const json& value, const std::string& key, Convert convert) {
  std::vector<T> out;
  if (value.is_array()) {
    for (const auto& item : value) out.push_back(convert(item, key));
  } else {
    out.push_back(convert(value, key));
  }
  if (out.empty()) throw ConfigError(key, "axis must hold at least one value");
  return out;
}

std::vector<double> as_param_list(const json& value, const std::string& key) {
  std::vector<double> params;
  if (value.is_array()) {
    for (const auto& item : value) params.push_back(as_double(item, key));
  } else {
    params.push_back(as_double(value, key));
  }
  if (params.empty()) throw ConfigError(key, "parameter list must not be empty");
  return params;
}

}  // namespace

ParsedConfig parse_config_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "document must be a JSON object");

  static const std::set<std::string> known = {
      "K",     "tau2",  "rho",         "family", "estimator",     "pooling",
      "base_rate", "n_min", "n_max", "alloc_shape", "alpha", "trials", "reml_max_iter"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError(key, "unknown key");
  }

  ParsedConfig parsed;
  GridAxes& axes = parsed.axes;

  if (doc.contains("K")) axes.studies = as_axis<int>(doc["K"], "K", as_int);
  if (doc.contains("tau2")) axes.tau2 = as_axis<double>(doc["tau2"], "tau2", as_double);
  if (doc.contains("rho")) axes.rho = as_axis<double>(doc["rho"], "rho", as_double);
  const auto named = [](auto parse_name) {
    return [parse_name](const json& v, const std::string& k) {
      try {
        return parse_name(as_string(v, k));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k, e.what());
      }
    };
  };
  if (doc.contains("family")) {
    axes.families = as_axis<Family>(doc["family"], "family", named(family_from_name));
  }
  if (doc.contains("estimator")) {
    axes.estimators =
        as_axis<EstimatorId>(doc["estimator"], "estimator", named(estimator_from_name));
  }
  if (doc.contains("pooling")) {
    axes.poolings = as_axis<Pooling>(doc["pooling"], "pooling", named(pooling_from_name));
  }

  if (doc.contains("base_rate")) {
    const json& base = doc["base_rate"];
    if (base.is_object()) {
      for (const auto& [name, value] : base.items()) {
        Family family;
        try {
          family = family_from_name(name);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("base_rate", e.what());
        }
        axes.base_params[family] = as_param_list(value, "base_rate");
      }
    } else {
      const auto params = as_param_list(base, "base_rate");
      for (Family family : axes.families) axes.base_params[family] = params;
    }
  }

  if (doc.contains("n_min")) axes.n_min = as_int(doc["n_min"], "n_min");
  if (doc.contains("n_max")) axes.n_max = as_int(doc["n_max"], "n_max");
  if (doc.contains("alloc_shape")) {
    const json& shape = doc["alloc_shape"];
    if (!shape.is_array() || shape.size() != 2) {
      throw ConfigError("alloc_shape", "expected a two-element array [beta1, beta2]");
    }
    axes.alloc_shape.beta1 = as_double(shape[0], "alloc_shape");
    axes.alloc_shape.beta2 = as_double(shape[1], "alloc_shape");
  }
  if (doc.contains("alpha")) axes.alpha = as_double(doc["alpha"], "alpha");
  if (doc.contains("trials")) axes.trials = as_int(doc["trials"], "trials");
  if (doc.contains("reml_max_iter")) {
    parsed.reml_max_iter = as_int(doc["reml_max_iter"], "reml_max_iter");
    if (parsed.reml_max_iter < 0) throw ConfigError("reml_max_iter", "must be nonnegative");
  }

  parsed.grid = sim_df(axes);
  return parsed;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

}  // namespace medsim
