#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "medsim/simulate.hpp"

namespace medsim {

struct ParsedConfig {
  GridAxes axes;
  std::vector<SimConfig> grid;  // sim_df(axes); position is the config_id
  int reml_max_iter = 200;
};

// Parse and validate a run configuration.  Axis keys (K, tau2, rho, family,
// estimator, pooling) accept a scalar or a list; base_rate accepts a number,
// a parameter list, or a per-family object; the rest are scalars.  Unknown
// keys and out-of-range values throw ConfigError naming the key.
ParsedConfig parse_config_json(const nlohmann::json& doc);

// Same, reading the JSON document from a file.
ParsedConfig parse_config(const std::filesystem::path& path);

}  // namespace medsim
