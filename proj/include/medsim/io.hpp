#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "medsim/engine.hpp"

namespace medsim {

// Doubles in text outputs: 9 significant digits, which is beyond every
// tolerance used in this project.
std::string format_g9(double value);

std::string iso8601_utc_now();

// Per-trial log, one row per (cell, trial).  Errored trials keep the row
// (method "error", covered 0) with empty numeric fields, so recounts can see
// the full denominator.
void write_trial_log_csv(std::ostream& out, const CoverageReport& report);

// One row per cell: flattened config, the coverage results, and the seed.
void write_summary_csv(std::ostream& out, const CoverageReport& report);

// Same summary as JSON, with run metadata on top.
nlohmann::json summary_json(const CoverageReport& report);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::uint64_t master_seed = 0;
  std::string engine_version;
  std::string started_at;
  std::string finished_at;
};

nlohmann::json manifest_json(const RunManifest& manifest);

}  // namespace medsim
