#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace medsim {

// Invalid run configuration; carries the offending field name so callers and
// error messages can point at the exact key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& detail)
      : std::runtime_error("config field '" + field + "': " + detail),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace medsim
