#pragma once

#include <stdexcept>
#include <string>

namespace gantry {

// Raised for invalid problem specs, algorithm parameters, grids and config files.
// `field` names the offending key when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : std::runtime_error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gantry
