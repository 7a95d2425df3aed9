#ifndef VACUUMFLOW_CONFIG_H
#define VACUUMFLOW_CONFIG_H

#include <stdexcept>
#include <string>
#include <string_view>

#include "vacuumflow/solver.h"

namespace vacuumflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` text with '#' comments. Unknown keys,
/// duplicates, malformed values and range violations throw ConfigError naming
/// the key and line.
SolverConfig parse_config(std::string_view text);

/// Every key in a fixed order, numbers with 17 significant digits, so that
/// parse_config(emit_config(c)) == c.
std::string emit_config(const SolverConfig& config);

/// Sets one key from its textual value with the same checks as parse_config.
void set_config_value(SolverConfig& config, std::string_view key, std::string_view value, int line = 0);

/// Cross-field checks that need the whole config.
void validate_config(const SolverConfig& config);

}  // namespace vacuumflow

#endif
