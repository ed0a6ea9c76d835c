#pragma once

#include <map>
#include <string>
#include <string_view>

#include "benthos/levy.hpp"
#include "benthos/persistence.hpp"
#include "benthos/simulate.hpp"

namespace benthos {

// Raw key/value pairs from a config file, keyed "section.key". The format is
// a flat INI-style text file:
//
//   # comment
//   [model]
//   family = brownian
//   v = 1.0
//
// so experiment setups stay diffable.
using ConfigValues = std::map<std::string, std::string>;

// Parses config text; throws std::invalid_argument naming the offending line
// on malformed input or a duplicate key.
ConfigValues parse_config_text(std::string_view text);

// Reads and parses a file; throws std::runtime_error if it cannot be read.
ConfigValues load_config_file(const std::string& path);

// Model description as it appears in configs and CLI flags.
struct ModelSpec {
  std::string family = "brownian";  // brownian | deterministic |
                                    // exponential-jumps | fixed-jumps
  double v = 1.0;                   // linear drift
  double D = 1.0;                   // diffusion coefficient
  double jump_rate = 1.0;
  double jump_mean = 0.5;  // exponential-jumps: mean downward jump size
  double jump_size = 0.5;  // fixed-jumps: deterministic jump size
};

// Builds the Levy model for a spec; throws std::invalid_argument on an
// unknown family name. Model invariants are checked by the caller via
// require_valid.
LevyModel build_model(const ModelSpec& spec);

// Applies recognized "[model] / [regime] / [sim]" keys onto the three
// parameter structs. Unknown keys and unparsable numbers throw
// std::invalid_argument, so typos never silently fall back to defaults.
void apply_config(const ConfigValues& values, ModelSpec& model,
                  RegimeParams& regime, SimConfig& sim);

}  // namespace benthos
