#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "megtomo/benchmark.hpp"

namespace megtomo {

// Malformed or inconsistent configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads and parses a JSON config file; errors name the file and position.
nlohmann::json load_config_json(const std::string& path);

// Applies a dotted-path override of the form "noise.signal_rate=1e6" onto the
// raw config object. Values are parsed as JSON where possible and fall back to
// strings (so scheme=mub works unquoted).
void apply_override(nlohmann::json& config, const std::string& assignment);

// Validating parser. Required keys: dim, scheme, evolution. Everything else
// defaults to the reference experiment; unknown keys are rejected by name.
ScenarioConfig scenario_config_from_json(const nlohmann::json& config);

// Round-trips through the same schema the parser accepts.
nlohmann::json scenario_config_to_json(const ScenarioConfig& cfg);

// Locates <name>.json in $MEGTOMO_PRESET_DIR, the build-time preset directory,
// or ./presets, in that order.
std::string resolve_preset(const std::string& name);

}  // namespace megtomo
