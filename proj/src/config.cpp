#include "megtomo/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

namespace megtomo {

nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got \"" + assignment + "\"");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot - start));
    if (parts.back().empty()) {
      throw ConfigError("override key has an empty path component: \"" + key + "\"");
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;

  nlohmann::json* cur = &config;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    cur = &((*cur)[parts[i]]);
    if (!cur->is_object() && !cur->is_null()) {
      throw ConfigError("override path \"" + key + "\" descends into a non-object field");
    }
  }
  (*cur)[parts.back()] = std::move(parsed);
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown config key \"" + prefix + key + "\"");
    }
  }
}

const nlohmann::json& require_field(const nlohmann::json& obj, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing required field \"" + key + "\"");
  return obj.at(key);
}

int get_int(const nlohmann::json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("field \"" + key + "\" must be an integer");
  return v.get<int>();
}

double get_double(const nlohmann::json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("field \"" + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t get_seed(const nlohmann::json& obj, const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
    throw ConfigError("field \"" + key + "\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_required_string(const nlohmann::json& obj, const std::string& key) {
  const auto& v = require_field(obj, key);
  if (!v.is_string()) throw ConfigError("field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

ScenarioConfig scenario_config_from_json(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(config,
                      {"name", "description", "dim", "scheme", "evolution", "t_tot", "n_states",
                       "n_noise_repeats", "master_seed", "threshold", "burn_in", "noise", "meg"},
                      "");

  ScenarioConfig cfg;
  const auto& dim_field = require_field(config, "dim");
  if (!dim_field.is_number_integer()) throw ConfigError("field \"dim\" must be an integer");
  cfg.dim = dim_field.get<int>();

  try {
    cfg.scheme = scheme_from_name(get_required_string(config, "scheme"));
    cfg.evolution = evolution_from_name(get_required_string(config, "evolution"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  cfg.t_tot = get_int(config, "t_tot", cfg.t_tot);
  cfg.n_states = get_int(config, "n_states", cfg.n_states);
  cfg.n_noise_repeats = get_int(config, "n_noise_repeats", cfg.n_noise_repeats);
  cfg.master_seed = get_seed(config, "master_seed", cfg.master_seed);
  cfg.threshold = get_double(config, "threshold", cfg.threshold);
  cfg.burn_in = get_int(config, "burn_in", cfg.burn_in);

  if (config.contains("noise")) {
    const auto& noise = config.at("noise");
    if (!noise.is_object()) throw ConfigError("field \"noise\" must be an object");
    reject_unknown_keys(
        noise, {"signal_rate", "dark_rate", "background_rate", "extra_background_rate"}, "noise.");
    cfg.noise.signal_rate = get_double(noise, "signal_rate", cfg.noise.signal_rate);
    cfg.noise.dark_rate = get_double(noise, "dark_rate", cfg.noise.dark_rate);
    cfg.noise.background_rate = get_double(noise, "background_rate", cfg.noise.background_rate);
    cfg.noise.extra_background_rate =
        get_double(noise, "extra_background_rate", cfg.noise.extra_background_rate);
  }
  if (config.contains("meg")) {
    const auto& meg = config.at("meg");
    if (!meg.is_object()) throw ConfigError("field \"meg\" must be an object");
    reject_unknown_keys(meg, {"learning_rate", "eta_decay", "log_floor"}, "meg.");
    cfg.meg.learning_rate = get_double(meg, "learning_rate", cfg.meg.learning_rate);
    cfg.meg.eta_decay = get_double(meg, "eta_decay", cfg.meg.eta_decay);
    cfg.meg.log_floor = get_double(meg, "log_floor", cfg.meg.log_floor);
  }
  cfg.meg.dim = cfg.dim;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

nlohmann::json scenario_config_to_json(const ScenarioConfig& cfg) {
  return {{"dim", cfg.dim},
          {"scheme", scheme_name(cfg.scheme)},
          {"evolution", evolution_name(cfg.evolution)},
          {"t_tot", cfg.t_tot},
          {"n_states", cfg.n_states},
          {"n_noise_repeats", cfg.n_noise_repeats},
          {"master_seed", cfg.master_seed},
          {"threshold", cfg.threshold},
          {"burn_in", cfg.burn_in},
          {"noise",
           {{"signal_rate", cfg.noise.signal_rate},
            {"dark_rate", cfg.noise.dark_rate},
            {"background_rate", cfg.noise.background_rate},
            {"extra_background_rate", cfg.noise.extra_background_rate}}},
          {"meg",
           {{"learning_rate", cfg.meg.learning_rate},
            {"eta_decay", cfg.meg.eta_decay},
            {"log_floor", cfg.meg.log_floor}}}};
}

std::string resolve_preset(const std::string& name) {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("MEGTOMO_PRESET_DIR")) dirs.emplace_back(env);
#ifdef MEGTOMO_PRESET_DIR
  dirs.emplace_back(MEGTOMO_PRESET_DIR);
#endif
  dirs.emplace_back("presets");

  for (const auto& dir : dirs) {
    const std::string path = dir + "/" + name + ".json";
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) return path;
  }
  std::string searched;
  for (const auto& dir : dirs) {
    if (!searched.empty()) searched += ", ";
    searched += dir;
  }
  throw ConfigError("preset \"" + name + "\" not found (searched: " + searched + ")");
}

}  // namespace megtomo
