#include "becdecay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "becdecay/constants.hpp"

namespace becdecay {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(std::string_view key, std::string_view value,
                 std::string_view origin) {
  const std::string token(value);
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || token.empty() ||
      !std::isfinite(x)) {
    throw ConfigError(std::string(origin) + ": key '" + std::string(key) +
                      "' has a malformed number '" + token + "'");
  }
  return x;
}

int to_count(std::string_view key, std::string_view value,
             std::string_view origin) {
  const double x = to_number(key, value, origin);
  const int n = static_cast<int>(x);
  if (static_cast<double>(n) != x) {
    throw ConfigError(std::string(origin) + ": key '" + std::string(key) +
                      "' must be an integer, got '" + std::string(value) +
                      "'");
  }
  return n;
}

}  // namespace

std::string mode_word(RunMode m) {
  switch (m) {
    case RunMode::full: return "full";
    case RunMode::simple_attribution: return "simple";
    case RunMode::simple_literal: return "literal";
    case RunMode::pure_condensate: return "pure";
    case RunMode::ideal: return "ideal";
  }
  return "?";
}

std::vector<RunMode> parse_mode(std::string_view word) {
  if (word == "full") return {RunMode::full};
  if (word == "simple") return {RunMode::simple_attribution};
  if (word == "literal") return {RunMode::simple_literal};
  if (word == "pure") return {RunMode::pure_condensate};
  if (word == "ideal") return {RunMode::ideal};
  if (word == "all") {
    return {RunMode::full, RunMode::simple_attribution,
            RunMode::pure_condensate};
  }
  throw ConfigError("mode '" + std::string(word) +
                    "' is not one of full, simple, literal, pure, ideal, all");
}

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
  std::map<std::string, std::string, std::less<>> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + std::string(s) +
                        "'");
    }
    const std::string key{trim(s.substr(0, eq))};
    const std::string value{trim(s.substr(eq + 1))};
    if (key.empty() || value.empty()) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
  }

  static const std::vector<std::string> kRequired = {
      "freq_x",   "freq_y", "freq_z",  "tau_s", "mass_kg", "a_m",
      "chi_cm3s", "xi_cm6s", "N_C",    "t_end_s", "samples", "mode"};
  static const std::vector<std::string> kOptional = {
      "N_T", "T_K", "freq_unit", "profile", "out_dir", "plot"};

  std::string unknown;
  for (const auto& [key, value] : kv) {
    if (std::find(kRequired.begin(), kRequired.end(), key) ==
            kRequired.end() &&
        std::find(kOptional.begin(), kOptional.end(), key) ==
            kOptional.end()) {
      unknown += (unknown.empty() ? "" : ", ") + key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError(std::string(origin) + ": unknown key(s): " + unknown);
  }

  std::string missing;
  for (const auto& key : kRequired) {
    if (!kv.count(key)) missing += (missing.empty() ? "" : ", ") + key;
  }
  if (!missing.empty()) {
    throw ConfigError(std::string(origin) +
                      ": missing required key(s): " + missing);
  }

  auto get = [&](std::string_view key) -> std::string_view {
    return kv.find(key)->second;
  };
  auto num = [&](std::string_view key) {
    return to_number(key, get(key), origin);
  };
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(std::string(origin) + ": " + what);
  };

  RunConfig cfg;

  double scale = 2.0 * kPi;  // freq_unit = Hz
  if (kv.count("freq_unit")) {
    const auto unit = get("freq_unit");
    if (unit == "Hz") {
      scale = 2.0 * kPi;
    } else if (unit == "rad/s") {
      scale = 1.0;
    } else {
      throw ConfigError(std::string(origin) + ": freq_unit must be Hz or " +
                        "rad/s, got '" + std::string(unit) + "'");
    }
  }
  cfg.trap.omega_x = scale * num("freq_x");
  cfg.trap.omega_y = scale * num("freq_y");
  cfg.trap.omega_z = scale * num("freq_z");
  cfg.trap.tau = num("tau_s");
  require(cfg.trap.omega_x > 0 && cfg.trap.omega_y > 0 && cfg.trap.omega_z > 0,
          "freq_x, freq_y, freq_z must be positive");
  require(cfg.trap.tau > 0, "tau_s must be positive");

  cfg.species.mass = num("mass_kg");
  cfg.species.a = num("a_m");
  cfg.species.chi = 1e-6 * num("chi_cm3s");  // cm^3/s -> m^3/s
  cfg.species.xi = 1e-12 * num("xi_cm6s");   // cm^6/s -> m^6/s
  require(cfg.species.mass > 0, "mass_kg must be positive");
  require(cfg.species.a > 0, "a_m must be positive");
  require(cfg.species.chi >= 0, "chi_cm3s must be non-negative");
  require(cfg.species.xi >= 0, "xi_cm6s must be non-negative");

  cfg.N_C = num("N_C");
  require(cfg.N_C > 0, "N_C must be positive");

  const bool has_nt = kv.count("N_T") > 0;
  const bool has_t = kv.count("T_K") > 0;
  require(has_nt != has_t, "exactly one of N_T and T_K must be given");
  if (has_nt) {
    cfg.N_T = num("N_T");
    require(cfg.N_T > 0, "N_T must be positive");
  } else {
    cfg.T_K = num("T_K");
    require(cfg.T_K > 0, "T_K must be positive");
  }

  cfg.t_end = num("t_end_s");
  require(cfg.t_end > 0, "t_end_s must be positive");
  cfg.samples = to_count("samples", get("samples"), origin);
  require(cfg.samples >= 2, "samples must be at least 2");

  try {
    cfg.modes = parse_mode(get("mode"));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }

  if (kv.count("profile")) {
    cfg.profile = std::string(get("profile"));
    require(cfg.profile == "tf" || cfg.profile == "gp",
            "profile must be tf or gp, got '" + cfg.profile + "'");
  }
  if (kv.count("out_dir")) cfg.out_dir = std::string(get("out_dir"));
  if (kv.count("plot")) cfg.plot = std::string(get("plot"));

  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config_text(body.str(), path);
}

}  // namespace becdecay
