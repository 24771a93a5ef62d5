#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "wurlab/scenario.hpp"

namespace wurlab {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_double_field(const std::string& field, std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw ConfigError(ConfigError::Kind::parse, field, "not a number: '" + owned + "'");
  }
  return value;
}

inline int parse_int_field(const std::string& field, std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  const long value = std::strtol(owned.c_str(), &end, 10);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw ConfigError(ConfigError::Kind::parse, field, "not an integer: '" + owned + "'");
  }
  if (value < -(1L << 30) || value > (1L << 30)) {
    throw ConfigError(ConfigError::Kind::parse, field, "integer out of range: '" + owned + "'");
  }
  return static_cast<int>(value);
}

inline void apply_config_key(ScenarioConfig& cfg, const std::string& key, std::string_view value) {
  const auto as_sf = [&key, value]() {
    try {
      return SpreadingFactor(parse_int_field(key, value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ConfigError::Kind::invariant, key, e.what());
    }
  };
  if (key == "n_eds") {
    cfg.n_eds = parse_int_field(key, value);
  } else if (key == "m_max") {
    cfg.m_max = parse_int_field(key, value);
  } else if (key == "n_freq") {
    cfg.n_freq = parse_int_field(key, value);
  } else if (key == "n_slots") {
    cfg.n_slots = parse_int_field(key, value);
  } else if (key == "p_wub") {
    cfg.p_wub = parse_double_field(key, value);
  } else if (key == "p_direct") {
    cfg.p_direct = parse_double_field(key, value);
  } else if (key == "max_sf") {
    try {
      cfg.sf_set = SfSet(parse_int_field(key, value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ConfigError::Kind::invariant, key, e.what());
    }
  } else if (key == "sf_direct") {
    cfg.sf_direct = as_sf();
  } else if (key == "sf_beacon") {
    cfg.sf_beacon = as_sf();
  } else if (key == "tx_power_uav_dbm") {
    cfg.tx_power_uav_dbm = parse_double_field(key, value);
  } else if (key == "tx_power_direct_dbm") {
    cfg.tx_power_direct_dbm = parse_double_field(key, value);
  } else if (key == "bandwidth_hz") {
    cfg.phy.bandwidth_hz = parse_double_field(key, value);
  } else if (key == "payload_bytes") {
    cfg.phy.payload_bytes = parse_int_field(key, value);
  } else if (key == "ldro_threshold_sf") {
    cfg.phy.ldro_threshold_sf = parse_int_field(key, value);
  } else if (key == "uav_period_s") {
    cfg.uav_period_s = parse_double_field(key, value);
  } else if (key == "ping_period_s") {
    cfg.ping_period_s = parse_double_field(key, value);
  } else if (key == "beacon_period_s") {
    cfg.beacon_period_s = parse_double_field(key, value);
  } else if (key == "ping_bytes") {
    cfg.ping_bytes = parse_int_field(key, value);
  } else if (key == "beacon_bytes") {
    cfg.beacon_bytes = parse_int_field(key, value);
  } else if (key == "backoff_max") {
    cfg.backoff_max = parse_int_field(key, value);
  } else {
    throw ConfigError(ConfigError::Kind::parse, key, "unknown key");
  }
}

}  // namespace detail

// Parse the flat key-value scenario format: one `key: value` per line
// (`key = value` also accepted), `#` comments, blank lines ignored. Any field
// not mentioned keeps its default. Unknown keys and invariant violations are
// errors that name the field.
inline ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    std::size_t sep = line.find(':');
    if (sep == std::string_view::npos) sep = line.find('=');
    if (sep == std::string_view::npos) {
      throw ConfigError(ConfigError::Kind::parse, "",
                        "line " + std::to_string(line_no) + ": expected 'key: value'");
    }
    const std::string key(detail::trim(line.substr(0, sep)));
    const std::string_view value = detail::trim(line.substr(sep + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(ConfigError::Kind::parse, key,
                        "line " + std::to_string(line_no) + ": empty key or value");
    }
    detail::apply_config_key(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ConfigError::Kind::missing_file, "", "cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

// Stable 64-bit fingerprint of a scenario, for output provenance lines.
inline std::uint64_t config_fingerprint(const ScenarioConfig& cfg) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%d;%d;%d;%d;%.17g;%.17g;%d;%d;%.17g;%.17g;%.17g;%d;%d;%.17g;%.17g;%.17g;%d;%d;%d;%d",
                cfg.n_eds, cfg.m_max, cfg.n_freq, cfg.n_slots, cfg.p_wub, cfg.p_direct,
                cfg.sf_set.max_sf(), cfg.sf_direct.value(), cfg.tx_power_uav_dbm,
                cfg.tx_power_direct_dbm, cfg.phy.bandwidth_hz, cfg.phy.payload_bytes,
                cfg.phy.ldro_threshold_sf, cfg.uav_period_s, cfg.ping_period_s,
                cfg.beacon_period_s, cfg.ping_bytes, cfg.beacon_bytes, cfg.sf_beacon.value(),
                cfg.backoff_max);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char* p = buf; *p != '\0'; ++p) {
    hash ^= static_cast<unsigned char>(*p);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace wurlab
