#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "wurlab/phy.hpp"

namespace wurlab {

// Configuration problem: a missing file, a malformed line, or a field value
// that violates its invariant. Carries the offending field name when known.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { missing_file, parse, invariant };

  ConfigError(Kind kind, std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        kind_(kind),
        field_(std::move(field)) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

// One data-collection scenario: cluster size, traffic model, wake-up and
// direct-link qualities, radio resources, and the Class B timing used by the
// synchronization baseline. Single source of truth for both the closed-form
// model and the simulator. Defaults describe a 30-device cluster visited
// hourly by the UAV.
struct ScenarioConfig {
  int n_eds = 30;        // devices in the cluster
  int m_max = 5;         // messages per device are uniform on {1..m_max}
  int n_freq = 8;        // orthogonal frequency bands on the uplink
  int n_slots = 25;      // slots in the UAV's collection window
  double p_wub = 0.75;   // probability one wake-up beacon wakes a device
  double p_direct = 0.75;  // delivery probability of the long direct link

  SfSet sf_set{10};            // SF hopping set for device-to-UAV frames
  SpreadingFactor sf_direct{11};  // SF for direct transmissions to the station

  double tx_power_uav_dbm = 6.0;      // device-to-UAV transmit power
  double tx_power_direct_dbm = 14.0;  // device-to-station transmit power

  PhyParams phy{};

  double uav_period_s = 3600.0;   // time between UAV visits
  double ping_period_s = 64.0;    // Class B ping period
  double beacon_period_s = 128.0; // Class B beacon period
  int ping_bytes = 4;
  int beacon_bytes = 16;
  SpreadingFactor sf_beacon{9};   // SF used for Class B pings and beacons

  int backoff_max = 1000;  // direct-transmission backoff window (simulator only)

  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw ConfigError(ConfigError::Kind::invariant, field, why);
}

}  // namespace detail

// Full invariant check; throws ConfigError naming the first offending field.
inline void validate(const ScenarioConfig& cfg) {
  using detail::require;
  require(cfg.n_eds >= 1, "n_eds", "must be >= 1");
  require(cfg.m_max >= 1, "m_max", "must be >= 1");
  require(cfg.n_freq >= 1, "n_freq", "must be >= 1");
  require(cfg.n_slots >= 1, "n_slots", "must be >= 1");
  require(cfg.p_wub >= 0.0 && cfg.p_wub <= 1.0, "p_wub", "must be a probability in [0,1]");
  require(cfg.p_direct >= 0.0 && cfg.p_direct <= 1.0, "p_direct",
          "must be a probability in [0,1]");
  require(cfg.phy.bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
  require(cfg.phy.payload_bytes >= 1, "payload_bytes", "must be >= 1");
  require(cfg.phy.ldro_threshold_sf >= 7 && cfg.phy.ldro_threshold_sf <= 13,
          "ldro_threshold_sf", "must be in [7,13] (13 disables LDRO)");
  require(cfg.uav_period_s > 0.0, "uav_period_s", "must be positive");
  require(cfg.ping_period_s > 0.0, "ping_period_s", "must be positive");
  require(cfg.beacon_period_s > 0.0, "beacon_period_s", "must be positive");
  require(cfg.ping_bytes >= 1, "ping_bytes", "must be >= 1");
  require(cfg.beacon_bytes >= 1, "beacon_bytes", "must be >= 1");
  require(cfg.backoff_max >= 0, "backoff_max", "must be >= 0");
}

}  // namespace wurlab
