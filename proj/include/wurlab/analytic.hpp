#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wurlab/phy.hpp"
#include "wurlab/scenario.hpp"

namespace wurlab {

// Distribution of the slot in which a device first hears a wake-up beacon.
// Beacons are independent per slot, so the wake slot is geometric, truncated
// to the collection window; the residual mass is the chance the device never
// wakes while the UAV is present.
struct WakeupPmf {
  std::vector<double> mass;  // mass[i] = P(device wakes in slot i)
  double never_wakes = 0.0;
};

// Delivery probabilities for one scheme: via the UAV, via the direct link,
// and their total. `lambda` is the probability a message is never picked for
// UAV transmission and falls back to the direct link.
struct DeliveryReport {
  double s_uav = 0.0;
  double s_direct = 0.0;
  double s_total = 0.0;
  double lambda = 0.0;

  bool operator==(const DeliveryReport&) const = default;
};

// Average radio energy per message (transmit side) and per cycle (receive
// side). Receive cost is reported as airtime so it stays meaningful without
// committing to a receiver power draw; the absolute figure is filled in only
// when one is supplied.
struct EnergyReport {
  double tx_energy_mj = 0.0;
  double rx_airtime_s_per_cycle = 0.0;
  std::optional<double> rx_energy_mj_per_cycle;

  bool operator==(const EnergyReport&) const = default;
};

namespace detail {

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

inline void check_slot(int slot, const ScenarioConfig& cfg, const char* what) {
  if (slot < 0 || slot >= cfg.n_slots) {
    throw std::domain_error(std::string(what) + " slot index out of range [0," +
                            std::to_string(cfg.n_slots - 1) + "]: " + std::to_string(slot));
  }
}

// Mean airtime of one device-to-UAV frame under uniform SF hopping.
inline double mean_uav_frame_airtime(const ScenarioConfig& cfg) {
  const double eta = sf_probability(cfg.sf_set);
  double mean = 0.0;
  for (int k = cfg.sf_set.min_sf(); k <= cfg.sf_set.max_sf(); ++k) {
    mean += eta * frame_airtime(SpreadingFactor(k), cfg.phy);
  }
  return mean;
}

}  // namespace detail

inline WakeupPmf wakeup_pmf(const ScenarioConfig& cfg) {
  WakeupPmf pmf;
  pmf.mass.resize(static_cast<std::size_t>(cfg.n_slots));
  const double miss = 1.0 - cfg.p_wub;
  for (int i = 0; i < cfg.n_slots; ++i) {
    pmf.mass[static_cast<std::size_t>(i)] = std::pow(miss, i) * cfg.p_wub;
  }
  pmf.never_wakes = std::pow(miss, cfg.n_slots);
  return pmf;
}

// Probability that a device holding `msg_count` messages, awake since slot
// `wake_slot`, transmits a frame in slot `slot`. A device that woke in slot i
// spreads its messages over the n_slots - i remaining slots and cannot
// transmit before waking.
inline double cond_tx_prob(int slot, int wake_slot, int msg_count, const ScenarioConfig& cfg) {
  detail::check_slot(slot, cfg, "transmit");
  detail::check_slot(wake_slot, cfg, "wake");
  if (msg_count < 1 || msg_count > cfg.m_max) {
    throw std::domain_error("message count out of range [1," + std::to_string(cfg.m_max) +
                            "]: " + std::to_string(msg_count));
  }
  if (slot < wake_slot) return 0.0;
  const double remaining = static_cast<double>(cfg.n_slots - wake_slot);
  return std::min(static_cast<double>(msg_count) / remaining, 1.0);
}

// Probability that one specific other device transmits in slot `slot`,
// averaged over its message count and wake slot.
inline double collision_prob(int slot, const ScenarioConfig& cfg) {
  detail::check_slot(slot, cfg, "collision");
  const WakeupPmf pmf = wakeup_pmf(cfg);
  double sum = 0.0;
  for (int m0 = 1; m0 <= cfg.m_max; ++m0) {
    for (int i = 0; i <= slot; ++i) {
      const double remaining = static_cast<double>(cfg.n_slots - i);
      sum += std::min(static_cast<double>(m0) / remaining, 1.0) *
             pmf.mass[static_cast<std::size_t>(i)];
    }
  }
  return detail::clamp01(sum / static_cast<double>(cfg.m_max));
}

// A concurrent frame destroys ours only when it also lands on the same
// frequency band and uses the same SF.
inline double single_ed_loss_prob(int slot, const ScenarioConfig& cfg) {
  return sf_probability(cfg.sf_set) / static_cast<double>(cfg.n_freq) *
         collision_prob(slot, cfg);
}

// Probability a frame sent to the UAV in slot `slot` survives all n-1 other
// devices.
inline double uav_success_prob(int slot, const ScenarioConfig& cfg) {
  return std::pow(1.0 - single_ed_loss_prob(slot, cfg), cfg.n_eds - 1);
}

// Probability that an arbitrary message of an arbitrary device goes out over
// slot `slot`: the device must be awake by then, the message must be among
// those picked for the UAV, and that pick must land on this slot.
inline double msg_tx_prob(int slot, const ScenarioConfig& cfg) {
  detail::check_slot(slot, cfg, "transmit");
  const WakeupPmf pmf = wakeup_pmf(cfg);
  double sum = 0.0;
  for (int m0 = 1; m0 <= cfg.m_max; ++m0) {
    for (int i = 0; i <= slot; ++i) {
      const double remaining = static_cast<double>(cfg.n_slots - i);
      sum += pmf.mass[static_cast<std::size_t>(i)] *
             std::min(remaining / static_cast<double>(m0), 1.0) / remaining;
    }
  }
  return detail::clamp01(sum / static_cast<double>(cfg.m_max));
}

// Probability a message is never picked for UAV transmission (late wake-up or
// more messages than remaining slots) and is sent on the direct link instead.
inline double not_sent_to_uav_prob(const ScenarioConfig& cfg) {
  const WakeupPmf pmf = wakeup_pmf(cfg);
  double sum = 0.0;
  for (int m0 = 1; m0 <= cfg.m_max; ++m0) {
    for (int i = 0; i < cfg.n_slots; ++i) {
      const double remaining = static_cast<double>(cfg.n_slots - i);
      sum += pmf.mass[static_cast<std::size_t>(i)] *
             std::min(remaining / static_cast<double>(m0), 1.0);
    }
  }
  return detail::clamp01(1.0 - sum / static_cast<double>(cfg.m_max));
}

// Message delivery probability under the wake-up-radio scheme.
inline DeliveryReport mdp_wur(const ScenarioConfig& cfg) {
  DeliveryReport report;
  double s_uav = 0.0;
  for (int s = 0; s < cfg.n_slots; ++s) {
    s_uav += msg_tx_prob(s, cfg) * uav_success_prob(s, cfg);
  }
  report.lambda = not_sent_to_uav_prob(cfg);
  report.s_uav = detail::clamp01(s_uav);
  report.s_direct = detail::clamp01(report.lambda * cfg.p_direct);
  report.s_total = detail::clamp01(report.s_uav + report.s_direct);
  return report;
}

// Average transmit energy per message under the wake-up-radio scheme, in
// millijoules: a mixture of the SF-hopped UAV frame and the long direct
// frame. The wake-up receiver's own draw is negligible, so the receive side
// is zero.
inline EnergyReport energy_wur(const ScenarioConfig& cfg) {
  const double lambda = not_sent_to_uav_prob(cfg);
  EnergyReport report;
  report.tx_energy_mj =
      (1.0 - lambda) * dbm_to_milliwatts(cfg.tx_power_uav_dbm) * detail::mean_uav_frame_airtime(cfg) +
      lambda * dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy);
  report.rx_airtime_s_per_cycle = 0.0;
  return report;
}

// Baseline without UAV: every message rides the direct link.
inline DeliveryReport mdp_direct(const ScenarioConfig& cfg) {
  DeliveryReport report;
  report.s_uav = 0.0;
  report.s_direct = cfg.p_direct;
  report.s_total = cfg.p_direct;
  report.lambda = 1.0;
  return report;
}

inline EnergyReport energy_direct(const ScenarioConfig& cfg) {
  EnergyReport report;
  report.tx_energy_mj =
      dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy);
  return report;
}

namespace detail {

// Collision probability when every device is awake from slot 0 and spreads
// its messages over the full window.
inline double classb_collision_prob(const ScenarioConfig& cfg) {
  double sum = 0.0;
  for (int m0 = 1; m0 <= cfg.m_max; ++m0) {
    sum += std::min(static_cast<double>(m0) / static_cast<double>(cfg.n_slots), 1.0);
  }
  return sum / static_cast<double>(cfg.m_max);
}

// Direct-fallback probability with a full window: messages overflow only
// when a device holds more of them than there are slots.
inline double classb_lambda(const ScenarioConfig& cfg) {
  double sum = 0.0;
  for (int m0 = 1; m0 <= cfg.m_max; ++m0) {
    sum += std::min(static_cast<double>(cfg.n_slots) / static_cast<double>(m0), 1.0);
  }
  return clamp01(1.0 - sum / static_cast<double>(cfg.m_max));
}

}  // namespace detail

// Idealized Class B baseline: lossless beacons and pings wake every device
// right when the UAV arrives, so all devices share the full window. Does not
// depend on the wake-up beacon probability.
inline DeliveryReport mdp_classb(const ScenarioConfig& cfg) {
  const double p_col = detail::classb_collision_prob(cfg);
  const double lambda = detail::classb_lambda(cfg);
  const double loss =
      sf_probability(cfg.sf_set) / static_cast<double>(cfg.n_freq) * p_col;
  DeliveryReport report;
  report.lambda = lambda;
  report.s_uav = detail::clamp01((1.0 - lambda) * std::pow(1.0 - loss, cfg.n_eds - 1));
  report.s_direct = detail::clamp01(lambda * cfg.p_direct);
  report.s_total = detail::clamp01(report.s_uav + report.s_direct);
  return report;
}

// Class B energy: the transmit mixture, plus the cost of listening to
// periodic pings and beacons over one UAV visit period. Receive cost is
// (T_u/T_p)*L_ping + (T_u/T_b)*L_beacon seconds of airtime per cycle.
inline EnergyReport energy_classb(const ScenarioConfig& cfg,
                                  std::optional<double> p_rx_mw = std::nullopt) {
  if (!(cfg.ping_period_s > 0.0)) {
    throw ConfigError(ConfigError::Kind::invariant, "ping_period_s", "must be positive");
  }
  if (!(cfg.beacon_period_s > 0.0)) {
    throw ConfigError(ConfigError::Kind::invariant, "beacon_period_s", "must be positive");
  }
  if (cfg.uav_period_s < 0.0) {
    throw ConfigError(ConfigError::Kind::invariant, "uav_period_s", "must be non-negative");
  }
  const double lambda = detail::classb_lambda(cfg);
  EnergyReport report;
  report.tx_energy_mj =
      (1.0 - lambda) * dbm_to_milliwatts(cfg.tx_power_uav_dbm) * detail::mean_uav_frame_airtime(cfg) +
      lambda * dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy);
  const double ping_airtime = frame_airtime(cfg.sf_beacon, cfg.phy.with_payload(cfg.ping_bytes));
  const double beacon_airtime = frame_airtime(cfg.sf_beacon, cfg.phy.with_payload(cfg.beacon_bytes));
  report.rx_airtime_s_per_cycle = cfg.uav_period_s / cfg.ping_period_s * ping_airtime +
                                  cfg.uav_period_s / cfg.beacon_period_s * beacon_airtime;
  if (p_rx_mw) {
    report.rx_energy_mj_per_cycle = *p_rx_mw * report.rx_airtime_s_per_cycle;
  }
  return report;
}

}  // namespace wurlab
