#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "wurlab/analytic.hpp"
#include "wurlab/phy.hpp"
#include "wurlab/rng.hpp"
#include "wurlab/scenario.hpp"

namespace wurlab {

// One device's randomized behavior for a cycle: how many messages it holds,
// when (if ever) it wakes, which messages go to the UAV in which slot and on
// which (frequency, SF) resource, and which fall back to the direct link.
struct EdState {
  static constexpr int kNeverWakes = -1;

  struct Frame {
    int message_id;
    int slot;
    int freq;  // 0 .. n_freq-1
    int sf;
  };

  int message_count = 0;
  int wake_slot = kNeverWakes;
  std::vector<Frame> uav_frames;
  std::vector<int> direct_messages;  // message ids
};

// Aggregated outcomes of one full UAV visit.
//
// Raw counts pool every message. The weighted accumulators divide each
// device's contribution by its message count, so a device holding one
// message counts as much as one holding five; that matches the analysis,
// which models the tagged message's owner with a uniform message count
// rather than picking a message from the pooled population (which would
// over-represent busy devices).
struct CycleOutcome {
  std::uint64_t messages = 0;
  std::uint64_t uav_sent = 0;
  std::uint64_t uav_delivered = 0;
  std::uint64_t direct_sent = 0;
  std::uint64_t direct_delivered = 0;
  double tx_energy_mj = 0.0;  // summed over all messages

  double uav_delivered_weight = 0.0;
  double direct_sent_weight = 0.0;
  double direct_delivered_weight = 0.0;
  double tx_energy_weighted_mj = 0.0;     // sum over devices of energy/M
  double tx_energy_weighted_sq = 0.0;     // sum of squares of the above terms
  std::vector<std::uint64_t> sent_per_slot;
  std::vector<std::uint64_t> delivered_per_slot;
  std::vector<double> sent_weight_per_slot;
  std::vector<double> sent_weight_sq_per_slot;
};

// Monte Carlo estimates with enough bookkeeping to judge their precision.
struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t ed_draws = 0;  // trials * device count
  DeliveryReport delivery;
  EnergyReport energy;
  double ci_halfwidth = 0.0;           // 95% normal-approximation half-width on s_total
  double tx_energy_halfwidth_mj = 0.0; // same, for the per-message energy estimate

  std::uint64_t uav_sent = 0;
  std::uint64_t uav_delivered = 0;
  std::uint64_t direct_sent = 0;
  std::uint64_t direct_delivered = 0;
  std::vector<std::uint64_t> sent_per_slot;
  std::vector<std::uint64_t> delivered_per_slot;
  std::vector<double> sent_weight_per_slot;
  std::vector<double> sent_weight_sq_per_slot;

  bool operator==(const SimResult&) const = default;
};

// Validation knobs for the simulator. The defaults implement the intended
// collision rule; `sf_blind_collisions` deliberately breaks it (a same-slot,
// same-frequency clash kills frames regardless of SF) so consistency checks
// can prove they would catch a wrong model.
struct SimOptions {
  bool sf_blind_collisions = false;
};

inline double binomial_halfwidth(double p_hat, std::uint64_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

// Draw one device's cycle behavior.
//
// Draw order (fixed; part of the determinism contract): message count, then
// one wake-up Bernoulli per slot until the first success, then the slot or
// message selection, then per-frame frequency and SF.
inline EdState draw_ed_state(const ScenarioConfig& cfg, Rng& rng) {
  EdState ed;
  ed.message_count = 1 + rng.next_int_below(cfg.m_max);

  ed.wake_slot = EdState::kNeverWakes;
  for (int i = 0; i < cfg.n_slots; ++i) {
    if (rng.bernoulli(cfg.p_wub)) {
      ed.wake_slot = i;
      break;
    }
  }

  if (ed.wake_slot == EdState::kNeverWakes) {
    ed.direct_messages.resize(static_cast<std::size_t>(ed.message_count));
    std::iota(ed.direct_messages.begin(), ed.direct_messages.end(), 0);
    return ed;
  }

  const int remaining = cfg.n_slots - ed.wake_slot;
  const int sf_count = cfg.sf_set.size();

  if (ed.message_count <= remaining) {
    // Pick message_count distinct slots from the remaining window
    // (partial Fisher-Yates over the slot indices).
    std::vector<int> slots(static_cast<std::size_t>(remaining));
    std::iota(slots.begin(), slots.end(), ed.wake_slot);
    for (int m = 0; m < ed.message_count; ++m) {
      const int j = m + rng.next_int_below(remaining - m);
      std::swap(slots[static_cast<std::size_t>(m)], slots[static_cast<std::size_t>(j)]);
      EdState::Frame frame;
      frame.message_id = m;
      frame.slot = slots[static_cast<std::size_t>(m)];
      frame.freq = rng.next_int_below(cfg.n_freq);
      frame.sf = cfg.sf_set.min_sf() + rng.next_int_below(sf_count);
      ed.uav_frames.push_back(frame);
    }
  } else {
    // More messages than slots: pick which messages ride to the UAV, one per
    // remaining slot; the rest go out on the direct link.
    std::vector<int> ids(static_cast<std::size_t>(ed.message_count));
    std::iota(ids.begin(), ids.end(), 0);
    for (int m = 0; m < remaining; ++m) {
      const int j = m + rng.next_int_below(ed.message_count - m);
      std::swap(ids[static_cast<std::size_t>(m)], ids[static_cast<std::size_t>(j)]);
      EdState::Frame frame;
      frame.message_id = ids[static_cast<std::size_t>(m)];
      frame.slot = ed.wake_slot + m;
      frame.freq = rng.next_int_below(cfg.n_freq);
      frame.sf = cfg.sf_set.min_sf() + rng.next_int_below(sf_count);
      ed.uav_frames.push_back(frame);
    }
    ed.direct_messages.assign(ids.begin() + remaining, ids.end());
  }
  return ed;
}

// Simulate one UAV visit: every device draws its behavior, frames clash when
// they share a (slot, frequency, SF) resource, and direct messages survive an
// independent erasure. Transmit energy is charged per frame at its airtime.
inline CycleOutcome simulate_cycle(const ScenarioConfig& cfg, Rng& rng,
                                   const SimOptions& options = {}) {
  const int sf_count = cfg.sf_set.size();
  const int sf_dims = options.sf_blind_collisions ? 1 : sf_count;

  std::vector<double> uav_frame_energy(static_cast<std::size_t>(sf_count));
  for (int k = 0; k < sf_count; ++k) {
    uav_frame_energy[static_cast<std::size_t>(k)] =
        dbm_to_milliwatts(cfg.tx_power_uav_dbm) *
        frame_airtime(SpreadingFactor(cfg.sf_set.min_sf() + k), cfg.phy);
  }
  const double direct_frame_energy =
      dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy);

  CycleOutcome out;
  out.sent_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0);
  out.delivered_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0);
  out.sent_weight_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0.0);
  out.sent_weight_sq_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0.0);

  std::vector<EdState> eds;
  eds.reserve(static_cast<std::size_t>(cfg.n_eds));
  for (int e = 0; e < cfg.n_eds; ++e) {
    eds.push_back(draw_ed_state(cfg, rng));
  }

  // Occupancy of each (slot, frequency, SF) resource.
  std::vector<std::uint32_t> occupancy(
      static_cast<std::size_t>(cfg.n_slots) * static_cast<std::size_t>(cfg.n_freq) *
          static_cast<std::size_t>(sf_dims),
      0);
  const auto bucket = [&](const EdState::Frame& f) {
    const std::size_t sf_index =
        options.sf_blind_collisions ? 0 : static_cast<std::size_t>(f.sf - cfg.sf_set.min_sf());
    return (static_cast<std::size_t>(f.slot) * static_cast<std::size_t>(cfg.n_freq) +
            static_cast<std::size_t>(f.freq)) *
               static_cast<std::size_t>(sf_dims) +
           sf_index;
  };

  for (const EdState& ed : eds) {
    for (const EdState::Frame& frame : ed.uav_frames) {
      ++occupancy[bucket(frame)];
    }
  }

  for (const EdState& ed : eds) {
    out.messages += static_cast<std::uint64_t>(ed.message_count);
    const auto count = static_cast<double>(ed.message_count);
    const double weight = 1.0 / count;
    double ed_energy = 0.0;
    std::uint64_t ed_uav_delivered = 0;
    std::uint64_t ed_direct_delivered = 0;
    for (const EdState::Frame& frame : ed.uav_frames) {
      ++out.uav_sent;
      ++out.sent_per_slot[static_cast<std::size_t>(frame.slot)];
      out.sent_weight_per_slot[static_cast<std::size_t>(frame.slot)] += weight;
      out.sent_weight_sq_per_slot[static_cast<std::size_t>(frame.slot)] += weight * weight;
      ed_energy += uav_frame_energy[static_cast<std::size_t>(frame.sf - cfg.sf_set.min_sf())];
      if (occupancy[bucket(frame)] == 1) {
        ++out.uav_delivered;
        ++out.delivered_per_slot[static_cast<std::size_t>(frame.slot)];
        ++ed_uav_delivered;
      }
    }
    for (std::size_t d = 0; d < ed.direct_messages.size(); ++d) {
      ++out.direct_sent;
      ed_energy += direct_frame_energy;
      if (rng.bernoulli(cfg.p_direct)) {
        ++out.direct_delivered;
        ++ed_direct_delivered;
      }
    }
    // One division per device keeps the corner cases exact (all or none of a
    // device's messages on one path contribute exactly 1 or 0).
    out.uav_delivered_weight += static_cast<double>(ed_uav_delivered) / count;
    out.direct_sent_weight += static_cast<double>(ed.direct_messages.size()) / count;
    out.direct_delivered_weight += static_cast<double>(ed_direct_delivered) / count;
    out.tx_energy_mj += ed_energy;
    const double ed_energy_weighted = ed_energy / count;
    out.tx_energy_weighted_mj += ed_energy_weighted;
    out.tx_energy_weighted_sq += ed_energy_weighted * ed_energy_weighted;
  }
  return out;
}

// Run independent cycles and reduce them into point estimates. Deterministic
// for a fixed (config, trials, seed): trial t consumes the substream
// Rng::for_trial(seed, t), and the reduction is a fixed-order accumulation.
inline SimResult run_trials(const ScenarioConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                            const SimOptions& options = {}) {
  if (trials == 0) {
    throw std::invalid_argument("trials must be >= 1");
  }
  SimResult result;
  result.trials = trials;
  result.seed = seed;
  result.sent_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0);
  result.delivered_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0);
  result.sent_weight_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0.0);
  result.sent_weight_sq_per_slot.assign(static_cast<std::size_t>(cfg.n_slots), 0.0);

  double uav_delivered_weight = 0.0;
  double direct_sent_weight = 0.0;
  double direct_delivered_weight = 0.0;
  double energy_weighted_mj = 0.0;
  double energy_weighted_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, t);
    const CycleOutcome cycle = simulate_cycle(cfg, rng, options);
    result.total_messages += cycle.messages;
    result.uav_sent += cycle.uav_sent;
    result.uav_delivered += cycle.uav_delivered;
    result.direct_sent += cycle.direct_sent;
    result.direct_delivered += cycle.direct_delivered;
    uav_delivered_weight += cycle.uav_delivered_weight;
    direct_sent_weight += cycle.direct_sent_weight;
    direct_delivered_weight += cycle.direct_delivered_weight;
    energy_weighted_mj += cycle.tx_energy_weighted_mj;
    energy_weighted_sq += cycle.tx_energy_weighted_sq;
    for (int s = 0; s < cfg.n_slots; ++s) {
      result.sent_per_slot[static_cast<std::size_t>(s)] +=
          cycle.sent_per_slot[static_cast<std::size_t>(s)];
      result.delivered_per_slot[static_cast<std::size_t>(s)] +=
          cycle.delivered_per_slot[static_cast<std::size_t>(s)];
      result.sent_weight_per_slot[static_cast<std::size_t>(s)] +=
          cycle.sent_weight_per_slot[static_cast<std::size_t>(s)];
      result.sent_weight_sq_per_slot[static_cast<std::size_t>(s)] +=
          cycle.sent_weight_sq_per_slot[static_cast<std::size_t>(s)];
    }
  }

  result.ed_draws = trials * static_cast<std::uint64_t>(cfg.n_eds);
  const auto draws = static_cast<double>(result.ed_draws);
  result.delivery.s_uav = uav_delivered_weight / draws;
  result.delivery.s_direct = direct_delivered_weight / draws;
  result.delivery.s_total = result.delivery.s_uav + result.delivery.s_direct;
  result.delivery.lambda = direct_sent_weight / draws;
  result.energy.tx_energy_mj = energy_weighted_mj / draws;
  result.energy.rx_airtime_s_per_cycle = 0.0;
  result.ci_halfwidth = binomial_halfwidth(result.delivery.s_total, result.total_messages);
  const double energy_var = std::max(
      energy_weighted_sq / draws - result.energy.tx_energy_mj * result.energy.tx_energy_mj, 0.0);
  result.tx_energy_halfwidth_mj = 1.96 * std::sqrt(energy_var / draws);
  return result;
}

// Aggregate backoff-collision statistics.
struct DirectBackoffStats {
  std::uint64_t frames = 0;
  std::uint64_t lost = 0;

  double fraction() const {
    return frames == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(frames);
  }
};

namespace detail {

inline DirectBackoffStats direct_backoff_cycle(const ScenarioConfig& cfg, Rng& rng) {
  std::vector<std::uint32_t> occupancy(
      static_cast<std::size_t>(cfg.backoff_max + 1) * static_cast<std::size_t>(cfg.n_freq), 0);
  std::vector<std::size_t> drawn;
  for (int e = 0; e < cfg.n_eds; ++e) {
    const EdState ed = draw_ed_state(cfg, rng);
    for (std::size_t d = 0; d < ed.direct_messages.size(); ++d) {
      const auto backoff = static_cast<std::size_t>(rng.next_int_below(cfg.backoff_max + 1));
      const auto freq = static_cast<std::size_t>(rng.next_int_below(cfg.n_freq));
      const std::size_t cell = backoff * static_cast<std::size_t>(cfg.n_freq) + freq;
      ++occupancy[cell];
      drawn.push_back(cell);
    }
  }
  DirectBackoffStats stats;
  stats.frames = drawn.size();
  for (const std::size_t cell : drawn) {
    if (occupancy[cell] > 1) ++stats.lost;
  }
  return stats;
}

}  // namespace detail

// One cycle of the direct-transmission backoff: every direct frame picks a
// backoff slot in {0..backoff_max} and a frequency band; frames clash when
// both match (all direct frames share one SF). Returns the fraction of direct
// frames lost this way, 0 when the cycle produced none. Complements the
// constant-erasure direct-link model by measuring when backoff collisions are
// actually negligible.
inline double simulate_direct_backoff(const ScenarioConfig& cfg, Rng& rng) {
  return detail::direct_backoff_cycle(cfg, rng).fraction();
}

inline DirectBackoffStats direct_backoff_trials(const ScenarioConfig& cfg, std::uint64_t cycles,
                                                std::uint64_t seed) {
  DirectBackoffStats stats;
  for (std::uint64_t t = 0; t < cycles; ++t) {
    Rng rng = Rng::for_trial(seed, t);
    const DirectBackoffStats cycle = detail::direct_backoff_cycle(cfg, rng);
    stats.frames += cycle.frames;
    stats.lost += cycle.lost;
  }
  return stats;
}

}  // namespace wurlab
