#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wurlab/analytic.hpp"
#include "wurlab/scenario.hpp"
#include "wurlab/simulator.hpp"

namespace wurlab {

// One consistency check: passes when the measured deviation stays within the
// stated tolerance.
struct VerifyCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_messages = 0;

  bool all_pass() const {
    for (const VerifyCheck& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Cross-validate the closed-form model and the simulator on one scenario:
// exact identities of the analysis, the reduction of the wake-up scheme to
// ideal Class B when every beacon lands, and agreement between simulated and
// analytic estimates within three confidence half-widths.
//
// `options` exists for validation exercises: running with a deliberately
// broken collision rule must make the agreement checks fail.
inline VerifyReport verify(const ScenarioConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                           const SimOptions& options = {}) {
  validate(cfg);
  VerifyReport report;
  report.trials = trials;
  report.seed = seed;
  const auto add = [&report](std::string name, double measured, double tolerance) {
    report.checks.push_back({std::move(name), measured <= tolerance, measured, tolerance});
  };

  // Wake-slot distribution sums to one.
  {
    const WakeupPmf pmf = wakeup_pmf(cfg);
    double total = 0.0;
    for (const double mass : pmf.mass) total += mass;
    total += pmf.never_wakes;
    add("pmf_normalization", std::abs(total - 1.0), 1e-12);
  }

  // Per-slot transmission masses and the direct-fallback probability
  // partition a message's fate.
  {
    double mass = 0.0;
    for (int s = 0; s < cfg.n_slots; ++s) mass += msg_tx_prob(s, cfg);
    const double lambda = not_sent_to_uav_prob(cfg);
    add("tx_mass_identity", std::abs(mass - (1.0 - lambda)), 1e-12);
  }

  // With a certain wake-up the scheme must coincide with ideal Class B.
  {
    ScenarioConfig certain = cfg;
    certain.p_wub = 1.0;
    const DeliveryReport wur = mdp_wur(certain);
    const DeliveryReport classb = mdp_classb(cfg);
    double dev = std::abs(wur.s_total - classb.s_total);
    dev = std::max(dev, std::abs(wur.s_uav - classb.s_uav));
    dev = std::max(dev, std::abs(wur.s_direct - classb.s_direct));
    dev = std::max(dev, std::abs(wur.lambda - classb.lambda));
    add("classb_reduction_delivery", dev, 1e-12);
    add("classb_reduction_tx_energy",
        std::abs(energy_wur(certain).tx_energy_mj - energy_classb(cfg).tx_energy_mj), 1e-12);
  }

  // Every reported probability lies in [0,1].
  {
    double violation = 0.0;
    for (const DeliveryReport& d : {mdp_wur(cfg), mdp_classb(cfg), mdp_direct(cfg)}) {
      for (const double p : {d.s_total, d.s_uav, d.s_direct, d.lambda}) {
        violation = std::max(violation, std::max(-p, p - 1.0));
      }
    }
    add("probability_bounds", std::max(violation, 0.0), 0.0);
  }

  // Transmit energy is a mixture of the two frame costs, so it cannot leave
  // their envelope.
  {
    const double uav_mj =
        dbm_to_milliwatts(cfg.tx_power_uav_dbm) * detail::mean_uav_frame_airtime(cfg);
    const double direct_mj =
        dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy);
    const double lo = std::min(uav_mj, direct_mj);
    const double hi = std::max(uav_mj, direct_mj);
    const double tx = energy_wur(cfg).tx_energy_mj;
    add("energy_mixture_bounds", std::max(lo - tx, tx - hi), 1e-12);
  }

  // Simulation against the closed form. Each estimate gets its own binomial
  // half-width. The 5/N floor covers rare-event corners: a true probability
  // worth a few expected events in N samples is consistent with observing
  // none, where the estimate-based half-width collapses to zero.
  {
    const SimResult sim = run_trials(cfg, trials, seed, options);
    report.total_messages = sim.total_messages;
    const double floor = 5.0 / static_cast<double>(sim.total_messages);
    const DeliveryReport analytic = mdp_wur(cfg);
    const auto agreement = [&](const char* name, double estimated, double expected) {
      const double halfwidth = binomial_halfwidth(estimated, sim.total_messages);
      add(std::string("sim_vs_analytic_") + name, std::abs(estimated - expected),
          3.0 * halfwidth + floor);
    };
    agreement("s_total", sim.delivery.s_total, analytic.s_total);
    agreement("s_uav", sim.delivery.s_uav, analytic.s_uav);
    agreement("lambda", sim.delivery.lambda, analytic.lambda);
    add("sim_vs_analytic_tx_energy",
        std::abs(sim.energy.tx_energy_mj - energy_wur(cfg).tx_energy_mj),
        3.0 * sim.tx_energy_halfwidth_mj + floor * energy_wur(cfg).tx_energy_mj);
  }

  return report;
}

}  // namespace wurlab
