// Acceptance suite: end-to-end checks of the analytic model, the simulator,
// their agreement, the trend studies and the CLI contract. Prints one
// PASS/FAIL line per criterion; the exit code is the number of failures.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "airtime_fixture.hpp"
#include "wurlab/analytic.hpp"
#include "wurlab/rng.hpp"
#include "wurlab/scenario.hpp"
#include "wurlab/simulator.hpp"
#include "wurlab/sweep.hpp"

namespace {

using namespace wurlab;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

ScenarioConfig random_config(Rng& rng) {
  ScenarioConfig cfg;
  cfg.n_eds = 1 + static_cast<int>(rng.next_below(60));
  cfg.m_max = 1 + static_cast<int>(rng.next_below(8));
  cfg.n_freq = 1 + static_cast<int>(rng.next_below(16));
  cfg.n_slots = 1 + static_cast<int>(rng.next_below(40));
  cfg.p_wub = rng.next_unit();
  cfg.p_direct = rng.next_unit();
  cfg.sf_set = SfSet(7 + static_cast<int>(rng.next_below(6)));
  cfg.sf_direct = SpreadingFactor(7 + static_cast<int>(rng.next_below(6)));
  cfg.tx_power_uav_dbm = -10.0 + 30.0 * rng.next_unit();
  cfg.tx_power_direct_dbm = -10.0 + 30.0 * rng.next_unit();
  cfg.phy.payload_bytes = 1 + static_cast<int>(rng.next_below(32));
  return cfg;
}

// Criterion 1: simulated s_total, s_uav and lambda match the closed form
// within three binomial half-widths on the default scenario and a 45-point
// grid, with at least 2e5 simulated messages per point.
Outcome criterion_agreement() {
  Outcome outcome;
  std::vector<ScenarioConfig> points;
  points.push_back(ScenarioConfig{});
  for (const double p_wub : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (const int n_slots : {5, 10, 25}) {
      for (const int max_sf : {7, 10, 12}) {
        ScenarioConfig cfg;
        cfg.p_wub = p_wub;
        cfg.n_slots = n_slots;
        cfg.sf_set = SfSet(max_sf);
        points.push_back(cfg);
      }
    }
  }

  std::uint64_t point_index = 0;
  for (const ScenarioConfig& cfg : points) {
    const SimResult sim = run_trials(cfg, 2500, 90210 + point_index);
    ++point_index;
    if (sim.total_messages < 200000) {
      outcome.fail("only " + std::to_string(sim.total_messages) + " messages at point " +
                   std::to_string(point_index));
      continue;
    }
    const DeliveryReport analytic = mdp_wur(cfg);
    const auto check = [&](const char* name, double estimate, double expected) {
      // The 5/N floor covers rare-event corners: when the estimate is zero
      // the binomial half-width collapses, yet a true probability of a few
      // expected events in N samples is fully consistent with observing none.
      const double tolerance = 3.0 * binomial_halfwidth(estimate, sim.total_messages) +
                               5.0 / static_cast<double>(sim.total_messages);
      if (std::fabs(estimate - expected) > tolerance) {
        outcome.fail(std::string(name) + " off by " + fmt(std::fabs(estimate - expected)) +
                     " > " + fmt(tolerance) + " at p_wub=" + fmt(cfg.p_wub) +
                     " n_slots=" + std::to_string(cfg.n_slots) +
                     " max_sf=" + std::to_string(cfg.sf_set.max_sf()));
      }
    };
    check("s_total", sim.delivery.s_total, analytic.s_total);
    check("s_uav", sim.delivery.s_uav, analytic.s_uav);
    check("lambda", sim.delivery.lambda, analytic.lambda);
  }
  return outcome;
}

// Criteria 2 and 3 share a 100-config randomized grid.
std::vector<ScenarioConfig> randomized_grid() {
  std::vector<ScenarioConfig> grid;
  Rng rng = Rng::seeded(271828);
  for (int i = 0; i < 100; ++i) grid.push_back(random_config(rng));
  return grid;
}

// Criterion 2: with a certain wake-up the scheme reduces to ideal Class B,
// in delivery and in transmit energy, to 1e-12.
Outcome criterion_classb_reduction() {
  Outcome outcome;
  for (ScenarioConfig cfg : randomized_grid()) {
    const DeliveryReport classb = mdp_classb(cfg);
    const double classb_tx = energy_classb(cfg).tx_energy_mj;
    cfg.p_wub = 1.0;
    const DeliveryReport wur = mdp_wur(cfg);
    const double wur_tx = energy_wur(cfg).tx_energy_mj;
    const double delivery_dev =
        std::max(std::max(std::fabs(wur.s_total - classb.s_total),
                          std::fabs(wur.s_uav - classb.s_uav)),
                 std::max(std::fabs(wur.s_direct - classb.s_direct),
                          std::fabs(wur.lambda - classb.lambda)));
    if (delivery_dev > 1e-12) {
      outcome.fail("delivery deviation " + fmt(delivery_dev));
    }
    if (std::fabs(wur_tx - classb_tx) > 1e-12) {
      outcome.fail("tx energy deviation " + fmt(std::fabs(wur_tx - classb_tx)));
    }
  }
  return outcome;
}

// Criterion 3: the wake-up pmf normalizes and the per-slot transmission
// masses complement the direct-fallback probability, to 1e-12.
Outcome criterion_identities() {
  Outcome outcome;
  for (const ScenarioConfig& cfg : randomized_grid()) {
    const WakeupPmf pmf = wakeup_pmf(cfg);
    double total = pmf.never_wakes;
    for (const double m : pmf.mass) total += m;
    if (std::fabs(total - 1.0) > 1e-12) {
      outcome.fail("pmf sums to 1" + fmt(total - 1.0));
    }
    double mass = 0.0;
    for (int s = 0; s < cfg.n_slots; ++s) mass += msg_tx_prob(s, cfg);
    const double lambda = not_sent_to_uav_prob(cfg);
    if (std::fabs(mass - (1.0 - lambda)) > 1e-12) {
      outcome.fail("tx mass vs lambda off by " + fmt(std::fabs(mass - (1.0 - lambda))));
    }
  }
  return outcome;
}

// Criterion 4: sweeping the direct-link quality from 0 to 1 in steps of
// 0.05: the direct scheme equals the grid exactly, wake-up and Class B stay
// within 0.01 of each other everywhere, and both exceed the direct curve at
// every grid point up to and including 0.9.
Outcome criterion_direct_link_trend() {
  Outcome outcome;
  const ScenarioConfig base;
  for (int i = 0; i <= 20; ++i) {
    const double p_direct = static_cast<double>(i) / 20.0;
    ScenarioConfig cfg = base;
    cfg.p_direct = p_direct;
    const double wur = mdp_wur(cfg).s_total;
    const double classb = mdp_classb(cfg).s_total;
    const double direct = mdp_direct(cfg).s_total;
    if (direct != p_direct) {
      outcome.fail("direct scheme != grid at " + fmt(p_direct));
    }
    if (std::fabs(wur - classb) >= 0.01) {
      outcome.fail("|wur-classb| = " + fmt(std::fabs(wur - classb)) + " at p_direct=" +
                   fmt(p_direct));
    }
    if (p_direct <= 0.9) {
      if (!(wur > direct)) {
        outcome.fail("wur " + fmt(wur) + " <= direct " + fmt(direct) + " at p_direct=" +
                     fmt(p_direct));
      }
      if (!(classb > direct)) {
        outcome.fail("classb " + fmt(classb) + " <= direct " + fmt(direct) + " at p_direct=" +
                     fmt(p_direct));
      }
    }
  }
  return outcome;
}

// Criterion 5: delivery is non-decreasing in the largest SF for 10 and 25
// slots, and the larger window dominates at every SF.
Outcome criterion_sf_set_trend() {
  Outcome outcome;
  for (int max_sf = 7; max_sf <= 12; ++max_sf) {
    double previous10 = 0.0;
    double previous25 = 0.0;
    ScenarioConfig cfg;
    cfg.sf_set = SfSet(max_sf);
    cfg.n_slots = 10;
    const double s10 = mdp_wur(cfg).s_total;
    cfg.n_slots = 25;
    const double s25 = mdp_wur(cfg).s_total;
    if (max_sf > 7) {
      ScenarioConfig prev;
      prev.sf_set = SfSet(max_sf - 1);
      prev.n_slots = 10;
      previous10 = mdp_wur(prev).s_total;
      prev.n_slots = 25;
      previous25 = mdp_wur(prev).s_total;
      if (s10 < previous10 - 1e-12) {
        outcome.fail("s_total decreased in max_sf at n_slots=10, max_sf=" +
                     std::to_string(max_sf));
      }
      if (s25 < previous25 - 1e-12) {
        outcome.fail("s_total decreased in max_sf at n_slots=25, max_sf=" +
                     std::to_string(max_sf));
      }
    }
    if (s25 < s10 - 1e-12) {
      outcome.fail("25 slots worse than 10 at max_sf=" + std::to_string(max_sf));
    }
  }
  return outcome;
}

// Criterion 6: the direct scheme pays more transmit energy per message than
// either UAV-aided scheme at every SF set, and the two UAV-aided schemes
// price within 2% of each other at the defaults.
Outcome criterion_energy_trend() {
  Outcome outcome;
  for (int max_sf = 7; max_sf <= 12; ++max_sf) {
    ScenarioConfig cfg;
    cfg.sf_set = SfSet(max_sf);
    const double direct = energy_direct(cfg).tx_energy_mj;
    const double wur = energy_wur(cfg).tx_energy_mj;
    const double classb = energy_classb(cfg).tx_energy_mj;
    if (!(direct > wur) || !(direct > classb)) {
      outcome.fail("direct energy not dominant at max_sf=" + std::to_string(max_sf));
    }
  }
  const ScenarioConfig defaults;
  const double wur = energy_wur(defaults).tx_energy_mj;
  const double classb = energy_classb(defaults).tx_energy_mj;
  const double relative = std::fabs(wur - classb) / classb;
  if (relative >= 0.02) {
    outcome.fail("wur vs classb tx energy differs by " + fmt(100.0 * relative) + "%");
  }
  return outcome;
}

// Criterion 7: delivery vs wake-up probability is non-decreasing with 25
// slots but non-monotone with 10.
Outcome criterion_wakeup_trend() {
  Outcome outcome;
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);

  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScenarioConfig cfg;
    cfg.n_slots = 25;
    cfg.p_wub = grid[i];
    const double s = mdp_wur(cfg).s_total;
    if (i > 0 && s < previous - 1e-12) {
      outcome.fail("n_slots=25 curve decreased at p_wub=" + fmt(grid[i]));
    }
    previous = s;
  }

  bool found_decrease = false;
  previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScenarioConfig cfg;
    cfg.n_slots = 10;
    cfg.p_wub = grid[i];
    const double s = mdp_wur(cfg).s_total;
    if (i > 0 && s < previous - 1e-9) found_decrease = true;
    previous = s;
  }
  if (!found_decrease) {
    outcome.fail("n_slots=10 curve is monotone, expected a decrease somewhere");
  }
  return outcome;
}

// Criterion 8: Class B listening airtime at the default timing is 11.6064 s
// per cycle (SF9 pings and beacons, no LDRO), and the wake-up scheme reports
// zero.
Outcome criterion_listening_cost() {
  Outcome outcome;
  const ScenarioConfig cfg;
  const double airtime = energy_classb(cfg).rx_airtime_s_per_cycle;
  if (std::fabs(airtime - 11.6064) > 1e-6) {
    outcome.fail("classb rx airtime " + fmt(airtime) + " != 11.6064");
  }
  if (energy_wur(cfg).rx_airtime_s_per_cycle != 0.0) {
    outcome.fail("wur rx airtime not zero");
  }
  return outcome;
}

// Criterion 9: the airtime fixture.
Outcome criterion_airtime_fixture() {
  Outcome outcome;
  for (const AirtimeCase& c : kAirtimeFixture) {
    PhyParams phy;
    phy.bandwidth_hz = 125000.0;
    phy.payload_bytes = c.payload_bytes;
    phy.ldro_threshold_sf = 11;
    const double airtime = frame_airtime(SpreadingFactor(c.sf), phy);
    if (std::fabs(airtime - c.seconds) > 1e-9) {
      outcome.fail("SF" + std::to_string(c.sf) + "/" + std::to_string(c.payload_bytes) +
                   "B: " + fmt(airtime) + " != " + fmt(c.seconds));
    }
  }
  return outcome;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Criterion 10: the CLI produces byte-identical CSV across two runs with the
// same seed, for both `simulate` and `sweep`.
Outcome criterion_cli_determinism() {
  Outcome outcome;
#ifndef WURLAB_CLI_BIN
  outcome.fail("CLI path not configured");
  return outcome;
#else
  const std::filesystem::path dir = "wurlab_acceptance_tmp";
  std::filesystem::create_directories(dir);
  const auto run = [&](const std::string& args, const std::filesystem::path& out) {
    const std::string command =
        std::string("\"") + WURLAB_CLI_BIN + "\" " + args + " --out \"" + out.string() + "\"";
    return std::system(command.c_str());
  };

  const std::filesystem::path sim1 = dir / "sim1.csv";
  const std::filesystem::path sim2 = dir / "sim2.csv";
  if (run("simulate --trials 400 --seed 7", sim1) != 0 ||
      run("simulate --trials 400 --seed 7", sim2) != 0) {
    outcome.fail("simulate run failed");
  } else if (read_file(sim1) != read_file(sim2) || read_file(sim1).empty()) {
    outcome.fail("simulate output differs between runs");
  }

  const std::filesystem::path sweep1 = dir / "sweep1.csv";
  const std::filesystem::path sweep2 = dir / "sweep2.csv";
  if (run("sweep --preset fig4 --mode both --trials 120 --seed 9", sweep1) != 0 ||
      run("sweep --preset fig4 --mode both --trials 120 --seed 9", sweep2) != 0) {
    outcome.fail("sweep run failed");
  } else if (read_file(sweep1) != read_file(sweep2) || read_file(sweep1).empty()) {
    outcome.fail("sweep output differs between runs");
  }

  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return outcome;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* description;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "analysis-simulation agreement on the 45-point grid (3 half-widths, >=2e5 messages)",
       criterion_agreement},
      {2, "Class B reduction identity over 100 randomized scenarios (1e-12)",
       criterion_classb_reduction},
      {3, "pmf normalization and transmission-mass identity (1e-12)", criterion_identities},
      {4, "direct-link sweep: exact direct curve, wur/classb within 0.01, both above direct "
          "through 0.9",
       criterion_direct_link_trend},
      {5, "delivery non-decreasing in the SF set; 25 slots dominate 10", criterion_sf_set_trend},
      {6, "direct transmission costs the most energy; UAV-aided schemes within 2%",
       criterion_energy_trend},
      {7, "wake-up sweep monotone at 25 slots, non-monotone at 10", criterion_wakeup_trend},
      {8, "Class B listening airtime equals 11.6064 s per cycle (1e-6)",
       criterion_listening_cost},
      {9, "frame airtimes match the hand-computed fixture (1e-9)", criterion_airtime_fixture},
      {10, "CLI simulate and sweep are byte-identical across reruns", criterion_cli_determinism},
  };

  // Optional argument: run a single criterion by number (used by ctest to
  // report each criterion separately).
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1..%zu]\n", argv[0], criteria.size());
      return 64;
    }
  }

  int failures = 0;
  int ran = 0;
  for (const Criterion& criterion : criteria) {
    if (only != 0 && criterion.number != only) continue;
    ++ran;
    const Outcome outcome = criterion.check();
    if (outcome.pass) {
      std::printf("PASS criterion %2d: %s\n", criterion.number, criterion.description);
    } else {
      ++failures;
      std::printf("FAIL criterion %2d: %s [%s]\n", criterion.number, criterion.description,
                  outcome.detail.c_str());
    }
  }
  if (only == 0) {
    if (failures == 0) {
      std::printf("all %zu criteria passed\n", criteria.size());
    } else {
      std::printf("%d of %d criteria failed\n", failures, ran);
    }
  }
  return failures;
}
