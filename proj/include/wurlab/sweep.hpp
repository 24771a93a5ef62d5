#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wurlab/analytic.hpp"
#include "wurlab/config_io.hpp"
#include "wurlab/csv.hpp"
#include "wurlab/scenario.hpp"
#include "wurlab/simulator.hpp"
#include "wurlab/version.hpp"

namespace wurlab {

enum class Scheme { wur, classb, direct };
enum class RunMode { analytic, simulate, both };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::wur: return "wur";
    case Scheme::classb: return "classb";
    case Scheme::direct: return "direct";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "wur") return Scheme::wur;
  if (name == "classb") return Scheme::classb;
  if (name == "direct") return Scheme::direct;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected wur, classb or direct)");
}

inline const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::analytic: return "analytic";
    case RunMode::simulate: return "simulate";
    case RunMode::both: return "both";
  }
  return "?";
}

inline RunMode parse_mode(std::string_view name) {
  if (name == "analytic") return RunMode::analytic;
  if (name == "simulate") return RunMode::simulate;
  if (name == "both") return RunMode::both;
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (expected analytic, simulate or both)");
}

// One-parameter grid study over a base scenario.
struct SweepSpec {
  std::string parameter;
  std::vector<double> grid;
  std::vector<Scheme> schemes = {Scheme::wur, Scheme::classb, Scheme::direct};
  RunMode mode = RunMode::analytic;
  std::uint64_t trials = 2500;
  std::uint64_t seed = 1;
};

// One CSV output row. Monte Carlo rows carry the scheme name with a `_sim`
// suffix and a non-zero confidence half-width; analytic rows use the bare
// scheme name and half-width zero.
struct SweepRow {
  std::string parameter;
  double value = 0.0;
  std::string scheme;
  double s_total = 0.0;
  double s_uav = 0.0;
  double s_direct = 0.0;
  double lambda = 0.0;
  double tx_energy_mj = 0.0;
  double rx_airtime_s = 0.0;
  double ci_halfwidth = 0.0;

  bool operator==(const SweepRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "parameter,value,scheme,s_total,s_uav,s_direct,lambda,tx_energy_mj,rx_airtime_s,ci_halfwidth";

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names = {"p_direct", "max_sf", "n_slots", "p_wub",
                                                 "sf_beacon"};
  return names;
}

namespace detail {

inline int as_integer_parameter(const std::string& name, double value) {
  const double rounded = std::floor(value);
  if (rounded != value) {
    throw std::invalid_argument("parameter '" + name + "' requires an integer value, got " +
                                csv_number(value));
  }
  return static_cast<int>(rounded);
}

// Seed for grid point `index`, mixed so that point substreams never coincide
// with the per-trial substreams derived inside run_trials.
inline std::uint64_t derive_point_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  return splitmix64(state);
}

}  // namespace detail

// Set one sweepable field on a scenario. Unknown names are a usage error.
inline void apply_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
  if (name == "p_direct") {
    cfg.p_direct = value;
  } else if (name == "p_wub") {
    cfg.p_wub = value;
  } else if (name == "max_sf") {
    cfg.sf_set = SfSet(detail::as_integer_parameter(name, value));
  } else if (name == "n_slots") {
    cfg.n_slots = detail::as_integer_parameter(name, value);
  } else if (name == "sf_beacon") {
    cfg.sf_beacon = SpreadingFactor(detail::as_integer_parameter(name, value));
  } else {
    std::string allowed;
    for (const std::string& p : sweep_parameters()) {
      if (!allowed.empty()) allowed += ", ";
      allowed += p;
    }
    throw std::invalid_argument("unknown sweep parameter '" + name + "' (allowed: " + allowed +
                                ")");
  }
}

// Closed-form evaluation of one scheme.
inline SweepRow analytic_row(const ScenarioConfig& cfg, Scheme scheme) {
  SweepRow row;
  row.parameter = "-";
  row.scheme = scheme_name(scheme);
  DeliveryReport delivery;
  EnergyReport energy;
  switch (scheme) {
    case Scheme::wur:
      delivery = mdp_wur(cfg);
      energy = energy_wur(cfg);
      break;
    case Scheme::classb:
      delivery = mdp_classb(cfg);
      energy = energy_classb(cfg);
      break;
    case Scheme::direct:
      delivery = mdp_direct(cfg);
      energy = energy_direct(cfg);
      break;
  }
  row.s_total = delivery.s_total;
  row.s_uav = delivery.s_uav;
  row.s_direct = delivery.s_direct;
  row.lambda = delivery.lambda;
  row.tx_energy_mj = energy.tx_energy_mj;
  row.rx_airtime_s = energy.rx_airtime_s_per_cycle;
  row.ci_halfwidth = 0.0;
  return row;
}

// Monte Carlo evaluation of one scheme. The Class B baseline is the wake-up
// scheme with a certain wake-up (every device awake from slot 0); the
// UAV-less baseline is the degenerate case in which no device ever wakes.
// Class B listening airtime is deterministic, so it is filled in from the
// closed form.
inline SweepRow simulated_row(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t trials,
                              std::uint64_t seed) {
  ScenarioConfig sim_cfg = cfg;
  double rx_airtime_s = 0.0;
  switch (scheme) {
    case Scheme::wur:
      break;
    case Scheme::classb:
      sim_cfg.p_wub = 1.0;
      rx_airtime_s = energy_classb(cfg).rx_airtime_s_per_cycle;
      break;
    case Scheme::direct:
      sim_cfg.p_wub = 0.0;
      break;
  }
  const SimResult sim = run_trials(sim_cfg, trials, seed);
  SweepRow row;
  row.parameter = "-";
  row.scheme = std::string(scheme_name(scheme)) + "_sim";
  row.s_total = sim.delivery.s_total;
  row.s_uav = sim.delivery.s_uav;
  row.s_direct = sim.delivery.s_direct;
  row.lambda = sim.delivery.lambda;
  row.tx_energy_mj = sim.energy.tx_energy_mj;
  row.rx_airtime_s = rx_airtime_s;
  row.ci_halfwidth = sim.ci_halfwidth;
  return row;
}

// Evaluate all three schemes under one scenario. Row order is fixed: wur,
// classb, direct; in `both` mode each scheme's analytic row precedes its
// simulated row.
inline std::vector<SweepRow> compare(const ScenarioConfig& cfg, RunMode mode,
                                     std::uint64_t trials = 2500, std::uint64_t seed = 1) {
  validate(cfg);
  std::vector<SweepRow> rows;
  for (const Scheme scheme : {Scheme::wur, Scheme::classb, Scheme::direct}) {
    if (mode != RunMode::simulate) rows.push_back(analytic_row(cfg, scheme));
    if (mode != RunMode::analytic) rows.push_back(simulated_row(cfg, scheme, trials, seed));
  }
  return rows;
}

// Run the grid: one row per (grid value, scheme), in grid order then scheme
// order wur/classb/direct. Deterministic for a fixed (spec, base).
inline std::vector<SweepRow> sweep(const SweepSpec& spec, const ScenarioConfig& base) {
  if (spec.grid.empty()) {
    throw std::invalid_argument("sweep grid must be non-empty");
  }
  if (spec.schemes.empty()) {
    throw std::invalid_argument("sweep needs at least one scheme");
  }
  std::vector<SweepRow> rows;
  for (std::size_t index = 0; index < spec.grid.size(); ++index) {
    const double value = spec.grid[index];
    ScenarioConfig cfg = base;
    apply_parameter(cfg, spec.parameter, value);
    validate(cfg);
    const std::uint64_t point_seed = detail::derive_point_seed(spec.seed, index);
    for (const Scheme scheme : {Scheme::wur, Scheme::classb, Scheme::direct}) {
      bool wanted = false;
      for (const Scheme s : spec.schemes) wanted = wanted || s == scheme;
      if (!wanted) continue;
      if (spec.mode != RunMode::simulate) {
        SweepRow row = analytic_row(cfg, scheme);
        row.parameter = spec.parameter;
        row.value = value;
        rows.push_back(std::move(row));
      }
      if (spec.mode != RunMode::analytic) {
        SweepRow row = simulated_row(cfg, scheme, spec.trials, point_seed);
        row.parameter = spec.parameter;
        row.value = value;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// Canned grids mirroring the comparison studies: delivery vs direct-link
// quality, delivery and energy vs the SF set, delivery and energy vs wake-up
// probability, and listening cost vs ping/beacon SF. Fixed parameters stay at
// the scenario defaults.
struct Preset {
  std::string name;
  std::string description;
  SweepSpec spec;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = [] {
    std::vector<Preset> list;
    const auto grid_fraction = [](int from, int to) {
      std::vector<double> g;
      for (int i = from; i <= to; ++i) g.push_back(static_cast<double>(i) / 20.0);
      return g;
    };
    const auto grid_sf = [] {
      std::vector<double> g;
      for (int k = SpreadingFactor::kMin; k <= SpreadingFactor::kMax; ++k) {
        g.push_back(static_cast<double>(k));
      }
      return g;
    }();

    SweepSpec fig1;
    fig1.parameter = "p_direct";
    fig1.grid = grid_fraction(0, 20);
    list.push_back({"fig1", "delivery probability vs direct-link quality", fig1});

    SweepSpec fig2;
    fig2.parameter = "max_sf";
    fig2.grid = grid_sf;
    list.push_back({"fig2", "delivery probability vs largest uplink SF", fig2});

    SweepSpec fig3 = fig2;
    list.push_back({"fig3", "transmit energy per message vs largest uplink SF", fig3});

    SweepSpec fig4;
    fig4.parameter = "p_wub";
    fig4.grid = grid_fraction(1, 20);
    list.push_back({"fig4", "delivery probability vs wake-up beacon probability", fig4});

    SweepSpec fig5 = fig4;
    list.push_back({"fig5", "transmit energy per message vs wake-up beacon probability", fig5});

    SweepSpec fig6;
    fig6.parameter = "sf_beacon";
    fig6.grid = grid_sf;
    fig6.schemes = {Scheme::wur, Scheme::classb};
    list.push_back({"fig6", "listening airtime per cycle vs ping/beacon SF", fig6});

    return list;
  }();
  return table;
}

inline const Preset* find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

// Provenance comments written ahead of the CSV header.
struct CsvMeta {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string mode;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                            const CsvMeta& meta) {
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(meta.config_hash));
  os << "# tool=" << kToolName << " " << kVersion << "\n";
  os << "# config=" << hash << "\n";
  os << "# seed=" << meta.seed << "\n";
  os << "# trials=" << meta.trials << "\n";
  os << "# mode=" << meta.mode << "\n";
  os << kCsvHeader << "\n";
  for (const SweepRow& row : rows) {
    os << row.parameter << ',' << csv_number(row.value) << ',' << row.scheme << ','
       << csv_number(row.s_total) << ',' << csv_number(row.s_uav) << ','
       << csv_number(row.s_direct) << ',' << csv_number(row.lambda) << ','
       << csv_number(row.tx_energy_mj) << ',' << csv_number(row.rx_airtime_s) << ','
       << csv_number(row.ci_halfwidth) << "\n";
  }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::vector<SweepRow> rows;
  std::string line;
  bool saw_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader) {
        throw std::invalid_argument("unexpected CSV header: '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 10) {
      throw std::invalid_argument("expected 10 CSV fields, got " +
                                  std::to_string(fields.size()));
    }
    SweepRow row;
    row.parameter = fields[0];
    row.value = parse_csv_number(fields[1], "value");
    row.scheme = fields[2];
    row.s_total = parse_csv_number(fields[3], "s_total");
    row.s_uav = parse_csv_number(fields[4], "s_uav");
    row.s_direct = parse_csv_number(fields[5], "s_direct");
    row.lambda = parse_csv_number(fields[6], "lambda");
    row.tx_energy_mj = parse_csv_number(fields[7], "tx_energy_mj");
    row.rx_airtime_s = parse_csv_number(fields[8], "rx_airtime_s");
    row.ci_halfwidth = parse_csv_number(fields[9], "ci_halfwidth");
    rows.push_back(std::move(row));
  }
  if (!saw_header) {
    throw std::invalid_argument("CSV input has no header line");
  }
  return rows;
}

}  // namespace wurlab
