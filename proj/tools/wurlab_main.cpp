// wurlab: analytic model, Monte Carlo simulator and sweep harness for
// wake-up-radio assisted LoRa data collection through a UAV gateway.
//
//   wurlab analyze  [--config cfg] [--out file.csv]
//   wurlab simulate [--config cfg] [--trials N] [--seed N] [--out file.csv]
//   wurlab sweep    (--preset figK | --param NAME --grid SPEC)
//                   [--schemes LIST] [--mode M] [--trials N] [--seed N] [--out file.csv]
//   wurlab verify   [--config cfg] [--trials N] [--seed N] [--out file.csv]
//   wurlab presets
//
// Exit codes: 0 success, 1 usage or configuration error, 2 verification
// failure. The seed may also come from the WURLAB_SEED environment variable;
// an explicit --seed wins.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wurlab/config_io.hpp"
#include "wurlab/scenario.hpp"
#include "wurlab/sweep.hpp"
#include "wurlab/verify.hpp"
#include "wurlab/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

wurlab::ScenarioConfig load_or_default(const std::string& path) {
  if (path.empty()) {
    wurlab::ScenarioConfig cfg;
    wurlab::validate(cfg);
    return cfg;
  }
  return wurlab::load_config(path);
}

std::uint64_t resolve_seed(std::uint64_t flag_value, bool flag_given) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("WURLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument(std::string("WURLAB_SEED is not an integer: '") + env + "'");
    }
    return parsed;
  }
  return flag_value;
}

// Grid syntax: either a comma list ("7,8,9") or "from:to:step".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    const std::size_t colon2 = text.find(':', colon + 1);
    if (colon2 == std::string::npos) {
      throw std::invalid_argument("grid range needs the form from:to:step, got '" + text + "'");
    }
    const double from = wurlab::parse_csv_number(text.substr(0, colon), "grid from");
    const double to = wurlab::parse_csv_number(text.substr(colon + 1, colon2 - colon - 1), "grid to");
    const double step = wurlab::parse_csv_number(text.substr(colon2 + 1), "grid step");
    if (!(step > 0.0) || to < from) {
      throw std::invalid_argument("grid range needs step > 0 and to >= from: '" + text + "'");
    }
    const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(from + i * step);
    return grid;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    grid.push_back(wurlab::parse_csv_number(item, "grid value"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

std::vector<wurlab::Scheme> parse_schemes(const std::string& text) {
  std::vector<wurlab::Scheme> schemes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    schemes.push_back(wurlab::parse_scheme(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return schemes;
}

// Run `emit` against --out (or stdout when none was given).
int with_output(const std::string& out_path, const std::function<void(std::ostream&)>& emit) {
  if (out_path.empty()) {
    emit(std::cout);
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << "\n";
    return kExitUsage;
  }
  emit(out);
  return kExitOk;
}

int emit_rows(const wurlab::ScenarioConfig& cfg, const std::vector<wurlab::SweepRow>& rows,
              wurlab::RunMode mode, std::uint64_t trials, std::uint64_t seed,
              const std::string& out_path) {
  wurlab::CsvMeta meta;
  meta.config_hash = wurlab::config_fingerprint(cfg);
  meta.seed = seed;
  meta.trials = mode == wurlab::RunMode::analytic ? 0 : trials;
  meta.mode = wurlab::mode_name(mode);
  return with_output(out_path,
                     [&](std::ostream& os) { wurlab::write_sweep_csv(os, rows, meta); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(wurlab::kToolName) + " " + wurlab::kVersion +
               " - wake-up-radio LoRa uplink performance lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t trials = 2500;
  std::uint64_t seed = 1;

  const auto add_common = [&](CLI::App* cmd, bool with_sim_flags) {
    cmd->add_option("--config", config_path, "scenario config file (key: value lines)");
    cmd->add_option("--out", out_path, "output CSV path (stdout when omitted)");
    if (with_sim_flags) {
      cmd->add_option("--trials", trials, "number of simulated UAV visit cycles");
      cmd->add_option("--seed", seed, "base RNG seed");
    }
  };

  CLI::App* analyze = app.add_subcommand("analyze", "evaluate the closed-form model");
  add_common(analyze, false);

  CLI::App* simulate = app.add_subcommand("simulate", "run the Monte Carlo simulator");
  add_common(simulate, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd, true);
  std::string preset_name;
  std::string param_name;
  std::string grid_text;
  std::string schemes_text;
  std::string mode_text;
  sweep_cmd->add_option("--preset", preset_name, "canned study: fig1..fig6");
  sweep_cmd->add_option("--param", param_name,
                        "swept field (p_direct, max_sf, n_slots, p_wub, sf_beacon)");
  sweep_cmd->add_option("--grid", grid_text, "comma list or from:to:step");
  sweep_cmd->add_option("--schemes", schemes_text, "comma list of wur, classb, direct");
  sweep_cmd->add_option("--mode", mode_text, "analytic, simulate or both");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "cross-check analysis and simulation on one scenario");
  add_common(verify_cmd, true);

  CLI::App* presets_cmd = app.add_subcommand("presets", "list the canned sweep studies");
  (void)presets_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (presets_cmd->parsed()) {
      for (const wurlab::Preset& p : wurlab::presets()) {
        std::printf("%-6s %-10s %2zu points  %s\n", p.name.c_str(), p.spec.parameter.c_str(),
                    p.spec.grid.size(), p.description.c_str());
      }
      return kExitOk;
    }

    const wurlab::ScenarioConfig cfg = load_or_default(config_path);
    const bool seed_given = simulate->count("--seed") + sweep_cmd->count("--seed") +
                                verify_cmd->count("--seed") >
                            0;
    const std::uint64_t run_seed = resolve_seed(seed, seed_given);

    if (analyze->parsed()) {
      const auto rows = wurlab::compare(cfg, wurlab::RunMode::analytic);
      return emit_rows(cfg, rows, wurlab::RunMode::analytic, 0, run_seed, out_path);
    }

    if (simulate->parsed()) {
      const auto rows = wurlab::compare(cfg, wurlab::RunMode::simulate, trials, run_seed);
      return emit_rows(cfg, rows, wurlab::RunMode::simulate, trials, run_seed, out_path);
    }

    if (sweep_cmd->parsed()) {
      wurlab::SweepSpec spec;
      if (!preset_name.empty()) {
        const wurlab::Preset* preset = wurlab::find_preset(preset_name);
        if (preset == nullptr) {
          std::cerr << "error: unknown preset '" << preset_name << "' (see `wurlab presets`)\n";
          return kExitUsage;
        }
        spec = preset->spec;
      } else if (!param_name.empty() && !grid_text.empty()) {
        spec.parameter = param_name;
        spec.grid = parse_grid(grid_text);
      } else {
        std::cerr << "error: sweep needs --preset or both --param and --grid\n";
        return kExitUsage;
      }
      if (!schemes_text.empty()) spec.schemes = parse_schemes(schemes_text);
      if (!mode_text.empty()) spec.mode = wurlab::parse_mode(mode_text);
      spec.trials = trials;
      spec.seed = run_seed;
      const auto rows = wurlab::sweep(spec, cfg);
      return emit_rows(cfg, rows, spec.mode, spec.trials, spec.seed, out_path);
    }

    if (verify_cmd->parsed()) {
      const wurlab::VerifyReport report = wurlab::verify(cfg, trials, run_seed);
      const int rc = with_output(out_path, [&](std::ostream& os) {
        os << "# tool=" << wurlab::kToolName << " " << wurlab::kVersion << "\n";
        os << "# seed=" << report.seed << "\n";
        os << "# trials=" << report.trials << "\n";
        os << "# messages=" << report.total_messages << "\n";
        os << "check,status,measured,tolerance\n";
        for (const wurlab::VerifyCheck& check : report.checks) {
          os << check.name << ',' << (check.pass ? "pass" : "FAIL") << ','
             << wurlab::csv_number(check.measured) << ',' << wurlab::csv_number(check.tolerance)
             << "\n";
        }
      });
      if (rc != kExitOk) return rc;
      return report.all_pass() ? kExitOk : kExitVerifyFailed;
    }
  } catch (const wurlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  return kExitUsage;
}
