// Command-line front end: scenario simulation, region exports, initial-
// condition classification, and delay sweeps. Emits plot-ready CSV/JSON;
// rendering is left to external tools.

#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "volthunt/analysis.hpp"
#include "volthunt/automaton.hpp"
#include "volthunt/io.hpp"
#include "volthunt/model.hpp"
#include "volthunt/regions.hpp"
#include "volthunt/sweep.hpp"

namespace {

using namespace volthunt;

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitRegime = 3;

void prepare_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
  const ScenarioConfig cfg = ScenarioConfig::load(config_path);
  prepare_out_dir(out);

  SimOptions opts;
  if (cfg.negate_g_at) opts.negate_g_at = *cfg.negate_g_at;
  const Trajectory traj = simulate(cfg.ic, cfg.params, cfg.horizon, opts);
  const std::vector<OscillationEvent> events = detect_sequences(traj);

  write_file(join(out, "trajectory.csv"), trajectory_csv(traj));
  write_file(join(out, "events.csv"), events_csv(events));
  write_file(join(out, "summary.json"), simulate_summary_json(cfg, traj, events));

  for (const std::string& w : cfg.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  std::cout << "outcome " << to_string(traj.outcome.kind) << " at t="
            << format_double(traj.outcome.time) << ", " << events.size()
            << " oscillation period(s)\n";
  return kExitOk;
}

int cmd_regions(const std::string& config_path, const std::string& out,
                const std::string& system) {
  const ScenarioConfig cfg = ScenarioConfig::load(config_path);
  prepare_out_dir(out);

  const Partition part = system == "two-ltc"
                             ? partition_two_ltc(cfg.params)
                             : partition_four_device(cfg.params);
  const NamedRegions named = named_regions(cfg.params);

  std::vector<std::pair<std::string, const RegionSet*>> rows = {
      {"D", &part.deadband}, {"Wo", &part.w_osc},   {"Wb", &part.w_both},
      {"Wg", &part.w_good},  {"W", &named.w},
  };
  write_file(join(out, "regions.csv"), regions_csv(rows));

  nlohmann::ordered_json j;
  j["system"] = system;
  j["band_width_v1"] = part.strip_w1;
  j["band_width_v2"] = part.strip_w2;
  j["areas"] = {{"D", part.deadband.area()},
                {"Wo", part.w_osc.area()},
                {"Wb", part.w_both.area()},
                {"Wg", part.w_good.area()},
                {"W", named.w.area()}};
  write_file(join(out, "summary.json"), j.dump(2));
  std::cout << "band widths v1=" << format_double(part.strip_w1)
            << " v2=" << format_double(part.strip_w2) << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& config_path, const std::string& out,
                double grid_res, long sample_count, unsigned long seed) {
  const ScenarioConfig cfg = ScenarioConfig::load(config_path);
  if (!(cfg.params.g < 0.0)) {
    throw std::domain_error("analyze: requires g < 0");
  }
  prepare_out_dir(out);

  if (grid_res <= 0.0 && sample_count <= 0) {
    const AnalysisReport rep = classify_ic(cfg.ic, cfg.params, cfg.horizon);
    write_file(join(out, "report.json"), analysis_report_json(rep));
    std::cout << "in_s=" << (rep.in_s ? "true" : "false") << " simulated="
              << to_string(rep.simulated) << " agreement="
              << to_string(rep.agreement) << "\n";
    return kExitOk;
  }

  std::vector<AnalysisReport> reports;
  long violations = 0;
  auto consider = [&](double v1, double v2) {
    const VoltagePair v{v1, v2};
    if (!in_w(v, cfg.params)) return;
    AnalysisReport rep = classify_ic(v, cfg.params, cfg.horizon);
    if (rep.agreement == Agreement::NecessityViolation) ++violations;
    reports.push_back(std::move(rep));
  };

  const double lo = cfg.params.v_ref - 3.0 * cfg.params.eps;
  const double hi = cfg.params.v_ref + 3.0 * cfg.params.eps;
  if (grid_res > 0.0) {
    const long n = std::lround((hi - lo) / grid_res);
    for (long i = 0; i <= n; ++i) {
      for (long k = 0; k <= n; ++k) {
        consider(lo + static_cast<double>(i) * grid_res,
                 lo + static_cast<double>(k) * grid_res);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    long kept = 0;
    while (kept < sample_count) {
      const double v1 = u(rng);
      const double v2 = u(rng);
      if (!in_w({v1, v2}, cfg.params)) continue;
      consider(v1, v2);
      ++kept;
    }
  }

  write_file(join(out, "grid.csv"), grid_csv(reports));
  nlohmann::ordered_json j;
  j["points"] = reports.size();
  j["necessity_violations"] = violations;
  write_file(join(out, "summary.json"), j.dump(2));
  std::cout << reports.size() << " points, " << violations
            << " necessity violation(s)\n";
  return violations == 0 ? kExitOk : kExitConfig;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              const std::string& range) {
  const ScenarioConfig cfg = ScenarioConfig::load(config_path);
  prepare_out_dir(out);

  const auto sep = range.find("..");
  if (sep == std::string::npos) {
    throw std::invalid_argument("sweep: --n1 expects lo..hi");
  }
  int lo = 0, hi = 0;
  try {
    lo = std::stoi(range.substr(0, sep));
    hi = std::stoi(range.substr(sep + 2));
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep: --n1 expects integer bounds");
  }

  const std::vector<SweepResult> results =
      delay_sweep(cfg.params, lo, hi, cfg.params.g);
  const SweepThreshold thr = sweep_threshold(results);

  write_file(join(out, "sweep.csv"), sweep_csv(results));
  nlohmann::ordered_json j;
  j["g"] = cfg.params.g;
  if (thr.n1_star) {
    j["n1_star"] = *thr.n1_star;
    j["required_d_l1_for_d_inv_3s"] = required_d_l1(*thr.n1_star, 3.0);
  } else {
    j["n1_star"] = nullptr;
  }
  j["single_threshold"] = thr.monotone;
  write_file(join(out, "summary.json"), j.dump(2));
  if (thr.n1_star) {
    std::cout << "S empty from n1=" << *thr.n1_star << "\n";
  } else {
    std::cout << "S nonempty across the swept range\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voltage-hunting simulator and analyzer for a two-LTC, "
               "two-inverter feeder"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string system = "two-ltc";
  std::string n1_range = "5..29";
  double grid_res = 0.0;
  long sample_count = 0;
  unsigned long seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "scenario config JSON")
        ->required();
    cmd->add_option("-o,--out", out_dir, "output directory");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one scenario");
  add_common(sim);

  CLI::App* reg = app.add_subcommand("regions", "export region polygons");
  add_common(reg);
  reg->add_option("--system", system, "two-ltc or four-device")
      ->check(CLI::IsMember({"two-ltc", "four-device"}));

  CLI::App* ana = app.add_subcommand("analyze", "classify initial conditions");
  add_common(ana);
  ana->add_option("--grid", grid_res, "grid resolution over W (p.u.)");
  ana->add_option("--sample", sample_count, "random sample count instead of a grid");
  ana->add_option("--seed", seed, "RNG seed for sampled scans");

  CLI::App* swp = app.add_subcommand("sweep", "delay-ratio sweep");
  add_common(swp);
  swp->add_option("--n1", n1_range, "actuation-count range lo..hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (reg->parsed()) return cmd_regions(config_path, out_dir, system);
    if (ana->parsed()) {
      return cmd_analyze(config_path, out_dir, grid_res, sample_count, seed);
    }
    if (swp->parsed()) return cmd_sweep(config_path, out_dir, n1_range);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
