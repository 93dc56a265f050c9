#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "volthunt/analysis.hpp"
#include "volthunt/automaton.hpp"
#include "volthunt/params.hpp"
#include "volthunt/regions.hpp"
#include "volthunt/sweep.hpp"

namespace volthunt {

/// Filesystem failures, kept distinct from config/regime errors so the CLI
/// can map them to its own exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest representation capped at 12 significant digits; output files
/// must be byte-identical across runs.
std::string format_double(double x);

/// Scenario file: the flat SystemParams document plus the initial
/// condition, horizon, and optional gain-negation event. Extra keys for the
/// negation trigger heuristics are carried through to the summary but drive
/// no logic.
struct ScenarioConfig {
  SystemParams params;
  VoltagePair ic{1.04, 0.94};
  double horizon = 600.0;
  std::optional<double> negate_g_at;
  double trigger_dv_frac = 0.6;   ///< |v[k+1]-v[k]| threshold, in units of eps
  double trigger_dref_frac = 0.6; ///< |v[k+1]-v_ref| threshold, in units of eps
  std::vector<std::string> warnings;

  std::string to_json() const;
  static ScenarioConfig from_json(const std::string& text);
  static ScenarioConfig load(const std::string& path);
};

/// time,z1,z2,z3,v1,v2,mode — one row per timestep.
std::string trajectory_csv(const Trajectory& t);
/// seq,start,end,vdiff_start,vdiff_end
std::string events_csv(const std::vector<OscillationEvent>& events);
/// region,part_index,vertex_index,v1,v2
std::string regions_csv(
    const std::vector<std::pair<std::string, const RegionSet*>>& regions);
/// n1,n2,s_empty,s_area,d_l1_example,d_inv_example
std::string sweep_csv(const std::vector<SweepResult>& results);
/// v1,v2,in_s,outcome
std::string grid_csv(const std::vector<AnalysisReport>& reports);

std::string simulate_summary_json(const ScenarioConfig& cfg,
                                  const Trajectory& t,
                                  const std::vector<OscillationEvent>& events);
std::string analysis_report_json(const AnalysisReport& r);
std::string multi_branch_json(const MultiBranchReport& r);

void write_file(const std::string& path, const std::string& content);

}  // namespace volthunt
