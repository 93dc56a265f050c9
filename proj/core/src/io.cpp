#include "volthunt/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace volthunt {

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string ScenarioConfig::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(params.to_json());
  j["ic"] = {{"v1", ic.v1}, {"v2", ic.v2}};
  j["horizon"] = horizon;
  if (negate_g_at) {
    j["negate_g_at"] = *negate_g_at;
  } else {
    j["negate_g_at"] = nullptr;
  }
  j["trigger_dv_frac"] = trigger_dv_frac;
  j["trigger_dref_frac"] = trigger_dref_frac;
  return j.dump(2);
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  ScenarioConfig cfg;
  cfg.params = SystemParams::from_json(text);
  cfg.warnings = cfg.params.validate();

  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("ic")) {
    const auto& ic = j["ic"];
    if (!ic.is_object() || !ic.contains("v1") || !ic.contains("v2")) {
      throw std::invalid_argument("config: ic must be {\"v1\":..., \"v2\":...}");
    }
    cfg.ic = {ic["v1"].get<double>(), ic["v2"].get<double>()};
  }
  if (j.contains("horizon")) {
    cfg.horizon = j["horizon"].get<double>();
  }
  if (!(cfg.horizon > 0.0)) {
    throw std::invalid_argument("config: horizon must be positive");
  }
  if (j.contains("negate_g_at") && !j["negate_g_at"].is_null()) {
    cfg.negate_g_at = j["negate_g_at"].get<double>();
  }
  if (j.contains("trigger_dv_frac")) {
    cfg.trigger_dv_frac = j["trigger_dv_frac"].get<double>();
  }
  if (j.contains("trigger_dref_frac")) {
    cfg.trigger_dref_frac = j["trigger_dref_frac"].get<double>();
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "time,z1,z2,z3,v1,v2,mode\n";
  for (const TrajectorySample& s : t.samples) {
    out << format_double(s.time) << ',' << format_double(s.state.z1) << ','
        << format_double(s.state.z2) << ',' << format_double(s.state.z3) << ','
        << format_double(s.state.v.v1) << ',' << format_double(s.state.v.v2)
        << ',' << to_string(s.mode) << '\n';
  }
  return out.str();
}

std::string events_csv(const std::vector<OscillationEvent>& events) {
  std::ostringstream out;
  out << "seq,start,end,vdiff_start,vdiff_end\n";
  for (const OscillationEvent& e : events) {
    out << to_string(e.id) << ',' << format_double(e.start_time) << ','
        << format_double(e.end_time) << ',' << format_double(e.vdiff_start)
        << ',' << format_double(e.vdiff_end) << '\n';
  }
  return out.str();
}

std::string regions_csv(
    const std::vector<std::pair<std::string, const RegionSet*>>& regions) {
  std::ostringstream out;
  out << "region,part_index,vertex_index,v1,v2\n";
  for (const auto& [name, set] : regions) {
    for (std::size_t i = 0; i < set->parts.size(); ++i) {
      const ConvexPolygon& part = set->parts[i];
      for (std::size_t v = 0; v < part.vertices.size(); ++v) {
        out << name << ',' << i << ',' << v << ','
            << format_double(part.vertices[v].x) << ','
            << format_double(part.vertices[v].y) << '\n';
      }
    }
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepResult>& results) {
  std::ostringstream out;
  out << "n1,n2,s_empty,s_area,d_l1_example,d_inv_example\n";
  for (const SweepResult& r : results) {
    out << r.n1 << ',' << r.n2 << ',' << (r.s_empty ? 1 : 0) << ','
        << format_double(r.s_area) << ',' << format_double(r.d_l1_example)
        << ',' << format_double(r.d_inv_example) << '\n';
  }
  return out.str();
}

std::string grid_csv(const std::vector<AnalysisReport>& reports) {
  std::ostringstream out;
  out << "v1,v2,in_s,outcome\n";
  for (const AnalysisReport& r : reports) {
    out << format_double(r.ic.v1) << ',' << format_double(r.ic.v2) << ','
        << (r.in_s ? 1 : 0) << ',' << to_string(r.simulated) << '\n';
  }
  return out.str();
}

std::string simulate_summary_json(const ScenarioConfig& cfg,
                                  const Trajectory& t,
                                  const std::vector<OscillationEvent>& events) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(t.outcome.kind);
  j["outcome_time"] = t.outcome.time;
  if (t.g_negated_at >= 0.0) {
    j["g_negated_at"] = t.g_negated_at;
  } else {
    j["g_negated_at"] = nullptr;
  }
  j["event_count"] = events.size();

  nlohmann::ordered_json evs = nlohmann::ordered_json::array();
  std::vector<double> periods;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const OscillationEvent& e = events[i];
    nlohmann::ordered_json je;
    je["seq"] = to_string(e.id);
    je["start"] = e.start_time;
    je["end"] = e.end_time;
    je["vdiff_growth"] = e.vdiff_end - e.vdiff_start;
    je["pattern"] = e.pattern;
    evs.push_back(je);
    if (i > 0 && events[i].id == events[i - 1].id) {
      periods.push_back(events[i].start_time - events[i - 1].start_time);
    }
  }
  j["events"] = evs;
  j["period_estimates"] = periods;
  if (!periods.empty()) {
    std::vector<double> sorted = periods;
    std::sort(sorted.begin(), sorted.end());
    j["period_median"] = sorted[sorted.size() / 2];
  } else {
    j["period_median"] = nullptr;
  }
  j["trigger_thresholds"] = {{"dv_frac", cfg.trigger_dv_frac},
                             {"dref_frac", cfg.trigger_dref_frac}};
  return j.dump(2);
}

std::string analysis_report_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["ic"] = {{"v1", r.ic.v1}, {"v2", r.ic.v2}};
  j["in_s"] = r.in_s;
  j["predicted"] = to_string(r.predicted);
  j["simulated"] = to_string(r.simulated);
  j["completed_periods"] = r.completed_periods;
  j["agreement"] = to_string(r.agreement);
  return j.dump(2);
}

std::string multi_branch_json(const MultiBranchReport& r) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BranchVerdict& b : r.branches) {
    arr.push_back({{"id", b.id}, {"s_empty", b.s_empty}, {"s_area", b.s_area}});
  }
  j["branches"] = arr;
  j["joint_safe"] = r.joint_safe;
  j["symbol_count"] = r.symbol_count;
  return j.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace volthunt
