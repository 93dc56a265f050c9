#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volthunt/analysis.hpp"
#include "volthunt/params.hpp"

namespace volthunt {

/// One point of the delay-ratio sweep. n2 follows the d_l2/d_l1 ratio of
/// the base parameters, rounded half-up; the example delay pair realizes
/// n1 with the base inverter delay.
struct SweepResult {
  int n1 = 0;
  int n2 = 0;
  bool s_empty = false;
  double s_area = 0.0;
  double s_area_strict_n2 = 0.0;  ///< ratio taken literally as the exponent
  double d_l1_example = 0.0;
  double d_inv_example = 0.0;
};

/// Sweeps the actuation count n1 over [n1_lo, n1_hi], building S per point.
/// Requires g < 0 and 1 <= n1_lo <= n1_hi <= 200. Each point also verifies
/// that two delay pairs with the same floor ratio produce identical S.
std::vector<SweepResult> delay_sweep(const SystemParams& p, int n1_lo,
                                     int n1_hi, double g);

/// Smallest swept n1 with S empty, provided emptiness is monotone across
/// the range (single threshold). monotone reports that observation.
struct SweepThreshold {
  std::optional<int> n1_star;
  bool monotone = true;
};

SweepThreshold sweep_threshold(const std::vector<SweepResult>& results);

/// Timescale-separation rule implied by a frontier value: hunting is
/// impossible for all of W when d_l1 >= n1_star * d_inv.
double required_d_l1(int n1_star, double d_inv);

/// Region report for plotting: S when g < 0, or the damped-case region
/// (same basis machinery evaluated with the g > 0 drift factors) when
/// g >= 0, plus the W_o band widths.
struct SRegionReport {
  OscillationSetS region;
  double area = 0.0;
  double band_w1 = 0.0;  ///< W_o width on the v1 axis
  double band_w2 = 0.0;  ///< W_o width on the v2 axis
  bool damped_case = false;
};

SRegionReport s_region_report(const SystemParams& p);

/// One feeder branch: the substation LTC (LTC1) is shared, the branch LTC
/// and both inverters are branch-local.
struct BranchSpec {
  std::string id;
  SystemParams params;
};

struct BranchVerdict {
  std::string id;
  bool s_empty = false;
  double s_area = 0.0;
};

struct MultiBranchReport {
  std::vector<BranchVerdict> branches;
  bool joint_safe = false;  ///< safe iff every branch has S empty
  int symbol_count = 0;     ///< 3 b + 1 symbolic variables
};

/// Checks every branch as its own four-device system. Throws when the
/// substation-shared fields differ across branches.
MultiBranchReport multi_branch_check(const std::vector<BranchSpec>& branches);

}  // namespace volthunt
