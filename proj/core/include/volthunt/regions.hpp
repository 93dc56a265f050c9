#pragma once

#include "volthunt/geometry.hpp"
#include "volthunt/params.hpp"

namespace volthunt {

/// Strict membership in the infinity-norm operating box P.
bool in_p_box(const VoltagePair& v, const SystemParams& p);
/// Strict membership in the hourglass set H (one voltage above the deadband
/// while the other is below it is disallowed).
bool in_hourglass(const VoltagePair& v, const SystemParams& p);
/// Normal operating set W = H intersect P.
bool in_w(const VoltagePair& v, const SystemParams& p);

/// The named voltage-plane sets, clipped to the closure of P. H and W are
/// non-convex and decomposed into disjoint convex parts.
struct NamedRegions {
  RegionSet deadband;   ///< D
  RegionSet hourglass;  ///< H (clipped)
  RegionSet p_box;      ///< P
  RegionSet w;          ///< W = H n P
};

NamedRegions named_regions(const SystemParams& p);

enum class RegionLabel { D, Wo, Wb, Wg, Wprime };

const char* to_string(RegionLabel label);

/// Partition of W into D, W_o, W_b, W_g for either subsystem. Polygons are
/// exports; classify_point evaluates the defining inequalities directly.
struct Partition {
  enum class Variant { TwoLtc, FourDevice };

  Variant variant = Variant::TwoLtc;
  SystemParams params;
  double strip_w1 = 0.0;  ///< W_o band width on the v1 axis (0 if empty)
  double strip_w2 = 0.0;  ///< W_o band width on the v2 axis

  RegionSet deadband;  ///< D
  RegionSet w_osc;     ///< W_o
  RegionSet w_both;    ///< W_b
  RegionSet w_good;    ///< W_g
};

/// Two-LTC partition. The W_o bands have width vbar_l on both axes and W_b
/// is cut by the tap-sum constraints. Requires vbar_l <= 2 eps.
Partition partition_two_ltc(const SystemParams& p);

/// Four-device partition for g < 0. W_o band widths come from the single-
/// active-inverter closed forms (N1 actuations for the v1 bands, N2 for the
/// v2 bands); W_b uses the printed per-quadrant conditions with both
/// inverters acting N1 times.
Partition partition_four_device(const SystemParams& p);

/// Membership with boundary precedence D > W_o > W_b > W_g; points outside
/// W classify as W'.
RegionLabel classify_point(const VoltagePair& v, const Partition& part);

}  // namespace volthunt
