#include "volthunt/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "volthunt/model.hpp"
#include "volthunt/regions.hpp"

namespace volthunt {

namespace {

double drift_factor(double chi, double g, double n) {
  return std::pow(1.0 - chi * g, n) - 1.0;
}

bool same_polygons(const OscillationSetS& a, const OscillationSetS& b) {
  if (a.all.parts.size() != b.all.parts.size()) return false;
  for (std::size_t i = 0; i < a.all.parts.size(); ++i) {
    const auto& va = a.all.parts[i].vertices;
    const auto& vb = b.all.parts[i].vertices;
    if (va.size() != vb.size()) return false;
    for (std::size_t j = 0; j < va.size(); ++j) {
      if (va[j].x != vb[j].x || va[j].y != vb[j].y) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<SweepResult> delay_sweep(const SystemParams& p, int n1_lo,
                                     int n1_hi, double g) {
  if (n1_lo > n1_hi) throw std::invalid_argument("delay_sweep: empty range");
  if (n1_lo < 1 || n1_hi > 200) {
    throw std::invalid_argument("delay_sweep: n1 range must lie in [1, 200]");
  }
  if (!(g < 0.0)) throw std::domain_error("delay_sweep: requires g < 0");

  SystemParams base = p;
  base.g = g;
  const double ratio = p.d_l2 / p.d_l1;

  std::vector<SweepResult> out;
  out.reserve(static_cast<std::size_t>(n1_hi - n1_lo + 1));
  for (int n1 = n1_lo; n1 <= n1_hi; ++n1) {
    const double n2_exact = ratio * n1;
    const int n2 = static_cast<int>(std::floor(n2_exact + 0.5));  // half-up

    const double a1 = drift_factor(base.chi, g, n1);
    const double a2 = drift_factor(base.chi, g, n2);
    const OscillationSetS s = build_basis_region(base, a1, a2);
    const double a2_strict = drift_factor(base.chi, g, n2_exact);
    const OscillationSetS s_strict = build_basis_region(base, a1, a2_strict);

    // S depends on the delays only through the actuation counts: two delay
    // pairs on the same n1 line must give identical polygons.
    SystemParams probe = base;
    probe.d_inv = base.d_inv;
    probe.d_l1 = static_cast<double>(n1) * base.d_inv;
    probe.d_l2 = ratio * probe.d_l1;
    SystemParams probe2 = probe;
    probe2.d_l1 = probe.d_l1 + 0.9 * base.d_inv;  // same floor
    probe2.d_l2 = probe.d_l2 + 0.9 * base.d_inv;
    const double b1 = drift_factor(base.chi, g, actuation_count(probe.d_l1, probe.d_inv));
    const double b1b = drift_factor(base.chi, g, actuation_count(probe2.d_l1, probe2.d_inv));
    if (b1 != b1b ||
        !same_polygons(build_basis_region(base, b1, a2),
                       build_basis_region(base, b1b, a2))) {
      throw std::logic_error("delay_sweep: n1-line invariance violated");
    }

    SweepResult r;
    r.n1 = n1;
    r.n2 = n2;
    r.s_empty = s.empty();
    r.s_area = s.area();
    r.s_area_strict_n2 = s_strict.area();
    r.d_l1_example = probe.d_l1;
    r.d_inv_example = probe.d_inv;
    out.push_back(r);
  }
  return out;
}

SweepThreshold sweep_threshold(const std::vector<SweepResult>& results) {
  SweepThreshold t;
  bool seen_empty = false;
  for (const SweepResult& r : results) {
    if (r.s_empty && !seen_empty) {
      seen_empty = true;
      t.n1_star = r.n1;
    } else if (!r.s_empty && seen_empty) {
      t.monotone = false;  // emptiness un-flipped along the sweep
    }
  }
  return t;
}

double required_d_l1(int n1_star, double d_inv) {
  return static_cast<double>(n1_star) * d_inv;
}

SRegionReport s_region_report(const SystemParams& p) {
  SRegionReport rep;
  const int n1 = actuation_count(p.d_l1, p.d_inv);
  const int n2 = actuation_count(p.d_l2, p.d_inv);
  const double a1 = drift_factor(p.chi, p.g, n1);
  const double a2 = drift_factor(p.chi, p.g, n2);
  rep.region = build_basis_region(p, a1, a2);
  rep.area = rep.region.area();
  rep.damped_case = !(p.g < 0.0);
  if (p.g < 0.0) {
    const Partition part = partition_four_device(p);
    rep.band_w1 = part.strip_w1;
    rep.band_w2 = part.strip_w2;
  } else {
    rep.band_w1 = p.vbar_l;  // two-LTC band widths
    rep.band_w2 = p.vbar_l;
  }
  return rep;
}

MultiBranchReport multi_branch_check(const std::vector<BranchSpec>& branches) {
  if (branches.empty()) {
    throw std::invalid_argument("multi_branch_check: need at least one branch");
  }
  const SystemParams& head = branches.front().params;
  for (const BranchSpec& b : branches) {
    const SystemParams& q = b.params;
    if (q.d_l1 != head.d_l1 || q.vbar_l != head.vbar_l ||
        q.v_ref != head.v_ref || q.eps != head.eps || q.t_s != head.t_s) {
      throw std::invalid_argument(
          "multi_branch_check: substation-shared fields differ across branches");
    }
  }
  MultiBranchReport rep;
  rep.joint_safe = true;
  for (const BranchSpec& b : branches) {
    const OscillationSetS s = build_set_s(b.params);
    BranchVerdict v;
    v.id = b.id;
    v.s_empty = s.empty();
    v.s_area = s.area();
    rep.joint_safe = rep.joint_safe && v.s_empty;
    rep.branches.push_back(std::move(v));
  }
  rep.symbol_count = 3 * static_cast<int>(branches.size()) + 1;
  return rep;
}

}  // namespace volthunt
