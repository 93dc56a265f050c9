#include "volthunt/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volthunt/model.hpp"

namespace volthunt {

namespace {

struct Box {
  double lo, hi;  // P-box extent per axis
};

Box p_extent(const SystemParams& p) {
  return {p.v_ref - 3.0 * p.eps, p.v_ref + 3.0 * p.eps};
}

void push_rect(RegionSet& set, double x0, double y0, double x1, double y1) {
  ConvexPolygon r = ConvexPolygon::rectangle(x0, y0, x1, y1);
  if (!r.empty()) set.parts.push_back(std::move(r));
}

// Distance of a scalar voltage from the closed deadband interval.
double band_distance(double v, const SystemParams& p) {
  return std::max({p.v_minus() - v, v - p.v_plus(), 0.0});
}

// Superposed inverter drift before the first tap, both inverters acting N1
// times: r_i = a (v_i - v_ref) + eta a (v_j - v_ref).
Affine r_drift(double a, double eta, double v_ref, bool first_axis) {
  const Affine e1 = Affine::v1() - v_ref;
  const Affine e2 = Affine::v2() - v_ref;
  if (first_axis) return e1 * a + e2 * (eta * a);
  return e1 * (eta * a) + e2 * a;
}

struct WbConditions {
  // f <= 0 forms for the four quadrant pieces
  Affine upper_lowtri;  // both over, v2 <= v1
  Affine upper_uptri;   // both over, v2 > v1
  Affine lower_uptri;   // both under, v2 > v1
  Affine lower_lowtri;  // both under, v2 <= v1
};

WbConditions wb_conditions(const SystemParams& p, Partition::Variant variant) {
  const Affine v1 = Affine::v1();
  const Affine v2 = Affine::v2();
  if (variant == Partition::Variant::TwoLtc) {
    // one tap must bring at least one voltage back inside
    const Affine upper = v1 + v2 - (2.0 * p.v_plus() + p.vbar_l);
    const Affine lower = (v1 + v2) * -1.0 + (2.0 * p.v_minus() - p.vbar_l);
    return {upper, upper, lower, lower};
  }
  const int n1 = actuation_count(p.d_l1, p.d_inv);
  const double a1 = std::pow(1.0 - p.chi * p.g, n1) - 1.0;
  const Affine r1 = r_drift(a1, p.eta, p.v_ref, true);
  const Affine r2 = r_drift(a1, p.eta, p.v_ref, false);
  return {v1 + r1 - p.vbar_l - p.v_plus(), v2 + r2 - p.vbar_l - p.v_plus(),
          (v1 + r1 + p.vbar_l - p.v_minus()) * -1.0,
          (v2 + r2 + p.vbar_l - p.v_minus()) * -1.0};
}

RegionSet build_w_osc(const SystemParams& p, double w1, double w2) {
  RegionSet wo;
  const double vm = p.v_minus();
  const double vp = p.v_plus();
  if (w1 > 0.0) {
    push_rect(wo, vm - w1, vm, vm, vp);  // left band
    push_rect(wo, vp, vm, vp + w1, vp);  // right band
  }
  if (w2 > 0.0) {
    push_rect(wo, vm, vm - w2, vp, vm);  // lower band
    push_rect(wo, vm, vp, vp, vp + w2);  // upper band
  }
  return wo;
}

// Corner square [vp, hi]^2 (or mirrored) split along the diagonal into the
// W_b piece and the W_g remainder.
void split_corner(const SystemParams& p, bool upper_corner,
                  const WbConditions& wb, RegionSet& w_both,
                  RegionSet& w_good) {
  const Box box = p_extent(p);
  std::vector<HalfPlane> quad;
  if (upper_corner) {
    quad.push_back(HalfPlane::from_affine(Affine::v1() * -1.0 + p.v_plus()));
    quad.push_back(HalfPlane::from_affine(Affine::v2() * -1.0 + p.v_plus()));
    quad.push_back(HalfPlane::from_affine(Affine::v1() - box.hi));
    quad.push_back(HalfPlane::from_affine(Affine::v2() - box.hi));
  } else {
    quad.push_back(HalfPlane::from_affine(Affine::v1() - p.v_minus()));
    quad.push_back(HalfPlane::from_affine(Affine::v2() - p.v_minus()));
    quad.push_back(HalfPlane::from_affine(Affine::v1() * -1.0 + box.lo));
    quad.push_back(HalfPlane::from_affine(Affine::v2() * -1.0 + box.lo));
  }
  const Affine below_diag = Affine::v2() - Affine::v1();  // v2 <= v1
  const Affine above_diag = Affine::v1() - Affine::v2();  // v2 >= v1
  const Affine& cond_low = upper_corner ? wb.upper_lowtri : wb.lower_lowtri;
  const Affine& cond_up = upper_corner ? wb.upper_uptri : wb.lower_uptri;

  auto emit = [&](const Affine& tri, const Affine& cond) {
    std::vector<HalfPlane> in = quad;
    in.push_back(HalfPlane::from_affine(tri));
    in.push_back(HalfPlane::from_affine(cond));
    ConvexPolygon inside = intersect_halfplanes(in);
    if (!inside.empty()) w_both.parts.push_back(std::move(inside));

    std::vector<HalfPlane> out = quad;
    out.push_back(HalfPlane::from_affine(tri));
    out.push_back(HalfPlane::from_affine(cond * -1.0));
    ConvexPolygon rest = intersect_halfplanes(out);
    if (!rest.empty()) w_good.parts.push_back(std::move(rest));
  };
  emit(below_diag, cond_low);
  emit(above_diag, cond_up);
}

Partition build_partition(const SystemParams& p, Partition::Variant variant,
                          double w1, double w2) {
  Partition out;
  out.variant = variant;
  out.params = p;
  out.strip_w1 = std::max(w1, 0.0);
  out.strip_w2 = std::max(w2, 0.0);

  const Box box = p_extent(p);
  const double vm = p.v_minus();
  const double vp = p.v_plus();

  push_rect(out.deadband, vm, vm, vp, vp);
  out.w_osc = build_w_osc(p, out.strip_w1, out.strip_w2);

  // arm remainders beyond the W_o bands
  push_rect(out.w_good, box.lo, vm, vm - out.strip_w1, vp);
  push_rect(out.w_good, vp + out.strip_w1, vm, box.hi, vp);
  push_rect(out.w_good, vm, box.lo, vp, vm - out.strip_w2);
  push_rect(out.w_good, vm, vp + out.strip_w2, vp, box.hi);

  const WbConditions wb = wb_conditions(p, variant);
  split_corner(p, true, wb, out.w_both, out.w_good);
  split_corner(p, false, wb, out.w_both, out.w_good);
  return out;
}

}  // namespace

bool in_p_box(const VoltagePair& v, const SystemParams& p) {
  return std::max(std::abs(v.v1 - p.v_ref), std::abs(v.v2 - p.v_ref)) <
         3.0 * p.eps;
}

bool in_hourglass(const VoltagePair& v, const SystemParams& p) {
  const double vm = p.v_minus();
  const double vp = p.v_plus();
  return (v.v1 > vm && v.v2 > vm) || (v.v1 < vp && v.v2 < vp);
}

bool in_w(const VoltagePair& v, const SystemParams& p) {
  return in_hourglass(v, p) && in_p_box(v, p);
}

NamedRegions named_regions(const SystemParams& p) {
  NamedRegions out;
  const Box box = p_extent(p);
  const double vm = p.v_minus();
  const double vp = p.v_plus();

  push_rect(out.deadband, vm, vm, vp, vp);
  push_rect(out.p_box, box.lo, box.lo, box.hi, box.hi);

  // W as three disjoint slabs: P minus the two forbidden corners.
  push_rect(out.w, box.lo, box.lo, vm, vp);
  push_rect(out.w, vm, box.lo, vp, box.hi);
  push_rect(out.w, vp, vm, box.hi, box.hi);
  // H clipped to the P box has the same hourglass shape.
  out.hourglass = out.w;
  return out;
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::D: return "D";
    case RegionLabel::Wo: return "Wo";
    case RegionLabel::Wb: return "Wb";
    case RegionLabel::Wg: return "Wg";
    case RegionLabel::Wprime: return "Wprime";
  }
  return "?";
}

Partition partition_two_ltc(const SystemParams& p) {
  if (p.vbar_l > 2.0 * p.eps) {
    throw std::domain_error(
        "partition_two_ltc: undefined for vbar_l > 2 eps (every tap "
        "overshoots the deadband)");
  }
  return build_partition(p, Partition::Variant::TwoLtc, p.vbar_l, p.vbar_l);
}

Partition partition_four_device(const SystemParams& p) {
  if (!(p.g < 0.0)) {
    throw std::domain_error("partition_four_device: requires g < 0");
  }
  const int n1 = actuation_count(p.d_l1, p.d_inv);
  const int n2 = actuation_count(p.d_l2, p.d_inv);
  const double a1 = std::pow(1.0 - p.chi * p.g, n1) - 1.0;
  const double a2 = std::pow(1.0 - p.chi * p.g, n2) - 1.0;
  // band width from setting the tap-overshoot inequality to equality:
  // v* = (v+ + vbar_l + a v_ref) / (1 + a), width = v* - v+
  const double w1 = (p.vbar_l - a1 * p.eps) / (1.0 + a1);
  const double w2 = (p.vbar_l - a2 * p.eps) / (1.0 + a2);
  return build_partition(p, Partition::Variant::FourDevice, w1, w2);
}

RegionLabel classify_point(const VoltagePair& v, const Partition& part) {
  const SystemParams& p = part.params;
  const double d1 = band_distance(v.v1, p);
  const double d2 = band_distance(v.v2, p);

  if (d1 == 0.0 && d2 == 0.0) return RegionLabel::D;
  if ((d2 == 0.0 && d1 <= part.strip_w1) || (d1 == 0.0 && d2 <= part.strip_w2)) {
    return RegionLabel::Wo;
  }

  const WbConditions wb = wb_conditions(p, part.variant);
  const double vp = p.v_plus();
  const double vm = p.v_minus();
  if (v.v1 >= vp && v.v2 >= vp) {
    const Affine& cond = v.v2 <= v.v1 ? wb.upper_lowtri : wb.upper_uptri;
    if (cond.eval(v) <= 0.0 && in_w(v, p)) return RegionLabel::Wb;
  }
  if (v.v1 <= vm && v.v2 <= vm) {
    const Affine& cond = v.v2 > v.v1 ? wb.lower_uptri : wb.lower_lowtri;
    if (cond.eval(v) <= 0.0 && in_w(v, p)) return RegionLabel::Wb;
  }
  return in_w(v, p) ? RegionLabel::Wg : RegionLabel::Wprime;
}

}  // namespace volthunt
