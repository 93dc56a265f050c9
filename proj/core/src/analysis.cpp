#include "volthunt/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "volthunt/model.hpp"

namespace volthunt {

namespace {

// The four basis inequalities in slack form (positive = satisfied), written
// for the canonical orientation: the violating voltage X sits below the
// deadband, the companion Y inside it. a_resp is the drift factor of the
// inverter answering the violation, a_other the one acting after the first
// tap. Everything is affine in (v1, v2).
struct QuadrantForms {
  std::array<Affine, 4> slack;
  Affine v_t1;
  Affine v_t2;
};

QuadrantForms canonical_forms(const SystemParams& p, const Affine& x,
                              const Affine& y, double a_resp, double a_other) {
  const double vm = p.v_minus();
  const double vp = p.v_plus();
  const Affine dx = (x - p.v_ref) * a_resp;  // responding inverter drift
  const Affine v_t1 = x + dx + p.vbar_l;
  const Affine v_t2 = y + dx * p.eta + p.vbar_l;
  const Affine d_other = (v_t2 - p.v_ref) * a_other;

  QuadrantForms f;
  f.v_t1 = v_t1;
  f.v_t2 = v_t2;
  f.slack[0] = y + dx * p.eta - vm;                       // coupling stays above v-
  f.slack[1] = v_t1 - vm;                                 // first tap lands inside
  f.slack[2] = (v_t1 + d_other * p.eta - vp) * -1.0;      // coupling stays below v+
  f.slack[3] = (v_t2 + d_other - p.vbar_l - vp) * -1.0;   // second tap lands inside
  return f;
}

Affine mirrored(const Affine& f, double v_ref) {
  // substitution v_i -> 2 v_ref - v_i
  return {-f.a1, -f.a2, f.c + 2.0 * v_ref * (f.a1 + f.a2)};
}

QuadrantForms quadrant_forms(const SystemParams& p, Quadrant q, double a1,
                             double a2) {
  switch (q) {
    case Quadrant::Lower:
      return canonical_forms(p, Affine::v2(), Affine::v1(), a2, a1);
    case Quadrant::Left:
      return canonical_forms(p, Affine::v1(), Affine::v2(), a1, a2);
    case Quadrant::Upper: {
      QuadrantForms f = canonical_forms(p, Affine::v2(), Affine::v1(), a2, a1);
      for (Affine& s : f.slack) s = mirrored(s, p.v_ref);
      f.v_t1 = mirrored(f.v_t1, p.v_ref);
      f.v_t2 = mirrored(f.v_t2, p.v_ref);
      return f;
    }
    case Quadrant::Right: {
      QuadrantForms f = canonical_forms(p, Affine::v1(), Affine::v2(), a1, a2);
      for (Affine& s : f.slack) s = mirrored(s, p.v_ref);
      f.v_t1 = mirrored(f.v_t1, p.v_ref);
      f.v_t2 = mirrored(f.v_t2, p.v_ref);
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

bool quadrant_precondition(const VoltagePair& v, Quadrant q,
                           const SystemParams& p) {
  const DeadbandSignal f = deadband_signal(v, p);
  switch (q) {
    case Quadrant::Lower: return f.f1 == 0.0 && f.f2 < 0.0;
    case Quadrant::Upper: return f.f1 == 0.0 && f.f2 > 0.0;
    case Quadrant::Left: return f.f2 == 0.0 && f.f1 < 0.0;
    case Quadrant::Right: return f.f2 == 0.0 && f.f1 > 0.0;
  }
  return false;
}

// Closed-polygon planes bounding a quadrant's precondition set within W.
std::vector<HalfPlane> quadrant_planes(const SystemParams& p, Quadrant q) {
  const double vm = p.v_minus();
  const double vp = p.v_plus();
  const double lo = p.v_ref - 3.0 * p.eps;
  const double hi = p.v_ref + 3.0 * p.eps;
  const Affine v1 = Affine::v1();
  const Affine v2 = Affine::v2();
  std::vector<HalfPlane> hs;
  auto le = [&hs](const Affine& f) { hs.push_back(HalfPlane::from_affine(f)); };
  switch (q) {
    case Quadrant::Lower:
      le(v1 * -1.0 + vm);  // v1 >= v-
      le(v1 - vp);         // v1 <= v+
      le(v2 - vm);         // v2 <= v-
      le(v2 * -1.0 + lo);  // v2 >= P floor
      break;
    case Quadrant::Upper:
      le(v1 * -1.0 + vm);
      le(v1 - vp);
      le(v2 * -1.0 + vp);  // v2 >= v+
      le(v2 - hi);
      break;
    case Quadrant::Left:
      le(v2 * -1.0 + vm);
      le(v2 - vp);
      le(v1 - vm);
      le(v1 * -1.0 + lo);
      break;
    case Quadrant::Right:
      le(v2 * -1.0 + vm);
      le(v2 - vp);
      le(v1 * -1.0 + vp);
      le(v1 - hi);
      break;
  }
  return hs;
}

RegionSet quadrant_region(const SystemParams& p, Quadrant q, double a1,
                          double a2) {
  std::vector<HalfPlane> hs = quadrant_planes(p, q);
  const QuadrantForms f = quadrant_forms(p, q, a1, a2);
  for (const Affine& s : f.slack) {
    hs.push_back(HalfPlane::from_affine(s * -1.0));  // slack >= 0
  }
  RegionSet out;
  ConvexPolygon poly = intersect_halfplanes(hs);
  if (!poly.empty()) out.parts.push_back(std::move(poly));
  return out;
}

void drift_factors(const SystemParams& p, double& a1, double& a2) {
  const int n1 = actuation_count(p.d_l1, p.d_inv);
  const int n2 = actuation_count(p.d_l2, p.d_inv);
  a1 = std::pow(1.0 - p.chi * p.g, n1) - 1.0;
  a2 = std::pow(1.0 - p.chi * p.g, n2) - 1.0;
}

}  // namespace

std::optional<double> lemma1_margin(const SystemParams& p) {
  const double c = p.vbar_l - 2.0 * p.eps;
  if (c > 0.0) return c;
  return std::nullopt;
}

Lemma2Result lemma2_check(const VoltagePair& v, const SystemParams& p) {
  if (p.vbar_l > 2.0 * p.eps) {
    throw std::domain_error("lemma2_check: requires vbar_l <= 2 eps");
  }
  const Partition part = partition_two_ltc(p);
  Lemma2Result r;
  r.in_wo = classify_point(v, part) == RegionLabel::Wo;
  r.vdiff = v.vdiff();
  r.threshold = 2.0 * p.eps - p.vbar_l;
  r.literal = r.in_wo && r.vdiff < r.threshold;
  r.symmetric = r.in_wo && std::abs(r.vdiff) < r.threshold;
  return r;
}

const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::Lower: return "lower";
    case Quadrant::Upper: return "upper";
    case Quadrant::Left: return "left";
    case Quadrant::Right: return "right";
  }
  return "?";
}

AlphaId quadrant_alpha(Quadrant q) {
  switch (q) {
    case Quadrant::Lower: return AlphaId::Alpha1;
    case Quadrant::Upper: return AlphaId::Alpha2;
    case Quadrant::Left: return AlphaId::Alpha3;
    case Quadrant::Right: return AlphaId::Alpha4;
  }
  return AlphaId::Alpha1;
}

BasisConditionReport basis_conditions(const VoltagePair& v0, Quadrant q,
                                      const SystemParams& p) {
  if (!quadrant_precondition(v0, q, p)) {
    throw std::invalid_argument(
        "basis_conditions: state does not satisfy the quadrant precondition");
  }
  double a1, a2;
  drift_factors(p, a1, a2);
  const QuadrantForms f = quadrant_forms(p, q, a1, a2);
  BasisConditionReport r;
  r.quadrant = q;
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    r.slacks[i] = f.slack[i].eval(v0);
    ok = ok && r.slacks[i] > 0.0;
  }
  r.satisfied = ok;
  r.v_t1 = f.v_t1.eval(v0);
  r.v_t2 = f.v_t2.eval(v0);
  return r;
}

OscillationSetS build_basis_region(const SystemParams& p, double a1,
                                   double a2) {
  OscillationSetS s;
  s.s1 = quadrant_region(p, Quadrant::Lower, a1, a2);
  s.s2 = quadrant_region(p, Quadrant::Upper, a1, a2);
  s.s3 = quadrant_region(p, Quadrant::Left, a1, a2);
  s.s4 = quadrant_region(p, Quadrant::Right, a1, a2);
  for (const RegionSet* q : {&s.s1, &s.s2, &s.s3, &s.s4}) {
    for (const ConvexPolygon& part : q->parts) s.all.parts.push_back(part);
  }
  return s;
}

OscillationSetS build_set_s(const SystemParams& p) {
  if (!(p.g < 0.0)) {
    throw std::domain_error("build_set_s: requires g < 0");
  }
  double a1, a2;
  drift_factors(p, a1, a2);
  return build_basis_region(p, a1, a2);
}

bool in_oscillation_set(const VoltagePair& v, const SystemParams& p) {
  if (!(p.g < 0.0)) {
    throw std::domain_error("in_oscillation_set: requires g < 0");
  }
  if (!in_w(v, p)) return false;
  const DeadbandSignal f = deadband_signal(v, p);
  Quadrant q;
  if (f.f1 == 0.0 && f.f2 < 0.0) q = Quadrant::Lower;
  else if (f.f1 == 0.0 && f.f2 > 0.0) q = Quadrant::Upper;
  else if (f.f2 == 0.0 && f.f1 < 0.0) q = Quadrant::Left;
  else if (f.f2 == 0.0 && f.f1 > 0.0) q = Quadrant::Right;
  else return false;

  double a1, a2;
  drift_factors(p, a1, a2);
  const QuadrantForms forms = quadrant_forms(p, q, a1, a2);
  for (const Affine& s : forms.slack) {
    if (!(s.eval(v) > 0.0)) return false;
  }
  return true;
}

bool induction_condition(const Trajectory& t, const OscillationEvent& e) {
  if (e.id != AlphaId::Alpha1) {
    throw std::invalid_argument("induction_condition: expects an alpha1 event");
  }
  // v1 change across a maximal m50 burst starting at or after `from`
  auto burst_delta = [&t](double from, double* out) -> bool {
    const std::size_t n = t.samples.size();
    std::size_t i = 0;
    while (i < n && (t.samples[i].time < from ||
                     t.samples[i].mode != ModeLabel::M50)) {
      ++i;
    }
    if (i >= n) return false;
    std::size_t j = i;
    while (j < n && t.samples[j].mode == ModeLabel::M50) ++j;
    if (j >= n) return false;  // burst truncated by the horizon
    *out = t.samples[j].state.v.v1 - t.samples[i].state.v.v1;
    return true;
  };

  // Own-inverter window of this event: the burst after the first tap. The
  // first tap of an alpha1 cycle is the m30 that ends the opening burst.
  std::size_t tap_idx = 0;
  bool seen_tap = false;
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    if (t.samples[i].time >= e.start_time &&
        t.samples[i].time < e.end_time &&
        t.samples[i].mode == ModeLabel::M30) {
      tap_idx = i;
      seen_tap = true;
      break;
    }
  }
  if (!seen_tap) {
    throw std::invalid_argument("induction_condition: malformed segment");
  }

  double own = 0.0, coupled = 0.0;
  if (!burst_delta(t.samples[tap_idx].time, &own) ||
      !burst_delta(e.end_time, &coupled)) {
    throw std::invalid_argument(
        "induction_condition: trajectory ends before the follow-on burst");
  }
  return coupled + own > 0.0;
}

double growth_delta(const VoltagePair& v0, const SystemParams& p) {
  return growth_delta_variants(v0, p).first;
}

std::pair<double, double> growth_delta_variants(const VoltagePair& v0,
                                                const SystemParams& p) {
  if (!(p.g < 0.0)) {
    throw std::domain_error("growth_delta: requires g < 0");
  }
  if (!quadrant_precondition(v0, Quadrant::Lower, p)) {
    throw std::invalid_argument(
        "growth_delta: state must have f1 = 0 and f2 < 0");
  }
  const int n1 = actuation_count(p.d_l1, p.d_inv);
  const int n2 = actuation_count(p.d_l2, p.d_inv);
  const double dv2 = delta_v_inv(n2, v0.v2, p).own;
  const double c_main = v0.v1 + p.eta * dv2 + p.vbar_l;
  const double c_appendix = v0.v1 + p.eta * dv2 - p.vbar_l;
  const double main = (p.eta - 1.0) * (dv2 - delta_v_inv(n1, c_main, p).own);
  const double app = (p.eta - 1.0) * (dv2 - delta_v_inv(n1, c_appendix, p).own);
  return {main, app};
}

const char* to_string(Prediction p) {
  return p == Prediction::OscillationPossible ? "OscillationPossible"
                                              : "NoOscillation";
}

const char* to_string(Agreement a) {
  return a == Agreement::Consistent ? "consistent" : "necessity_violation";
}

AnalysisReport classify_ic(const VoltagePair& v0, const SystemParams& p,
                           double horizon) {
  AnalysisReport r;
  r.ic = v0;
  r.in_s = in_oscillation_set(v0, p);
  r.predicted =
      r.in_s ? Prediction::OscillationPossible : Prediction::NoOscillation;
  const Trajectory traj = simulate(v0, p, horizon);
  r.simulated = classify_outcome(traj).kind;
  r.completed_periods = static_cast<int>(detect_sequences(traj).size());
  r.agreement = (!r.in_s && r.completed_periods > 0)
                    ? Agreement::NecessityViolation
                    : Agreement::Consistent;
  return r;
}

}  // namespace volthunt
