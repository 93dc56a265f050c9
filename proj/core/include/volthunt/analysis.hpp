#pragma once

#include <array>
#include <optional>
#include <utility>

#include "volthunt/automaton.hpp"
#include "volthunt/geometry.hpp"
#include "volthunt/params.hpp"
#include "volthunt/regions.hpp"

namespace volthunt {

/// Margin width c = vbar_l - 2 eps of the ring around D from which every
/// tap overshoots the whole deadband; absent when the ring does not exist.
std::optional<double> lemma1_margin(const SystemParams& p);

/// Marginal-oscillation predicate for the two-LTC subsystem. `literal`
/// follows the signed inequality as printed; `symmetric` uses |vdiff| so
/// both band orientations are treated alike. Requires vbar_l <= 2 eps.
struct Lemma2Result {
  bool in_wo = false;
  double vdiff = 0.0;
  double threshold = 0.0;  ///< 2 eps - vbar_l
  bool literal = false;
  bool symmetric = false;

  bool satisfied() const { return symmetric; }
};

Lemma2Result lemma2_check(const VoltagePair& v, const SystemParams& p);

/// W_o band quadrants and their hunting sequences.
enum class Quadrant { Lower, Upper, Left, Right };

const char* to_string(Quadrant q);

AlphaId quadrant_alpha(Quadrant q);

/// Evaluation of the four basis inequalities for one hunting period from a
/// state in the given quadrant. Slacks are positive iff the printed
/// inequality holds; satisfied requires all four strictly positive.
struct BasisConditionReport {
  Quadrant quadrant = Quadrant::Lower;
  std::array<double, 4> slacks{};
  bool satisfied = false;
  double v_t1 = 0.0;  ///< violating voltage right after the first tap
  double v_t2 = 0.0;  ///< companion voltage right after the first tap
};

/// Throws std::invalid_argument when v0 does not satisfy the quadrant's
/// deadband precondition (e.g. lower requires f1 = 0 and f2 < 0).
BasisConditionReport basis_conditions(const VoltagePair& v0, Quadrant q,
                                      const SystemParams& p);

/// The oscillation-admitting set S: per-quadrant intersections of the four
/// basis inequalities (affine in the voltages once the inverter drift is in
/// closed form) with the quadrant precondition and W.
struct OscillationSetS {
  RegionSet s1, s2, s3, s4;
  RegionSet all;

  double area() const { return all.area(); }
  bool empty() const { return all.empty(); }
};

/// Basis-condition region for explicit drift factors a1 = (1-chi g)^N1 - 1
/// and a2 likewise; works for either sign of g. This is the shared
/// machinery behind S and the damped-case report region.
OscillationSetS build_basis_region(const SystemParams& p, double a1, double a2);

/// S with the actuation counts floor(d_l1/d_inv), floor(d_l2/d_inv).
/// Requires g < 0.
OscillationSetS build_set_s(const SystemParams& p);

/// Exact membership in S (direct inequality evaluation, strict slacks).
bool in_oscillation_set(const VoltagePair& v, const SystemParams& p);

/// Measured repetition condition on a completed alpha1 period: the v1
/// changes over the event's own-inverter window plus the following coupled
/// window must sum positive for the sequence to repeat. Throws when the
/// trajectory does not contain the needed segments.
bool induction_condition(const Trajectory& t, const OscillationEvent& e);

/// Closed-form vdiff growth over one alpha1 period started at v0:
/// (eta - 1) (dv2(N2, v2) - dv1(N1, c)) with c = v1 + eta dv2 + vbar_l.
/// Requires g < 0 and v0 in the lower-quadrant precondition set.
double growth_delta(const VoltagePair& v0, const SystemParams& p);

/// Main value plus the variant that forms c with -vbar_l; the +vbar_l form
/// is authoritative.
std::pair<double, double> growth_delta_variants(const VoltagePair& v0,
                                                const SystemParams& p);

enum class Prediction { OscillationPossible, NoOscillation };
enum class Agreement { Consistent, NecessityViolation };

const char* to_string(Prediction p);
const char* to_string(Agreement a);

/// Necessity cross-check for one initial condition: membership in S against
/// the simulated outcome. A completed alpha period from outside S is a
/// necessity violation and must never occur.
struct AnalysisReport {
  VoltagePair ic;
  bool in_s = false;
  Prediction predicted = Prediction::NoOscillation;
  Outcome simulated = Outcome::StillOscillating;
  int completed_periods = 0;
  Agreement agreement = Agreement::Consistent;
};

AnalysisReport classify_ic(const VoltagePair& v0, const SystemParams& p,
                           double horizon);

}  // namespace volthunt
