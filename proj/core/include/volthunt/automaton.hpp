#pragma once

#include <string>
#include <utility>
#include <vector>

#include "volthunt/model.hpp"
#include "volthunt/params.hpp"

namespace volthunt {

/// Automaton state: device timers plus node voltages.
struct FullState {
  double z1 = 0.0;  ///< LTC1 timer (s)
  double z2 = 0.0;  ///< LTC2 timer (s)
  double z3 = 0.0;  ///< shared inverter timer (s)
  VoltagePair v;
};

enum class ModeLabel { M10, M20, M30, M40, M50, M60, M70, M80 };

const char* to_string(ModeLabel m);

/// Selects the unique mode to execute from state x, given the previously
/// executed mode (the reset modes m60/m70 key on it). Priority when several
/// guards hold: resets > inverter (m50) > LTC1 > LTC2 > increment (m80).
/// Tap direction is disambiguated by sign(f1 + f2). Timer guards fire once
/// the violation has persisted for the device delay, counting the sample at
/// which the violation first appears.
ModeLabel guard_eval(const FullState& x, ModeLabel prev_mode,
                     const SystemParams& p);

/// Applies one mode map. Taps shift both voltages by +/- vbar_l and restart
/// the acting timer; m50 applies inverter_step with the per-inverter mask
/// (1{f_i != 0}) and restarts z3; m60/m70 hand the timers to the devices
/// facing the violation a tap just created; m80 increments all timers.
/// After every map, a timer whose deadband condition no longer holds is
/// cleared to zero (devices respond only to persistent violations).
FullState apply_mode(const FullState& x, ModeLabel mode,
                     const SystemParams& p);

/// guard_eval followed by apply_mode.
std::pair<FullState, ModeLabel> step(const FullState& x, ModeLabel prev_mode,
                                     const SystemParams& p);

struct TrajectorySample {
  double time = 0.0;
  FullState state;     ///< state at `time`
  ModeLabel mode = ModeLabel::M80;  ///< mode fired from this state
};

enum class Outcome { Quiescent, LandedInD, LeftW, StillOscillating };

const char* to_string(Outcome o);

struct OutcomeReport {
  Outcome kind = Outcome::StillOscillating;
  double time = 0.0;  ///< T1 (entered D) or T2 (left W); horizon otherwise
};

struct SimOptions {
  /// When >= 0, flips the sign of g once the simulation clock reaches this
  /// time (the remotely-negated-gain scenario).
  double negate_g_at = -1.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  SystemParams params;
  OutcomeReport outcome;
  double g_negated_at = -1.0;  ///< time the gain flip was applied, -1 if never

  double t_s() const { return params.t_s; }
};

/// Simulates from zeroed timers. Terminates early when the state leaves W
/// (abnormal operation, recorded as T2) or has rested in the deadband with
/// zero signals for longer than d_l2 (D is invariant). Throws on a
/// non-positive horizon.
Trajectory simulate(const VoltagePair& v0, const SystemParams& p,
                    double horizon, const SimOptions& opts = {});

enum class AlphaId { Alpha1, Alpha2, Alpha3, Alpha4 };

const char* to_string(AlphaId id);

/// One completed hunting period. start anchors to the first inverter firing
/// of the cycle (the voltages are still at their cycle-onset values there);
/// end is the reset mode that closes the cycle.
struct OscillationEvent {
  AlphaId id = AlphaId::Alpha1;
  double start_time = 0.0;
  double end_time = 0.0;
  double vdiff_start = 0.0;
  double vdiff_end = 0.0;
  VoltagePair start_state;  ///< voltages at the cycle onset
  std::string pattern;      ///< matched mode sequence, m80 elided
};

/// Scans the mode string with m80 occurrences elided for the four hunting
/// patterns, one per W_o band:
///   alpha1 (lower): m50+ m30 m70 m50+ m20 m60
///   alpha2 (upper): m50+ m40 m70 m50+ m10 m60
///   alpha3 (left):  m50+ m10 m60 m50+ m40 m70
///   alpha4 (right): m50+ m20 m60 m50+ m30 m70
/// alpha3 coincides with the sequence the source material prints for the
/// lower band; labels here follow the band geometry.
std::vector<OscillationEvent> detect_sequences(const Trajectory& t);

/// Terminal classification of a trajectory. T1 is the first instant the
/// voltages entered D with no pending deadband violation; T2 the first
/// instant outside W.
OutcomeReport classify_outcome(const Trajectory& t);

}  // namespace volthunt
