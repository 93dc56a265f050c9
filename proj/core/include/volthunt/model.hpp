#pragma once

#include <utility>

#include "volthunt/params.hpp"

namespace volthunt {

/// f_i = max(v_i - v+, 0) - max(v- - v_i, 0). Boundary values count as
/// inside the deadband (f_i = 0).
DeadbandSignal deadband_signal(const VoltagePair& v, const SystemParams& p);

enum class TapDirection { Up, Down };

/// Shifts both node voltages by +/- vbar_l. Preserves v1 - v2 exactly
/// (taps are slope-one jumps on the voltage plane).
VoltagePair ltc_tap(const VoltagePair& v, TapDirection dir,
                    const SystemParams& p);

struct InverterMask {
  bool inv1 = false;
  bool inv2 = false;
};

/// One joint inverter actuation: v' = v - X G_masked (v - v_ref 1), where
/// G_masked zeroes the gain row of every inactive inverter. An inactive
/// inverter injects nothing but still receives coupling from the active one.
VoltagePair inverter_step(const VoltagePair& v, InverterMask active,
                          const SystemParams& p);

struct InverterDelta {
  double own = 0.0;      ///< change at the actuating inverter's node
  double coupled = 0.0;  ///< change at the other node, damped by eta
};

/// Closed form for N consecutive actuations of a single inverter whose node
/// voltage starts at v_i:
///   own     = ((1 - chi g)^N - 1) (v_i - v_ref)
///   coupled = eta * own
/// Matches N-fold iteration of inverter_step with one active inverter.
/// Throws std::invalid_argument for n < 1.
InverterDelta delta_v_inv(int n, double v_i, const SystemParams& p);

/// Same closed form with a real-valued exponent; used when the delay ratio
/// is taken literally instead of floored.
InverterDelta delta_v_inv_real(double n, double v_i, const SystemParams& p);

/// Number of inverter actuations fitting within an LTC delay window.
int actuation_count(double d_ltc, double d_inv);

enum class ClosedLoopClass { ConvergesToRef, Diverges, Marginal };

/// Eigenvalues of A_cl = I - X diag(g, g), computed from the characteristic
/// polynomial. Closed form: 1 - chi g (1 +/- eta).
std::pair<double, double> closed_loop_eigenvalues(const SystemParams& p);

/// ConvergesToRef iff g > 0 and the spectral radius of A_cl is < 1
/// (equivalently 0 < G < 2 X^-1 for G = g I). Diverges iff g < 0, where the
/// spectral radius exceeds 1. Marginal otherwise (g = 0 or boundary).
ClosedLoopClass closed_loop_class(const SystemParams& p);

}  // namespace volthunt
