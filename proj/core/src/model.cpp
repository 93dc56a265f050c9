#include "volthunt/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace volthunt {

DeadbandSignal deadband_signal(const VoltagePair& v, const SystemParams& p) {
  const double vp = p.v_plus();
  const double vm = p.v_minus();
  return {std::max(v.v1 - vp, 0.0) - std::max(vm - v.v1, 0.0),
          std::max(v.v2 - vp, 0.0) - std::max(vm - v.v2, 0.0)};
}

VoltagePair ltc_tap(const VoltagePair& v, TapDirection dir,
                    const SystemParams& p) {
  const double step = dir == TapDirection::Up ? p.vbar_l : -p.vbar_l;
  return {v.v1 + step, v.v2 + step};
}

VoltagePair inverter_step(const VoltagePair& v, InverterMask active,
                          const SystemParams& p) {
  const double g1 = active.inv1 ? p.g : 0.0;
  const double g2 = active.inv2 ? p.g : 0.0;
  const double e1 = v.v1 - p.v_ref;
  const double e2 = v.v2 - p.v_ref;
  const CouplingMatrix x = CouplingMatrix::from(p);
  // v' = v - X diag(g1, g2) (v - v_ref 1)
  return {v.v1 - (x.x11 * g1 * e1 + x.x12 * g2 * e2),
          v.v2 - (x.x21 * g1 * e1 + x.x22 * g2 * e2)};
}

InverterDelta delta_v_inv(int n, double v_i, const SystemParams& p) {
  if (n < 1) {
    throw std::invalid_argument("delta_v_inv: need at least one actuation");
  }
  return delta_v_inv_real(static_cast<double>(n), v_i, p);
}

InverterDelta delta_v_inv_real(double n, double v_i, const SystemParams& p) {
  if (!(n > 0.0)) {
    throw std::invalid_argument("delta_v_inv: need a positive actuation count");
  }
  const double own = (std::pow(1.0 - p.chi * p.g, n) - 1.0) * (v_i - p.v_ref);
  return {own, p.eta * own};
}

int actuation_count(double d_ltc, double d_inv) {
  return static_cast<int>(std::floor(d_ltc / d_inv + 1e-9));
}

std::pair<double, double> closed_loop_eigenvalues(const SystemParams& p) {
  // Characteristic polynomial route for the symmetric 2x2 A_cl.
  const double a = 1.0 - p.chi * p.g;        // diagonal
  const double b = -p.eta * p.chi * p.g;     // off-diagonal
  const double tr = 2.0 * a;
  const double det = a * a - b * b;
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

ClosedLoopClass closed_loop_class(const SystemParams& p) {
  auto [lo, hi] = closed_loop_eigenvalues(p);
  const double radius = std::max(std::abs(lo), std::abs(hi));
  if (p.g > 0.0 && radius < 1.0) return ClosedLoopClass::ConvergesToRef;
  if (p.g < 0.0) return ClosedLoopClass::Diverges;
  return ClosedLoopClass::Marginal;
}

}  // namespace volthunt
