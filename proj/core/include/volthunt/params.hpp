#pragma once

#include <string>
#include <vector>

namespace volthunt {

/// Circuit and controller parameters for the two-LTC / two-inverter feeder.
/// Single source of truth for every tunable quantity; the deadband
/// boundaries are derived from (v_ref, eps) and never stored.
struct SystemParams {
  double v_ref = 1.0;    ///< voltage reference (p.u.)
  double eps = 0.05;     ///< half deadband width (p.u.)
  double chi = 0.1;      ///< line reactance to the substation (p.u.)
  double eta = 0.9;      ///< impedance damping factor, 0 < eta < 1
  double d_inv = 4.0;    ///< inverter 1 and 2 delay (s)
  double d_l1 = 30.0;    ///< LTC1 delay (s)
  double d_l2 = 40.0;    ///< LTC2 delay (s)
  double vbar_l = 0.03;  ///< tap voltage step (p.u.)
  double g = 0.0;        ///< inverter control gain (signed)
  double t_s = 1.0;      ///< simulation timestep (s)

  double v_minus() const { return v_ref - eps; }
  double v_plus() const { return v_ref + eps; }

  static SystemParams defaults() { return SystemParams{}; }

  /// Hard invariants (positivity, 0 < eta < 1) throw std::invalid_argument.
  /// The delay ordering d_inv < d_l1 < d_l2 < 2 d_l1 and vbar_l < 2 eps are
  /// deliberately soft: returned as warnings so the vbar_l > 2 eps regime
  /// stays reachable.
  std::vector<std::string> validate() const;

  /// Flat JSON object, keys exactly:
  /// v_ref, eps, chi, eta, d_inv, d_l1, d_l2, vbar_l, g, t_s.
  std::string to_json() const;

  /// Parses the flat document written by to_json(). Unknown keys are
  /// ignored so scenario files can embed extra fields; missing keys throw.
  static SystemParams from_json(const std::string& text);

  bool operator==(const SystemParams&) const = default;
};

/// Voltages at the two regulated nodes.
struct VoltagePair {
  double v1 = 0.0;
  double v2 = 0.0;

  double vdiff() const { return v1 - v2; }

  bool operator==(const VoltagePair&) const = default;
};

/// Signed deadband excess per node: f_i > 0 for overvoltage, f_i < 0 for
/// undervoltage, 0 inside the closed deadband.
struct DeadbandSignal {
  double f1 = 0.0;
  double f2 = 0.0;

  bool any() const { return f1 != 0.0 || f2 != 0.0; }
  double sum() const { return f1 + f2; }
};

/// Path reactance matrix X. Symmetric with x11 = x22 = chi and
/// x12 = x21 = eta * chi, so x11 > x12 for 0 < eta < 1.
struct CouplingMatrix {
  double x11 = 0.0;
  double x12 = 0.0;
  double x21 = 0.0;
  double x22 = 0.0;

  static CouplingMatrix from(const SystemParams& p) {
    return {p.chi, p.eta * p.chi, p.eta * p.chi, p.chi};
  }
};

}  // namespace volthunt
