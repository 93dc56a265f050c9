#include <cmath>
#include <random>

#include "doctest.h"
#include "volthunt/model.hpp"
#include "volthunt/regions.hpp"

using namespace volthunt;

namespace {

SystemParams with_gain(double g) {
  SystemParams p = SystemParams::defaults();
  p.g = g;
  return p;
}

// Independent oracle: iterate the one-step update with a single active
// inverter instead of using the closed form.
InverterDelta iterate_single_inverter(int n, double v_i, bool first_node,
                                      const SystemParams& p) {
  VoltagePair v = first_node ? VoltagePair{v_i, p.v_ref}
                             : VoltagePair{p.v_ref, v_i};
  const VoltagePair start = v;
  for (int k = 0; k < n; ++k) {
    v = inverter_step(v, {first_node, !first_node}, p);
  }
  if (first_node) return {v.v1 - start.v1, v.v2 - start.v2};
  return {v.v2 - start.v2, v.v1 - start.v1};
}

}  // namespace

TEST_CASE("deadband signal examples") {
  const SystemParams p = SystemParams::defaults();
  auto f = deadband_signal({1.0, 1.0}, p);
  CHECK(f.f1 == 0.0);
  CHECK(f.f2 == 0.0);

  f = deadband_signal({1.06, 0.94}, p);
  CHECK(f.f1 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(f.f2 == doctest::Approx(-0.01).epsilon(1e-12));

  // boundary counts as inside
  f = deadband_signal({1.05, 0.95}, p);
  CHECK(f.f1 == 0.0);
  CHECK(f.f2 == 0.0);
}

TEST_CASE("deadband sign structure matches the three-way split") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> voltage(0.8, 1.2);
  std::uniform_real_distribution<double> eps(0.01, 0.12);
  for (int i = 0; i < 10000; ++i) {
    SystemParams p = SystemParams::defaults();
    p.eps = eps(rng);
    const VoltagePair v{voltage(rng), voltage(rng)};
    const DeadbandSignal f = deadband_signal(v, p);
    for (auto [vi, fi] : {std::pair{v.v1, f.f1}, std::pair{v.v2, f.f2}}) {
      if (vi > p.v_plus()) {
        CHECK(fi > 0.0);
      } else if (vi < p.v_minus()) {
        CHECK(fi < 0.0);
      } else {
        CHECK(fi == 0.0);
      }
    }
  }
}

TEST_CASE("ltc tap shifts both voltages and preserves vdiff") {
  const SystemParams p = SystemParams::defaults();
  VoltagePair v = ltc_tap({0.94, 0.92}, TapDirection::Up, p);
  CHECK(v.v1 == doctest::Approx(0.97).epsilon(1e-15));
  CHECK(v.v2 == doctest::Approx(0.95).epsilon(1e-15));

  v = ltc_tap({1.06, 1.02}, TapDirection::Down, p);
  CHECK(v.v1 == doctest::Approx(1.03).epsilon(1e-15));
  CHECK(v.v2 == doctest::Approx(0.99).epsilon(1e-15));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> voltage(0.85, 1.15);
  for (int i = 0; i < 1000; ++i) {
    const VoltagePair x{voltage(rng), voltage(rng)};
    const VoltagePair up = ltc_tap(x, TapDirection::Up, p);
    CHECK(std::abs(up.vdiff() - x.vdiff()) < 1e-15);
    const VoltagePair back = ltc_tap(up, TapDirection::Down, p);
    CHECK(back.v1 == doctest::Approx(x.v1).epsilon(1e-15));
    CHECK(back.v2 == doctest::Approx(x.v2).epsilon(1e-15));
  }
}

TEST_CASE("inverter step examples") {
  // zero error vector is a fixed point
  const VoltagePair fixed =
      inverter_step({1.0, 1.0}, {true, true}, with_gain(0.7));
  CHECK(fixed.v1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fixed.v2 == doctest::Approx(1.0).epsilon(1e-15));

  // single active inverter, companion still receives coupling
  VoltagePair v = inverter_step({1.0, 0.94}, {false, true}, with_gain(-0.5));
  CHECK(v.v2 == doctest::Approx(0.937).epsilon(1e-12));
  CHECK(v.v1 == doctest::Approx(0.9973).epsilon(1e-12));

  v = inverter_step({1.02, 1.0}, {true, false}, with_gain(0.5));
  CHECK(v.v1 == doctest::Approx(1.019).epsilon(1e-12));
  CHECK(v.v2 == doctest::Approx(0.99910).epsilon(1e-12));
  // g > 0 moves the active voltage toward the reference
  CHECK(std::abs(v.v1 - 1.0) < std::abs(1.02 - 1.0));
}

TEST_CASE("per-step drift direction is fixed by the sign of g") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> voltage(0.86, 1.14);
  std::uniform_real_distribution<double> gain(0.05, 0.9);
  for (int i = 0; i < 500; ++i) {
    SystemParams p = SystemParams::defaults();
    const double mag = gain(rng);
    const bool positive = (i % 2) == 0;
    p.g = positive ? mag : -mag;
    double v2 = voltage(rng);
    if (std::abs(v2 - p.v_ref) < 1e-6) continue;
    const bool toward = positive;
    double prev_sign = 0.0;
    VoltagePair v{p.v_ref, v2};
    for (int k = 0; k < 30; ++k) {
      const VoltagePair next = inverter_step(v, {false, true}, p);
      const double delta = next.v2 - v.v2;
      const double sign = delta > 0.0 ? 1.0 : (delta < 0.0 ? -1.0 : 0.0);
      if (prev_sign != 0.0) CHECK(sign == prev_sign);  // constant direction
      prev_sign = sign;
      if (toward) {
        CHECK(std::abs(next.v2 - p.v_ref) < std::abs(v.v2 - p.v_ref));
      } else {
        CHECK(std::abs(next.v2 - p.v_ref) > std::abs(v.v2 - p.v_ref));
      }
      v = next;
    }
  }
}

TEST_CASE("delta_v_inv closed form matches the iterative oracle") {
  SystemParams p = with_gain(-0.3);

  // frozen examples, oracle-derived
  InverterDelta d = delta_v_inv(7, 1.06, p);
  CHECK(d.own == doctest::Approx(0.0137924).epsilon(1e-4));
  CHECK(d.coupled == doctest::Approx(0.0124132).epsilon(1e-4));
  InverterDelta it = iterate_single_inverter(7, 1.06, true, p);
  CHECK(d.own == doctest::Approx(it.own).epsilon(1e-12));
  CHECK(d.coupled == doctest::Approx(it.coupled).epsilon(1e-12));

  p.g = -0.5;
  d = delta_v_inv(10, 0.94, p);
  CHECK(d.own == doctest::Approx(-0.0377337).epsilon(1e-4));

  // fixed point at the reference
  CHECK(delta_v_inv(13, p.v_ref, p).own == 0.0);
  CHECK_THROWS_AS(delta_v_inv(0, 1.0, p), std::invalid_argument);
}

TEST_CASE("delta_v_inv homogeneity and oracle agreement on random draws") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> voltage(0.86, 1.14);
  std::uniform_real_distribution<double> gain(-0.9, 0.9);
  std::uniform_real_distribution<double> chi(0.05, 0.2);
  std::uniform_real_distribution<double> eta(0.2, 0.95);
  std::uniform_int_distribution<int> count(1, 20);
  for (int i = 0; i < 1000; ++i) {
    SystemParams p = SystemParams::defaults();
    p.g = gain(rng);
    p.chi = chi(rng);
    p.eta = eta(rng);
    const int n = count(rng);
    const double vi = voltage(rng);
    const bool first = (i % 2) == 0;
    const InverterDelta cf = delta_v_inv(n, vi, p);
    const InverterDelta it = iterate_single_inverter(n, vi, first, p);
    CHECK(std::abs(cf.own - it.own) < 1e-12);
    CHECK(std::abs(cf.coupled - it.coupled) < 1e-12);
    CHECK(std::abs(cf.coupled - p.eta * cf.own) < 1e-12);
  }
}

TEST_CASE("closed-loop classification and eigenvalues") {
  SystemParams p = with_gain(0.5);
  auto [lo, hi] = closed_loop_eigenvalues(p);
  CHECK(lo == doctest::Approx(0.905).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.995).epsilon(1e-12));
  CHECK(closed_loop_class(p) == ClosedLoopClass::ConvergesToRef);

  p.g = -0.5;
  std::tie(lo, hi) = closed_loop_eigenvalues(p);
  CHECK(lo == doctest::Approx(1.005).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.095).epsilon(1e-12));
  CHECK(closed_loop_class(p) == ClosedLoopClass::Diverges);

  p.g = 0.0;
  CHECK(closed_loop_class(p) == ClosedLoopClass::Marginal);
}

TEST_CASE("classification agrees with the no-deadband closed loop") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> chi(0.08, 0.25);
  std::uniform_real_distribution<double> eta(0.3, 0.85);
  std::uniform_real_distribution<double> frac(0.25, 0.85);
  std::uniform_real_distribution<double> neg(0.1, 1.0);
  for (int i = 0; i < 200; ++i) {
    SystemParams p = SystemParams::defaults();
    p.chi = chi(rng);
    p.eta = eta(rng);
    if (i % 2 == 0) {
      p.g = frac(rng) * 2.0 / (p.chi * (1.0 + p.eta));
    } else {
      p.g = -neg(rng);
    }
    const ClosedLoopClass cls = closed_loop_class(p);
    VoltagePair v{1.04, 0.94};
    bool left_p = false;
    for (int k = 0; k < 200 && !left_p; ++k) {
      v = inverter_step(v, {true, true}, p);
      left_p = !in_p_box(v, p);
    }
    if (cls == ClosedLoopClass::ConvergesToRef) {
      CHECK(std::max(std::abs(v.v1 - p.v_ref), std::abs(v.v2 - p.v_ref)) <
            1e-6);
    }
    if (cls == ClosedLoopClass::Diverges) CHECK(left_p);
  }
}

TEST_CASE("parameter validation") {
  SystemParams p = SystemParams::defaults();
  CHECK(p.validate().empty());

  p.vbar_l = 0.25;
  p.eps = 0.1;
  CHECK_FALSE(p.validate().empty());  // vbar_l >= 2 eps is a warning only

  p = SystemParams::defaults();
  p.eps = -0.05;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = SystemParams::defaults();
  p.eta = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
