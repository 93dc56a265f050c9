#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "volthunt/automaton.hpp"
#include "volthunt/model.hpp"
#include "volthunt/regions.hpp"

using namespace volthunt;

namespace {

SystemParams with_gain(double g) {
  SystemParams p = SystemParams::defaults();
  p.g = g;
  return p;
}

struct RefTap {
  double time;
  int ltc;  // 1 or 2
  TapDirection dir;
  VoltagePair after;
};

// Event-driven two-LTC reference: each LTC fires its delay after the onset
// of a persistent violation of its own node signal. Independent of the
// automaton's step machinery.
std::vector<RefTap> two_ltc_reference(VoltagePair v, const SystemParams& p,
                                      double horizon) {
  std::vector<RefTap> taps;
  std::optional<double> onset1, onset2;
  double t = 0.0;
  DeadbandSignal f = deadband_signal(v, p);
  if (f.f1 != 0.0) onset1 = 0.0;
  if (f.f2 != 0.0) onset2 = 0.0;
  while (t <= horizon) {
    if (!f.any()) break;
    double due1 = onset1 ? *onset1 + p.d_l1 : 1e300;
    double due2 = onset2 ? *onset2 + p.d_l2 : 1e300;
    const double due = std::min(due1, due2);
    if (due > horizon) break;
    if (f.sum() == 0.0) break;  // opposite violations: outside W anyway
    const TapDirection dir =
        f.sum() < 0.0 ? TapDirection::Up : TapDirection::Down;
    v = ltc_tap(v, dir, p);
    t = due;
    const int which = due1 <= due2 ? 1 : 2;
    taps.push_back({t, which, dir, v});

    const DeadbandSignal fn = deadband_signal(v, p);
    if (which == 1) onset1.reset();
    if (which == 2) onset2.reset();
    if (fn.f1 == 0.0) onset1.reset();
    else if (!onset1) onset1 = t;
    if (fn.f2 == 0.0) onset2.reset();
    else if (!onset2) onset2 = t;
    f = fn;
  }
  return taps;
}

std::vector<RefTap> automaton_taps(const Trajectory& traj) {
  std::vector<RefTap> taps;
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const ModeLabel m = traj.samples[i].mode;
    int ltc = 0;
    TapDirection dir = TapDirection::Up;
    if (m == ModeLabel::M10) { ltc = 1; dir = TapDirection::Up; }
    if (m == ModeLabel::M20) { ltc = 1; dir = TapDirection::Down; }
    if (m == ModeLabel::M30) { ltc = 2; dir = TapDirection::Up; }
    if (m == ModeLabel::M40) { ltc = 2; dir = TapDirection::Down; }
    if (ltc != 0) {
      taps.push_back(
          {traj.samples[i].time, ltc, dir, traj.samples[i + 1].state.v});
    }
  }
  return taps;
}

}  // namespace

TEST_CASE("guard selection") {
  const SystemParams p = with_gain(-0.5);

  FullState x{0.0, 6.0, 5.0, {1.0, 0.94}};  // z3 past d_inv, f2 < 0
  CHECK(guard_eval(x, ModeLabel::M80, p) == ModeLabel::M50);

  x = {0.0, 0.0, 0.0, {1.0, 1.0}};
  CHECK(guard_eval(x, ModeLabel::M80, p) == ModeLabel::M80);

  // reset mode keyed on the previous tap
  x = {1.0, 1.0, 2.0, {1.06, 1.0}};  // f1 > 0 after an LTC2 up-tap
  CHECK(guard_eval(x, ModeLabel::M30, p) == ModeLabel::M70);

  // LTC direction from the sign of f1 + f2
  x = {31.0, 0.0, 1.0, {1.0, 0.94}};
  CHECK(guard_eval(x, ModeLabel::M80, p) == ModeLabel::M10);
  x = {31.0, 0.0, 1.0, {1.0, 1.06}};
  CHECK(guard_eval(x, ModeLabel::M80, p) == ModeLabel::M20);

  // inverter priority over a simultaneous LTC guard
  x = {31.0, 0.0, 4.0, {1.0, 0.94}};
  CHECK(guard_eval(x, ModeLabel::M80, p) == ModeLabel::M50);
}

TEST_CASE("mode maps") {
  const SystemParams p = with_gain(-0.5);

  // m80 increments every timer
  FullState x{0.0, 0.0, 0.0, {1.0, 0.94}};
  FullState n = apply_mode(x, ModeLabel::M80, p);
  CHECK(n.z2 == 1.0);
  CHECK(n.z3 == 1.0);
  CHECK(n.z1 == 0.0);  // f1 = 0 keeps the LTC1 timer cleared
  CHECK(n.v == x.v);

  // m30 tap, voltages frozen from the default lower-band run
  x = {0.0, 41.0, 1.0, {1.0060397, 0.9022663}};
  n = apply_mode(x, ModeLabel::M30, p);
  CHECK(n.v.v1 == doctest::Approx(1.0360397).epsilon(1e-12));
  CHECK(n.v.v2 == doctest::Approx(0.9322663).epsilon(1e-12));
  // violation persists, so the acting timer restarts at one step
  CHECK(n.z2 == p.t_s);
  CHECK(n.z1 == 0.0);

  // m60 leaves z1 and the voltages alone
  x = {7.0, 12.0, 9.0, {1.06, 1.07}};
  n = apply_mode(x, ModeLabel::M60, p);
  CHECK(n.z1 == 7.0);
  CHECK(n.z2 == p.t_s);
  CHECK(n.z3 == p.t_s);
  CHECK(n.v == x.v);

  // a tap that lands everything in the deadband clears all timers
  x = {0.0, 41.0, 2.0, {1.0, 0.944}};
  n = apply_mode(x, ModeLabel::M30, p);
  CHECK(n.z1 == 0.0);
  CHECK(n.z2 == 0.0);
  CHECK(n.z3 == 0.0);
}

TEST_CASE("m80 fires exactly when no other guard holds") {
  const SystemParams p = with_gain(-0.3);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> voltage(0.86, 1.14);
  std::uniform_int_distribution<int> timer(0, 45);
  const ModeLabel prevs[] = {ModeLabel::M10, ModeLabel::M30, ModeLabel::M50,
                             ModeLabel::M80};
  for (int i = 0; i < 5000; ++i) {
    const FullState x{static_cast<double>(timer(rng)),
                      static_cast<double>(timer(rng)),
                      static_cast<double>(timer(rng)),
                      {voltage(rng), voltage(rng)}};
    const ModeLabel prev = prevs[i % 4];
    const ModeLabel m = guard_eval(x, prev, p);
    const DeadbandSignal f = deadband_signal(x.v, p);
    const bool any_guard =
        ((prev == ModeLabel::M10 && (f.f1 > 0 || f.f2 > 0)) ||
         (prev == ModeLabel::M30 && (f.f1 > 0 || f.f2 > 0)) ||
         (x.z3 >= p.d_inv && f.any()) ||
         (x.z1 >= p.d_l1 && f.sum() != 0.0) ||
         (x.z2 >= p.d_l2 && f.sum() != 0.0));
    CHECK((m == ModeLabel::M80) == !any_guard);
  }
}

TEST_CASE("simulation is deterministic") {
  const SystemParams p = with_gain(-0.5);
  const Trajectory a = simulate({1.04, 0.94}, p, 400.0);
  const Trajectory b = simulate({1.04, 0.94}, p, 400.0);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].state.v.v1 == b.samples[i].state.v.v1);
    CHECK(a.samples[i].state.v.v2 == b.samples[i].state.v.v2);
    CHECK(a.samples[i].state.z1 == b.samples[i].state.z1);
    CHECK(a.samples[i].mode == b.samples[i].mode);
  }
}

TEST_CASE("quiescent start inside the deadband") {
  const SystemParams p = with_gain(-0.5);
  const Trajectory t = simulate({1.0, 1.0}, p, 600.0);
  CHECK(t.outcome.kind == Outcome::Quiescent);
  CHECK(t.outcome.time == 0.0);
  for (const TrajectorySample& s : t.samples) {
    CHECK(s.state.v == VoltagePair{1.0, 1.0});
  }
  CHECK(detect_sequences(t).empty());
  CHECK_THROWS_AS(simulate({1.0, 1.0}, p, 0.0), std::invalid_argument);
}

TEST_CASE("default negative-gain scenario ratchets out of W") {
  const SystemParams p = with_gain(-0.5);
  const Trajectory t = simulate({1.04, 0.94}, p, 600.0);
  CHECK(t.outcome.kind == Outcome::LeftW);
  CHECK(t.outcome.time > 0.0);
  CHECK(t.outcome.time < 600.0);

  // the inverter drift beats the tap here: LTC2 keeps tapping up, the
  // undervoltage never clears, and no two-tap hunting period completes
  int m30 = 0, other_taps = 0;
  for (const TrajectorySample& s : t.samples) {
    if (s.mode == ModeLabel::M30) ++m30;
    if (s.mode == ModeLabel::M10 || s.mode == ModeLabel::M20 ||
        s.mode == ModeLabel::M40) {
      ++other_taps;
    }
  }
  CHECK(m30 >= 3);
  CHECK(other_taps == 0);
  CHECK(detect_sequences(t).empty());

  // vdiff still grows across the run
  CHECK(t.samples.back().state.v.vdiff() > t.samples.front().state.v.vdiff());
}

TEST_CASE("default positive-gain scenario lands in the deadband") {
  const SystemParams p = with_gain(0.5);
  const Trajectory t = simulate({1.04, 0.94}, p, 600.0);
  CHECK(t.outcome.kind == Outcome::LandedInD);
  CHECK(t.outcome.time > 0.0);
  const VoltagePair end = t.samples.back().state.v;
  CHECK(deadband_signal(end, p).any() == false);
}

TEST_CASE("mild negative gain produces repeating alpha1 periods") {
  const SystemParams p = with_gain(-0.1);
  const Trajectory t = simulate({1.04, 0.94}, p, 600.0);
  const std::vector<OscillationEvent> events = detect_sequences(t);
  REQUIRE(events.size() >= 2);
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].id == AlphaId::Alpha1);
    CHECK(events[i].vdiff_end > events[i].vdiff_start);
    if (i > 0) {
      CHECK(events[i].vdiff_start > events[i - 1].vdiff_start);
      // one period per LTC pair of delays plus the discrete-step lags
      const double period = events[i].start_time - events[i - 1].start_time;
      CHECK(period >= p.d_l1 + p.d_l2);
      CHECK(period <= p.d_l1 + p.d_l2 + 4.0 * p.t_s);
    }
  }

  // the burst counts realize the floor-ratio actuation counts
  int first_burst = 0;
  for (const TrajectorySample& s : t.samples) {
    if (s.mode == ModeLabel::M50) ++first_burst;
    if (s.mode == ModeLabel::M30) break;
  }
  CHECK(first_burst == actuation_count(p.d_l2, p.d_inv));
}

TEST_CASE("deadband is invariant") {
  for (double g : {-0.3, 0.4}) {
    const SystemParams p = with_gain(g);
    const Trajectory t = simulate({1.041, 0.947}, p, 500.0);
    bool entered = false;
    VoltagePair at_entry;
    for (const TrajectorySample& s : t.samples) {
      const bool in_d = !deadband_signal(s.state.v, p).any();
      if (!entered && in_d && s.state.z1 == 0.0 && s.state.z2 == 0.0 &&
          s.state.z3 == 0.0) {
        entered = true;
        at_entry = s.state.v;
      } else if (entered) {
        CHECK(s.state.v == at_entry);
      }
    }
  }
}

TEST_CASE("gain negation event flips the trajectory mid-run") {
  SystemParams p = with_gain(0.5);
  SimOptions opts;
  opts.negate_g_at = 0.0;
  const Trajectory flipped = simulate({1.04, 0.94}, p, 400.0, opts);
  const Trajectory reference = simulate({1.04, 0.94}, with_gain(-0.5), 400.0);
  REQUIRE(flipped.samples.size() == reference.samples.size());
  CHECK(flipped.g_negated_at == 0.0);
  for (std::size_t i = 0; i < flipped.samples.size(); ++i) {
    CHECK(flipped.samples[i].state.v == reference.samples[i].state.v);
  }

  opts.negate_g_at = 120.0;
  const Trajectory late = simulate({1.04, 0.94}, p, 400.0, opts);
  CHECK(late.g_negated_at == 120.0);
  CHECK(late.outcome.kind != reference.outcome.kind);
}

TEST_CASE("an LTC never taps twice without an inverter action between") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> gain(-0.4, 0.6);
  std::uniform_int_distribution<int> dinv(2, 6);
  std::uniform_real_distribution<double> voltage(0.86, 1.14);
  for (int s = 0; s < 100; ++s) {
    SystemParams p = SystemParams::defaults();
    p.g = gain(rng);
    p.d_inv = dinv(rng);
    std::uniform_int_distribution<int> dl1(static_cast<int>(p.d_inv) + 1, 40);
    p.d_l1 = dl1(rng);
    std::uniform_int_distribution<int> dl2(static_cast<int>(p.d_l1) + 1,
                                           2 * static_cast<int>(p.d_l1) - 1);
    p.d_l2 = dl2(rng);
    VoltagePair v0{voltage(rng), voltage(rng)};
    if (!in_w(v0, p)) continue;

    const Trajectory t = simulate(v0, p, 500.0);
    int last_tap_ltc = 0;
    bool m50_since = true;
    for (const TrajectorySample& smp : t.samples) {
      if (smp.mode == ModeLabel::M50) m50_since = true;
      const bool tap1 =
          smp.mode == ModeLabel::M10 || smp.mode == ModeLabel::M20;
      const bool tap2 =
          smp.mode == ModeLabel::M30 || smp.mode == ModeLabel::M40;
      if (tap1 || tap2) {
        const int ltc = tap1 ? 1 : 2;
        if (ltc == last_tap_ltc) CHECK(m50_since);
        last_tap_ltc = ltc;
        m50_since = false;
      }
    }
  }
}

TEST_CASE("no back-to-back taps of any kind at the default delays") {
  for (double g : {-0.3, -0.1, 0.3}) {
    const SystemParams p = with_gain(g);
    for (VoltagePair v0 :
         {VoltagePair{1.04, 0.94}, {0.93, 0.92}, {1.06, 1.065}, {0.947, 1.06}}) {
      const Trajectory t = simulate(v0, p, 500.0);
      bool m50_since = true;
      for (const TrajectorySample& smp : t.samples) {
        if (smp.mode == ModeLabel::M50) m50_since = true;
        if (smp.mode == ModeLabel::M10 || smp.mode == ModeLabel::M20 ||
            smp.mode == ModeLabel::M30 || smp.mode == ModeLabel::M40) {
          CHECK(m50_since);
          m50_since = false;
        }
      }
    }
  }
}

TEST_CASE("halving the timestep preserves the tap sequence") {
  for (double g : {-0.1, -0.5}) {
    SystemParams coarse = with_gain(g);
    SystemParams fine = coarse;
    fine.t_s = 0.5;
    const std::vector<RefTap> a = automaton_taps(simulate({1.04, 0.94}, coarse, 420.0));
    const std::vector<RefTap> b = automaton_taps(simulate({1.04, 0.94}, fine, 420.0));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].ltc == b[i].ltc);
      CHECK((a[i].dir == b[i].dir));
      // voltage path is identical; tap instants shift by at most the
      // per-phase discretization lags
      CHECK(a[i].after.v1 == doctest::Approx(b[i].after.v1).epsilon(1e-12));
      CHECK(a[i].after.v2 == doctest::Approx(b[i].after.v2).epsilon(1e-12));
      CHECK(std::abs(a[i].time - b[i].time) <=
            (2.0 + 2.0 * static_cast<double>(i)) * coarse.t_s);
    }
  }
}

TEST_CASE("zero gain reduces to the two-LTC subsystem") {
  SystemParams p = with_gain(0.0);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.86, 1.14);
  int compared = 0;
  while (compared < 300) {
    const VoltagePair v0{u(rng), u(rng)};
    if (!in_w(v0, p)) continue;
    ++compared;
    const std::vector<RefTap> expect = two_ltc_reference(v0, p, 360.0);
    const std::vector<RefTap> got = automaton_taps(simulate(v0, p, 360.0 + 4.0));
    const std::size_t n = std::min(expect.size(), got.size());
    REQUIRE(n >= std::min<std::size_t>(expect.size(), 1));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(got[i].ltc == expect[i].ltc);
      CHECK((got[i].dir == expect[i].dir));
      CHECK(got[i].after.v1 == doctest::Approx(expect[i].after.v1).epsilon(1e-12));
      CHECK(got[i].after.v2 == doctest::Approx(expect[i].after.v2).epsilon(1e-12));
      CHECK(std::abs(got[i].time - expect[i].time) <= 2.0 * p.t_s + 1e-9);
    }
  }
}

TEST_CASE("marginal oscillation for oversized taps") {
  SystemParams p = SystemParams::defaults();
  p.eps = 0.1;
  p.vbar_l = 0.25;
  p.g = 0.0;
  const Trajectory t = simulate({1.12, 1.0}, p, 1000.0);
  CHECK(t.outcome.kind == Outcome::StillOscillating);

  const std::vector<RefTap> taps = automaton_taps(t);
  REQUIRE(taps.size() >= 20);
  for (std::size_t i = 2; i < taps.size(); ++i) {
    CHECK(std::abs(taps[i].after.v1 - taps[i - 2].after.v1) < 1e-12);
    CHECK(std::abs(taps[i].after.v2 - taps[i - 2].after.v2) < 1e-12);
    CHECK(taps[i].time - taps[i - 2].time ==
          doctest::Approx(2.0 * p.d_l1).epsilon(1e-12));
  }
}
