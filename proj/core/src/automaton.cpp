#include "volthunt/automaton.hpp"

#include <cmath>
#include <stdexcept>

#include "volthunt/regions.hpp"

namespace volthunt {

namespace {

constexpr double kTimerTol = 1e-9;

bool timer_elapsed(double z, double delay) { return z >= delay - kTimerTol; }

FullState clear_idle_timers(FullState x, const SystemParams& p) {
  const DeadbandSignal f = deadband_signal(x.v, p);
  if (f.f1 == 0.0) x.z1 = 0.0;
  if (f.f2 == 0.0) x.z2 = 0.0;
  if (!f.any()) x.z3 = 0.0;
  return x;
}

}  // namespace

const char* to_string(ModeLabel m) {
  switch (m) {
    case ModeLabel::M10: return "m10";
    case ModeLabel::M20: return "m20";
    case ModeLabel::M30: return "m30";
    case ModeLabel::M40: return "m40";
    case ModeLabel::M50: return "m50";
    case ModeLabel::M60: return "m60";
    case ModeLabel::M70: return "m70";
    case ModeLabel::M80: return "m80";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Quiescent: return "Quiescent";
    case Outcome::LandedInD: return "LandedInD";
    case Outcome::LeftW: return "LeftW";
    case Outcome::StillOscillating: return "StillOscillating";
  }
  return "?";
}

const char* to_string(AlphaId id) {
  switch (id) {
    case AlphaId::Alpha1: return "alpha1";
    case AlphaId::Alpha2: return "alpha2";
    case AlphaId::Alpha3: return "alpha3";
    case AlphaId::Alpha4: return "alpha4";
  }
  return "?";
}

ModeLabel guard_eval(const FullState& x, ModeLabel prev_mode,
                     const SystemParams& p) {
  const DeadbandSignal f = deadband_signal(x.v, p);
  const bool over = f.f1 > 0.0 || f.f2 > 0.0;
  const bool under = f.f1 < 0.0 || f.f2 < 0.0;

  // reset modes first: a tap that flipped the violation hands fresh timers
  // to the devices now facing it
  if ((prev_mode == ModeLabel::M10 && over) ||
      (prev_mode == ModeLabel::M20 && under)) {
    return ModeLabel::M60;
  }
  if ((prev_mode == ModeLabel::M30 && over) ||
      (prev_mode == ModeLabel::M40 && under)) {
    return ModeLabel::M70;
  }
  if (timer_elapsed(x.z3, p.d_inv) && f.any()) return ModeLabel::M50;
  if (timer_elapsed(x.z1, p.d_l1)) {
    if (f.sum() < 0.0) return ModeLabel::M10;
    if (f.sum() > 0.0) return ModeLabel::M20;
  }
  if (timer_elapsed(x.z2, p.d_l2)) {
    if (f.sum() < 0.0) return ModeLabel::M30;
    if (f.sum() > 0.0) return ModeLabel::M40;
  }
  return ModeLabel::M80;
}

FullState apply_mode(const FullState& x, ModeLabel mode,
                     const SystemParams& p) {
  const double ts = p.t_s;
  FullState n = x;
  switch (mode) {
    case ModeLabel::M10:
    case ModeLabel::M20: {
      const TapDirection dir =
          mode == ModeLabel::M10 ? TapDirection::Up : TapDirection::Down;
      n.v = ltc_tap(x.v, dir, p);
      n.z1 = ts;
      n.z2 = x.z2 + ts;
      n.z3 = x.z3 + ts;
      break;
    }
    case ModeLabel::M30:
    case ModeLabel::M40: {
      const TapDirection dir =
          mode == ModeLabel::M30 ? TapDirection::Up : TapDirection::Down;
      n.v = ltc_tap(x.v, dir, p);
      n.z2 = ts;
      n.z1 = x.z1 + ts;
      n.z3 = x.z3 + ts;
      break;
    }
    case ModeLabel::M50: {
      const DeadbandSignal f = deadband_signal(x.v, p);
      n.v = inverter_step(x.v, {f.f1 != 0.0, f.f2 != 0.0}, p);
      n.z3 = ts;
      n.z1 = x.z1 + ts;
      n.z2 = x.z2 + ts;
      break;
    }
    case ModeLabel::M60:
      n.z2 = ts;
      n.z3 = ts;
      break;
    case ModeLabel::M70:
      n.z1 = ts;
      n.z3 = ts;
      break;
    case ModeLabel::M80:
      n.z1 = x.z1 + ts;
      n.z2 = x.z2 + ts;
      n.z3 = x.z3 + ts;
      break;
  }
  return clear_idle_timers(n, p);
}

std::pair<FullState, ModeLabel> step(const FullState& x, ModeLabel prev_mode,
                                     const SystemParams& p) {
  const ModeLabel mode = guard_eval(x, prev_mode, p);
  return {apply_mode(x, mode, p), mode};
}

Trajectory simulate(const VoltagePair& v0, const SystemParams& p,
                    double horizon, const SimOptions& opts) {
  if (!(horizon >= p.t_s)) {
    throw std::invalid_argument("simulate: horizon must cover at least one step");
  }
  Trajectory traj;
  traj.params = p;

  SystemParams live = p;
  const long steps = std::lround(horizon / p.t_s);
  FullState x{0.0, 0.0, 0.0, v0};
  ModeLabel prev = ModeLabel::M80;

  double quiet_since = -1.0;  // start of the current zero-signal run in D
  bool negated = false;

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * p.t_s;
    if (opts.negate_g_at >= 0.0 && !negated && t >= opts.negate_g_at) {
      live.g = -live.g;
      negated = true;
      traj.g_negated_at = t;
    }

    if (!in_w(x.v, live)) {
      traj.samples.push_back({t, x, guard_eval(x, prev, live)});
      traj.outcome = {Outcome::LeftW, t};
      return traj;
    }

    const DeadbandSignal f = deadband_signal(x.v, live);
    if (!f.any()) {
      if (quiet_since < 0.0) quiet_since = t;
      if (t - quiet_since > live.d_l2) {
        traj.samples.push_back({t, x, ModeLabel::M80});
        traj.outcome = {quiet_since == 0.0 ? Outcome::Quiescent
                                           : Outcome::LandedInD,
                        quiet_since};
        return traj;
      }
    } else {
      quiet_since = -1.0;
    }

    if (k == steps) {
      traj.samples.push_back({t, x, guard_eval(x, prev, live)});
      break;
    }

    auto [next, mode] = step(x, prev, live);
    traj.samples.push_back({t, x, mode});
    x = next;
    prev = mode;
  }

  if (quiet_since >= 0.0) {
    traj.outcome = {quiet_since == 0.0 ? Outcome::Quiescent : Outcome::LandedInD,
                    quiet_since};
  } else {
    traj.outcome = {Outcome::StillOscillating, horizon};
  }
  return traj;
}

std::vector<OscillationEvent> detect_sequences(const Trajectory& t) {
  struct Entry {
    double time;
    ModeLabel mode;
    VoltagePair v;
  };
  std::vector<Entry> ev;
  for (const TrajectorySample& s : t.samples) {
    if (s.mode != ModeLabel::M80) ev.push_back({s.time, s.mode, s.state.v});
  }

  // each opening tap determines the rest of its cycle
  auto continuation = [](ModeLabel tap_a, ModeLabel& reset_a, ModeLabel& tap_b,
                         ModeLabel& reset_b, AlphaId& id) {
    switch (tap_a) {
      case ModeLabel::M30:
        reset_a = ModeLabel::M70; tap_b = ModeLabel::M20;
        reset_b = ModeLabel::M60; id = AlphaId::Alpha1; return true;
      case ModeLabel::M40:
        reset_a = ModeLabel::M70; tap_b = ModeLabel::M10;
        reset_b = ModeLabel::M60; id = AlphaId::Alpha2; return true;
      case ModeLabel::M10:
        reset_a = ModeLabel::M60; tap_b = ModeLabel::M40;
        reset_b = ModeLabel::M70; id = AlphaId::Alpha3; return true;
      case ModeLabel::M20:
        reset_a = ModeLabel::M60; tap_b = ModeLabel::M30;
        reset_b = ModeLabel::M70; id = AlphaId::Alpha4; return true;
      default:
        return false;
    }
  };

  std::vector<OscillationEvent> out;
  std::size_t i = 0;
  const std::size_t n = ev.size();
  while (i < n) {
    if (ev[i].mode != ModeLabel::M50) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && ev[j].mode == ModeLabel::M50) ++j;  // first burst
    if (j >= n) break;

    ModeLabel reset_a, tap_b, reset_b;
    AlphaId id;
    if (!continuation(ev[j].mode, reset_a, tap_b, reset_b, id) ||
        j + 1 >= n || ev[j + 1].mode != reset_a) {
      i = j;
      continue;
    }
    std::size_t k = j + 2;
    if (k >= n || ev[k].mode != ModeLabel::M50) {
      i = j;
      continue;
    }
    while (k < n && ev[k].mode == ModeLabel::M50) ++k;  // second burst
    if (k + 1 >= n || ev[k].mode != tap_b || ev[k + 1].mode != reset_b) {
      i = j;
      continue;
    }

    OscillationEvent e;
    e.id = id;
    e.start_time = ev[i].time;
    e.end_time = ev[k + 1].time;
    e.start_state = ev[i].v;
    e.vdiff_start = ev[i].v.vdiff();
    e.vdiff_end = ev[k + 1].v.vdiff();
    std::string pat;
    for (std::size_t m = i; m <= k + 1; ++m) {
      if (!pat.empty()) pat += ' ';
      pat += to_string(ev[m].mode);
    }
    e.pattern = std::move(pat);
    out.push_back(std::move(e));
    i = k + 2;
  }
  return out;
}

OutcomeReport classify_outcome(const Trajectory& t) { return t.outcome; }

}  // namespace volthunt
