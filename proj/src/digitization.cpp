#include "tptg/digitization.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace tptg {

namespace {

bool holds(const std::vector<Rational>& v, const ClockConstraint& c) {
  for (const auto& a : c.atoms()) {
    const Rational& x = v.at(a.clock);
    if (a.kind == BoundKind::Upper ? x > Rational(a.constant) : x < Rational(a.constant)) return false;
  }
  return true;
}

std::vector<Rational> delayed(const std::vector<Rational>& v, const Rational& t) {
  std::vector<Rational> out = v;
  for (auto& x : out) x += t;
  return out;
}

/// Narrows [lo, hi] to the delays t for which v + t satisfies c, treating
/// clocks in `zeroed` as fixed at 0. Returns false if some atom can never hold.
bool narrow(const ClockConstraint& c, const std::vector<Rational>& v, const std::vector<ClockId>& zeroed,
            Rational& lo, std::optional<Rational>& hi) {
  for (const auto& a : c.atoms()) {
    bool fixed = std::find(zeroed.begin(), zeroed.end(), a.clock) != zeroed.end();
    if (fixed) {
      if (a.kind == BoundKind::Lower && a.constant > 0) return false;
      continue;
    }
    Rational bound = Rational(a.constant) - v.at(a.clock);
    if (a.kind == BoundKind::Upper) hi = hi ? std::min(*hi, bound) : bound;
    else lo = std::max(lo, bound);
  }
  return true;
}

}  // namespace

std::int64_t digitize_scalar(const Rational& t, const Rational& eps) {
  if (eps < Rational(0) || eps > Rational(1)) throw UsageError("digitization parameter must lie in [0,1]");
  if (t < Rational(0)) throw UsageError("digitize_scalar expects a non-negative time");
  std::int64_t f = t.floor();
  return t <= Rational(f) + eps ? f : t.ceil();
}

Rational accumulated_duration(const TimedPath& path, std::size_t n) {
  if (n > path.length()) throw UsageError("accumulated_duration: index beyond path length");
  Rational sum(0);
  for (std::size_t i = 0; i < n; ++i) sum += path.moves[i].duration;
  return sum;
}

bool is_valid_timed_path(const Tptg& m, const TimedPath& path, std::string* why) {
  auto fail = [&](std::size_t i, std::string msg) {
    if (why) *why = "step " + std::to_string(i) + ": " + msg;
    return false;
  };
  if (path.states.size() != path.moves.size() + 1) return fail(0, "path shape mismatch");
  for (std::size_t i = 0; i < path.moves.size(); ++i) {
    const TimedState& s = path.states[i];
    const TimedStep& mv = path.moves[i];
    const Location& loc = m.locations.at(s.location);
    if (mv.duration < Rational(0)) return fail(i, "negative delay");
    if (!holds(s.clocks, loc.invariant)) return fail(i, "invariant violated before the delay");
    auto v = delayed(s.clocks, mv.duration);
    if (!holds(v, loc.invariant)) return fail(i, "invariant violated after the delay");
    auto edge = std::find_if(loc.edges.begin(), loc.edges.end(), [&](const Edge& e) { return e.action == mv.action; });
    if (edge == loc.edges.end()) return fail(i, "no action '" + mv.action + "'");
    if (!holds(v, edge->guard)) return fail(i, "guard not satisfied");
    const TimedState& next = path.states[i + 1];
    bool found = std::any_of(edge->branches.begin(), edge->branches.end(), [&](const Branch& br) {
      return br.prob > Rational(0) && br.target == next.location && br.resets == mv.resets;
    });
    if (!found) return fail(i, "successor not in the support of the distribution");
    for (ClockId x : mv.resets) v.at(x) = Rational(0);
    if (v != next.clocks) return fail(i, "successor valuation mismatch");
    if (!holds(next.clocks, m.locations.at(next.location).invariant)) return fail(i, "successor invariant violated");
  }
  return true;
}

TimedPath random_timed_path(const Tptg& m, std::size_t steps, std::mt19937_64& rng, std::int64_t grid) {
  if (grid < 1) throw UsageError("grid must be positive");
  TimedPath path;
  path.states.push_back({m.initial, std::vector<Rational>(m.clocks.size(), Rational(0))});
  std::int64_t t_cap = 1;
  for (auto c : clock_ceilings(m)) t_cap = std::max(t_cap, c);

  struct Option {
    const Edge* edge;
    std::int64_t lo, hi;  // in units of 1/grid
  };
  for (std::size_t step = 0; step < steps; ++step) {
    const TimedState& s = path.states.back();
    const Location& loc = m.locations[s.location];
    std::vector<Option> options;
    for (const auto& e : loc.edges) {
      Rational lo(0);
      std::optional<Rational> hi;
      bool ok = narrow(loc.invariant, s.clocks, {}, lo, hi) && narrow(e.guard, s.clocks, {}, lo, hi);
      for (const auto& br : e.branches)
        if (ok && br.prob > Rational(0)) ok = narrow(m.locations[br.target].invariant, s.clocks, br.resets, lo, hi);
      if (!ok) continue;
      Rational top = hi ? *hi : lo + Rational(t_cap);
      std::int64_t a = (lo * Rational(grid)).ceil();
      std::int64_t b = (top * Rational(grid)).floor();
      if (a > b) continue;
      options.push_back({&e, a, b});
    }
    if (options.empty()) break;
    const Option& pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    Rational t(std::uniform_int_distribution<std::int64_t>(pick.lo, pick.hi)(rng), grid);

    // branch by probability: exact draw over the common denominator
    std::int64_t den = 1;
    for (const auto& br : pick.edge->branches) den = std::lcm(den, br.prob.den());
    std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, den - 1)(rng);
    const Branch* chosen = nullptr;
    for (const auto& br : pick.edge->branches) {
      std::int64_t w = (br.prob * Rational(den)).num();
      if (r < w) {
        chosen = &br;
        break;
      }
      r -= w;
    }
    if (!chosen) throw std::logic_error("distribution does not sum to one");

    TimedState next{chosen->target, delayed(s.clocks, t)};
    for (ClockId x : chosen->resets) next.clocks[x] = Rational(0);
    path.moves.push_back({t, pick.edge->action, chosen->resets});
    path.states.push_back(std::move(next));
  }
  return path;
}

DigitalPath digitize_path(const Tptg& m, const TimedPath& path, const Rational& eps) {
  if (path.states.empty()) throw UsageError("empty path");
  if (path.states.front().location != m.initial ||
      std::any_of(path.states.front().clocks.begin(), path.states.front().clocks.end(),
                  [](const Rational& v) { return v != Rational(0); }))
    throw UsageError("digitization is defined for paths from the initial state");
  const auto ceil = clock_ceilings(m);
  const std::size_t n = path.length();
  std::vector<std::int64_t> d(n + 1);
  Rational dur(0);
  for (std::size_t i = 0; i <= n; ++i) {
    d[i] = digitize_scalar(dur, eps);
    if (i < n) dur += path.moves[i].duration;
  }
  DigitalPath out;
  std::vector<std::size_t> last_reset(m.clocks.size(), 0);
  for (std::size_t i = 0; i <= n; ++i) {
    DigitalState s{path.states[i].location, std::vector<std::int64_t>(m.clocks.size())};
    for (std::size_t x = 0; x < m.clocks.size(); ++x) s.clocks[x] = std::min(d[i] - d[last_reset[x]], ceil[x]);
    out.states.push_back(std::move(s));
    if (i < n) {
      out.moves.push_back({d[i + 1] - d[i], path.moves[i].action});
      for (ClockId x : path.moves[i].resets) last_reset[x] = i + 1;
    }
  }
  return out;
}

bool is_valid_digital_path(const DigitalGame& g, const DigitalPath& path, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (path.states.size() != path.moves.size() + 1) return fail("path shape mismatch");
  TsgPath tp;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    auto id = g.find(path.states[i]);
    if (!id) return fail("state " + std::to_string(i) + " is not a state of the digital game");
    tp.states.push_back(*id);
  }
  if (tp.states.front() != g.game.initial) return fail("path does not start in the initial state");
  for (std::size_t i = 0; i < path.moves.size(); ++i) {
    StateId s = tp.states[i];
    std::optional<ChoiceId> found;
    for (auto c = g.game.first_choice(s); c < g.game.end_choice(s); ++c)
      if (g.game.choice_label[c] == path.moves[i]) found = c;
    if (!found) return fail("move " + path.moves[i].to_string() + " unavailable at step " + std::to_string(i));
    tp.choices.push_back(*found);
  }
  return is_valid_path(g.game, tp, why);
}

}  // namespace tptg
