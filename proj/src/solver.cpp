#include "tptg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

namespace tptg {

namespace {

void require_two_players(const Tsg& g) {
  if (g.players.size() != 2) throw UsageError("solver expects a two-player game (use coalition_game first)");
}

void require_target(const Tsg& g, const std::vector<bool>& target) {
  if (target.size() != g.num_states()) throw UsageError("target set has wrong size");
}

/// Branch-weighted sum of `v` over the successors of choice c, skipping
/// zero-probability branches so that 0 * inf never occurs.
double expect(const Tsg& g, ChoiceId c, const std::vector<double>& v) {
  double sum = 0.0;
  for (auto b = g.first_branch(c); b < g.end_branch(c); ++b) {
    const auto& br = g.branches[b];
    if (br.prob > 0.0) sum += br.prob * v[br.target];
  }
  return sum;
}

/// Does the owner of s want the objective value high?
bool wants_high(const Tsg& g, StateId s, Direction dir) { return (g.owner[s] == 0) == (dir == Direction::MaxMin); }

std::size_t price_of(const Tsg& g, const Objective& obj) {
  if (g.price_names.empty()) throw UsageError("game has no price structure");
  return obj.price.empty() ? 0 : g.price_index(obj.price);
}

/// Reach-side player for the qualitative analysis: for probabilities the
/// maximizer, for expected price the minimizer.
bool reacher_is_p1(ObjectiveKind kind, Direction dir) {
  return kind == ObjectiveKind::Reach ? dir == Direction::MaxMin : dir == Direction::MinMax;
}

struct Predecessors {
  std::vector<std::uint32_t> begin;
  std::vector<ChoiceId> choices;
  std::vector<StateId> source;  // source state of each choice
};

Predecessors predecessors(const Tsg& g) {
  Predecessors p;
  const std::size_t n = g.num_states();
  p.source.resize(g.num_choices());
  std::vector<std::uint32_t> count(n + 1, 0);
  for (StateId s = 0; s < n; ++s)
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
      p.source[c] = s;
      for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
        if (g.branches[b].prob > 0.0) ++count[g.branches[b].target + 1];
    }
  for (std::size_t i = 0; i < n; ++i) count[i + 1] += count[i];
  p.begin = count;
  p.choices.resize(count[n]);
  for (StateId s = 0; s < n; ++s)
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c)
      for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
        if (g.branches[b].prob > 0.0) p.choices[count[g.branches[b].target]++] = c;
  return p;
}

/// Least set X containing target ∩ within such that a reacher state joins
/// when some valid choice has a successor in X, and an opponent state joins
/// when it has choices and all of them are valid and have a successor in X.
/// A choice is valid when all its successors lie in `within`.
std::vector<bool> attractor(const Tsg& g, const Predecessors& pred, const std::vector<bool>& target,
                            const std::vector<bool>& reacher, const std::vector<bool>& within) {
  const std::size_t n = g.num_states();
  std::vector<bool> valid(g.num_choices(), true);
  std::vector<std::uint32_t> pending(n, 0);  // opponent: choices not yet hitting X
  std::vector<bool> blocked(n, false);       // opponent with an invalid choice
  for (StateId s = 0; s < n; ++s) {
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
      for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
        if (g.branches[b].prob > 0.0 && !within[g.branches[b].target]) valid[c] = false;
      if (!valid[c]) blocked[s] = true;
    }
    pending[s] = g.end_choice(s) - g.first_choice(s);
  }
  std::vector<bool> in(n, false), hit(g.num_choices(), false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (target[s] && within[s]) {
      in[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId t = queue.front();
    queue.pop_front();
    for (auto i = pred.begin[t]; i < pred.begin[t + 1]; ++i) {
      ChoiceId c = pred.choices[i];
      StateId s = pred.source[c];
      if (in[s] || !within[s] || !valid[c] || hit[c]) continue;
      hit[c] = true;
      bool join = reacher[s] ? true : (!blocked[s] && --pending[s] == 0);
      if (join) {
        in[s] = true;
        queue.push_back(s);
      }
    }
  }
  return in;
}

std::vector<bool> reacher_flags(const Tsg& g, bool p1_reaches) {
  std::vector<bool> r(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) r[s] = (g.owner[s] == 0) == p1_reaches;
  return r;
}

bool has_zero_price_cycle(const Tsg& g, std::size_t price, const std::vector<bool>& region,
                          const std::vector<bool>& minimizer, const std::vector<bool>& target) {
  const std::size_t n = g.num_states();
  std::vector<std::vector<StateId>> adj(n);
  for (StateId s = 0; s < n; ++s) {
    if (!region[s] || !minimizer[s] || target[s]) continue;
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
      if (g.price(c, price) != 0.0) continue;
      for (auto b = g.first_branch(c); b < g.end_branch(c); ++b) {
        StateId t = g.branches[b].target;
        if (g.branches[b].prob > 0.0 && region[t] && minimizer[t] && !target[t]) adj[s].push_back(t);
      }
    }
  }
  std::vector<std::uint8_t> color(n, 0);
  for (StateId root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [s, next] = stack.back();
      if (next < adj[s].size()) {
        StateId t = adj[s][next++];
        if (color[t] == 1) return true;
        if (color[t] == 0) {
          color[t] = 1;
          stack.push_back({t, 0});
        }
      } else {
        color[s] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

void warn_deadlocks(const Tsg& g, const std::vector<bool>& target, std::vector<std::string>& warnings,
                    const char* value) {
  std::size_t dead = 0;
  for (StateId s = 0; s < g.num_states(); ++s)
    if (!target[s] && g.first_choice(s) == g.end_choice(s)) ++dead;
  if (dead)
    warnings.push_back(std::to_string(dead) + " non-target deadlock state(s) assigned value " + value);
}

/// Gauss-Seidel sweeps over the non-fixed states; `backup` returns the new
/// value of a state.
template <class Backup>
void gauss_seidel(const Tsg& g, const std::vector<bool>& fixed, std::vector<double>& v, const SolveOptions& opt,
                  SolveResult& res, Backup backup) {
  std::vector<StateId> free;
  for (StateId s = 0; s < g.num_states(); ++s)
    if (!fixed[s]) free.push_back(s);
  res.converged = free.empty();
  res.residual = 0.0;
  bool decreased = false;
  for (std::uint64_t it = 1; !res.converged && it <= opt.max_iters; ++it) {
    double residual = 0.0;
    for (StateId s : free) {
      double nv = backup(s);
      double diff = nv - v[s];
      if (opt.check_monotone && diff < -1e-12 * std::max(1.0, std::abs(v[s]))) decreased = true;
      residual = std::max(residual, std::abs(diff));
      v[s] = nv;
    }
    res.iterations = it;
    res.residual = residual;
    if (residual < opt.tol) res.converged = true;
  }
  if (decreased) res.warnings.push_back("value iteration iterates were not monotone");
  if (!res.converged)
    res.warnings.push_back("value iteration did not converge within " + std::to_string(opt.max_iters) +
                           " iterations (residual " + std::to_string(res.residual) + ")");
}

double reach_backup(const Tsg& g, StateId s, Direction dir, const std::vector<double>& v) {
  bool high = wants_high(g, s, dir);
  double best = high ? -kInfinity : kInfinity;
  for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
    double q = expect(g, c, v);
    best = high ? std::max(best, q) : std::min(best, q);
  }
  return g.first_choice(s) == g.end_choice(s) ? 0.0 : best;
}

double price_q(const Tsg& g, ChoiceId c, std::size_t price, const std::vector<double>& v) {
  return g.price(c, price) + expect(g, c, v);
}

double price_backup(const Tsg& g, StateId s, Direction dir, std::size_t price, const std::vector<double>& v,
                    double deadlock_value) {
  bool high = wants_high(g, s, dir);
  double best = high ? -kInfinity : kInfinity;
  for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
    double q = price_q(g, c, price, v);
    best = high ? std::max(best, q) : std::min(best, q);
  }
  return g.first_choice(s) == g.end_choice(s) ? deadlock_value : best;
}

Tsg restrict_to(const Tsg& g, const MemorylessProfile& fixed, PlayerId player) {
  TsgBuilder b(g.players, g.price_names);
  for (StateId s = 0; s < g.num_states(); ++s) b.add_state(g.owner[s], g.describe(s));
  std::vector<double> prices(g.price_names.size());
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
      if (g.owner[s] == player && fixed.defined(s) && static_cast<std::int64_t>(c) != fixed.choice[s]) continue;
      for (std::size_t k = 0; k < prices.size(); ++k) prices[k] = g.price(c, k);
      std::vector<Successor> succ(g.branches.begin() + g.first_branch(c), g.branches.begin() + g.end_branch(c));
      b.add_choice(s, g.choice_label[c], prices, succ);
    }
  }
  b.set_initial(g.initial);
  for (const auto& [name, flags] : g.labels) {
    if (name == "deadlock") continue;
    b.declare_label(name);
    for (StateId s = 0; s < g.num_states(); ++s)
      if (flags[s]) b.set_label(name, s);
  }
  return b.finish();
}

}  // namespace

std::string Objective::to_string() const {
  bool hi = direction == Direction::MaxMin;
  std::string out;
  switch (kind) {
    case ObjectiveKind::Reach:
      out = std::string(hi ? "Pmax" : "Pmin") + " [F " + target + "]";
      break;
    case ObjectiveKind::ExpPrice:
    case ObjectiveKind::BoundedExpPrice:
      out = std::string(hi ? "Emax" : "Emin") + " [F " + target + "]";
      if (kind == ObjectiveKind::BoundedExpPrice) out += " steps " + std::to_string(horizon);
      if (!price.empty()) out += " price " + price;
      break;
  }
  return out;
}

QualitativeSets qualitative_reach(const Tsg& g, const std::vector<bool>& target, bool maximizer_is_p1) {
  require_two_players(g);
  require_target(g, target);
  const std::size_t n = g.num_states();
  auto pred = predecessors(g);
  auto reacher = reacher_flags(g, maximizer_is_p1);
  std::vector<bool> all(n, true);

  QualitativeSets q;
  auto positive = attractor(g, pred, target, reacher, all);
  q.prob0.resize(n);
  for (StateId s = 0; s < n; ++s) q.prob0[s] = !positive[s];

  q.level.assign(n, 0);
  std::vector<bool> y = positive;
  for (;;) {
    for (StateId s = 0; s < n; ++s)
      if (y[s]) ++q.level[s];
    auto x = attractor(g, pred, target, reacher, y);
    if (x == y) break;
    y = std::move(x);
  }
  for (StateId s = 0; s < n; ++s)
    if (y[s]) q.level[s] = UINT32_MAX;
  q.prob1 = std::move(y);
  return q;
}

SolveResult prob_reach(const Tsg& g, const std::vector<bool>& target, Direction dir, const SolveOptions& opt) {
  require_two_players(g);
  require_target(g, target);
  if (!(opt.tol > 0.0)) throw UsageError("tolerance must be positive");
  SolveResult res;
  auto q = qualitative_reach(g, target, dir == Direction::MaxMin);
  const std::size_t n = g.num_states();
  res.values.assign(n, 0.0);
  std::vector<bool> fixed(n, false);
  for (StateId s = 0; s < n; ++s) {
    if (q.prob1[s]) res.values[s] = 1.0;
    fixed[s] = q.prob0[s] || q.prob1[s];
  }
  warn_deadlocks(g, target, res.warnings, "0");
  gauss_seidel(g, fixed, res.values, opt, res, [&](StateId s) { return reach_backup(g, s, dir, res.values); });
  res.prob0 = std::move(q.prob0);
  res.prob1 = std::move(q.prob1);
  return res;
}

SolveResult expected_price(const Tsg& g, const std::vector<bool>& target, std::size_t price, Direction dir,
                           const SolveOptions& opt) {
  require_two_players(g);
  require_target(g, target);
  if (price >= g.price_names.size()) throw UsageError("price structure index out of range");
  if (!(opt.tol > 0.0)) throw UsageError("tolerance must be positive");
  SolveResult res;
  const bool p1_reaches = reacher_is_p1(ObjectiveKind::ExpPrice, dir);
  auto q = qualitative_reach(g, target, p1_reaches);
  const std::size_t n = g.num_states();
  res.values.assign(n, 0.0);
  std::vector<bool> fixed(n, false);
  std::size_t infinite = 0;
  for (StateId s = 0; s < n; ++s) {
    if (!q.prob1[s]) {
      res.values[s] = kInfinity;
      ++infinite;
    }
    fixed[s] = target[s] || !q.prob1[s];
  }
  warn_deadlocks(g, target, res.warnings, "inf");
  if (infinite)
    res.warnings.push_back(std::to_string(infinite) +
                           " state(s) do not reach the target almost surely under optimal play; "
                           "their expected price is infinite");
  auto minimizer = reacher_flags(g, p1_reaches);
  if (has_zero_price_cycle(g, price, q.prob1, minimizer, target))
    res.warnings.push_back("zero-price cycle among minimizing states; values from below may underestimate");
  gauss_seidel(g, fixed, res.values, opt, res,
               [&](StateId s) { return price_backup(g, s, dir, price, res.values, kInfinity); });
  res.prob0 = std::move(q.prob0);
  res.prob1 = std::move(q.prob1);
  return res;
}

std::vector<double> bounded_expected_price(const Tsg& g, const std::vector<bool>& target, std::size_t price,
                                           Direction dir, std::int64_t n) {
  require_two_players(g);
  require_target(g, target);
  if (n < 0) throw UsageError("horizon must be non-negative");
  if (price >= g.price_names.size()) throw UsageError("price structure index out of range");
  std::vector<double> v(g.num_states(), 0.0), next(g.num_states(), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (StateId s = 0; s < g.num_states(); ++s) next[s] = target[s] ? 0.0 : price_backup(g, s, dir, price, v, 0.0);
    std::swap(v, next);
  }
  return v;
}

std::array<MemorylessProfile, 2> synthesize(const Tsg& g, const Objective& obj, const SolveResult& result,
                                            const SolveOptions& opt) {
  require_two_players(g);
  if (obj.kind == ObjectiveKind::BoundedExpPrice)
    throw UsageError("bounded-horizon objectives have no memoryless optimal strategy to synthesize");
  if (!result.converged) throw UsageError("cannot synthesize strategies from non-converged values");
  const auto& v = result.values;
  const std::size_t n = g.num_states();
  if (v.size() != n) throw UsageError("value vector has wrong size");
  const auto& target = g.label(obj.target);
  const bool is_reach = obj.kind == ObjectiveKind::Reach;
  const std::size_t price = is_reach ? 0 : price_of(g, obj);
  const bool p1_reaches = reacher_is_p1(obj.kind, obj.direction);
  const double eps = std::max(opt.tol, 1e-12);

  auto q_of = [&](ChoiceId c) { return is_reach ? expect(g, c, v) : price_q(g, c, price, v); };
  auto optimal = [&](StateId s) {
    bool high = wants_high(g, s, obj.direction);
    double best = high ? -kInfinity : kInfinity;
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c)
      best = high ? std::max(best, q_of(c)) : std::min(best, q_of(c));
    std::vector<ChoiceId> out;
    for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) {
      double qc = q_of(c);
      bool tie = std::isinf(best) ? qc == best : std::abs(qc - best) <= eps * std::max(1.0, std::abs(best));
      if (tie) out.push_back(c);
    }
    return out;
  };
  auto smallest = [&](const std::vector<ChoiceId>& cs) {
    ChoiceId best = cs.front();
    for (ChoiceId c : cs)
      if (g.choice_label[c] < g.choice_label[best]) best = c;
    return best;
  };

  // Where the price is infinite every choice ties at inf, so the avoiding side
  // needs a choice that either drops to a lower fixpoint level with positive
  // probability or never climbs above its own level.
  std::vector<std::uint32_t> level;
  if (!is_reach) level = qualitative_reach(g, target, p1_reaches).level;
  auto escapes = [&](StateId s, ChoiceId c) {
    bool drops = false, climbs = false;
    for (auto b = g.first_branch(c); b < g.end_branch(c); ++b) {
      if (!(g.branches[b].prob > 0.0)) continue;
      auto l = level[g.branches[b].target];
      drops = drops || l < level[s];
      climbs = climbs || l > level[s];
    }
    return drops || !climbs;
  };

  MemorylessProfile profile;
  profile.choice.assign(n, kNoChoice);
  std::vector<std::vector<ChoiceId>> reacher_opt(n), opponent_opt(n);
  for (StateId s = 0; s < n; ++s) {
    if (g.first_choice(s) == g.end_choice(s)) continue;
    bool reacher = (g.owner[s] == 0) == p1_reaches;
    auto cands = optimal(s);
    if (cands.empty())  // NaN-free fallback: every choice
      for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) cands.push_back(c);
    if (reacher) {
      reacher_opt[s] = std::move(cands);
      continue;
    }
    opponent_opt[s] = cands;
    if (!is_reach && level[s] != UINT32_MAX) {
      std::vector<ChoiceId> safe;
      for (auto c = g.first_choice(s); c < g.end_choice(s); ++c)
        if (escapes(s, c)) safe.push_back(c);
      if (!safe.empty()) cands = std::move(safe);
    }
    profile.choice[s] = smallest(cands);
  }

  // Attractor ranks toward F where the reaching side may use any optimal
  // choice and an opponent state joins once all its optimal choices do. An
  // opponent that strays from its optimal choices only helps the reacher, and
  // a trap that avoids F would need the opponent to stay optimal.
  constexpr std::uint32_t kUnranked = UINT32_MAX;
  std::vector<std::uint32_t> rank(n, kUnranked);
  auto pred = predecessors(g);
  std::vector<bool> usable(g.num_choices(), false), hit(g.num_choices(), false);
  std::vector<std::size_t> pending(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (ChoiceId c : reacher_opt[s]) usable[c] = true;
    for (ChoiceId c : opponent_opt[s]) usable[c] = true;
    pending[s] = opponent_opt[s].size();
  }
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (target[s]) {
      rank[s] = 0;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId t = queue.front();
    queue.pop_front();
    for (auto i = pred.begin[t]; i < pred.begin[t + 1]; ++i) {
      ChoiceId c = pred.choices[i];
      StateId s = pred.source[c];
      if (rank[s] != kUnranked || !usable[c] || hit[c]) continue;
      hit[c] = true;
      if (!reacher_opt[s].empty() || --pending[s] == 0) {
        rank[s] = rank[t] + 1;
        queue.push_back(s);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (reacher_opt[s].empty()) continue;
    std::vector<ChoiceId> progress;
    if (rank[s] != kUnranked && !target[s]) {
      for (ChoiceId c : reacher_opt[s])
        for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
          if (g.branches[b].prob > 0.0 && rank[g.branches[b].target] < rank[s]) {
            progress.push_back(c);
            break;
          }
    }
    profile.choice[s] = smallest(progress.empty() ? reacher_opt[s] : progress);
  }

  std::array<MemorylessProfile, 2> out;
  for (auto& p : out) p.choice.assign(n, kNoChoice);
  for (StateId s = 0; s < n; ++s) out[g.owner[s]].choice[s] = profile.choice[s];
  return out;
}

std::vector<double> evaluate_profile(const Tsg& g, const Objective& obj, const MemorylessProfile& profile,
                                     const SolveOptions& opt) {
  const std::size_t n = g.num_states();
  const auto& target = g.label(obj.target);
  for (StateId s = 0; s < n; ++s)
    if (!target[s] && g.first_choice(s) != g.end_choice(s)) {
      if (!profile.defined(s)) throw UsageError("profile undefined at state " + g.describe(s));
      auto c = profile.choice[s];
      if (c < g.first_choice(s) || c >= g.end_choice(s))
        throw UsageError("profile picks an unavailable action at state " + g.describe(s));
    }
  // The induced chain as a one-player game: every state keeps its chosen choice.
  Tsg chain;
  {
    TsgBuilder b({"1", "2"}, g.price_names);
    for (StateId s = 0; s < n; ++s) b.add_state(0);
    std::vector<double> prices(g.price_names.size());
    for (StateId s = 0; s < n; ++s) {
      if (target[s] || g.first_choice(s) == g.end_choice(s)) continue;
      auto c = static_cast<ChoiceId>(profile.choice[s]);
      for (std::size_t k = 0; k < prices.size(); ++k) prices[k] = g.price(c, k);
      std::vector<Successor> succ(g.branches.begin() + g.first_branch(c), g.branches.begin() + g.end_branch(c));
      b.add_choice(s, g.choice_label[c], prices, succ);
    }
    b.set_initial(g.initial);
    chain = b.finish();
  }
  switch (obj.kind) {
    case ObjectiveKind::Reach:
      return prob_reach(chain, target, Direction::MaxMin, opt).values;
    case ObjectiveKind::ExpPrice:
      return expected_price(chain, target, price_of(g, obj), Direction::MaxMin, opt).values;
    case ObjectiveKind::BoundedExpPrice:
      return bounded_expected_price(chain, target, price_of(g, obj), Direction::MaxMin, obj.horizon);
  }
  return {};
}

double certificate_gap(const Tsg& g, const Objective& obj, const std::array<MemorylessProfile, 2>& profiles,
                       const std::vector<double>& values, const SolveOptions& opt) {
  auto chain = evaluate_profile(g, obj, merge_profiles(profiles[0], profiles[1]), opt);
  double gap = 0.0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (std::isinf(values[s]) || std::isinf(chain[s])) {
      if (values[s] != chain[s]) return kInfinity;
      continue;
    }
    gap = std::max(gap, std::abs(values[s] - chain[s]));
  }
  return gap;
}

DeterminacyCheck check_determinacy(const Tsg& g, const Objective& obj, const SolveOptions& opt) {
  DeterminacyCheck out;
  auto res = solve(g, obj, opt);
  if (!res.converged) return out;
  // Player 1 commits to its synthesized strategy and player 2 best-responds
  // (a lower witness for the sup-inf value when player 1 maximizes), then the
  // roles swap. sup-inf <= inf-sup always holds, so equal witnesses prove
  // determinacy at the initial state.
  auto first = solve(restrict_to(g, res.strategies[0], 0), obj, opt);
  auto second = solve(restrict_to(g, res.strategies[1], 1), obj, opt);
  out.supinf = first.initial_value(g);
  out.infsup = second.initial_value(g);
  out.converged = first.converged && second.converged;
  return out;
}

SolveResult solve(const Tsg& g, const Objective& obj, const SolveOptions& opt) {
  require_two_players(g);
  const auto& target = g.label(obj.target);
  SolveResult res;
  switch (obj.kind) {
    case ObjectiveKind::Reach:
      res = prob_reach(g, target, obj.direction, opt);
      break;
    case ObjectiveKind::ExpPrice:
      res = expected_price(g, target, price_of(g, obj), obj.direction, opt);
      break;
    case ObjectiveKind::BoundedExpPrice:
      res.values = bounded_expected_price(g, target, price_of(g, obj), obj.direction, obj.horizon);
      res.iterations = static_cast<std::uint64_t>(obj.horizon);
      res.converged = true;
      return res;
  }
  if (res.converged) res.strategies = synthesize(g, obj, res, opt);
  return res;
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json result_to_json(const Tsg& g, const Objective& obj, const SolveResult& result) {
  nlohmann::json doc;
  doc["objective"] = obj.to_string();
  double v = result.values.empty() ? 0.0 : result.initial_value(g);
  if (std::isinf(v)) doc["value"] = "inf";
  else doc["value"] = v;
  doc["iterations"] = result.iterations;
  doc["residual"] = result.residual;
  doc["converged"] = result.converged;
  nlohmann::json strategy = nlohmann::json::array();
  for (StateId s = 0; s < g.num_states(); ++s)
    for (const auto& p : result.strategies)
      if (p.defined(s))
        strategy.push_back({{"state", g.describe(s)}, {"action", g.choice_label[p.choice[s]].to_string()}});
  doc["strategy"] = std::move(strategy);
  if (!result.warnings.empty()) doc["warnings"] = result.warnings;
  return doc;
}

}  // namespace tptg
