#include "tptg/oracle.hpp"

#include <cmath>
#include <deque>
#include <numeric>

namespace tptg {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 mul_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("exact elimination overflowed 128-bit integers");
  return r;
}

i128 sub_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw ResourceError("exact elimination overflowed 128-bit integers");
  return r;
}

Rational to_rational(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
    throw ResourceError("exact value does not fit 64-bit rationals");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

/// Smallest denominator d <= max_den with p*d integral (to 1e-12).
std::int64_t denominator_of(double p, std::int64_t max_den) {
  for (std::int64_t d = 1; d <= max_den; ++d) {
    double scaled = p * static_cast<double>(d);
    if (std::abs(scaled - std::round(scaled)) < 1e-12 * static_cast<double>(d)) return d;
  }
  throw UsageError("probability " + std::to_string(p) + " is not a rational with denominator <= " +
                   std::to_string(max_den));
}

/// Solves A x = rhs exactly by fraction-free Gauss-Jordan elimination.
std::vector<Rational> solve_exact(std::vector<std::vector<i128>> a) {
  const std::size_t m = a.size();
  i128 prev = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    while (piv < m && a[piv][k] == 0) ++piv;
    if (piv == m) throw UsageError("singular chain system");
    std::swap(a[k], a[piv]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j <= m; ++j) {
        if (j == k) continue;
        i128 num = sub_checked(mul_checked(a[k][k], a[i][j]), mul_checked(a[i][k], a[k][j]));
        if (num % prev != 0) throw std::logic_error("fraction-free elimination produced an inexact division");
        a[i][j] = num / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  std::vector<Rational> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = to_rational(a[i][m], a[i][i]);
  return x;
}

std::vector<std::vector<StateId>> chain_successors(const Tsg& g, const MemorylessProfile& profile) {
  std::vector<std::vector<StateId>> succ(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!profile.defined(s)) continue;
    auto c = static_cast<ChoiceId>(profile.choice[s]);
    for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
      if (g.branches[b].prob > 0.0) succ[s].push_back(g.branches[b].target);
  }
  return succ;
}

}  // namespace

std::vector<ExactValue> exact_chain_values(const Tsg& g, const std::vector<bool>& target, ObjectiveKind kind,
                                           std::size_t price, const MemorylessProfile& profile,
                                           const OracleLimits& limits) {
  const std::size_t n = g.num_states();
  if (target.size() != n) throw UsageError("target set has wrong size");
  if (kind == ObjectiveKind::BoundedExpPrice) throw UsageError("oracle supports unbounded objectives only");
  MemorylessProfile prof = profile;
  prof.choice.resize(n, kNoChoice);
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) prof.choice[s] = kNoChoice;  // F is absorbing for both objectives
    else if (g.first_choice(s) != g.end_choice(s) && !prof.defined(s))
      throw UsageError("profile undefined at state " + std::to_string(s));
  }

  std::int64_t den = 1;
  for (StateId s = 0; s < n; ++s) {
    if (!prof.defined(s)) continue;
    auto c = static_cast<ChoiceId>(prof.choice[s]);
    for (auto b = g.first_branch(c); b < g.end_branch(c); ++b) {
      den = std::lcm(den, denominator_of(g.branches[b].prob, limits.max_denominator));
      if (den > (1LL << 40)) throw ResourceError("probability denominators too large for the exact oracle");
    }
    if (kind == ObjectiveKind::ExpPrice && g.price(c, price) != std::round(g.price(c, price)))
      throw UsageError("exact oracle needs integer prices");
  }

  auto succ = chain_successors(g, prof);
  // States that can reach F.
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (StateId t : succ[s]) pred[t].push_back(s);
  std::vector<bool> reach(n, false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (target[s]) {
      reach[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t])
      if (!reach[s]) {
        reach[s] = true;
        queue.push_back(s);
      }
  }
  // States reaching F almost surely: no reachable state is outside `reach`.
  std::vector<bool> bad(n, false);
  for (StateId s = 0; s < n; ++s)
    if (!reach[s]) {
      bad[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t])
      if (!bad[s]) {
        bad[s] = true;
        queue.push_back(s);
      }
  }

  const bool is_reach = kind == ObjectiveKind::Reach;
  std::vector<ExactValue> out(n);
  std::vector<std::int64_t> index(n, -1);
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) {
      out[s].value = is_reach ? Rational(1) : Rational(0);
    } else if (is_reach ? !reach[s] : bad[s]) {
      if (is_reach) out[s].value = Rational(0);
      else out[s].infinite = true;
    } else {
      index[s] = static_cast<std::int64_t>(unknown.size());
      unknown.push_back(s);
    }
  }
  if (unknown.empty()) return out;

  const std::size_t m = unknown.size();
  std::vector<std::vector<i128>> a(m, std::vector<i128>(m + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    StateId s = unknown[i];
    auto c = static_cast<ChoiceId>(prof.choice[s]);
    a[i][i] += den;
    if (!is_reach) a[i][m] += static_cast<i128>(std::llround(g.price(c, price))) * den;
    for (auto b = g.first_branch(c); b < g.end_branch(c); ++b) {
      const auto& br = g.branches[b];
      if (br.prob <= 0.0) continue;
      i128 q = std::llround(br.prob * static_cast<double>(den));
      if (index[br.target] >= 0) a[i][index[br.target]] -= q;
      else if (is_reach && target[br.target]) a[i][m] += q;
    }
  }
  auto x = solve_exact(std::move(a));
  for (std::size_t i = 0; i < m; ++i) out[unknown[i]].value = x[i];
  return out;
}

ExactValue brute_force_solve(const Tsg& g, const std::vector<bool>& target, ObjectiveKind kind, Direction dir,
                             std::size_t price, const OracleLimits& limits) {
  if (g.players.size() != 2) throw UsageError("oracle expects a two-player game");
  const std::size_t n = g.num_states();
  if (n > limits.max_states)
    throw ResourceError("oracle refuses games with more than " + std::to_string(limits.max_states) + " states");
  std::vector<StateId> p1, p2;
  long double total = 1.0L;
  for (StateId s = 0; s < n; ++s) {
    auto k = g.end_choice(s) - g.first_choice(s);
    if (k == 0 || target[s]) continue;
    (g.owner[s] == 0 ? p1 : p2).push_back(s);
    total *= k;
  }
  if (total > static_cast<long double>(limits.max_profiles))
    throw ResourceError("oracle refuses to enumerate more than " + std::to_string(limits.max_profiles) +
                        " profile pairs");

  MemorylessProfile prof;
  prof.choice.assign(n, kNoChoice);
  auto first = [&](const std::vector<StateId>& states) {
    for (StateId s : states) prof.choice[s] = g.first_choice(s);
  };
  auto next = [&](const std::vector<StateId>& states) {
    for (StateId s : states) {
      if (++prof.choice[s] < g.end_choice(s)) return true;
      prof.choice[s] = g.first_choice(s);
    }
    return false;
  };

  const bool p1_high = dir == Direction::MaxMin;
  bool have_outer = false;
  ExactValue outer;
  first(p1);
  do {
    bool have_inner = false;
    ExactValue inner;
    first(p2);
    do {
      ExactValue v = exact_chain_values(g, target, kind, price, prof, limits)[g.initial];
      if (!have_inner || (p1_high ? v < inner : inner < v)) inner = v;
      have_inner = true;
    } while (next(p2));
    if (!have_outer || (p1_high ? outer < inner : inner < outer)) outer = inner;
    have_outer = true;
  } while (next(p1));
  return outer;
}

}  // namespace tptg
