#include "tptg/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tptg {

// ── ClockConstraint ─────────────────────────────────────────────────────────

ClockConstraint& ClockConstraint::add(ClockAtom atom) {
  if (atom.constant < 0) throw UsageError("clock constraint constants must be natural numbers");
  atoms_.push_back(atom);
  return *this;
}

ClockConstraint ClockConstraint::conjoin(const ClockConstraint& other) const {
  ClockConstraint out = *this;
  out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return out;
}

bool ClockConstraint::has_upper_bound(ClockId x) const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [x](const ClockAtom& a) { return a.clock == x && a.kind == BoundKind::Upper; });
}

std::int64_t ClockConstraint::max_lower_bound() const {
  std::int64_t best = 0;
  for (const auto& a : atoms_)
    if (a.kind == BoundKind::Lower) best = std::max(best, a.constant);
  return best;
}

std::string ClockConstraint::to_string(const std::vector<std::string>& clock_names) const {
  if (atoms_.empty()) return "true";
  std::string out;
  for (const auto& a : atoms_) {
    if (!out.empty()) out += " & ";
    out += (a.clock < clock_names.size() ? clock_names[a.clock] : "?" + std::to_string(a.clock));
    out += a.kind == BoundKind::Upper ? "<=" : ">=";
    out += std::to_string(a.constant);
  }
  return out;
}

// ── Valuations ──────────────────────────────────────────────────────────────

ClockValuation ClockValuation::zero(std::vector<std::int64_t> ceiling) {
  ClockValuation v;
  v.values.assign(ceiling.size(), 0);
  v.ceiling = std::move(ceiling);
  return v;
}

bool satisfies(std::span<const std::int64_t> values, const ClockConstraint& constraint) {
  for (const auto& a : constraint.atoms()) {
    if (a.clock >= values.size()) throw UsageError("constraint mentions unknown clock " + std::to_string(a.clock));
    std::int64_t v = values[a.clock];
    if (a.kind == BoundKind::Upper ? v > a.constant : v < a.constant) return false;
  }
  return true;
}

bool satisfies(const ClockValuation& v, const ClockConstraint& constraint) { return satisfies(v.values, constraint); }

ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& clocks) {
  ClockValuation out = v;
  for (ClockId x : clocks) {
    if (x >= out.values.size()) throw UsageError("reset of unknown clock " + std::to_string(x));
    out.values[x] = 0;
  }
  return out;
}

ClockValuation advance(const ClockValuation& v, std::int64_t t) {
  if (t < 0) throw UsageError("negative delay");
  ClockValuation out = v;
  for (std::size_t x = 0; x < out.values.size(); ++x) {
    std::int64_t cap = x < out.ceiling.size() ? out.ceiling[x] : out.values[x] + t;
    out.values[x] = std::min(out.values[x] + t, cap);
  }
  return out;
}

// ── Tptg lookups ────────────────────────────────────────────────────────────

namespace {

template <class Vec>
std::size_t find_name(const Vec& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw UsageError(std::string("unknown ") + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::optional<std::string> LocationOrigin::location_of(const std::string& component) const {
  for (const auto& [c, l] : parts)
    if (c == component) return l;
  return std::nullopt;
}

std::optional<std::int64_t> LocationOrigin::var(const std::string& qualified) const {
  for (const auto& [n, v] : vars)
    if (n == qualified) return v;
  return std::nullopt;
}

ClockId Tptg::clock_index(const std::string& name) const {
  return static_cast<ClockId>(find_name(clocks, name, "clock"));
}

LocationId Tptg::location_index(const std::string& name) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == name) return static_cast<LocationId>(i);
  throw UsageError("unknown location '" + name + "'");
}

PlayerId Tptg::player_index(const std::string& name) const {
  return static_cast<PlayerId>(find_name(players, name, "player"));
}

std::size_t Tptg::price_index(const std::string& name) const { return find_name(price_names, name, "price structure"); }

std::set<std::string> Tptg::alphabet() const {
  std::set<std::string> out = actions;
  for (const auto& l : locations)
    for (const auto& e : l.edges) out.insert(e.action);
  return out;
}

std::size_t Tptg::num_edges() const {
  std::size_t n = 0;
  for (const auto& l : locations) n += l.edges.size();
  return n;
}

std::vector<std::int64_t> max_constants(const Tptg& m) {
  std::vector<std::int64_t> k(m.clocks.size(), 0);
  auto scan = [&](const ClockConstraint& c) {
    for (const auto& a : c.atoms())
      if (a.clock < k.size()) k[a.clock] = std::max(k[a.clock], a.constant);
  };
  for (const auto& l : m.locations) {
    scan(l.invariant);
    for (const auto& e : l.edges) scan(e.guard);
  }
  for (const auto& [_, label] : m.labels) scan(label.clocks);
  return k;
}

std::vector<std::int64_t> clock_ceilings(const Tptg& m) {
  auto k = max_constants(m);
  for (auto& c : k) c += 1;
  return k;
}

// ── Composition ─────────────────────────────────────────────────────────────

namespace {

ClockConstraint remap(const ClockConstraint& c, const std::vector<ClockId>& map) {
  ClockConstraint out;
  for (auto a : c.atoms()) {
    a.clock = map.at(a.clock);
    out.add(a);
  }
  return out;
}

std::vector<std::int64_t> remap_prices(const std::vector<std::int64_t>& v, const std::vector<std::size_t>& map,
                                       std::size_t n) {
  std::vector<std::int64_t> out(n, 0);
  for (std::size_t k = 0; k < v.size(); ++k) out[map[k]] += v[k];
  return out;
}

std::vector<ClockId> union_resets(std::vector<ClockId> a, const std::vector<ClockId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Tptg compose(const Tptg& a, const Tptg& b, const OwnerFn& owner, const std::set<std::string>& shared_clocks) {
  Tptg out;
  out.clocks = a.clocks;
  out.observer = a.observer;
  out.observer.resize(out.clocks.size(), false);
  std::vector<ClockId> a_clock(a.clocks.size());
  for (ClockId x = 0; x < a.clocks.size(); ++x) a_clock[x] = x;
  std::vector<ClockId> b_clock(b.clocks.size());
  for (ClockId x = 0; x < b.clocks.size(); ++x) {
    auto it = std::find(out.clocks.begin(), out.clocks.end(), b.clocks[x]);
    if (it != out.clocks.end()) {
      if (!shared_clocks.count(b.clocks[x]))
        throw UsageError("clock '" + b.clocks[x] + "' is used by both components but not declared shared");
      b_clock[x] = static_cast<ClockId>(it - out.clocks.begin());
    } else {
      b_clock[x] = static_cast<ClockId>(out.clocks.size());
      out.clocks.push_back(b.clocks[x]);
      out.observer.push_back(x < b.observer.size() && b.observer[x]);
    }
  }

  out.players = a.players;
  for (const auto& p : b.players)
    if (std::find(out.players.begin(), out.players.end(), p) == out.players.end()) out.players.push_back(p);

  out.price_names = a.price_names;
  std::vector<std::size_t> a_price(a.price_names.size());
  for (std::size_t k = 0; k < a_price.size(); ++k) a_price[k] = k;
  std::vector<std::size_t> b_price(b.price_names.size());
  for (std::size_t k = 0; k < b.price_names.size(); ++k) {
    auto it = std::find(out.price_names.begin(), out.price_names.end(), b.price_names[k]);
    if (it == out.price_names.end()) {
      b_price[k] = out.price_names.size();
      out.price_names.push_back(b.price_names[k]);
    } else {
      b_price[k] = static_cast<std::size_t>(it - out.price_names.begin());
    }
  }
  const std::size_t np = out.price_names.size();

  std::set<std::string> alpha_a = a.alphabet();
  std::set<std::string> alpha_b = b.alphabet();
  std::set<std::string> shared;
  std::set_intersection(alpha_a.begin(), alpha_a.end(), alpha_b.begin(), alpha_b.end(),
                        std::inserter(shared, shared.begin()));

  out.actions = alpha_a;
  out.actions.insert(alpha_b.begin(), alpha_b.end());

  const std::size_t nb = b.locations.size();
  auto index = [nb](std::size_t i, std::size_t j) { return static_cast<LocationId>(i * nb + j); };

  auto lift_branches = [&](const std::vector<Branch>& brs, const std::vector<ClockId>& cmap, bool left,
                           std::size_t fixed) {
    std::vector<Branch> outb;
    for (const auto& br : brs) {
      Branch nb_;
      nb_.prob = br.prob;
      for (ClockId x : br.resets) nb_.resets.push_back(cmap[x]);
      std::sort(nb_.resets.begin(), nb_.resets.end());
      nb_.target = left ? index(br.target, fixed) : index(fixed, br.target);
      outb.push_back(std::move(nb_));
    }
    return outb;
  };

  out.locations.resize(a.locations.size() * nb);
  for (std::size_t i = 0; i < a.locations.size(); ++i) {
    const Location& la = a.locations[i];
    for (std::size_t j = 0; j < nb; ++j) {
      const Location& lb = b.locations[j];
      Location& l = out.locations[index(i, j)];
      l.name = la.name + "," + lb.name;
      auto who = owner(la, lb);
      if (!who) throw UsageError("owner assignment does not cover location (" + la.name + ", " + lb.name + ")");
      auto pit = std::find(out.players.begin(), out.players.end(), *who);
      if (pit == out.players.end()) throw UsageError("owner assignment names unknown player '" + *who + "'");
      l.owner = static_cast<PlayerId>(pit - out.players.begin());
      l.invariant = remap(la.invariant, a_clock).conjoin(remap(lb.invariant, b_clock));
      l.rates = remap_prices(la.rates, a_price, np);
      auto rb = remap_prices(lb.rates, b_price, np);
      for (std::size_t k = 0; k < np; ++k) l.rates[k] += rb[k];
      l.origin.parts = la.origin.parts;
      l.origin.parts.insert(l.origin.parts.end(), lb.origin.parts.begin(), lb.origin.parts.end());
      l.origin.vars = la.origin.vars;
      l.origin.vars.insert(l.origin.vars.end(), lb.origin.vars.begin(), lb.origin.vars.end());

      for (const auto& ea : la.edges) {
        if (!shared.count(ea.action)) {
          Edge e{ea.action, remap(ea.guard, a_clock), lift_branches(ea.branches, a_clock, true, j),
                 remap_prices(ea.prices, a_price, np)};
          l.edges.push_back(std::move(e));
          continue;
        }
        for (const auto& eb : lb.edges) {
          if (eb.action != ea.action) continue;
          Edge e;
          e.action = ea.action;
          e.guard = remap(ea.guard, a_clock).conjoin(remap(eb.guard, b_clock));
          e.prices = remap_prices(ea.prices, a_price, np);
          auto pb = remap_prices(eb.prices, b_price, np);
          for (std::size_t k = 0; k < np; ++k) e.prices[k] += pb[k];
          for (const auto& ba : ea.branches) {
            for (const auto& bb : eb.branches) {
              Branch br;
              br.prob = ba.prob * bb.prob;
              std::vector<ClockId> ra, rb2;
              for (ClockId x : ba.resets) ra.push_back(a_clock[x]);
              for (ClockId x : bb.resets) rb2.push_back(b_clock[x]);
              br.resets = union_resets(std::move(ra), rb2);
              br.target = index(ba.target, bb.target);
              e.branches.push_back(std::move(br));
            }
          }
          l.edges.push_back(std::move(e));
        }
      }
      for (const auto& eb : lb.edges) {
        if (shared.count(eb.action)) continue;
        Edge e{eb.action, remap(eb.guard, b_clock), lift_branches(eb.branches, b_clock, false, i),
               remap_prices(eb.prices, b_price, np)};
        l.edges.push_back(std::move(e));
      }
    }
  }
  out.initial = index(a.initial, b.initial);

  auto lift_label = [&](const TargetLabel& t, const std::vector<ClockId>& cmap, bool left) {
    TargetLabel lt;
    lt.locations.assign(out.locations.size(), false);
    for (std::size_t i = 0; i < a.locations.size(); ++i)
      for (std::size_t j = 0; j < nb; ++j) lt.locations[index(i, j)] = left ? t.locations[i] : t.locations[j];
    lt.clocks = remap(t.clocks, cmap);
    return lt;
  };
  for (const auto& [name, t] : a.labels) out.labels[name] = lift_label(t, a_clock, true);
  for (const auto& [name, t] : b.labels) {
    if (out.labels.count(name)) throw UsageError("label '" + name + "' defined by both components");
    out.labels[name] = lift_label(t, b_clock, false);
  }
  return out;
}

Tptg prune_unreachable(const Tptg& m) {
  const std::size_t n = m.locations.size();
  std::vector<std::int64_t> remap_to(n, -1);
  std::vector<LocationId> order;
  std::deque<LocationId> queue{m.initial};
  remap_to[m.initial] = 0;
  order.push_back(m.initial);
  while (!queue.empty()) {
    LocationId l = queue.front();
    queue.pop_front();
    for (const auto& e : m.locations[l].edges)
      for (const auto& br : e.branches) {
        if (br.prob == Rational(0) || remap_to[br.target] >= 0) continue;
        remap_to[br.target] = static_cast<std::int64_t>(order.size());
        order.push_back(br.target);
        queue.push_back(br.target);
      }
  }
  Tptg out;
  out.players = m.players;
  out.clocks = m.clocks;
  out.observer = m.observer;
  out.price_names = m.price_names;
  out.actions = m.alphabet();
  out.initial = 0;
  for (LocationId old : order) {
    Location l = m.locations[old];
    for (auto& e : l.edges) {
      std::vector<Branch> kept;
      for (auto& br : e.branches) {
        if (remap_to[br.target] < 0) {
          // zero-probability branch to an unreachable location: keep the
          // mass accounting intact by pointing it at the source location
          br.target = static_cast<LocationId>(remap_to[old]);
        } else {
          br.target = static_cast<LocationId>(remap_to[br.target]);
        }
        kept.push_back(br);
      }
      e.branches = std::move(kept);
    }
    out.locations.push_back(std::move(l));
  }
  for (const auto& [name, t] : m.labels) {
    TargetLabel lt;
    lt.clocks = t.clocks;
    for (LocationId old : order) lt.locations.push_back(t.locations[old]);
    out.labels[name] = std::move(lt);
  }
  return out;
}

std::pair<Tptg, std::string> with_time_bound(const Tptg& m, const std::string& target, std::int64_t bound) {
  if (bound < 0) throw UsageError("time bound must be a natural number");
  auto it = m.labels.find(target);
  if (it == m.labels.end()) throw UsageError("unknown label '" + target + "'");
  Tptg out = m;
  std::string z = "z";
  for (int i = 1; std::find(out.clocks.begin(), out.clocks.end(), z) != out.clocks.end(); ++i)
    z = "z" + std::to_string(i);
  auto zid = static_cast<ClockId>(out.clocks.size());
  out.clocks.push_back(z);
  out.observer.resize(out.clocks.size(), false);
  out.observer[zid] = true;
  TargetLabel bounded = it->second;
  bounded.clocks.add({zid, BoundKind::Upper, bound});
  std::string name = target + "_by_" + std::to_string(bound);
  out.labels[name] = std::move(bounded);
  return {std::move(out), name};
}

// ── Assumption checks ───────────────────────────────────────────────────────

std::vector<Diagnostic> validate_assumptions(const Tptg& m) {
  std::vector<Diagnostic> diags;
  auto error = [&](std::string code, std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, std::move(code), std::move(msg)});
  };
  const std::size_t nclocks = m.clocks.size();
  const std::size_t nloc = m.locations.size();
  auto is_observer = [&](ClockId x) { return x < m.observer.size() && m.observer[x]; };

  if (nloc == 0) error("structure", "model has no locations");
  if (nloc > 0 && m.initial >= nloc) error("structure", "initial location out of range");

  auto check_constraint = [&](const ClockConstraint& c, const std::string& where, bool allow_observer) {
    for (const auto& a : c.atoms()) {
      if (a.clock >= nclocks) {
        error("constraint", where + ": unknown clock id " + std::to_string(a.clock));
      } else if (is_observer(a.clock) && !allow_observer) {
        error("constraint", where + ": observer clock '" + m.clocks[a.clock] + "' used outside a target predicate");
      }
      if (a.constant < 0) error("constraint", where + ": negative constant");
    }
  };

  for (std::size_t li = 0; li < nloc; ++li) {
    const Location& l = m.locations[li];
    const std::string where = "location '" + l.name + "'";
    if (l.owner >= m.players.size()) error("partition", where + ": owner out of range");
    check_constraint(l.invariant, where + " invariant", false);
    for (ClockId x = 0; x < nclocks; ++x)
      if (!is_observer(x) && !l.invariant.has_upper_bound(x))
        error("unbounded invariant", where + ": invariant " + l.invariant.to_string(m.clocks) +
                                         " has no upper bound on clock '" + m.clocks[x] +
                                         "' (every invariant must bound every clock)");
    if (l.rates.size() != m.price_names.size()) error("price", where + ": wrong number of location rates");
    for (auto r : l.rates)
      if (r < 0) error("price", where + ": negative location rate");

    std::set<std::string> seen;
    for (const auto& e : l.edges) {
      const std::string ew = where + " action '" + e.action + "'";
      if (!seen.insert(e.action).second) error("duplicate action", ew + ": more than one transition for this action");
      check_constraint(e.guard, ew + " guard", false);
      if (e.prices.size() != m.price_names.size()) error("price", ew + ": wrong number of action prices");
      for (auto p : e.prices)
        if (p < 0) error("price", ew + ": negative action price");
      if (e.branches.empty()) error("distribution mass", ew + ": empty distribution");
      Rational mass(0);
      for (const auto& br : e.branches) {
        if (br.prob < Rational(0) || br.prob > Rational(1))
          error("probability", ew + ": probability " + br.prob.to_string() + " outside [0,1]");
        if (br.target >= nloc) error("structure", ew + ": branch target out of range");
        for (ClockId x : br.resets) {
          if (x >= nclocks) error("constraint", ew + ": reset of unknown clock");
          else if (is_observer(x)) error("constraint", ew + ": observer clock reset");
        }
        mass += br.prob;
      }
      if (!e.branches.empty() && mass != Rational(1)) {
        std::ostringstream os;
        os << ew << ": probabilities sum to " << mass.to_string() << " (mass " << mass.to_double() << "), expected 1";
        error("distribution mass", os.str());
      }
    }
  }
  for (const auto& [name, t] : m.labels) {
    if (t.locations.size() != nloc) error("label", "label '" + name + "' has wrong size");
    check_constraint(t.clocks, "label '" + name + "'", true);
  }

  // Conservative non-Zeno check: a cycle of branches that reset nothing and
  // whose guards have no positive lower bound could let time stall.
  if (nloc > 0 && count_errors(diags) == 0) {
    std::vector<std::vector<LocationId>> fast(nloc);
    for (std::size_t li = 0; li < nloc; ++li)
      for (const auto& e : m.locations[li].edges) {
        if (e.guard.max_lower_bound() > 0) continue;
        for (const auto& br : e.branches)
          if (br.resets.empty() && br.prob > Rational(0)) fast[li].push_back(br.target);
      }
    std::vector<std::uint8_t> color(nloc, 0);  // 0 white, 1 on stack, 2 done
    std::optional<LocationId> on_cycle;
    for (LocationId root = 0; root < nloc && !on_cycle; ++root) {
      if (color[root]) continue;
      std::vector<std::pair<LocationId, std::size_t>> stack{{root, 0}};
      color[root] = 1;
      while (!stack.empty() && !on_cycle) {
        auto& [l, next] = stack.back();
        if (next < fast[l].size()) {
          LocationId t = fast[l][next++];
          if (color[t] == 1) {
            on_cycle = t;
          } else if (color[t] == 0) {
            color[t] = 1;
            stack.push_back({t, 0});
          }
        } else {
          color[l] = 2;
          stack.pop_back();
        }
      }
    }
    if (on_cycle)
      diags.push_back({Diagnostic::Severity::Warning, "zeno",
                       "location '" + m.locations[*on_cycle].name +
                           "' lies on a cycle that resets no clock and has no positive lower-bound guard; "
                           "time may fail to diverge"});
  }
  return diags;
}

}  // namespace tptg
