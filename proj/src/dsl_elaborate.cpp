#include <algorithm>
#include <deque>
#include <map>

#include "tptg/dsl.hpp"

namespace tptg::dsl {

namespace {

using Env = std::map<std::string, Rational>;

/// Name resolution for expressions: automaton-local variables, qualified
/// variables of a composed location, then constants.
struct Scope {
  const Env* consts = nullptr;
  const std::vector<std::string>* var_names = nullptr;
  const std::vector<std::int64_t>* var_values = nullptr;
  const LocationOrigin* origin = nullptr;
};

Rational lookup(const Expr& e, const Scope& s) {
  if (e.name.find('.') != std::string::npos) {
    if (!s.origin)
      throw ParseError(e.pos, "qualified name '" + e.name + "' is only allowed in owner rules and labels",
                       "variables are local to their automaton");
    if (auto v = s.origin->var(e.name)) return Rational(*v);
    throw ParseError(e.pos, "unknown variable '" + e.name + "'");
  }
  if (s.var_names) {
    auto it = std::find(s.var_names->begin(), s.var_names->end(), e.name);
    if (it != s.var_names->end()) return Rational((*s.var_values)[it - s.var_names->begin()]);
  }
  auto c = s.consts->find(e.name);
  if (c != s.consts->end()) return c->second;
  if (s.origin) throw ParseError(e.pos, "unknown identifier '" + e.name + "'", "qualify variables as Component.var");
  throw ParseError(e.pos, "unknown identifier '" + e.name + "'");
}

Rational eval(const Expr& e, const Scope& s) {
  try {
    switch (e.kind) {
      case Expr::Kind::Number: return e.value;
      case Expr::Kind::Ident: return lookup(e, s);
      case Expr::Kind::Neg: return -eval(e.args[0], s);
      case Expr::Kind::Add: return eval(e.args[0], s) + eval(e.args[1], s);
      case Expr::Kind::Sub: return eval(e.args[0], s) - eval(e.args[1], s);
      case Expr::Kind::Mul: return eval(e.args[0], s) * eval(e.args[1], s);
      case Expr::Kind::Div: {
        Rational d = eval(e.args[1], s);
        if (d == Rational(0)) throw ParseError(e.pos, "division by zero");
        return eval(e.args[0], s) / d;
      }
    }
  } catch (const std::overflow_error&) {
    throw ParseError(e.pos, "arithmetic overflow");
  }
  return Rational(0);
}

std::int64_t eval_int(const Expr& e, const Scope& s, const std::string& what) {
  Rational v = eval(e, s);
  if (!v.is_integer()) throw ParseError(e.pos, what + " must be an integer, got " + v.to_string());
  return v.num();
}

std::int64_t eval_nat(const Expr& e, const Scope& s, const std::string& what) {
  std::int64_t v = eval_int(e, s, what);
  if (v < 0) throw ParseError(e.pos, what + " must be a natural number, got " + std::to_string(v));
  return v;
}

bool compare(CmpOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

bool holds(const Cond& c, const Scope& s) {
  switch (c.kind) {
    case Cond::Kind::True: return true;
    case Cond::Kind::False: return false;
    case Cond::Kind::Not: return !holds(c.args[0], s);
    case Cond::Kind::And:
      return std::all_of(c.args.begin(), c.args.end(), [&](const Cond& a) { return holds(a, s); });
    case Cond::Kind::Or:
      return std::any_of(c.args.begin(), c.args.end(), [&](const Cond& a) { return holds(a, s); });
    case Cond::Kind::Cmp: return compare(c.op, eval(c.operands[0], s), eval(c.operands[1], s));
    case Cond::Kind::At: {
      if (!s.origin)
        throw ParseError(c.pos, "location tests are only allowed in owner rules and labels");
      auto l = s.origin->location_of(c.component);
      return l && *l == c.location;
    }
  }
  return false;
}

/// Checks that every location test names a component of the system and one
/// of its locations.
void check_location_tests(const Cond& c, const std::map<std::string, const AutomatonSrc*>& system) {
  if (c.kind == Cond::Kind::At) {
    auto it = system.find(c.component);
    if (it == system.end()) throw ParseError(c.pos, "'" + c.component + "' is not a component of the system");
    const auto& locs = it->second->locations;
    if (std::none_of(locs.begin(), locs.end(), [&](const LocationSrc& l) { return l.name == c.location; }))
      throw ParseError(c.pos, "automaton '" + c.component + "' has no location '" + c.location + "'");
  }
  for (const auto& a : c.args) check_location_tests(a, system);
}

template <class T>
void check_unique(const std::vector<T>& items, auto name_of, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& it : items)
    if (!seen.insert(name_of(it)).second) throw ModelError("duplicate " + what + " '" + name_of(it) + "'");
}

std::vector<std::int64_t> price_vector(const std::vector<PriceAssign>& assigns, const std::vector<std::string>& prices,
                                       const Scope& s) {
  std::vector<std::int64_t> out(prices.size(), 0);
  std::set<std::string> seen;
  for (const auto& a : assigns) {
    auto it = std::find(prices.begin(), prices.end(), a.name);
    if (it == prices.end())
      throw ParseError(a.pos, "unknown price structure '" + a.name + "'", "declare it with 'price " + a.name + ";'");
    if (!seen.insert(a.name).second) throw ParseError(a.pos, "price '" + a.name + "' assigned twice");
    out[it - prices.begin()] = eval_nat(a.value, s, "price '" + a.name + "'");
  }
  return out;
}

void collect_clocks(const std::vector<ClockAtomSrc>& atoms, std::set<std::string>& out) {
  for (const auto& a : atoms) out.insert(a.clock);
}

struct Unfolder {
  Unfolder(const ModelSource& s, const AutomatonSrc& aut, const Env& c) : src(s), a(aut), consts(c) {}

  const ModelSource& src;
  const AutomatonSrc& a;
  const Env& consts;

  Tptg out;
  std::vector<std::string> var_names;
  std::vector<std::int64_t> lo, hi;
  std::map<std::pair<std::size_t, std::vector<std::int64_t>>, LocationId> index;
  std::deque<std::pair<std::size_t, std::vector<std::int64_t>>> queue;

  std::size_t loc_index(const std::string& name, SourcePos pos) const {
    for (std::size_t i = 0; i < a.locations.size(); ++i)
      if (a.locations[i].name == name) return i;
    throw ParseError(pos, "automaton '" + a.name + "' has no location '" + name + "'");
  }

  LocationId intern(std::size_t loc, const std::vector<std::int64_t>& vals) {
    auto key = std::make_pair(loc, vals);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    auto id = static_cast<LocationId>(out.locations.size());
    index.emplace(key, id);
    Location l;
    l.name = a.locations[loc].name;
    if (!vals.empty()) {
      l.name += "{";
      for (std::size_t i = 0; i < vals.size(); ++i)
        l.name += (i ? "," : "") + var_names[i] + "=" + std::to_string(vals[i]);
      l.name += "}";
    }
    l.origin.parts.emplace_back(a.name, a.locations[loc].name);
    for (std::size_t i = 0; i < vals.size(); ++i) l.origin.vars.emplace_back(a.name + "." + var_names[i], vals[i]);
    out.locations.push_back(std::move(l));
    queue.emplace_back(loc, vals);
    return id;
  }

  ClockConstraint constraint(const std::vector<ClockAtomSrc>& atoms, const Scope& s) const {
    ClockConstraint c;
    for (const auto& at : atoms) {
      auto x = std::find(out.clocks.begin(), out.clocks.end(), at.clock);
      c.add({static_cast<ClockId>(x - out.clocks.begin()), at.kind, eval_nat(at.bound, s, "clock bound")});
    }
    return c;
  }

  Tptg run() {
    // clocks used by this automaton, in declaration order
    std::set<std::string> used;
    for (const auto& l : a.locations) {
      collect_clocks(l.invariant, used);
      for (const auto& e : l.edges) {
        collect_clocks(e.clock_guard, used);
        for (const auto& b : e.branches) used.insert(b.resets.begin(), b.resets.end());
      }
    }
    for (const auto& c : src.clocks)
      if (used.count(c.name)) out.clocks.push_back(c.name);
    out.observer.assign(out.clocks.size(), false);
    out.players = src.players;
    out.price_names = src.prices;
    for (const auto& l : a.locations)
      for (const auto& e : l.edges) out.actions.insert(e.action);

    Scope cs{&consts, nullptr, nullptr, nullptr};
    std::vector<std::int64_t> init;
    for (const auto& v : a.vars) {
      if (consts.count(v.name)) throw ParseError(v.pos, "variable '" + v.name + "' shadows a constant");
      if (std::find(var_names.begin(), var_names.end(), v.name) != var_names.end())
        throw ParseError(v.pos, "duplicate variable '" + v.name + "'");
      var_names.push_back(v.name);
      lo.push_back(eval_int(v.lo, cs, "lower bound"));
      hi.push_back(eval_int(v.hi, cs, "upper bound"));
      init.push_back(eval_int(v.init, cs, "initial value"));
      if (lo.back() > hi.back()) throw ParseError(v.pos, "empty range for variable '" + v.name + "'");
      if (init.back() < lo.back() || init.back() > hi.back())
        throw ParseError(v.pos, "initial value outside the range of '" + v.name + "'");
    }
    {
      std::set<std::string> names;
      for (const auto& l : a.locations)
        if (!names.insert(l.name).second) throw ParseError(l.pos, "duplicate location '" + l.name + "'");
    }
    out.initial = intern(loc_index(a.init, a.pos), init);

    while (!queue.empty()) {
      auto [li, vals] = queue.front();
      queue.pop_front();
      LocationId id = index.at({li, vals});
      const LocationSrc& ls = a.locations[li];
      Scope s{&consts, &var_names, &vals, nullptr};
      ClockConstraint inv = constraint(ls.invariant, s);
      std::vector<std::int64_t> rates = price_vector(ls.rates, src.prices, s);
      std::vector<Edge> edges;
      for (const auto& es : ls.edges) {
        if (!std::all_of(es.data_guard.begin(), es.data_guard.end(), [&](const Cond& c) { return holds(c, s); }))
          continue;
        Edge e;
        e.action = es.action;
        e.guard = constraint(es.clock_guard, s);
        e.prices = price_vector(es.costs, src.prices, s);
        Rational mass(0);
        for (const auto& bs : es.branches) {
          Branch b;
          b.prob = bs.prob ? eval(*bs.prob, s) : Rational(1);
          if (b.prob < Rational(0) || b.prob > Rational(1))
            throw ParseError(bs.pos, "probability " + b.prob.to_string() + " outside [0,1]");
          mass += b.prob;
          for (const auto& c : bs.resets) {
            auto x = static_cast<ClockId>(std::find(out.clocks.begin(), out.clocks.end(), c) - out.clocks.begin());
            if (std::find(b.resets.begin(), b.resets.end(), x) == b.resets.end()) b.resets.push_back(x);
          }
          std::sort(b.resets.begin(), b.resets.end());
          std::vector<std::int64_t> next = vals;
          for (const auto& u : bs.updates) {
            auto it = std::find(var_names.begin(), var_names.end(), u.var);
            if (it == var_names.end())
              throw ParseError(u.pos, "unknown variable '" + u.var + "' in automaton '" + a.name + "'");
            std::size_t k = it - var_names.begin();
            std::int64_t v = eval_int(u.value, s, "value of '" + u.var + "'");
            if (v < lo[k] || v > hi[k])
              throw ParseError(u.pos, "value " + std::to_string(v) + " outside [" + std::to_string(lo[k]) + ".." +
                                          std::to_string(hi[k]) + "] for variable '" + u.var + "'");
            next[k] = v;
          }
          b.target = intern(loc_index(bs.target, bs.pos), next);
          e.branches.push_back(std::move(b));
        }
        if (mass != Rational(1))
          throw ParseError(es.pos, "probabilities sum to " + mass.to_string() + " (mass " +
                                       std::to_string(mass.to_double()) + "), expected 1");
        edges.push_back(std::move(e));
      }
      Location& l = out.locations[id];
      l.invariant = std::move(inv);
      l.rates = std::move(rates);
      l.edges = std::move(edges);
    }
    return out;
  }
};

}  // namespace

Elaborated elaborate(const ModelSource& src, const std::map<std::string, Rational>& overrides) {
  auto self = [](const std::string& s) { return s; };
  check_unique(src.players, self, "player");
  check_unique(src.prices, self, "price structure");
  check_unique(src.clocks, [](const ClockDecl& c) { return c.name; }, "clock");
  check_unique(src.consts, [](const ConstDecl& c) { return c.name; }, "constant");
  check_unique(src.automata, [](const AutomatonSrc& a) { return a.name; }, "automaton");
  check_unique(src.labels, [](const LabelDecl& l) { return l.name; }, "label");
  if (src.players.empty()) throw ModelError("no players declared");
  if (src.automata.empty()) throw ModelError("no automata declared");

  Elaborated out;
  for (const auto& [name, v] : overrides) {
    if (std::none_of(src.consts.begin(), src.consts.end(), [&](const ConstDecl& c) { return c.name == name; }))
      throw UsageError("unknown constant '" + name + "'");
  }
  for (const auto& c : src.consts) {
    auto o = overrides.find(c.name);
    out.constants[c.name] = o != overrides.end() ? o->second : eval(c.value, Scope{&out.constants});
  }

  std::vector<std::string> order = src.system;
  if (order.empty())
    for (const auto& a : src.automata) order.push_back(a.name);
  std::map<std::string, const AutomatonSrc*> system;
  for (const auto& name : order) {
    auto it = std::find_if(src.automata.begin(), src.automata.end(), [&](const AutomatonSrc& a) { return a.name == name; });
    if (it == src.automata.end()) throw ModelError("system: unknown automaton '" + name + "'");
    if (!system.emplace(name, &*it).second) throw ModelError("system: automaton '" + name + "' listed twice");
  }

  std::set<std::string> shared;
  for (const auto& c : src.clocks)
    if (c.shared) shared.insert(c.name);

  const std::string placeholder = src.players.front();
  Tptg model;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Unfolder u(src, *system.at(order[i]), out.constants);
    Tptg part = u.run();
    if (i == 0) {
      model = std::move(part);
      continue;
    }
    try {
      model = prune_unreachable(
          compose(model, part, [&](const Location&, const Location&) { return placeholder; }, shared));
    } catch (const UsageError& e) {
      throw ModelError(e.what());
    }
  }

  for (const auto& r : src.owners) {
    if (std::find(src.players.begin(), src.players.end(), r.player) == src.players.end())
      throw ParseError(r.pos, "unknown player '" + r.player + "'");
    check_location_tests(r.when, system);
  }
  for (auto& l : model.locations) {
    Scope s{&out.constants, nullptr, nullptr, &l.origin};
    auto rule = std::find_if(src.owners.begin(), src.owners.end(), [&](const OwnerRule& r) { return holds(r.when, s); });
    if (rule == src.owners.end()) {
      if (src.players.size() != 1) throw ModelError("no owner rule matches location '" + l.name + "'");
      l.owner = 0;
    } else {
      l.owner = static_cast<PlayerId>(
          std::find(src.players.begin(), src.players.end(), rule->player) - src.players.begin());
    }
  }

  for (const auto& d : src.labels) {
    check_location_tests(d.pred, system);
    TargetLabel t;
    for (const auto& l : model.locations)
      t.locations.push_back(holds(d.pred, Scope{&out.constants, nullptr, nullptr, &l.origin}));
    model.labels[d.name] = std::move(t);
  }

  out.model = std::move(model);
  out.props = src.props;
  return out;
}

Property resolve_property(const PropSrc& prop, const std::map<std::string, Rational>& constants, Tptg& model) {
  Property out;
  out.text = print_prop(prop);
  out.base_target = prop.target;
  if (!model.labels.count(prop.target)) throw ParseError(prop.pos, "unknown label '" + prop.target + "'");
  for (const auto& p : prop.coalition) {
    if (std::find(model.players.begin(), model.players.end(), p) == model.players.end())
      throw ParseError(prop.pos, "unknown player '" + p + "' in coalition");
    out.coalition.insert(p);
  }
  Scope s{&constants};
  Objective& obj = out.objective;
  obj.direction = prop.maximize ? Direction::MaxMin : Direction::MinMax;
  obj.target = prop.target;
  if (prop.probability) {
    obj.kind = ObjectiveKind::Reach;
  } else {
    if (model.price_names.empty()) throw ParseError(prop.pos, "expected price property but no price is declared");
    obj.price = prop.price.empty() ? model.price_names.front() : prop.price;
    if (std::find(model.price_names.begin(), model.price_names.end(), obj.price) == model.price_names.end())
      throw ParseError(prop.pos, "unknown price structure '" + obj.price + "'");
    obj.kind = prop.steps ? ObjectiveKind::BoundedExpPrice : ObjectiveKind::ExpPrice;
    if (prop.steps) obj.horizon = eval_nat(*prop.steps, s, "step bound");
  }
  if (prop.time_bound) {
    std::int64_t T = eval_nat(*prop.time_bound, s, "time bound");
    out.time_bound = T;
    std::string name = prop.target + "_by_" + std::to_string(T);
    if (!model.labels.count(name)) model = with_time_bound(model, prop.target, T).first;
    obj.target = name;
  }
  return out;
}

}  // namespace tptg::dsl
