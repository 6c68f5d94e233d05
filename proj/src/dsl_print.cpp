#include <sstream>

#include "tptg/dsl.hpp"

namespace tptg::dsl {

namespace {


std::string expr(const Expr& e, bool nested = false) {
  switch (e.kind) {
    case Expr::Kind::Number: {
      std::string s = e.value.to_string();
      bool plain = e.value.is_integer() && e.value >= Rational(0);
      return nested && !plain ? "(" + s + ")" : s;
    }
    case Expr::Kind::Ident:
      return e.name;
    case Expr::Kind::Neg: {
      std::string s = "-" + expr(e.args[0], true);
      return nested ? "(" + s + ")" : s;
    }
    default: {
      const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - "
                       : e.kind == Expr::Kind::Mul ? " * " : " / ";
      std::string s = expr(e.args[0], true) + op + expr(e.args[1], true);
      return nested ? "(" + s + ")" : s;
    }
  }
}

const char* cmp(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "==";
}

std::string cond(const Cond& c);

/// Operand of a connective: parenthesized unless it binds tighter.
std::string operand(const Cond& c, bool allow_and) {
  bool wrap = c.kind == Cond::Kind::Or || (c.kind == Cond::Kind::And && !allow_and);
  return wrap ? "(" + cond(c) + ")" : cond(c);
}

/// A condition that must parse as a single unary term.
std::string unary(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::True:
    case Cond::Kind::False:
    case Cond::Kind::At:
    case Cond::Kind::Not:
    case Cond::Kind::Cmp:
      return cond(c);
    default:
      return "(" + cond(c) + ")";
  }
}

std::string cond(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::True: return "true";
    case Cond::Kind::False: return "false";
    case Cond::Kind::At: return c.component + "." + c.location;
    case Cond::Kind::Cmp: return expr(c.operands[0]) + " " + cmp(c.op) + " " + expr(c.operands[1]);
    case Cond::Kind::Not: return "!" + unary(c.args[0]);
    case Cond::Kind::And:
    case Cond::Kind::Or: {
      bool is_and = c.kind == Cond::Kind::And;
      std::string s;
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) s += is_and ? " & " : " | ";
        s += is_and ? unary(c.args[i]) : operand(c.args[i], true);
      }
      return s;
    }
  }
  return "true";
}

std::string atom(const ClockAtomSrc& a) {
  return a.clock + (a.kind == BoundKind::Upper ? " <= " : " >= ") + expr(a.bound);
}

std::string assigns(const std::vector<PriceAssign>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].name + "=" + expr(v[i].value);
  return s;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

void print_edge(std::ostream& os, const EdgeSrc& e) {
  os << "    [" << e.action << "]";
  std::vector<std::string> guard;
  for (const auto& a : e.clock_guard) guard.push_back(atom(a));
  for (const auto& c : e.data_guard) guard.push_back(unary(c));
  if (!guard.empty()) os << " " << join(guard, " & ");
  os << " ->";
  for (std::size_t i = 0; i < e.branches.size(); ++i) {
    const BranchSrc& b = e.branches[i];
    os << (i ? " + " : " ");
    if (b.prob) {
      bool sum = b.prob->kind == Expr::Kind::Add || b.prob->kind == Expr::Kind::Sub;
      os << (sum ? "(" + expr(*b.prob) + ")" : expr(*b.prob)) << " : ";
    }
    if (!b.resets.empty()) os << "{" << join(b.resets, ", ") << "} & ";
    os << b.target;
    for (const auto& u : b.updates) os << " & " << u.var << " := " << expr(u.value);
  }
  if (!e.costs.empty()) os << " cost " << assigns(e.costs);
  os << ";\n";
}

}  // namespace

std::string print_prop(const PropSrc& p) {
  std::ostringstream os;
  os << (p.probability ? "P" : "E") << (p.maximize ? "max" : "min") << " [F " << p.target << "]";
  if (p.time_bound) os << " <= " << expr(*p.time_bound);
  if (p.steps) os << " steps " << expr(*p.steps);
  if (!p.price.empty()) os << " price " << p.price;
  os << " coalition {" << join(p.coalition, ", ") << "}";
  return os.str();
}

std::string print(const ModelSource& m) {
  std::ostringstream os;
  for (const auto& n : m.notes) os << "//" << (n.empty() ? "" : " ") << n << "\n";
  if (!m.notes.empty()) os << "\n";
  for (const auto& c : m.consts) os << "const " << c.name << " = " << expr(c.value) << ";\n";
  if (!m.players.empty()) os << "player " << join(m.players, ", ") << ";\n";
  // consecutive clocks with the same sharing flag share a declaration
  for (std::size_t i = 0; i < m.clocks.size();) {
    std::size_t j = i;
    std::vector<std::string> names;
    while (j < m.clocks.size() && m.clocks[j].shared == m.clocks[i].shared) names.push_back(m.clocks[j++].name);
    os << (m.clocks[i].shared ? "shared clock " : "clock ") << join(names, ", ") << ";\n";
    i = j;
  }
  if (!m.prices.empty()) os << "price " << join(m.prices, ", ") << ";\n";
  for (const auto& a : m.automata) {
    os << "\nautomaton " << a.name << " {\n";
    for (const auto& v : a.vars)
      os << "  var " << v.name << " : [" << expr(v.lo) << ".." << expr(v.hi) << "] init " << expr(v.init) << ";\n";
    os << "  init " << a.init << ";\n";
    for (const auto& l : a.locations) {
      os << "  location " << l.name << " {\n";
      if (!l.invariant.empty()) {
        std::vector<std::string> atoms;
        for (const auto& at : l.invariant) atoms.push_back(atom(at));
        os << "    inv " << join(atoms, " & ") << ";\n";
      }
      if (!l.rates.empty()) os << "    rate " << assigns(l.rates) << ";\n";
      for (const auto& e : l.edges) print_edge(os, e);
      os << "  }\n";
    }
    os << "}\n";
  }
  if (!m.system.empty()) os << "\nsystem " << join(m.system, " || ") << ";\n";
  if (!m.owners.empty()) {
    os << "\nowner {\n";
    for (const auto& r : m.owners) os << "  " << cond(r.when) << " -> " << r.player << ";\n";
    os << "};\n";
  }
  if (!m.labels.empty()) os << "\n";
  for (const auto& l : m.labels) os << "label " << l.name << " = " << cond(l.pred) << ";\n";
  if (!m.props.empty()) os << "\n";
  for (const auto& p : m.props) os << "prop " << print_prop(p) << ";\n";
  return os.str();
}

}  // namespace tptg::dsl
