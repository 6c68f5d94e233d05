#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tptg/errors.hpp"
#include "tptg/model.hpp"
#include "tptg/rational.hpp"
#include "tptg/solver.hpp"

namespace tptg::dsl {

/// Source position. Positions never take part in AST equality, so a
/// re-parsed printout compares equal to the original.
struct SourcePos {
  int line = 0;
  int col = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

/// Thrown for lexical, syntactic and semantic errors in model text.
class ParseError : public ModelError {
 public:
  ParseError(SourcePos pos, const std::string& message, const std::string& hint = {});

  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }
  const std::string& hint() const { return hint_; }

 private:
  SourcePos pos_;
  std::string message_, hint_;
};

// ── AST ─────────────────────────────────────────────────────────────────────

/// Rational arithmetic over literals, constants and discrete variables.
/// Subtrees without identifiers are folded to literals while parsing.
struct Expr {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div };

  Kind kind = Kind::Number;
  Rational value;           // Number
  std::string name;         // Ident (may be qualified: "Comp.var")
  std::vector<Expr> args;   // operands
  SourcePos pos;

  static Expr number(Rational v, SourcePos pos = {});
  static Expr ident(std::string name, SourcePos pos = {});

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Boolean condition over discrete variables and component locations.
struct Cond {
  enum class Kind { True, False, Not, And, Or, Cmp, At };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  std::vector<Expr> operands;  // Cmp: lhs, rhs
  std::string component, location;  // At
  std::vector<Cond> args;      // Not, And, Or
  SourcePos pos;

  friend bool operator==(const Cond&, const Cond&) = default;
};

struct ClockAtomSrc {
  std::string clock;
  BoundKind kind = BoundKind::Upper;
  Expr bound;
  SourcePos pos;

  friend bool operator==(const ClockAtomSrc&, const ClockAtomSrc&) = default;
};

struct ConstDecl {
  std::string name;
  Expr value;
  SourcePos pos;
  friend bool operator==(const ConstDecl&, const ConstDecl&) = default;
};

struct ClockDecl {
  std::string name;
  bool shared = false;
  SourcePos pos;
  friend bool operator==(const ClockDecl&, const ClockDecl&) = default;
};

struct VarDecl {
  std::string name;
  Expr lo, hi, init;
  SourcePos pos;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct Update {
  std::string var;
  Expr value;
  SourcePos pos;
  friend bool operator==(const Update&, const Update&) = default;
};

struct PriceAssign {
  std::string name;
  Expr value;
  SourcePos pos;
  friend bool operator==(const PriceAssign&, const PriceAssign&) = default;
};

struct BranchSrc {
  std::optional<Expr> prob;  // absent: probability 1
  std::vector<std::string> resets;
  std::string target;
  std::vector<Update> updates;
  SourcePos pos;
  friend bool operator==(const BranchSrc&, const BranchSrc&) = default;
};

struct EdgeSrc {
  std::string action;
  std::vector<ClockAtomSrc> clock_guard;
  std::vector<Cond> data_guard;  // conjuncts
  std::vector<BranchSrc> branches;
  std::vector<PriceAssign> costs;
  SourcePos pos;
  friend bool operator==(const EdgeSrc&, const EdgeSrc&) = default;
};

struct LocationSrc {
  std::string name;
  std::vector<ClockAtomSrc> invariant;
  std::vector<PriceAssign> rates;
  std::vector<EdgeSrc> edges;
  SourcePos pos;
  friend bool operator==(const LocationSrc&, const LocationSrc&) = default;
};

struct AutomatonSrc {
  std::string name;
  std::vector<VarDecl> vars;
  std::string init;
  std::vector<LocationSrc> locations;
  SourcePos pos;
  friend bool operator==(const AutomatonSrc&, const AutomatonSrc&) = default;
};

struct OwnerRule {
  Cond when;
  std::string player;
  SourcePos pos;
  friend bool operator==(const OwnerRule&, const OwnerRule&) = default;
};

struct LabelDecl {
  std::string name;
  Cond pred;
  SourcePos pos;
  friend bool operator==(const LabelDecl&, const LabelDecl&) = default;
};

/// `prop Pmax [F label] <= T coalition {a, b};`
/// `prop Emin [F label] steps n price time coalition {a};`
struct PropSrc {
  bool probability = true;
  bool maximize = true;
  std::string target;
  std::optional<Expr> time_bound;  // P only
  std::optional<Expr> steps;       // E only: bounded horizon
  std::string price;               // E only; empty = first structure
  std::vector<std::string> coalition;
  SourcePos pos;
  friend bool operator==(const PropSrc&, const PropSrc&) = default;
};

struct ModelSource {
  std::vector<std::string> notes;  // leading comment block, one entry per line
  std::vector<ConstDecl> consts;
  std::vector<std::string> players;
  std::vector<ClockDecl> clocks;
  std::vector<std::string> prices;
  std::vector<AutomatonSrc> automata;
  std::vector<std::string> system;  // composition order
  std::vector<OwnerRule> owners;
  std::vector<LabelDecl> labels;
  std::vector<PropSrc> props;

  friend bool operator==(const ModelSource&, const ModelSource&) = default;
};

// ── Operations ──────────────────────────────────────────────────────────────

ModelSource parse(const std::string& text);
/// Parses a single property, e.g. "Pmax [F done] <= 10 coalition {a}".
/// `clocks` are needed only to reject clock names; pass the model's.
PropSrc parse_prop(const std::string& text);

/// Canonical text; parse(print(m)) == m.
std::string print(const ModelSource& m);
std::string print_prop(const PropSrc& p);

struct Property {
  std::string text;
  Objective objective;  // target already rewritten for time bounds
  std::set<std::string> coalition;
  std::optional<std::int64_t> time_bound;
  std::string base_target;
};

struct Elaborated {
  Tptg model;
  std::map<std::string, Rational> constants;
  std::vector<PropSrc> props;
};

/// Evaluates constants (with overrides), unfolds discrete variables into
/// locations, composes the system in order (pruning unreachable product
/// locations after each step), assigns owners by the first matching rule and
/// evaluates labels. Errors carry source positions.
Elaborated elaborate(const ModelSource& src, const std::map<std::string, Rational>& overrides = {});

/// Resolves a property against an elaborated model: applies the time bound
/// (adding the observer clock to `model`) and maps the direction.
Property resolve_property(const PropSrc& prop, const std::map<std::string, Rational>& constants, Tptg& model);

// ── Generators ──────────────────────────────────────────────────────────────

enum class NrVariant { Honest, Malicious1, Malicious2 };

NrVariant parse_variant(const std::string& name);
std::string variant_name(NrVariant v);

/// Non-repudiation protocol: originator O sends messages (delay in [md, MD])
/// and waits for acknowledgements (delay in [ad, AD]); each message is the
/// last one with probability p.
ModelSource gen_nonrepudiation(NrVariant variant, Rational p, std::int64_t md = 2, std::int64_t MD = 9,
                               std::int64_t ad = 1, std::int64_t AD = 5);

/// Scheduling the six-task graph for D*(C*(A+B)) + ((A+B) + (C*D)) on two
/// faulty processors; at most k1 / k2 faults, each causing a failure with
/// probability p.
ModelSource gen_taskgraph(std::int64_t k1, std::int64_t k2, Rational p);

}  // namespace tptg::dsl
