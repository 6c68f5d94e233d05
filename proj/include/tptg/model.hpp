#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tptg/errors.hpp"
#include "tptg/game.hpp"
#include "tptg/rational.hpp"

namespace tptg {

using ClockId = std::uint32_t;
using LocationId = std::uint32_t;

// ── Clock constraints ───────────────────────────────────────────────────────
// Conjunctions of x<=c / x>=c over single clocks. Strict and diagonal atoms
// are not representable.

enum class BoundKind : std::uint8_t { Upper, Lower };

struct ClockAtom {
  ClockId clock = 0;
  BoundKind kind = BoundKind::Upper;
  std::int64_t constant = 0;

  friend bool operator==(const ClockAtom&, const ClockAtom&) = default;
};

class ClockConstraint {
 public:
  ClockConstraint() = default;  // the empty conjunction, i.e. true

  static ClockConstraint upper(ClockId x, std::int64_t c) { return ClockConstraint().add({x, BoundKind::Upper, c}); }
  static ClockConstraint lower(ClockId x, std::int64_t c) { return ClockConstraint().add({x, BoundKind::Lower, c}); }

  ClockConstraint& add(ClockAtom atom);
  ClockConstraint conjoin(const ClockConstraint& other) const;

  const std::vector<ClockAtom>& atoms() const { return atoms_; }
  bool is_true() const { return atoms_.empty(); }
  bool has_upper_bound(ClockId x) const;
  /// Greatest constant of a lower-bound atom (0 if none).
  std::int64_t max_lower_bound() const;

  std::string to_string(const std::vector<std::string>& clock_names) const;

  friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;

 private:
  std::vector<ClockAtom> atoms_;
};

// ── Digital clock valuations ────────────────────────────────────────────────

/// Clock values in the digital domain. `ceiling[x]` is k_x+1, the value at
/// which x saturates.
struct ClockValuation {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> ceiling;

  static ClockValuation zero(std::vector<std::int64_t> ceiling);

  friend bool operator==(const ClockValuation&, const ClockValuation&) = default;
};

bool satisfies(std::span<const std::int64_t> values, const ClockConstraint& constraint);
bool satisfies(const ClockValuation& v, const ClockConstraint& constraint);
ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& clocks);
ClockValuation advance(const ClockValuation& v, std::int64_t t);

// ── TPTG ────────────────────────────────────────────────────────────────────

struct Branch {
  Rational prob;
  std::vector<ClockId> resets;  // sorted, unique
  LocationId target = 0;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Edge {
  std::string action;
  ClockConstraint guard;
  std::vector<Branch> branches;
  std::vector<std::int64_t> prices;  // one per price structure (action price)

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Where a (possibly composed, possibly unfolded) location came from:
/// component automaton -> its location, and qualified discrete variable
/// values ("Comp.var" -> value).
struct LocationOrigin {
  std::vector<std::pair<std::string, std::string>> parts;
  std::vector<std::pair<std::string, std::int64_t>> vars;

  std::optional<std::string> location_of(const std::string& component) const;
  std::optional<std::int64_t> var(const std::string& qualified) const;

  friend bool operator==(const LocationOrigin&, const LocationOrigin&) = default;
};

struct Location {
  std::string name;
  PlayerId owner = 0;
  ClockConstraint invariant;
  std::vector<std::int64_t> rates;  // one per price structure (location rate)
  std::vector<Edge> edges;
  LocationOrigin origin;

  friend bool operator==(const Location&, const Location&) = default;
};

/// Target predicate: a set of locations, optionally restricted by a clock
/// constraint (used only for time-bounded targets).
struct TargetLabel {
  std::vector<bool> locations;
  ClockConstraint clocks;

  friend bool operator==(const TargetLabel&, const TargetLabel&) = default;
};

struct Tptg {
  std::vector<std::string> players;
  std::vector<std::string> clocks;
  /// Clocks that only feed target predicates (time-bound observers). They
  /// never appear in invariants or guards and are exempt from the bounded
  /// invariant requirement.
  std::vector<bool> observer;
  std::vector<std::string> price_names;
  std::vector<Location> locations;
  LocationId initial = 0;
  std::map<std::string, TargetLabel> labels;
  /// Declared action alphabet. Composition synchronizes on shared names of
  /// the full alphabets, so actions keep synchronizing even when no
  /// reachable location currently offers them.
  std::set<std::string> actions;

  ClockId clock_index(const std::string& name) const;
  LocationId location_index(const std::string& name) const;
  PlayerId player_index(const std::string& name) const;
  std::size_t price_index(const std::string& name) const;

  /// Declared actions plus every action labelling an edge.
  std::set<std::string> alphabet() const;
  std::size_t num_edges() const;

  friend bool operator==(const Tptg&, const Tptg&) = default;
};

/// k_x per clock: the greatest constant x is compared against in invariants,
/// guards and target predicates; 0 if never compared.
std::vector<std::int64_t> max_constants(const Tptg& m);

/// k_x + 1 per clock.
std::vector<std::int64_t> clock_ceilings(const Tptg& m);

/// Owner of a product location; std::nullopt means "not covered", which
/// makes compose() fail.
using OwnerFn = std::function<std::optional<std::string>(const Location& a, const Location& b)>;

/// Parallel composition. Shared action names synchronize (guards conjoined,
/// distributions multiplied, resets unioned, action prices summed); other
/// actions interleave. Location rates are summed per price structure (by
/// name). Clocks with the same name in both operands must be listed in
/// `shared_clocks`.
Tptg compose(const Tptg& a, const Tptg& b, const OwnerFn& owner, const std::set<std::string>& shared_clocks = {});

/// Drops locations not reachable from the initial one in the untimed graph
/// (positive-probability branches only).
Tptg prune_unreachable(const Tptg& m);

/// Adds a never-reset observer clock z and a label `<target>_by_<T>` whose
/// predicate is target /\ z<=T. Returns the model and the new label name.
std::pair<Tptg, std::string> with_time_bound(const Tptg& m, const std::string& target, std::int64_t bound);

/// Structural well-formedness and the digital-clocks preconditions: bounded
/// invariants, closed diagonal-free constraints, exact unit-mass
/// distributions. Emits a warning for untimed cycles that might admit
/// time-convergent behaviour.
std::vector<Diagnostic> validate_assumptions(const Tptg& m);

}  // namespace tptg
