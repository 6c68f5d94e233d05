#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tptg/game.hpp"

namespace tptg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// MaxMin: player 1 ("1", owner 0) maximizes the objective, player 2
/// minimizes it. MinMax: the reverse.
enum class Direction { MaxMin, MinMax };
enum class ObjectiveKind { Reach, ExpPrice, BoundedExpPrice };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::Reach;
  Direction direction = Direction::MaxMin;
  std::string target;
  std::string price;          // price structure; empty = the first one
  std::int64_t horizon = 0;   // BoundedExpPrice only

  std::string to_string() const;
};

struct SolveOptions {
  double tol = 1e-8;
  std::uint64_t max_iters = 1'000'000;
  /// Record a warning if an iterate ever decreases (value iteration from
  /// below must be monotone).
  bool check_monotone = true;
};

struct SolveResult {
  std::vector<double> values;  // kInfinity marks infinite expected price
  /// strategies[0] for player 1, strategies[1] for player 2.
  std::array<MemorylessProfile, 2> strategies;
  std::uint64_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<bool> prob0, prob1;  // filled for Reach and ExpPrice
  std::vector<std::string> warnings;

  double initial_value(const Tsg& game) const { return values.at(game.initial); }
};

struct QualitativeSets {
  std::vector<bool> prob0;
  std::vector<bool> prob1;
  /// Number of fixpoint iterates containing each state; prob1 states get
  /// UINT32_MAX. Lets the avoiding side pick choices that never climb.
  std::vector<std::uint32_t> level;
};

/// Graph fixpoints for the reachability game where `maximizer_is_p1` says
/// which side tries to reach F. prob0: the optimal probability is 0;
/// prob1: it is 1.
QualitativeSets qualitative_reach(const Tsg& game, const std::vector<bool>& target, bool maximizer_is_p1);

SolveResult prob_reach(const Tsg& game, const std::vector<bool>& target, Direction dir, const SolveOptions& opt = {});
SolveResult expected_price(const Tsg& game, const std::vector<bool>& target, std::size_t price, Direction dir,
                           const SolveOptions& opt = {});
/// Exactly n synchronous backups from 0 with F fixed at 0.
std::vector<double> bounded_expected_price(const Tsg& game, const std::vector<bool>& target, std::size_t price,
                                           Direction dir, std::int64_t n);

/// Optimal memoryless profiles for a converged result. Ties are broken by the
/// (duration, name) order after restricting the reaching side to actions
/// that make progress toward F against any optimal opponent, and the
/// avoiding side (where the price is infinite) to actions that keep F from
/// being reached almost surely. Throws UsageError on non-converged input.
std::array<MemorylessProfile, 2> synthesize(const Tsg& game, const Objective& obj, const SolveResult& result,
                                            const SolveOptions& opt = {});

/// Value of the Markov chain induced by a full profile, computed by
/// iteration (no linear solve).
std::vector<double> evaluate_profile(const Tsg& game, const Objective& obj, const MemorylessProfile& profile,
                                     const SolveOptions& opt = {});

/// Greatest |evaluate_profile - values| over states with finite values
/// (infinite values must match exactly; otherwise +inf).
double certificate_gap(const Tsg& game, const Objective& obj, const std::array<MemorylessProfile, 2>& profiles,
                       const std::vector<double>& values, const SolveOptions& opt = {});

struct DeterminacyCheck {
  double supinf = 0.0;  // player 1 commits to its synthesized strategy, player 2 best-responds
  double infsup = 0.0;  // player 2 commits, player 1 best-responds
  bool converged = false;
};

/// Initial-state values of both commitment orders. Equal values witness that
/// the game is determined from the initial state.
DeterminacyCheck check_determinacy(const Tsg& game, const Objective& obj, const SolveOptions& opt = {});

/// Solve a two-player game; strategies are synthesized when the iteration
/// converged (not for BoundedExpPrice).
SolveResult solve(const Tsg& game, const Objective& obj, const SolveOptions& opt = {});

nlohmann::json result_to_json(const Tsg& game, const Objective& obj, const SolveResult& result);

/// Formats a value with six decimals ("18.000000", "inf").
std::string format_value(double v);

}  // namespace tptg
