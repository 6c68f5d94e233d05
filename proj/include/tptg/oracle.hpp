#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tptg/game.hpp"
#include "tptg/rational.hpp"
#include "tptg/solver.hpp"

namespace tptg {

/// Exact value of a reachability probability or expected price.
struct ExactValue {
  bool infinite = false;
  Rational value;

  double to_double() const { return infinite ? kInfinity : value.to_double(); }
  std::string to_string() const { return infinite ? "inf" : value.to_string(); }

  friend bool operator==(const ExactValue&, const ExactValue&) = default;
  friend bool operator<(const ExactValue& a, const ExactValue& b) {
    if (a.infinite || b.infinite) return !a.infinite && b.infinite;
    return a.value < b.value;
  }
};

struct OracleLimits {
  std::size_t max_states = 16;
  std::uint64_t max_profiles = 2'000'000;
  /// Probabilities must be k/d for some d <= this bound.
  std::int64_t max_denominator = 64;
};

/// Exact value of the Markov chain induced by `profile` from every state,
/// by fraction-free elimination. Probabilities are recovered as rationals
/// with small denominators and prices must be integers; otherwise the game
/// is refused with UsageError.
std::vector<ExactValue> exact_chain_values(const Tsg& game, const std::vector<bool>& target, ObjectiveKind kind,
                                           std::size_t price, const MemorylessProfile& profile,
                                           const OracleLimits& limits = {});

/// Initial-state value by enumerating every pair of memoryless deterministic
/// strategies: sup over player 1 of inf over player 2 (MaxMin), or the
/// reverse (MinMax). ResourceError when the enumeration exceeds the limits.
ExactValue brute_force_solve(const Tsg& game, const std::vector<bool>& target, ObjectiveKind kind, Direction dir,
                             std::size_t price = 0, const OracleLimits& limits = {});

}  // namespace tptg
