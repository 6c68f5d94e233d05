#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "tptg/game.hpp"

namespace tptg {

/// A (possibly history-dependent, possibly randomized) strategy profile:
/// given the history so far, the choice to take at its last state.
using Strategy = std::function<ChoiceId(const TsgPath& history, std::mt19937_64& rng)>;

/// Follows a memoryless profile; throws UsageError at states where it is
/// undefined.
Strategy memoryless_strategy(const Tsg& game, MemorylessProfile profile);

/// Picks uniformly among the available choices.
Strategy uniform_strategy(const Tsg& game);

struct SimulationRun {
  TsgPath path;
  bool hit = false;       // reached the target
  bool deadlock = false;  // stopped in a non-target state without actions
  bool censored = false;  // stopped by max_steps
  double price = 0.0;     // accumulated until the target is entered
};

SimulationRun simulate(const Tsg& game, const Strategy& strategy, const std::vector<bool>& target, std::size_t price,
                       std::uint64_t seed, std::size_t max_steps);

struct Estimate {
  std::size_t samples = 0;
  std::size_t hits = 0;
  std::size_t censored = 0;
  double probability = 0.0;
  double probability_halfwidth = 0.0;  // 99% normal-approximation CI
  double price = 0.0;                  // mean over runs that hit the target
  double price_halfwidth = 0.0;
};

/// Monte Carlo estimate over `samples` runs; run i uses a seed derived from
/// (seed, i), so results do not depend on scheduling. Censored runs are
/// never counted as hits.
Estimate estimate(const Tsg& game, const Strategy& strategy, const std::vector<bool>& target, std::size_t price,
                  std::size_t samples, std::size_t max_steps, std::uint64_t seed);

/// One JSON object per step: {"step","state","action","duration","price"}.
void write_trace(std::ostream& os, const Tsg& game, const SimulationRun& run, std::size_t price);

}  // namespace tptg
