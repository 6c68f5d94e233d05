#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tptg/digital.hpp"
#include "tptg/model.hpp"
#include "tptg/rational.hpp"

namespace tptg {

/// [t]_eps: floor(t) if t <= floor(t) + eps, else ceil(t). Exact.
std::int64_t digitize_scalar(const Rational& t, const Rational& eps);

/// A dense-time state with exact rational clock values (unsaturated).
struct TimedState {
  LocationId location = 0;
  std::vector<Rational> clocks;

  friend bool operator==(const TimedState&, const TimedState&) = default;
};

struct TimedStep {
  Rational duration;
  std::string action;
  std::vector<ClockId> resets;  // clocks reset by the taken branch
};

/// states[0] -moves[0]-> states[1] -> ... ; states.size() == moves.size() + 1.
struct TimedPath {
  std::vector<TimedState> states;
  std::vector<TimedStep> moves;

  std::size_t length() const { return moves.size(); }
};

/// Sum of the first n delays.
Rational accumulated_duration(const TimedPath& path, std::size_t n);

/// Checks each move against the dense semantics: the invariant holds along
/// the delay, the guard at its end, and the successor (a positive
/// probability branch with the recorded resets) satisfies its invariant.
bool is_valid_timed_path(const Tptg& m, const TimedPath& path, std::string* why = nullptr);

/// Random path from the initial state: a feasible edge chosen uniformly,
/// then a delay uniform over the multiples of 1/grid in its feasible
/// interval, then a branch by its probability. Stops early at deadlocks.
TimedPath random_timed_path(const Tptg& m, std::size_t steps, std::mt19937_64& rng, std::int64_t grid = 16);

struct DigitalPath {
  std::vector<DigitalState> states;
  std::vector<ActionLabel> moves;
};

/// eps-digitization of a path from the initial state: delays become
/// differences of digitized accumulated durations and each clock reads the
/// digitized time since its last reset, saturated at k_x + 1.
DigitalPath digitize_path(const Tptg& m, const TimedPath& path, const Rational& eps);

/// The path exists in the explicit game: every state was built, every move
/// is an available action and every step has positive probability.
bool is_valid_digital_path(const DigitalGame& g, const DigitalPath& path, std::string* why = nullptr);

}  // namespace tptg
