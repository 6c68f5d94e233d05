#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tptg/game.hpp"
#include "tptg/model.hpp"

namespace tptg {

/// A state of the digital-clocks game: location plus saturated clock values.
struct DigitalState {
  LocationId location = 0;
  std::vector<std::int64_t> clocks;

  friend bool operator==(const DigitalState&, const DigitalState&) = default;
};

/// One (t, a) move: distribution over successors (exact, zero-probability
/// branches removed) and its price per structure: t * r_L(l) + r_A(l, a).
struct DigitalMove {
  ActionLabel label;
  std::vector<std::pair<DigitalState, Rational>> successors;
  std::vector<std::int64_t> prices;
};

/// All moves available in `s`, ordered by (t, action name). A move whose
/// positive-probability successor would violate the target invariant is
/// not available.
std::vector<DigitalMove> enumerate_moves(const Tptg& m, const std::vector<std::int64_t>& ceilings,
                                         const DigitalState& s);

/// 5e6 unless the TPTG_STATE_LIMIT environment variable says otherwise.
std::size_t default_state_limit();

struct BuildOptions {
  std::size_t state_limit = default_state_limit();
};

struct BuildStats {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t branches = 0;
  std::map<std::string, std::size_t> states_per_player;
};

class DigitalGame;

/// Explicit game over the states reachable from (initial, 0). Labels listed
/// in `targets` are attached (all model labels if empty). Throws ModelError
/// if the model violates the digital-clocks preconditions and ResourceError
/// when the state limit is exceeded.
DigitalGame build(const Tptg& m, const std::vector<std::string>& targets = {}, const BuildOptions& options = {});

class DigitalGame {
 public:
  Tsg game;
  std::vector<std::int64_t> ceilings;  // k_x + 1
  std::vector<std::string> clock_names;
  std::vector<std::string> location_names;
  std::vector<Diagnostic> warnings;

  std::size_t num_states() const { return game.num_states(); }
  DigitalState state(StateId s) const;
  std::optional<StateId> find(const DigitalState& s) const;
  std::string describe(StateId s) const;
  BuildStats stats() const;

 private:
  friend class DigitalBuilder;
  friend DigitalGame build(const Tptg&, const std::vector<std::string>&, const BuildOptions&);
  std::size_t stride_ = 1;
  std::vector<std::int64_t> flat_;  // per state: location, clocks...
  std::vector<std::int64_t> table_;  // open addressing, -1 = empty
  std::size_t hash_at(const std::int64_t* key) const;
};

}  // namespace tptg
