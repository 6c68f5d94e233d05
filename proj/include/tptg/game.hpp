#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tptg/errors.hpp"

namespace tptg {

using StateId = std::uint32_t;
using ChoiceId = std::uint32_t;
using PlayerId = std::uint32_t;

inline constexpr std::int64_t kNoChoice = -1;

/// Action of an explicit game: a (duration, name) pair. Ordering is
/// lexicographic on (duration, name), which is also the tie-break order used
/// by strategy synthesis.
struct ActionLabel {
  std::int64_t duration = 0;
  std::string name;

  std::string to_string() const;
  /// Inverse of to_string(): "(3,send)".
  static ActionLabel parse(const std::string& text);

  friend auto operator<=>(const ActionLabel&, const ActionLabel&) = default;
  friend bool operator==(const ActionLabel&, const ActionLabel&) = default;
};

struct Successor {
  StateId target = 0;
  double prob = 0.0;
};

/// Explicit finite turn-based stochastic game.
///
/// Storage is compressed: the choices of state s are the contiguous range
/// [choice_begin[s], choice_begin[s+1]) and the branches of choice c are
/// [branch_begin[c], branch_begin[c+1]). Every choice carries one price per
/// named price structure. Immutable once built; share freely between readers.
class Tsg {
 public:
  std::vector<std::string> players;
  std::vector<PlayerId> owner;
  StateId initial = 0;

  std::vector<std::uint32_t> choice_begin{0};
  std::vector<ActionLabel> choice_label;
  std::vector<std::uint32_t> branch_begin{0};
  std::vector<Successor> branches;

  std::vector<std::string> price_names;
  std::vector<double> prices;  // choice-major: prices[c * price_names.size() + k]

  /// Label name -> membership flag per state. The label "deadlock" marks
  /// states that have no available action.
  std::map<std::string, std::vector<bool>> labels;

  /// Optional human-readable description per state (may be empty).
  std::vector<std::string> state_names;

  std::size_t num_states() const { return choice_begin.size() - 1; }
  std::size_t num_choices() const { return choice_label.size(); }
  std::size_t num_branches() const { return branches.size(); }

  std::uint32_t first_choice(StateId s) const { return choice_begin[s]; }
  std::uint32_t end_choice(StateId s) const { return choice_begin[s + 1]; }
  std::uint32_t first_branch(ChoiceId c) const { return branch_begin[c]; }
  std::uint32_t end_branch(ChoiceId c) const { return branch_begin[c + 1]; }

  double price(ChoiceId c, std::size_t structure) const {
    return prices[static_cast<std::size_t>(c) * price_names.size() + structure];
  }
  std::size_t price_index(const std::string& name) const;
  PlayerId player_index(const std::string& name) const;

  bool has_label(const std::string& name) const { return labels.count(name) != 0; }
  const std::vector<bool>& label(const std::string& name) const;

  std::string describe(StateId s) const;
};

/// Incremental construction of a Tsg. States are appended in index order;
/// choices must be added for state s before any state > s receives choices.
class TsgBuilder {
 public:
  TsgBuilder(std::vector<std::string> players, std::vector<std::string> price_names);

  StateId add_state(PlayerId owner, std::string name = {});
  ChoiceId add_choice(StateId s, ActionLabel label, const std::vector<double>& prices,
                      const std::vector<Successor>& successors);
  void set_initial(StateId s) { game_.initial = s; }
  void set_label(const std::string& name, StateId s);
  void declare_label(const std::string& name);

  /// Closes the choice ranges of trailing states and marks action-less
  /// states with the "deadlock" label.
  Tsg finish();

 private:
  void close_until(StateId s);

  Tsg game_;
  std::size_t num_states_ = 0;
  StateId open_state_ = 0;  // states < open_state_ have closed choice ranges
};

/// A finite path s0 -c0-> s1 -c1-> ... where c_i is a choice id of s_i.
struct TsgPath {
  std::vector<StateId> states;
  std::vector<ChoiceId> choices;

  std::size_t length() const { return choices.size(); }
  StateId last() const { return states.back(); }
};

/// Memoryless deterministic strategy: one choice per state, kNoChoice where
/// the strategy is not defined (deadlocks, states of other players).
struct MemorylessProfile {
  std::vector<std::int64_t> choice;

  bool defined(StateId s) const { return s < choice.size() && choice[s] != kNoChoice; }
};

/// Overlay of two profiles: entries of `b` fill gaps in `a`.
MemorylessProfile merge_profiles(const MemorylessProfile& a, const MemorylessProfile& b);

std::vector<std::string> available_actions(const Tsg& game, StateId s);

/// Two-player reduction: owner(s) = 0 ("1") iff the original owner is in the
/// coalition, else 1 ("2"). Everything else is copied.
Tsg coalition_game(const Tsg& game, const std::set<std::string>& coalition);

std::vector<Diagnostic> validate(const Tsg& game);

/// Every consecutive step is available and has positive probability.
bool is_valid_path(const Tsg& game, const TsgPath& path, std::string* why = nullptr);

}  // namespace tptg
