#include "tptg/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tptg {

std::string ActionLabel::to_string() const { return "(" + std::to_string(duration) + "," + name + ")"; }

ActionLabel ActionLabel::parse(const std::string& text) {
  if (text.size() < 4 || text.front() != '(' || text.back() != ')')
    throw UsageError("malformed action label '" + text + "'");
  auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("malformed action label '" + text + "'");
  ActionLabel label;
  try {
    label.duration = std::stoll(text.substr(1, comma - 1));
  } catch (const std::exception&) {
    throw UsageError("malformed action duration in '" + text + "'");
  }
  label.name = text.substr(comma + 1, text.size() - comma - 2);
  return label;
}

std::size_t Tsg::price_index(const std::string& name) const {
  auto it = std::find(price_names.begin(), price_names.end(), name);
  if (it == price_names.end()) throw UsageError("unknown price structure '" + name + "'");
  return static_cast<std::size_t>(it - price_names.begin());
}

PlayerId Tsg::player_index(const std::string& name) const {
  auto it = std::find(players.begin(), players.end(), name);
  if (it == players.end()) throw UsageError("unknown player '" + name + "'");
  return static_cast<PlayerId>(it - players.begin());
}

const std::vector<bool>& Tsg::label(const std::string& name) const {
  auto it = labels.find(name);
  if (it == labels.end()) throw UsageError("unknown label '" + name + "'");
  return it->second;
}

std::string Tsg::describe(StateId s) const {
  if (s < state_names.size() && !state_names[s].empty()) return state_names[s];
  return "s" + std::to_string(s);
}

TsgBuilder::TsgBuilder(std::vector<std::string> players, std::vector<std::string> price_names) {
  game_.players = std::move(players);
  game_.price_names = std::move(price_names);
}

StateId TsgBuilder::add_state(PlayerId owner, std::string name) {
  if (owner >= game_.players.size()) throw UsageError("state owner out of range");
  game_.owner.push_back(owner);
  game_.state_names.push_back(std::move(name));
  for (auto& [_, flags] : game_.labels) flags.push_back(false);
  return static_cast<StateId>(num_states_++);
}

void TsgBuilder::close_until(StateId s) {
  while (open_state_ < s) {
    game_.choice_begin.push_back(static_cast<std::uint32_t>(game_.choice_label.size()));
    ++open_state_;
  }
}

ChoiceId TsgBuilder::add_choice(StateId s, ActionLabel label, const std::vector<double>& prices,
                                const std::vector<Successor>& successors) {
  if (s >= num_states_) throw UsageError("add_choice: unknown state");
  if (s < open_state_) throw UsageError("add_choice: choices must be added in state order");
  if (prices.size() != game_.price_names.size()) throw UsageError("add_choice: wrong number of prices");
  close_until(s);
  auto c = static_cast<ChoiceId>(game_.choice_label.size());
  game_.choice_label.push_back(std::move(label));
  game_.prices.insert(game_.prices.end(), prices.begin(), prices.end());
  game_.branches.insert(game_.branches.end(), successors.begin(), successors.end());
  game_.branch_begin.push_back(static_cast<std::uint32_t>(game_.branches.size()));
  return c;
}

void TsgBuilder::declare_label(const std::string& name) {
  game_.labels.try_emplace(name, std::vector<bool>(num_states_, false));
}

void TsgBuilder::set_label(const std::string& name, StateId s) {
  declare_label(name);
  game_.labels[name].at(s) = true;
}

Tsg TsgBuilder::finish() {
  close_until(static_cast<StateId>(num_states_));
  declare_label("deadlock");
  auto& dead = game_.labels["deadlock"];
  for (StateId s = 0; s < num_states_; ++s)
    if (game_.first_choice(s) == game_.end_choice(s)) dead[s] = true;
  Tsg out = std::move(game_);
  game_ = Tsg{};
  num_states_ = 0;
  open_state_ = 0;
  return out;
}

MemorylessProfile merge_profiles(const MemorylessProfile& a, const MemorylessProfile& b) {
  MemorylessProfile out = a;
  if (out.choice.size() < b.choice.size()) out.choice.resize(b.choice.size(), kNoChoice);
  for (std::size_t s = 0; s < b.choice.size(); ++s)
    if (out.choice[s] == kNoChoice) out.choice[s] = b.choice[s];
  return out;
}

std::vector<std::string> available_actions(const Tsg& game, StateId s) {
  if (s >= game.num_states()) throw UsageError("available_actions: state " + std::to_string(s) + " out of range");
  std::vector<std::string> out;
  for (auto c = game.first_choice(s); c < game.end_choice(s); ++c) out.push_back(game.choice_label[c].to_string());
  return out;
}

Tsg coalition_game(const Tsg& game, const std::set<std::string>& coalition) {
  std::vector<bool> in_coalition(game.players.size(), false);
  for (const auto& name : coalition) in_coalition[game.player_index(name)] = true;
  Tsg out = game;
  out.players = {"1", "2"};
  for (auto& o : out.owner) o = (o < in_coalition.size() && in_coalition[o]) ? 0 : 1;
  return out;
}

std::vector<Diagnostic> validate(const Tsg& game) {
  std::vector<Diagnostic> diags;
  auto error = [&](std::string code, std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, std::move(code), std::move(msg)});
  };
  const std::size_t n = game.num_states();
  if (game.owner.size() != n)
    error("partition", "owner map covers " + std::to_string(game.owner.size()) + " of " + std::to_string(n) + " states");
  for (std::size_t s = 0; s < std::min(n, game.owner.size()); ++s)
    if (game.owner[s] >= game.players.size())
      error("partition", "state " + std::to_string(s) + " owned by unknown player " + std::to_string(game.owner[s]));
  if (n > 0 && game.initial >= n) error("initial", "initial state out of range");
  if (game.prices.size() != game.num_choices() * game.price_names.size())
    error("price", "price table has wrong size");

  const std::vector<bool>* dead = game.labels.count("deadlock") ? &game.labels.at("deadlock") : nullptr;
  for (StateId s = 0; s < n; ++s) {
    if (game.first_choice(s) == game.end_choice(s) && !(dead && s < dead->size() && (*dead)[s]))
      error("deadlock", "state " + std::to_string(s) + " has no action and is not labeled deadlock");
    for (auto c = game.first_choice(s); c < game.end_choice(s); ++c) {
      std::string where = "state " + std::to_string(s) + " action " + game.choice_label[c].to_string();
      double mass = 0.0;
      bool range_ok = true;
      for (auto b = game.first_branch(c); b < game.end_branch(c); ++b) {
        const auto& br = game.branches[b];
        if (!(br.prob >= 0.0 && br.prob <= 1.0)) range_ok = false;
        if (br.target >= n) error("target", where + ": successor out of range");
        mass += br.prob;
      }
      if (!range_ok) error("probability", where + ": probability outside [0,1]");
      if (std::abs(mass - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << where << ": distribution mass " << mass;
        error("distribution mass", os.str());
      }
      for (std::size_t k = 0; k < game.price_names.size(); ++k)
        if (game.prices.size() == game.num_choices() * game.price_names.size() && !(game.price(c, k) >= 0.0))
          error("price", where + ": negative price in structure '" + game.price_names[k] + "'");
    }
  }
  for (const auto& [name, flags] : game.labels)
    if (flags.size() != n) error("label", "label '" + name + "' has wrong size");
  return diags;
}

bool is_valid_path(const Tsg& game, const TsgPath& path, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (path.states.size() != path.choices.size() + 1) return fail("path shape mismatch");
  for (std::size_t i = 0; i < path.choices.size(); ++i) {
    StateId s = path.states[i];
    ChoiceId c = path.choices[i];
    if (s >= game.num_states()) return fail("state out of range at step " + std::to_string(i));
    if (c < game.first_choice(s) || c >= game.end_choice(s))
      return fail("choice not available at step " + std::to_string(i));
    bool found = false;
    for (auto b = game.first_branch(c); b < game.end_branch(c); ++b)
      if (game.branches[b].target == path.states[i + 1] && game.branches[b].prob > 0.0) found = true;
    if (!found) return fail("successor has zero probability at step " + std::to_string(i));
  }
  return true;
}

}  // namespace tptg
