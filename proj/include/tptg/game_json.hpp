#pragma once

#include <string>

#include <json.hpp>

#include "tptg/game.hpp"

namespace tptg {

/// Explicit-game interchange format:
///   {"players": [...], "prices": [...], "initial": 0,
///    "states": [{"owner": "O", "labels": ["done"], "name": "..."}],
///    "transitions": [{"from": 0, "action": "(1,send)", "price": 2.0,
///                     "prices": {"time": 2.0},
///                     "branches": [{"to": 1, "prob": "0.50000000000000000"}]}]}
/// "price" holds the first price structure; "prices" carries all of them.
/// Probabilities are decimal strings with 17 significant digits.
nlohmann::json game_to_json(const Tsg& game);
Tsg game_from_json(const nlohmann::json& doc);

std::string format_probability(double p);

}  // namespace tptg
