#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tptg/digital.hpp"
#include "tptg/dsl.hpp"
#include "tptg/simulate.hpp"
#include "tptg/solver.hpp"

namespace tptg {

/// Where a model comes from: a .tptg file or a built-in generator.
struct ModelInput {
  std::string file;
  std::string generator;  // "taskgraph", "honest", "malicious1", "malicious2"
  Rational p{1, 10};
  std::int64_t k1 = 1, k2 = 1;
};

dsl::ModelSource load_source(const ModelInput& in);

/// One property taken through resolve, build, coalition reduction and
/// (unless `solve_game` is false) solve.
struct Analysis {
  dsl::Property property;
  Tptg model;  // with observer clocks for time bounds
  DigitalGame digital;
  Tsg game;    // coalition game
  SolveResult result;
};

Analysis analyze(const dsl::Elaborated& el, const dsl::PropSrc& prop, const SolveOptions& solve_opt = {},
                 const BuildOptions& build_opt = {}, bool solve_game = true);

/// Target indicator of a label in a game.
std::vector<bool> label_states(const Tsg& game, const std::string& label);

/// Profile from a strategy document ({"strategy": [{"state", "action"}]} or
/// the bare array). Throws UsageError on unknown states or unavailable
/// actions.
MemorylessProfile profile_from_json(const Tsg& game, const nlohmann::json& doc);

}  // namespace tptg
