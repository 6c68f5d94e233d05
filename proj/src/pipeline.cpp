#include "tptg/pipeline.hpp"

#include <fstream>
#include <sstream>

namespace tptg {

dsl::ModelSource load_source(const ModelInput& in) {
  if (in.file.empty() == in.generator.empty()) throw UsageError("give exactly one of a model file or --gen");
  if (in.generator == "taskgraph") return dsl::gen_taskgraph(in.k1, in.k2, in.p);
  if (!in.generator.empty()) return dsl::gen_nonrepudiation(dsl::parse_variant(in.generator), in.p);
  std::ifstream f(in.file);
  if (!f) throw UsageError("cannot open model file '" + in.file + "'");
  std::ostringstream text;
  text << f.rdbuf();
  return dsl::parse(text.str());
}

Analysis analyze(const dsl::Elaborated& el, const dsl::PropSrc& prop, const SolveOptions& solve_opt,
                 const BuildOptions& build_opt, bool solve_game) {
  Tptg model = el.model;
  dsl::Property property = dsl::resolve_property(prop, el.constants, model);
  DigitalGame digital = build(model, {property.objective.target}, build_opt);
  Tsg game = coalition_game(digital.game, property.coalition);
  SolveResult result = solve_game ? solve(game, property.objective, solve_opt) : SolveResult{};
  return {std::move(property), std::move(model), std::move(digital), std::move(game), std::move(result)};
}

std::vector<bool> label_states(const Tsg& game, const std::string& label) {
  auto it = game.labels.find(label);
  if (it == game.labels.end()) throw UsageError("unknown label '" + label + "'");
  return it->second;
}

MemorylessProfile profile_from_json(const Tsg& game, const nlohmann::json& doc) {
  const nlohmann::json& entries = doc.is_object() ? doc.at("strategy") : doc;
  if (!entries.is_array()) throw UsageError("strategy must be a JSON array of {state, action}");
  std::map<std::string, StateId> by_name;
  for (StateId s = 0; s < game.num_states(); ++s) by_name.emplace(game.describe(s), s);
  MemorylessProfile profile;
  profile.choice.assign(game.num_states(), kNoChoice);
  for (const auto& e : entries) {
    const std::string state = e.at("state").get<std::string>();
    const std::string action = e.at("action").get<std::string>();
    auto it = by_name.find(state);
    if (it == by_name.end()) throw UsageError("strategy names unknown state '" + state + "'");
    StateId s = it->second;
    bool found = false;
    for (ChoiceId c = game.first_choice(s); c < game.end_choice(s); ++c)
      if (game.choice_label[c].to_string() == action) {
        profile.choice[s] = static_cast<std::int64_t>(c);
        found = true;
      }
    if (!found) throw UsageError("action " + action + " is not available in state '" + state + "'");
  }
  return profile;
}

}  // namespace tptg
