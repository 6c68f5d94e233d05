#include "tptg/game_json.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace tptg {

using nlohmann::json;

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.17g", p);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

json game_to_json(const Tsg& game) {
  json doc;
  doc["players"] = game.players;
  doc["prices"] = game.price_names;
  doc["initial"] = game.initial;
  json states = json::array();
  for (StateId s = 0; s < game.num_states(); ++s) {
    json st;
    st["owner"] = game.players.at(game.owner[s]);
    json labels = json::array();
    for (const auto& [name, flags] : game.labels)
      if (flags[s]) labels.push_back(name);
    st["labels"] = labels;
    if (s < game.state_names.size() && !game.state_names[s].empty()) st["name"] = game.state_names[s];
    states.push_back(std::move(st));
  }
  doc["states"] = std::move(states);
  json transitions = json::array();
  for (StateId s = 0; s < game.num_states(); ++s) {
    for (auto c = game.first_choice(s); c < game.end_choice(s); ++c) {
      json t;
      t["from"] = s;
      t["action"] = game.choice_label[c].to_string();
      t["price"] = game.price_names.empty() ? 0.0 : game.price(c, 0);
      json prices = json::object();
      for (std::size_t k = 0; k < game.price_names.size(); ++k) prices[game.price_names[k]] = game.price(c, k);
      t["prices"] = prices;
      json branches = json::array();
      for (auto b = game.first_branch(c); b < game.end_branch(c); ++b)
        branches.push_back({{"to", game.branches[b].target}, {"prob", format_probability(game.branches[b].prob)}});
      t["branches"] = std::move(branches);
      transitions.push_back(std::move(t));
    }
  }
  doc["transitions"] = std::move(transitions);
  return doc;
}

Tsg game_from_json(const json& doc) {
  try {
    std::vector<std::string> players;
    if (doc.contains("players")) {
      players = doc.at("players").get<std::vector<std::string>>();
    } else {
      for (const auto& st : doc.at("states")) {
        std::string o = st.at("owner").is_string() ? st.at("owner").get<std::string>()
                                                   : std::to_string(st.at("owner").get<long long>());
        if (std::find(players.begin(), players.end(), o) == players.end()) players.push_back(o);
      }
    }
    std::vector<std::string> price_names = doc.contains("prices") ? doc.at("prices").get<std::vector<std::string>>()
                                                                  : std::vector<std::string>{"price"};
    TsgBuilder builder(players, price_names);
    auto owner_of = [&](const json& o) -> PlayerId {
      std::string name = o.is_string() ? o.get<std::string>() : std::to_string(o.get<long long>());
      auto it = std::find(players.begin(), players.end(), name);
      if (it == players.end()) throw UsageError("state owner '" + name + "' not in players");
      return static_cast<PlayerId>(it - players.begin());
    };
    const auto& states = doc.at("states");
    std::vector<std::vector<std::string>> state_labels;
    for (const auto& st : states) {
      builder.add_state(owner_of(st.at("owner")), st.value("name", std::string{}));
      state_labels.push_back(st.value("labels", std::vector<std::string>{}));
    }
    for (std::size_t s = 0; s < state_labels.size(); ++s)
      for (const auto& l : state_labels[s])
        if (l != "deadlock") builder.set_label(l, static_cast<StateId>(s));

    const auto& transitions = doc.at("transitions");
    std::vector<std::size_t> order(transitions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return transitions[a].at("from").get<std::size_t>() < transitions[b].at("from").get<std::size_t>();
    });
    for (auto i : order) {
      const auto& t = transitions[i];
      auto from = t.at("from").get<std::size_t>();
      if (from >= states.size()) throw UsageError("transition from unknown state " + std::to_string(from));
      std::vector<double> prices(price_names.size(), 0.0);
      if (t.contains("prices")) {
        for (std::size_t k = 0; k < price_names.size(); ++k) prices[k] = t.at("prices").value(price_names[k], 0.0);
      } else if (!prices.empty()) {
        prices[0] = t.value("price", 0.0);
      }
      std::vector<Successor> succ;
      for (const auto& b : t.at("branches")) {
        const auto& p = b.at("prob");
        double prob = p.is_string() ? std::stod(p.get<std::string>()) : p.get<double>();
        succ.push_back({b.at("to").get<StateId>(), prob});
      }
      builder.add_choice(static_cast<StateId>(from), ActionLabel::parse(t.at("action").get<std::string>()), prices, succ);
    }
    builder.set_initial(doc.value("initial", 0u));
    return builder.finish();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed game JSON: ") + e.what());
  }
}

}  // namespace tptg
