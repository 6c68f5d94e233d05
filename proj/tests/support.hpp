#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tptg/game.hpp"
#include "tptg/model.hpp"

namespace tptg::testing {

struct GameShape {
  std::size_t min_states = 2;
  std::size_t max_states = 10;
  std::size_t max_choices = 3;
  std::size_t max_branches = 3;
  int grid = 8;        // probabilities are multiples of 1/grid
  int max_price = 5;   // prices drawn from 1..max_price
  bool fast = false;   // every choice reaches "goal" with probability >= 1/2
};

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// b positive integers summing to total (b <= total).
inline std::vector<int> composition(std::mt19937_64& rng, int total, int b) {
  std::vector<int> cuts;
  for (int i = 1; i < total; ++i) cuts.push_back(i);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(b - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> parts;
  int prev = 0;
  for (int c : cuts) {
    parts.push_back(c - prev);
    prev = c;
  }
  parts.push_back(total - prev);
  return parts;
}

/// Random two-player game with integer prices >= 1 and one price structure
/// "cost". The last state always carries the label "goal".
inline Tsg random_game(std::mt19937_64& rng, const GameShape& shape = {}) {
  const auto n = static_cast<std::size_t>(
      uniform_int(rng, static_cast<int>(shape.min_states), static_cast<int>(shape.max_states)));
  std::vector<bool> goal(n, false);
  goal[n - 1] = true;
  for (std::size_t s = 0; s + 1 < n; ++s) goal[s] = uniform_int(rng, 0, 9) == 0;
  std::vector<StateId> goals;
  for (std::size_t s = 0; s < n; ++s)
    if (goal[s]) goals.push_back(static_cast<StateId>(s));

  TsgBuilder b({"1", "2"}, {"cost"});
  for (std::size_t s = 0; s < n; ++s) b.add_state(static_cast<PlayerId>(uniform_int(rng, 0, 1)));
  b.declare_label("goal");
  for (StateId g : goals) b.set_label("goal", g);
  for (std::size_t s = 0; s < n; ++s) {
    int k = uniform_int(rng, 1, static_cast<int>(shape.max_choices));
    for (int c = 0; c < k; ++c) {
      int nb = uniform_int(rng, 1, static_cast<int>(std::min<std::size_t>(shape.max_branches, shape.grid / 2)));
      std::vector<Successor> succ;
      if (shape.fast) {
        auto parts = composition(rng, shape.grid / 2, nb);
        parts[0] += shape.grid / 2;
        for (int i = 0; i < nb; ++i) {
          StateId t = i == 0 ? goals[uniform_int(rng, 0, static_cast<int>(goals.size()) - 1)]
                             : static_cast<StateId>(uniform_int(rng, 0, static_cast<int>(n) - 1));
          succ.push_back({t, static_cast<double>(parts[i]) / shape.grid});
        }
      } else {
        auto parts = composition(rng, shape.grid, nb);
        for (int i = 0; i < nb; ++i)
          succ.push_back({static_cast<StateId>(uniform_int(rng, 0, static_cast<int>(n) - 1)),
                          static_cast<double>(parts[i]) / shape.grid});
      }
      b.add_choice(static_cast<StateId>(s), {0, "a" + std::to_string(c)},
                   {static_cast<double>(uniform_int(rng, 1, shape.max_price))}, succ);
    }
  }
  b.set_initial(0);
  return b.finish();
}

/// Random small TPTG with players a, b, one or two clocks, bounded
/// invariants everywhere, action prices >= 1 and a label "goal" on the last
/// location.
inline Tptg random_tptg(std::mt19937_64& rng) {
  Tptg m;
  m.players = {"a", "b"};
  const int nclocks = uniform_int(rng, 1, 2);
  for (int x = 0; x < nclocks; ++x) m.clocks.push_back(x == 0 ? "x" : "y");
  m.observer.assign(m.clocks.size(), false);
  m.price_names = {"cost"};
  const int nloc = uniform_int(rng, 2, 4);
  for (int l = 0; l < nloc; ++l) {
    Location loc;
    loc.name = "l" + std::to_string(l);
    loc.owner = static_cast<PlayerId>(uniform_int(rng, 0, 1));
    for (ClockId x = 0; x < m.clocks.size(); ++x) loc.invariant.add({x, BoundKind::Upper, uniform_int(rng, 1, 3)});
    loc.rates = {uniform_int(rng, 0, 2)};
    loc.origin.parts.emplace_back("M", loc.name);
    const int nedges = uniform_int(rng, 1, 2);
    for (int e = 0; e < nedges; ++e) {
      Edge edge;
      edge.action = "e" + std::to_string(e);
      if (uniform_int(rng, 0, 1)) {
        auto x = static_cast<ClockId>(uniform_int(rng, 0, nclocks - 1));
        edge.guard.add({x, BoundKind::Lower, uniform_int(rng, 0, 2)});
      }
      const int nb = uniform_int(rng, 1, 2);
      auto parts = composition(rng, 4, nb);
      for (int i = 0; i < nb; ++i) {
        Branch br;
        br.prob = Rational(parts[i], 4);
        br.target = static_cast<LocationId>(uniform_int(rng, 0, nloc - 1));
        for (ClockId x = 0; x < m.clocks.size(); ++x)
          if (uniform_int(rng, 0, 1)) br.resets.push_back(x);
        edge.branches.push_back(br);
      }
      edge.prices = {uniform_int(rng, 1, 3)};
      loc.edges.push_back(std::move(edge));
    }
    m.locations.push_back(std::move(loc));
  }
  m.initial = 0;
  TargetLabel goal;
  goal.locations.assign(m.locations.size(), false);
  goal.locations.back() = true;
  m.labels["goal"] = goal;
  return m;
}

}  // namespace tptg::testing
