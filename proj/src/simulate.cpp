#include "tptg/simulate.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

namespace tptg {

namespace {

constexpr double kZ99 = 2.5758293035489004;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Strategy memoryless_strategy(const Tsg& game, MemorylessProfile profile) {
  return [&game, profile = std::move(profile)](const TsgPath& h, std::mt19937_64&) -> ChoiceId {
    StateId s = h.last();
    if (!profile.defined(s)) throw UsageError("strategy undefined at reached state " + game.describe(s));
    auto c = profile.choice[s];
    if (c < game.first_choice(s) || c >= game.end_choice(s))
      throw UsageError("strategy picks an unavailable action at state " + game.describe(s));
    return static_cast<ChoiceId>(c);
  };
}

Strategy uniform_strategy(const Tsg& game) {
  return [&game](const TsgPath& h, std::mt19937_64& rng) -> ChoiceId {
    StateId s = h.last();
    std::uniform_int_distribution<std::uint32_t> pick(game.first_choice(s), game.end_choice(s) - 1);
    return pick(rng);
  };
}

SimulationRun simulate(const Tsg& game, const Strategy& strategy, const std::vector<bool>& target, std::size_t price,
                       std::uint64_t seed, std::size_t max_steps) {
  if (target.size() != game.num_states()) throw UsageError("target set has wrong size");
  if (!game.price_names.empty() && price >= game.price_names.size()) throw UsageError("price index out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SimulationRun run;
  run.path.states.push_back(game.initial);
  for (;;) {
    StateId s = run.path.last();
    if (target[s]) {
      run.hit = true;
      break;
    }
    if (game.first_choice(s) == game.end_choice(s)) {
      run.deadlock = true;
      break;
    }
    if (run.path.length() >= max_steps) {
      run.censored = true;
      break;
    }
    ChoiceId c = strategy(run.path, rng);
    if (c < game.first_choice(s) || c >= game.end_choice(s))
      throw UsageError("strategy picked an unavailable action at state " + game.describe(s));
    if (!game.price_names.empty()) run.price += game.price(c, price);
    double r = unit(rng);
    StateId next = game.branches[game.end_branch(c) - 1].target;
    for (auto b = game.first_branch(c); b < game.end_branch(c); ++b) {
      if (game.branches[b].prob <= 0.0) continue;
      if (r < game.branches[b].prob) {
        next = game.branches[b].target;
        break;
      }
      r -= game.branches[b].prob;
    }
    run.path.choices.push_back(c);
    run.path.states.push_back(next);
  }
  return run;
}

Estimate estimate(const Tsg& game, const Strategy& strategy, const std::vector<bool>& target, std::size_t price,
                  std::size_t samples, std::size_t max_steps, std::uint64_t seed) {
  if (samples < 1) throw UsageError("at least one sample is required");
  Estimate est;
  est.samples = samples;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    auto run = simulate(game, strategy, target, price, splitmix64(seed ^ splitmix64(i)), max_steps);
    if (run.censored) ++est.censored;
    if (!run.hit) continue;
    ++est.hits;
    sum += run.price;
    sum_sq += run.price * run.price;
  }
  const double n = static_cast<double>(samples);
  est.probability = static_cast<double>(est.hits) / n;
  est.probability_halfwidth = kZ99 * std::sqrt(est.probability * (1.0 - est.probability) / n);
  if (est.hits > 0) {
    const double h = static_cast<double>(est.hits);
    est.price = sum / h;
    double var = est.hits > 1 ? std::max(0.0, (sum_sq - h * est.price * est.price) / (h - 1.0)) : 0.0;
    est.price_halfwidth = kZ99 * std::sqrt(var / h);
  }
  return est;
}

void write_trace(std::ostream& os, const Tsg& game, const SimulationRun& run, std::size_t price) {
  for (std::size_t i = 0; i < run.path.length(); ++i) {
    ChoiceId c = run.path.choices[i];
    nlohmann::json line = {{"step", i},
                           {"state", game.describe(run.path.states[i])},
                           {"action", game.choice_label[c].to_string()},
                           {"duration", game.choice_label[c].duration},
                           {"price", game.price_names.empty() ? 0.0 : game.price(c, price)}};
    os << line.dump() << '\n';
  }
}

}  // namespace tptg
