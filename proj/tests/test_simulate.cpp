#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "tptg/errors.hpp"
#include "tptg/simulate.hpp"
#include "tptg/solver.hpp"

using namespace tptg;

namespace {

/// s0: a -> s0 / goal at 1/2 each (price 1), b -> goal 1/4, sink 3/4 (price 3).
Tsg game() {
  TsgBuilder b({"1", "2"}, {"cost"});
  b.add_state(0);
  b.add_state(0);
  b.add_state(1);
  b.add_choice(0, {0, "a"}, {1.0}, {{0, 0.5}, {1, 0.5}});
  b.add_choice(0, {0, "b"}, {3.0}, {{1, 0.25}, {2, 0.75}});
  b.add_choice(2, {1, "loop"}, {1.0}, {{2, 1.0}});
  b.set_label("goal", 1);
  return b.finish();
}

}  // namespace

TEST(Simulate, SameSeedSameRun) {
  Tsg g = game();
  auto s = uniform_strategy(g);
  auto r1 = simulate(g, s, g.label("goal"), 0, 42, 50);
  auto r2 = simulate(g, s, g.label("goal"), 0, 42, 50);
  EXPECT_EQ(r1.path.states, r2.path.states);
  EXPECT_EQ(r1.path.choices, r2.path.choices);
  EXPECT_EQ(r1.price, r2.price);
  EXPECT_TRUE(is_valid_path(g, r1.path));
}

TEST(Simulate, CensoringAndPrice) {
  Tsg g = game();
  MemorylessProfile p{{1, kNoChoice, 2}};
  auto s = memoryless_strategy(g, p);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = simulate(g, s, g.label("goal"), 0, seed, 10);
    EXPECT_EQ(r.hit, !r.censored);
    EXPECT_EQ(r.price, r.hit ? 3.0 : 3.0 + (r.path.length() - 1) * 1.0);
  }
}

TEST(Simulate, EstimateMatchesSolver) {
  Tsg g = game();
  Objective obj;
  obj.kind = ObjectiveKind::ExpPrice;
  obj.direction = Direction::MinMax;
  obj.target = "goal";
  auto res = solve(g, obj);
  auto s = memoryless_strategy(g, merge_profiles(res.strategies[0], res.strategies[1]));
  Estimate e = estimate(g, s, g.label("goal"), 0, 20000, 1000, 7);
  EXPECT_EQ(e.hits, 20000u);
  EXPECT_NEAR(e.price, 2.0, 3 * e.price_halfwidth + 1e-9);
  Estimate again = estimate(g, s, g.label("goal"), 0, 20000, 1000, 7);
  EXPECT_EQ(again.price, e.price);

  Estimate b = estimate(g, memoryless_strategy(g, MemorylessProfile{{1, kNoChoice, 2}}), g.label("goal"), 0, 20000,
                        100, 3);
  EXPECT_NEAR(b.probability, 0.25, b.probability_halfwidth);
}

TEST(Simulate, UndefinedProfileThrows) {
  Tsg g = game();
  auto s = memoryless_strategy(g, MemorylessProfile{{kNoChoice, kNoChoice, kNoChoice}});
  EXPECT_THROW(simulate(g, s, g.label("goal"), 0, 1, 10), UsageError);
}

TEST(Simulate, TraceIsOneJsonObjectPerStep) {
  Tsg g = game();
  auto r = simulate(g, uniform_strategy(g), g.label("goal"), 0, 9, 20);
  std::ostringstream os;
  write_trace(os, g, r, 0);
  std::istringstream in(os.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("action"));
    ++n;
  }
  EXPECT_EQ(n, r.path.length());
}
