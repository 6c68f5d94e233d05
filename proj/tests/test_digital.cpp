#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tptg/digital.hpp"
#include "tptg/dsl.hpp"
#include "tptg/errors.hpp"

using namespace tptg;

namespace {

Tptg load(const std::string& text) { return dsl::elaborate(dsl::parse(text)).model; }

const char* kTimer = R"(
player a;
clock x;
price time;
automaton T {
  init idle;
  location idle { inv x <= 2; rate time=3; [go] x >= 1 -> 1/2 : {x} & busy + 1/2 : idle cost time=5; }
  location busy { inv x <= 1; rate time=1; [stop] -> busy; }
}
system T;
label busy = T.busy;
)";

Tptg lossy_medium() {
  std::ifstream f(std::string(TPTG_MODELS_DIR) + "/lossy_medium.tptg");
  std::stringstream text;
  text << f.rdbuf();
  return load(text.str());
}

}  // namespace

TEST(Digital, MovesFromInitialState) {
  Tptg m = load(kTimer);
  auto ceil = clock_ceilings(m);
  EXPECT_EQ(ceil, std::vector<std::int64_t>{3});
  auto moves = enumerate_moves(m, ceil, DigitalState{m.initial, {0}});
  // delays 0..2 satisfy the invariant; go needs x >= 1
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_EQ(moves[0].label, (ActionLabel{1, "go"}));
  EXPECT_EQ(moves[1].label, (ActionLabel{2, "go"}));
  // price: t * rate + action price
  EXPECT_EQ(moves[0].prices, std::vector<std::int64_t>{3 * 1 + 5});
  EXPECT_EQ(moves[1].prices, std::vector<std::int64_t>{3 * 2 + 5});
  ASSERT_EQ(moves[1].successors.size(), 2u);
  for (const auto& [s, p] : moves[1].successors) EXPECT_EQ(p, Rational(1, 2));
}

TEST(Digital, InvariantViolatingSuccessorDisablesMove) {
  // from idle with x = 2 the self-loop branch keeps x = 2, fine; busy needs x <= 1 and resets x
  Tptg m = load(kTimer);
  auto moves = enumerate_moves(m, clock_ceilings(m), DigitalState{m.initial, {2}});
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].label, (ActionLabel{0, "go"}));

  Tptg bad = load(R"(
player a;
clock x;
automaton T {
  init l;
  location l { inv x <= 2; [go] x >= 1 -> 1/2 : m + 1/2 : l; }
  location m { inv x <= 0; }
}
system T;
)");
  EXPECT_TRUE(enumerate_moves(bad, clock_ceilings(bad), DigitalState{bad.initial, {1}}).empty());
}

TEST(Digital, BuildLabelsAndLookup) {
  Tptg m = load(kTimer);
  DigitalGame g = build(m);
  EXPECT_EQ(g.ceilings, std::vector<std::int64_t>{3});
  ASSERT_TRUE(g.game.has_label("busy"));
  for (StateId s = 0; s < g.num_states(); ++s) {
    DigitalState d = g.state(s);
    EXPECT_EQ(g.find(d), s);
    EXPECT_EQ(g.game.label("busy")[s], m.locations[d.location].name == "busy");
  }
  EXPECT_FALSE(g.find(DigitalState{0, {7}}).has_value());
  EXPECT_EQ(g.stats().states, g.num_states());
}

TEST(Digital, LossyMediumShape) {
  DigitalGame g = build(lossy_medium());
  EXPECT_TRUE(validate(g.game).empty());
  auto st = g.stats();
  EXPECT_GT(st.states, 0u);
  EXPECT_EQ(st.states_per_player.at("sender") + st.states_per_player.at("medium"), st.states);
  EXPECT_TRUE(g.game.has_label("done"));
}

TEST(Digital, StateLimit) {
  BuildOptions opt;
  opt.state_limit = 3;
  EXPECT_THROW(build(lossy_medium(), {}, opt), ResourceError);
}

TEST(Digital, ProbabilitiesSumToOne) {
  DigitalGame g = build(lossy_medium());
  for (ChoiceId c = 0; c < g.game.num_choices(); ++c) {
    double mass = 0;
    for (auto b = g.game.first_branch(c); b < g.game.end_branch(c); ++b) {
      EXPECT_GT(g.game.branches[b].prob, 0.0);
      mass += g.game.branches[b].prob;
    }
    EXPECT_DOUBLE_EQ(mass, 1.0);
  }
}
