#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tptg/errors.hpp"
#include "tptg/game.hpp"
#include "tptg/game_json.hpp"

using namespace tptg;

namespace {

/// s0 (player a): (0,go) -> s1 w.p. 1/2, s2 w.p. 1/2; s1 (player b): (1,back) -> s0; s2 goal, no actions.
Tsg small_game() {
  TsgBuilder b({"a", "b"}, {"cost"});
  b.add_state(0, "s0");
  b.add_state(1, "s1");
  b.add_state(0, "s2");
  b.add_choice(0, {0, "go"}, {2.0}, {{1, 0.5}, {2, 0.5}});
  b.add_choice(1, {1, "back"}, {1.0}, {{0, 1.0}});
  b.set_label("goal", 2);
  return b.finish();
}

}  // namespace

TEST(ActionLabel, OrderAndText) {
  EXPECT_LT((ActionLabel{0, "z"}), (ActionLabel{1, "a"}));
  EXPECT_LT((ActionLabel{1, "a"}), (ActionLabel{1, "b"}));
  EXPECT_EQ((ActionLabel{3, "send"}).to_string(), "(3,send)");
  EXPECT_EQ(ActionLabel::parse("(3,send)"), (ActionLabel{3, "send"}));
  EXPECT_THROW(ActionLabel::parse("3,send"), UsageError);
}

TEST(Tsg, BuilderLayout) {
  Tsg g = small_game();
  EXPECT_EQ(g.num_states(), 3u);
  EXPECT_EQ(g.num_choices(), 2u);
  EXPECT_EQ(g.num_branches(), 3u);
  EXPECT_EQ(g.end_choice(2) - g.first_choice(2), 0u);
  EXPECT_TRUE(g.label("deadlock")[2]);
  EXPECT_TRUE(g.label("goal")[2]);
  EXPECT_EQ(g.price(0, 0), 2.0);
  EXPECT_EQ(available_actions(g, 0), std::vector<std::string>{"(0,go)"});
  EXPECT_TRUE(validate(g).empty());
}

TEST(Tsg, BuilderRejectsOutOfOrderChoices) {
  TsgBuilder b({"a"}, {});
  b.add_state(0);
  b.add_state(0);
  b.add_choice(1, {0, "x"}, {}, {{0, 1.0}});
  EXPECT_THROW(b.add_choice(0, {0, "y"}, {}, {{1, 1.0}}), UsageError);
}

TEST(Tsg, ValidateReportsMass) {
  TsgBuilder b({"a"}, {});
  b.add_state(0);
  b.add_choice(0, {0, "x"}, {}, {{0, 0.9}});
  auto diags = validate(b.finish());
  ASSERT_EQ(count_errors(diags), 1u);
  EXPECT_EQ(diags[0].code, "distribution mass");
}

TEST(Tsg, CoalitionGame) {
  Tsg g = small_game();
  Tsg c = coalition_game(g, {"b"});
  EXPECT_EQ(c.owner, (std::vector<PlayerId>{1, 0, 1}));
  EXPECT_EQ(c.players, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(c.branches.size(), g.branches.size());
}

TEST(Tsg, PathValidity) {
  Tsg g = small_game();
  TsgPath ok{{0, 1, 0, 2}, {0, 1, 0}};
  EXPECT_TRUE(is_valid_path(g, ok));
  TsgPath bad{{0, 0}, {0}};
  std::string why;
  EXPECT_FALSE(is_valid_path(g, bad, &why));
  EXPECT_FALSE(why.empty());
}

TEST(GameJson, RoundTrip) {
  Tsg g = small_game();
  Tsg back = game_from_json(game_to_json(g));
  EXPECT_EQ(back.owner, g.owner);
  EXPECT_EQ(back.choice_begin, g.choice_begin);
  EXPECT_EQ(back.choice_label, g.choice_label);
  EXPECT_EQ(back.prices, g.prices);
  EXPECT_EQ(back.labels, g.labels);
  ASSERT_EQ(back.branches.size(), g.branches.size());
  for (std::size_t i = 0; i < g.branches.size(); ++i) {
    EXPECT_EQ(back.branches[i].target, g.branches[i].target);
    EXPECT_EQ(back.branches[i].prob, g.branches[i].prob);
  }
}

TEST(GameJson, RandomGamesRoundTripExactly) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Tsg g = tptg::testing::random_game(rng);
    Tsg back = game_from_json(game_to_json(g));
    ASSERT_EQ(back.branches.size(), g.branches.size());
    for (std::size_t b = 0; b < g.branches.size(); ++b) EXPECT_EQ(back.branches[b].prob, g.branches[b].prob);
    EXPECT_EQ(game_to_json(back), game_to_json(g));
  }
}

TEST(GameJson, ProbabilityFormat) {
  EXPECT_EQ(format_probability(0.5), "0.50000000000000000");
  auto doc = nlohmann::json::parse(
      R"({"players":["a"],"prices":[],"initial":0,"states":[{"owner":"zz","labels":[]}],"transitions":[]})");
  EXPECT_ANY_THROW(game_from_json(doc));
}
