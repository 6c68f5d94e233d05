#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "tptg/digital.hpp"
#include "tptg/digitization.hpp"
#include "tptg/dsl.hpp"

using namespace tptg;

namespace {

Tptg lossy_medium() {
  std::ifstream f(std::string(TPTG_MODELS_DIR) + "/lossy_medium.tptg");
  std::stringstream text;
  text << f.rdbuf();
  return dsl::elaborate(dsl::parse(text.str())).model;
}

}  // namespace

TEST(Digitization, Scalar) {
  EXPECT_EQ(digitize_scalar(Rational(5, 2), Rational(1, 2)), 2);
  EXPECT_EQ(digitize_scalar(Rational(5, 2), Rational(1, 4)), 3);
  EXPECT_EQ(digitize_scalar(Rational(3), Rational(0)), 3);
  EXPECT_EQ(digitize_scalar(Rational(0), Rational(1, 3)), 0);
  EXPECT_EQ(digitize_scalar(Rational(1, 100), Rational(0)), 1);
}

TEST(Digitization, ScalarBoundsAndMonotonicity) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    Rational t(tptg::testing::uniform_int(rng, 0, 400), 16);
    Rational u = t + Rational(tptg::testing::uniform_int(rng, 0, 64), 16);
    Rational eps(tptg::testing::uniform_int(rng, 0, 15), 16);
    std::int64_t d = digitize_scalar(t, eps);
    EXPECT_GE(d, t.floor());
    EXPECT_LE(d, t.ceil());
    EXPECT_LE(d, digitize_scalar(u, eps));
  }
}

TEST(Digitization, RandomPathsAreValidAndDigitize) {
  Tptg m = lossy_medium();
  DigitalGame g = build(m);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    TimedPath p = random_timed_path(m, 12, rng);
    std::string why;
    ASSERT_TRUE(is_valid_timed_path(m, p, &why)) << why;
    EXPECT_EQ(accumulated_duration(p, 0), Rational(0));
    for (Rational eps : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(15, 16)}) {
      DigitalPath d = digitize_path(m, p, eps);
      EXPECT_EQ(d.states.size(), p.states.size());
      EXPECT_TRUE(is_valid_digital_path(g, d, &why)) << why;
    }
  }
}

TEST(Digitization, InvalidTimedPathRejected) {
  Tptg m = lossy_medium();
  TimedPath p;
  p.states.push_back(TimedState{m.initial, {Rational(0), Rational(0)}});
  // send needs x >= 1
  p.moves.push_back(TimedStep{Rational(1, 2), "send", {0}});
  p.states.push_back(TimedState{m.location_index("medium"), {Rational(0), Rational(1, 2)}});
  std::string why;
  EXPECT_FALSE(is_valid_timed_path(m, p, &why));
  EXPECT_FALSE(why.empty());
}
