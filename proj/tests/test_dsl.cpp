#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tptg/digital.hpp"
#include "tptg/dsl.hpp"
#include "tptg/errors.hpp"
#include "tptg/pipeline.hpp"

using namespace tptg;
namespace fs = std::filesystem;

namespace {

dsl::ParseError parse_error(const std::string& text) {
  try {
    dsl::elaborate(dsl::parse(text));
  } catch (const dsl::ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return dsl::ParseError({}, "");
}

std::string read(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(DslParse, ErrorsCarryPosition) {
  auto e = parse_error("player a;\nclock x;\nautomaton A {\n  init l;\n  location l { inv x < 3; }\n}\nsystem A;\n");
  EXPECT_EQ(e.pos().line, 5);
  EXPECT_NE(e.message().find("strict"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("line 5, col "), std::string::npos);

  e = parse_error("player a;\nclock x;\nautomaton A { init l; location l { inv y <= 3; } }\nsystem A;\n");
  EXPECT_EQ(e.pos().line, 3);
  EXPECT_NE(e.message().find("unknown clock"), std::string::npos);

  e = parse_error("player a;\nclock x, y;\nautomaton A { init l; location l { inv x <= 3; [go] x <= y -> l; } }\n");
  EXPECT_EQ(e.pos().line, 3);

  e = parse_error("player a;\nautomaton A { init l; location l { [go] -> 1/2 : l + 2/5 : l; } }\nsystem A;\n");
  EXPECT_NE(e.message().find("probabilities sum to 9/10"), std::string::npos);

  e = parse_error("player a\nclock x;\n");
  EXPECT_EQ(e.pos().line, 2);
}

TEST(DslParse, UnsupportedExtensions) {
  auto e = parse_error("player a;\nclock x;\nautomaton A { init l; urgent location l { } }\n");
  EXPECT_NE(e.message().find("urgent"), std::string::npos);
  e = parse_error("player a;\nclock x;\nautomaton A { init l; location l { inv x <= 1; [go] -> {x := 1} & l; } }\n");
  EXPECT_NE(e.message().find("integer clock resets"), std::string::npos);
}

TEST(DslParse, Property) {
  auto p = dsl::parse_prop("Pmax [F done] <= 10 coalition {a, b}");
  EXPECT_TRUE(p.probability);
  EXPECT_TRUE(p.maximize);
  EXPECT_EQ(p.target, "done");
  EXPECT_EQ(p.coalition, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(dsl::parse_prop(dsl::print_prop(p)), p);
  EXPECT_EQ(dsl::parse_prop("prop Emin [F done] steps 4 price time coalition {a}").steps->value, Rational(4));
  EXPECT_THROW(dsl::parse_prop("Emin [F done] <= 3 coalition {a}"), dsl::ParseError);
}

TEST(DslPrint, RoundTripCorpus) {
  std::size_t n = 0;
  for (const auto& entry : fs::recursive_directory_iterator(TPTG_MODELS_DIR)) {
    if (entry.path().extension() != ".tptg") continue;
    auto src = dsl::parse(read(entry.path()));
    EXPECT_EQ(dsl::parse(dsl::print(src)), src) << entry.path();
    EXPECT_EQ(dsl::print(dsl::parse(dsl::print(src))), dsl::print(src)) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 13u);
}

TEST(DslPrint, ExpressionsKeepPrecedence) {
  auto src = dsl::parse(
      "const p = 1/3;\nplayer a;\nautomaton A {\n  var v : [0..3] init 0;\n  init l;\n"
      "  location l { [go] v < 3 & !(v == 1 | v == 2) -> p : l & v := v + 1 + (1 - p) : l & v := (v + 1) * 1; }\n}\n"
      "system A;\nlabel top = A.l & (A.v == 3 | A.v == 0);\n");
  EXPECT_EQ(dsl::parse(dsl::print(src)), src);
}

TEST(DslElaborate, UnfoldsVariables) {
  auto el = dsl::elaborate(dsl::parse(
      "player a;\nautomaton C {\n  var n : [0..2] init 0;\n  init l;\n  location l { [inc] n < 2 -> l & n := n + 1; }\n}\n"
      "system C;\nlabel full = C.n == 2;\n"));
  EXPECT_EQ(el.model.locations.size(), 3u);
  EXPECT_EQ(el.model.labels.at("full").locations, (std::vector<bool>{false, false, true}));
  EXPECT_EQ(el.model.locations[2].origin.var("C.n"), 2);
}

TEST(DslElaborate, OverridesAndUnknownConst) {
  auto src = dsl::gen_taskgraph(1, 1, Rational(1));
  EXPECT_EQ(dsl::elaborate(src, {{"p", Rational(1, 2)}}).constants.at("p"), Rational(1, 2));
  EXPECT_THROW(dsl::elaborate(src, {{"nope", Rational(1)}}), UsageError);
}

TEST(DslGenerators, Deterministic) {
  EXPECT_EQ(dsl::print(dsl::gen_taskgraph(2, 1, Rational(1, 4))), dsl::print(dsl::gen_taskgraph(2, 1, Rational(1, 4))));
  for (auto v : {dsl::NrVariant::Honest, dsl::NrVariant::Malicious1, dsl::NrVariant::Malicious2})
    EXPECT_EQ(dsl::print(dsl::gen_nonrepudiation(v, Rational(1, 10))),
              dsl::print(dsl::gen_nonrepudiation(v, Rational(1, 10))));
  EXPECT_THROW(dsl::gen_taskgraph(1, 1, Rational(3, 2)), UsageError);
  EXPECT_THROW(dsl::parse_variant("sneaky"), UsageError);
}

TEST(DslGenerators, OutputSatisfiesAssumptions) {
  std::vector<dsl::ModelSource> models = {dsl::gen_taskgraph(1, 2, Rational(3, 4)), dsl::gen_taskgraph(0, 0, Rational(0))};
  for (auto v : {dsl::NrVariant::Honest, dsl::NrVariant::Malicious1, dsl::NrVariant::Malicious2})
    models.push_back(dsl::gen_nonrepudiation(v, Rational(1, 2)));
  for (const auto& src : models) {
    auto el = dsl::elaborate(src);
    EXPECT_EQ(validate_assumptions(el.model).size(), 0u);
    for (const auto& prop : el.props) {
      Tptg m = el.model;
      auto resolved = dsl::resolve_property(prop, el.constants, m);
      EXPECT_EQ(count_errors(validate_assumptions(m)), 0u) << resolved.text;
    }
  }
}

TEST(DslGenerators, NoFaultsEqualsZeroFailureProbability) {
  auto value = [](dsl::ModelSource src) {
    auto el = dsl::elaborate(src);
    auto a = analyze(el, el.props[0]);
    return a.result.initial_value(a.game);
  };
  EXPECT_NEAR(value(dsl::gen_taskgraph(0, 0, Rational(1, 2))), value(dsl::gen_taskgraph(2, 2, Rational(0))), 1e-9);
}
