// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tptg/digitization.hpp"
#include "tptg/oracle.hpp"
#include "tptg/pipeline.hpp"

using namespace tptg;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool same_value(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

double value_of(const dsl::Elaborated& el, const std::string& prop) {
  Analysis a = analyze(el, dsl::parse_prop(prop));
  if (!a.result.converged) throw std::runtime_error("not converged: " + prop);
  return a.result.initial_value(a.game);
}

// 1. Task graph headline value and the synthesized scheduler.
Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto el = dsl::elaborate(dsl::gen_taskgraph(1, 1, Rational(1)));
  Analysis a = analyze(el, dsl::parse_prop("Emin [F all_done] price time coalition {sched}"));
  double v = a.result.initial_value(a.game);
  if (std::fabs(v - 18.0) > 1e-6) o.fail("value " + fmt(v) + " != 18");

  // every state reachable when the scheduler follows its strategy and the
  // environment behaves arbitrarily
  const Tsg& g = a.game;
  const MemorylessProfile& sched = a.result.strategies[0];
  std::vector<bool> seen(g.num_states(), false);
  std::deque<StateId> queue{g.initial};
  seen[g.initial] = true;
  std::size_t p2_moves = 0;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::vector<ChoiceId> moves;
    if (g.owner[s] == 0 && sched.defined(s)) {
      moves.push_back(static_cast<ChoiceId>(sched.choice[s]));
      if (g.choice_label[moves.back()].name.rfind("p2_", 0) == 0) ++p2_moves;
    } else {
      for (auto c = g.first_choice(s); c < g.end_choice(s); ++c) moves.push_back(c);
    }
    for (ChoiceId c : moves)
      for (auto b = g.first_branch(c); b < g.end_branch(c); ++b)
        if (g.branches[b].prob > 0 && !seen[g.branches[b].target]) {
          seen[g.branches[b].target] = true;
          queue.push_back(g.branches[b].target);
        }
  }
  if (p2_moves > 0) o.fail(std::to_string(p2_moves) + " reachable scheduler moves assign a task to P2");
  double t = seconds_since(t0);
  if (t >= 60) o.fail("runtime " + fmt(t) + " s");
  if (o.pass) o.detail = "value " + fmt(v) + ", no P2 assignments, " + fmt(t) + " s";
  return o;
}

// 2. Task graph: p = 0 equals k = 0; monotone in p and in (k1, k2).
Outcome criterion2() {
  Outcome o;
  const std::pair<const char*, const char*> props[] = {
      {"time", "Emin [F all_done] price time coalition {sched}"},
      {"energy", "Emin [F all_done] price energy coalition {sched}"}};
  auto value = [&](std::int64_t k, Rational p, const char* prop) {
    return value_of(dsl::elaborate(dsl::gen_taskgraph(k, k, p)), prop);
  };
  auto close = [](double a, double b) { return std::fabs(a - b) <= kTol * std::max(1.0, std::fabs(a)); };
  std::ostringstream detail;
  for (const auto& [price, prop] : props) {
    double zero_k = value(0, Rational(1), prop);
    for (std::int64_t k : {1, 2}) {
      double zero_p = value(k, Rational(0), prop);
      if (!close(zero_k, zero_p))
        o.fail(std::string(prop) + ": p=0 gives " + fmt(zero_p) + ", k=0 gives " + fmt(zero_k));
    }
    std::vector<double> by_p;
    for (Rational p : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
      by_p.push_back(value(1, p, prop));
    for (std::size_t i = 1; i < by_p.size(); ++i)
      if (by_p[i] < by_p[i - 1] - kTol * std::max(1.0, by_p[i]))
        o.fail(std::string(prop) + ": decreases in p at index " + std::to_string(i));
    for (Rational p : {Rational(1), Rational(1, 2)}) {
      std::vector<double> by_k;
      for (std::int64_t k : {0, 1, 2}) by_k.push_back(value(k, p, prop));
      for (std::size_t i = 1; i < by_k.size(); ++i)
        if (by_k[i] < by_k[i - 1] - kTol * std::max(1.0, by_k[i]))
          o.fail(std::string(prop) + ": decreases in k at p=" + p.to_string());
    }
    detail << price << " over p: ";
    for (double v : by_p) detail << fmt(v) << " ";
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

// 3. Malicious recipient: O cannot reduce R's chance of gaining information.
Outcome criterion3() {
  Outcome o;
  auto el = dsl::elaborate(dsl::gen_nonrepudiation(dsl::NrVariant::Malicious1, Rational(1, 10)));
  double r = value_of(el, "Pmax [F r_gains_info] coalition {R}");
  double or_ = value_of(el, "Pmax [F r_gains_info] coalition {O, R}");
  if (std::fabs(r - or_) > 2 * kTol) o.fail("unbounded: <R> " + fmt(r) + " vs <O,R> " + fmt(or_));
  for (int T = 1; T <= 100; ++T) {
    std::string b = " <= " + std::to_string(T);
    double vr = value_of(el, "Pmax [F r_gains_info]" + b + " coalition {R}");
    double vor = value_of(el, "Pmax [F r_gains_info]" + b + " coalition {O, R}");
    if (vr > vor + 2 * kTol) o.fail("T=" + std::to_string(T) + ": <R> " + fmt(vr) + " > <O,R> " + fmt(vor));
  }
  if (o.pass) o.detail = "unbounded value " + fmt(r) + " for both coalitions; T in 1..100 ordered";
  return o;
}

// 4. Honest protocol: T sweeps monotone, in [0,1], ordered by coalition.
Outcome criterion4() {
  Outcome o;
  const std::vector<std::string> coalitions = {"{}", "{O}", "{R}", "{O, R}"};
  for (Rational p : {Rational(1, 100), Rational(1, 10)}) {
    auto el = dsl::elaborate(dsl::gen_nonrepudiation(dsl::NrVariant::Honest, p));
    std::vector<std::vector<double>> v(coalitions.size());
    for (int T = 1; T <= 100; ++T)
      for (std::size_t c = 0; c < coalitions.size(); ++c)
        v[c].push_back(value_of(el, "Pmax [F terminated_ok] <= " + std::to_string(T) + " coalition " + coalitions[c]));
    const std::string at = "p=" + p.to_string();
    for (std::size_t c = 0; c < coalitions.size(); ++c)
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        if (v[c][i] < -kTol || v[c][i] > 1 + kTol) o.fail(at + ": value outside [0,1]");
        if (i && v[c][i] < v[c][i - 1] - kTol) o.fail(at + ": " + coalitions[c] + " not monotone in T");
      }
    for (std::size_t i = 0; i < v[0].size(); ++i) {
      const double none = v[0][i], O = v[1][i], R = v[2][i], OR = v[3][i];
      if (none > O + kTol || O > OR + kTol || none > R + kTol || R > OR + kTol)
        o.fail(at + ", T=" + std::to_string(i + 1) + ": coalition order violated");
    }
    if (o.pass)
      o.detail += at + ": at T=100 <>=" + fmt(v[0].back()) + " <O>=" + fmt(v[1].back()) + " <R>=" + fmt(v[2].back()) +
                  " <O,R>=" + fmt(v[3].back()) + "; ";
  }
  return o;
}

// 5. Determinacy on random games.
Outcome criterion5() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240501);
  double worst = 0;
  std::size_t games = 0;
  auto check = [&](const Tsg& g, const std::string& what) {
    for (auto kind : {ObjectiveKind::Reach, ObjectiveKind::ExpPrice}) {
      Objective obj;
      obj.kind = kind;
      obj.target = "goal";
      obj.direction = testing::uniform_int(rng, 0, 1) ? Direction::MaxMin : Direction::MinMax;
      DeterminacyCheck d = check_determinacy(g, obj);
      if (!d.converged) {
        o.fail(what + ": not converged");
        continue;
      }
      if (std::isinf(d.supinf) || std::isinf(d.infsup)) {
        if (d.supinf != d.infsup) o.fail(what + ": supinf " + fmt(d.supinf) + " vs infsup " + fmt(d.infsup));
        continue;
      }
      double gap = std::fabs(d.supinf - d.infsup);
      worst = std::max(worst, gap);
      if (gap >= 2 * kTol) o.fail(what + ": gap " + fmt(gap));
    }
    ++games;
  };
  for (int i = 0; i < 100; ++i) {
    Tptg m = testing::random_tptg(rng);
    DigitalGame dg = build(m, {"goal"});
    check(coalition_game(dg.game, {"a"}), "tptg #" + std::to_string(i));
  }
  testing::GameShape shape;
  shape.min_states = 5;
  shape.max_states = 500;
  for (int i = 0; i < 100; ++i) check(testing::random_game(rng, shape), "explicit #" + std::to_string(i));
  double t = seconds_since(t0);
  if (t >= 300) o.fail("runtime " + fmt(t) + " s");
  if (o.pass) o.detail = std::to_string(games) + " games, largest gap " + fmt(worst) + ", " + fmt(t) + " s";
  return o;
}

// 6. Value iteration against the exact brute-force oracle.
Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0;
  // The residual stop at the default 1e-8 does not bound the error on slowly
  // mixing games, so the 1e-7 comparison runs VI two decades tighter.
  SolveOptions opt;
  opt.tol = 1e-10;
  for (int i = 0; i < 100; ++i) {
    Tsg g = testing::random_game(rng);
    const auto& target = g.label("goal");
    for (auto kind : {ObjectiveKind::Reach, ObjectiveKind::ExpPrice}) {
      for (auto dir : {Direction::MaxMin, Direction::MinMax}) {
        Objective obj;
        obj.kind = kind;
        obj.direction = dir;
        obj.target = "goal";
        SolveResult r = solve(g, obj, opt);
        double vi = r.initial_value(g);
        double exact = brute_force_solve(g, target, kind, dir).to_double();
        if (!same_value(vi, exact, 1e-7)) {
          o.fail("game #" + std::to_string(i) + ": VI " + fmt(vi) + " vs oracle " + fmt(exact));
        } else if (!std::isinf(vi)) {
          worst = std::max(worst, std::fabs(vi - exact));
        }
      }
    }
  }
  if (o.pass) o.detail = "100 games x 2 objectives x 2 directions, largest error " + fmt(worst);
  return o;
}

// 7. Digitization of dense-time paths of the lossy-medium model.
Outcome criterion7(const fs::path& models) {
  Outcome o;
  std::ifstream f(models / "lossy_medium.tptg");
  std::stringstream text;
  text << f.rdbuf();
  Tptg m = dsl::elaborate(dsl::parse(text.str())).model;
  DigitalGame dg = build(m);
  std::mt19937_64 rng(11);
  std::size_t steps = 0;
  for (int i = 0; i < 50; ++i) {
    TimedPath path = random_timed_path(m, 12, rng);
    steps += path.length();
    std::string why;
    if (!is_valid_timed_path(m, path, &why)) o.fail("path " + std::to_string(i) + " invalid: " + why);
    for (Rational eps : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}) {
      DigitalPath dp = digitize_path(m, path, eps);
      if (!is_valid_digital_path(dg, dp, &why))
        o.fail("path " + std::to_string(i) + ", eps " + eps.to_string() + ": " + why);
    }
  }
  for (int i = 0; i < 10000; ++i) {
    Rational t(testing::uniform_int(rng, 0, 320), 16);
    Rational u(testing::uniform_int(rng, 0, 320), 16);
    if (u < t) std::swap(t, u);
    Rational eps(testing::uniform_int(rng, 0, 16), 16);
    std::int64_t d = digitize_scalar(u, eps) - digitize_scalar(t, eps);
    Rational diff = u - t;
    for (std::int64_t c : {diff.floor(), diff.ceil()}) {
      if (diff <= Rational(c) && d > c) o.fail("upper constraint broken at t=" + t.to_string() + " u=" + u.to_string());
      if (diff >= Rational(c) && d < c) o.fail("lower constraint broken at t=" + t.to_string() + " u=" + u.to_string());
    }
  }
  if (o.pass) o.detail = "50 paths (" + std::to_string(steps) + " steps) x 5 eps valid; 10^4 scalar pairs";
  return o;
}

// 8. Monte Carlo estimates of the synthesized profiles.
Outcome criterion8() {
  Outcome o;
  struct Case {
    std::string name;
    dsl::ModelSource src;
    std::string prop;
  };
  std::vector<Case> cases = {
      {"taskgraph p=1", dsl::gen_taskgraph(1, 1, Rational(1)), "Emin [F all_done] price time coalition {sched}"},
      {"taskgraph p=1/2", dsl::gen_taskgraph(1, 1, Rational(1, 2)), "Emin [F all_done] price time coalition {sched}"},
      {"honest p=1/10", dsl::gen_nonrepudiation(dsl::NrVariant::Honest, Rational(1, 10)),
       "Emin [F terminated_ok] price time coalition {O, R}"},
      {"malicious1 p=1/10", dsl::gen_nonrepudiation(dsl::NrVariant::Malicious1, Rational(1, 10)),
       "Pmax [F r_gains_info] coalition {R}"},
  };
  std::ostringstream detail;
  for (const auto& c : cases) {
    auto el = dsl::elaborate(c.src);
    Analysis a = analyze(el, dsl::parse_prop(c.prop));
    const Tsg& g = a.game;
    MemorylessProfile profile = merge_profiles(a.result.strategies[0], a.result.strategies[1]);
    Strategy fallback = uniform_strategy(g);
    Strategy s = [&](const TsgPath& h, std::mt19937_64& rng) -> ChoiceId {
      return profile.defined(h.last()) ? static_cast<ChoiceId>(profile.choice[h.last()]) : fallback(h, rng);
    };
    const auto target = label_states(g, a.property.objective.target);
    std::size_t price = a.property.objective.price.empty() ? 0 : g.price_index(a.property.objective.price);
    Estimate e = estimate(g, s, target, price, 100000, 100000, 42);
    double v = a.result.initial_value(g);
    if (a.property.objective.kind == ObjectiveKind::Reach) {
      if (std::fabs(e.probability - v) > e.probability_halfwidth + 1e-6)
        o.fail(c.name + ": estimate " + fmt(e.probability) + " +- " + fmt(e.probability_halfwidth) + " vs " + fmt(v));
      detail << c.name << ": " << fmt(e.probability) << " vs " << fmt(v) << "; ";
    } else {
      if (e.hits != e.samples) o.fail(c.name + ": " + std::to_string(e.samples - e.hits) + " runs missed the target");
      if (std::fabs(e.price - v) > e.price_halfwidth + 1e-6)
        o.fail(c.name + ": estimate " + fmt(e.price) + " +- " + fmt(e.price_halfwidth) + " vs " + fmt(v));
      detail << c.name << ": " << fmt(e.price) << " vs " << fmt(v) << "; ";
    }
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

// 9. Bounded horizon values increase to the unbounded value.
Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(99);
  testing::GameShape shape;
  shape.min_states = 4;
  shape.max_states = 30;
  shape.fast = true;
  SolveOptions precise;
  precise.tol = 1e-12;
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    Tsg g = testing::random_game(rng, shape);
    const auto& target = g.label("goal");
    Direction dir = i % 2 ? Direction::MaxMin : Direction::MinMax;
    const auto n = static_cast<std::int64_t>(10 * g.num_states());
    double prev = 0;
    for (std::int64_t k = 0; k <= n; ++k) {
      double b = bounded_expected_price(g, target, 0, dir, k)[g.initial];
      if (b < prev - 1e-12) o.fail("game #" + std::to_string(i) + ": decreases at n=" + std::to_string(k));
      prev = b;
    }
    double full = expected_price(g, target, 0, dir, precise).initial_value(g);
    worst = std::max(worst, std::fabs(full - prev));
    if (!(std::fabs(full - prev) <= kTol))
      o.fail("game #" + std::to_string(i) + ": bounded " + fmt(prev) + " vs unbounded " + fmt(full));
  }
  if (o.pass) o.detail = "20 games, largest gap at n=10|S| " + fmt(worst);
  return o;
}

// 10. parse(print(parse(f))) == parse(f) on the shipped corpus.
Outcome criterion10(const fs::path& models) {
  Outcome o;
  std::vector<std::pair<std::string, std::string>> corpus;
  for (const auto& entry : fs::recursive_directory_iterator(models)) {
    if (entry.path().extension() != ".tptg") continue;
    std::ifstream f(entry.path());
    std::stringstream text;
    text << f.rdbuf();
    corpus.emplace_back(entry.path().filename().string(), text.str());
  }
  std::sort(corpus.begin(), corpus.end());
  const std::size_t files = corpus.size();
  using dsl::NrVariant;
  std::vector<std::pair<NrVariant, Rational>> nr = {
      {NrVariant::Honest, Rational(1, 10)},     {NrVariant::Honest, Rational(1, 100)},
      {NrVariant::Malicious1, Rational(1, 10)}, {NrVariant::Malicious1, Rational(1, 2)},
      {NrVariant::Malicious2, Rational(1, 10)}, {NrVariant::Malicious2, Rational(1)}};
  for (const auto& [v, p] : nr) corpus.emplace_back("nonrepudiation", dsl::print(dsl::gen_nonrepudiation(v, p)));
  std::vector<std::tuple<int, int, Rational>> tg = {{0, 0, Rational(0)},    {1, 1, Rational(1)},
                                                    {1, 1, Rational(1, 2)}, {2, 2, Rational(1, 4)},
                                                    {1, 2, Rational(3, 4)}, {2, 1, Rational(1)}};
  for (const auto& [k1, k2, p] : tg) corpus.emplace_back("taskgraph", dsl::print(dsl::gen_taskgraph(k1, k2, p)));
  for (const auto& [name, text] : corpus) {
    try {
      dsl::ModelSource a = dsl::parse(text);
      std::string printed = dsl::print(a);
      dsl::ModelSource b = dsl::parse(printed);
      if (!(a == b)) o.fail(name + ": round trip changed the AST");
      if (dsl::print(b) != printed) o.fail(name + ": printing is not stable");
    } catch (const std::exception& e) {
      o.fail(name + ": " + e.what());
    }
  }
  if (files < 13) o.fail("expected lossy_medium plus 12 generated files in models/, found " + std::to_string(files));
  if (o.pass) o.detail = std::to_string(corpus.size()) + " models (" + std::to_string(files) + " shipped files)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path models = argc > 1 ? fs::path(argv[1]) : fs::path(TPTG_MODELS_DIR);
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"task graph Emin time = 18, scheduler avoids P2", criterion1},
      {"task graph p=0 vs k=0, monotone in p and k", criterion2},
      {"malicious recipient coalition values", criterion3},
      {"honest protocol T sweeps and coalition order", criterion4},
      {"determinacy on 200 random games", criterion5},
      {"value iteration vs exact oracle", criterion6},
      {"digitization of dense-time paths", [&] { return criterion7(models); }},
      {"Monte Carlo cross-validation", criterion8},
      {"bounded horizon convergence", criterion9},
      {"DSL round trip on the corpus", [&] { return criterion10(models); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
