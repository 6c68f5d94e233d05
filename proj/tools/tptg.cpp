// tptg: verification of turn-based probabilistic timed games.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tptg/game_json.hpp"
#include "tptg/pipeline.hpp"

using namespace tptg;

namespace {

constexpr int kOk = 0;
constexpr int kModelError = 1;
constexpr int kNotConverged = 2;

struct Config {
  std::string model;
  std::string gen;
  std::string p = "1/10";
  std::int64_t k1 = 1, k2 = 1;
  std::vector<std::string> consts;
  std::vector<std::string> props;
  std::vector<std::string> coalitions;
  bool coalition_given = false;
  std::optional<std::int64_t> bound;
  double tol = 1e-8;
  std::uint64_t max_iters = 1'000'000;
  std::optional<std::size_t> state_limit;
  std::uint64_t seed = 1;
  std::int64_t samples = 10000;
  std::size_t max_steps = 100000;
  std::string json_path, csv_path, strategy_path, trace_path;
  bool uniform = false;
  std::string param;
  std::string values;
};

void add_model_options(CLI::App* cmd, Config& c) {
  cmd->add_option("model", c.model, "model file (.tptg)");
  cmd->add_option("--gen", c.gen, "built-in model generator")
      ->check(CLI::IsMember({"taskgraph", "honest", "malicious1", "malicious2"}));
  cmd->add_option("--p", c.p, "generator fault / last-message probability");
  cmd->add_option("--k1", c.k1, "taskgraph: fault bound of processor 1");
  cmd->add_option("--k2", c.k2, "taskgraph: fault bound of processor 2");
  cmd->add_option("--const", c.consts, "override a model constant, name=value");
  cmd->add_option("--state-limit", c.state_limit, "maximum number of digital states");
}

void add_prop_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--prop", c.props, "property text (default: the model's properties)");
  cmd->add_option("--coalition", c.coalitions, "override the coalition, comma-separated (repeatable; \"\" = empty)");
  cmd->add_option("--tol", c.tol, "value iteration tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", c.max_iters, "value iteration sweep limit");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::map<std::string, Rational> parse_consts(const std::vector<std::string>& items) {
  std::map<std::string, Rational> out;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos) throw UsageError("--const expects name=value, got '" + it + "'");
    try {
      out[it.substr(0, eq)] = Rational::parse(it.substr(eq + 1));
    } catch (const std::invalid_argument&) {
      throw UsageError("--const " + it + ": not a number");
    }
  }
  return out;
}

Rational parse_number(const std::string& s, const char* what) {
  try {
    return Rational::parse(s);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a number");
  }
}

ModelInput model_input(const Config& c) {
  ModelInput in;
  in.file = c.model;
  in.generator = c.gen;
  in.p = parse_number(c.p, "--p");
  in.k1 = c.k1;
  in.k2 = c.k2;
  return in;
}

BuildOptions build_options(const Config& c) {
  BuildOptions b;
  if (c.state_limit) b.state_limit = *c.state_limit;
  return b;
}

SolveOptions solve_options(const Config& c) {
  SolveOptions s;
  s.tol = c.tol;
  s.max_iters = c.max_iters;
  return s;
}

/// The properties to analyze: --prop texts or the model's own, expanded
/// over --coalition overrides and the --bound override.
std::vector<dsl::PropSrc> properties(const Config& c, const dsl::Elaborated& el, bool first_only = false) {
  std::vector<dsl::PropSrc> base;
  for (const auto& text : c.props) base.push_back(dsl::parse_prop(text));
  if (base.empty()) base = el.props;
  if (base.empty()) throw UsageError("the model declares no properties; pass --prop");
  if (first_only) base.resize(1);
  std::vector<dsl::PropSrc> out;
  for (auto p : base) {
    if (c.bound) p.time_bound = dsl::Expr::number(Rational(*c.bound));
    if (!c.coalition_given) {
      out.push_back(p);
      continue;
    }
    for (const auto& coal : c.coalitions) {
      p.coalition.clear();
      for (const auto& name : split(coal, ','))
        if (!name.empty()) p.coalition.push_back(name);
      out.push_back(p);
    }
  }
  return out;
}

dsl::Elaborated load(const Config& c, const std::map<std::string, Rational>& extra = {}) {
  auto overrides = parse_consts(c.consts);
  for (const auto& [k, v] : extra) overrides[k] = v;
  return dsl::elaborate(load_source(model_input(c)), overrides);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << doc.dump(2) << "\n";
}

std::string sig10(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ── Subcommands ─────────────────────────────────────────────────────────────

int cmd_check(const Config& c) {
  auto el = load(c);
  nlohmann::json report = nlohmann::json::array();
  int status = kOk;
  for (const auto& prop : properties(c, el)) {
    Analysis a = analyze(el, prop, solve_options(c), build_options(c));
    BuildStats st = a.digital.stats();
    for (const auto& w : a.digital.warnings) std::cerr << "warning [" << w.code << "]: " << w.message << "\n";
    for (const auto& w : a.result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << a.property.text << ": " << format_value(a.result.initial_value(a.game)) << "  (states " << st.states
              << ", transitions " << st.transitions << ", iterations " << a.result.iterations << ", "
              << (a.result.converged ? "converged" : "NOT converged") << ")\n";
    if (!a.result.converged) {
      std::cerr << "error: value iteration did not converge within " << c.max_iters << " sweeps (residual "
                << a.result.residual << ")\n";
      status = kNotConverged;
    }
    auto doc = result_to_json(a.game, a.property.objective, a.result);
    doc["property"] = a.property.text;
    doc["states"] = st.states;
    doc["transitions"] = st.transitions;
    report.push_back(std::move(doc));
  }
  if (!c.json_path.empty()) write_json(c.json_path, report);
  return status;
}

/// "1,2,5" or "1..100" (integer ranges) or a mix; rationals allowed.
std::vector<Rational> sweep_values(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number(item, "--values"));
      continue;
    }
    Rational lo = parse_number(item.substr(0, dots), "--values");
    Rational hi = parse_number(item.substr(dots + 2), "--values");
    if (!lo.is_integer() || !hi.is_integer()) throw UsageError("ranges a..b need integer ends");
    for (std::int64_t v = lo.num(); v <= hi.num(); ++v) out.push_back(Rational(v));
  }
  return out;
}

int cmd_sweep(const Config& c) {
  const auto values = sweep_values(c.values);
  const bool is_T = c.param == "T";
  std::ostringstream csv;
  std::vector<std::string> coalitions = c.coalitions;
  csv << c.param;
  if (!c.coalition_given) csv << ",value";
  for (const auto& coal : coalitions) {
    std::string name;
    for (const auto& n : split(coal, ','))
      if (!n.empty()) name += (name.empty() ? "" : "+") + n;
    csv << ",<" << name << ">";
  }
  csv << "\n";
  int status = kOk;
  for (const auto& v : values) {
    std::map<std::string, Rational> extra;
    if (!is_T) extra[c.param] = v;
    Config cc = c;
    if (is_T) {
      if (!v.is_integer() || v < Rational(0)) throw UsageError("T must be a natural number");
      cc.bound = v.num();
    }
    dsl::Elaborated el = load(cc, extra);
    auto props = properties(cc, el, /*first_only=*/true);
    if (is_T && !props.front().probability) throw UsageError("a T sweep needs a P property");
    csv << v.to_string();
    for (const auto& prop : props) {
      Analysis a = analyze(el, prop, solve_options(c), build_options(c));
      if (!a.result.converged) status = kNotConverged;
      csv << "," << sig10(a.result.initial_value(a.game));
    }
    csv << "\n";
  }
  if (c.csv_path.empty() || c.csv_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(c.csv_path);
    if (!f) throw UsageError("cannot write '" + c.csv_path + "'");
    f << csv.str();
  }
  return status;
}

int cmd_synth(const Config& c) {
  auto el = load(c);
  auto props = properties(c, el, true);
  Analysis a = analyze(el, props.front(), solve_options(c), build_options(c));
  if (!a.result.converged) {
    std::cerr << "error: value iteration did not converge; no strategy synthesized\n";
    return kNotConverged;
  }
  auto doc = result_to_json(a.game, a.property.objective, a.result);
  doc["property"] = a.property.text;
  write_json(c.json_path, doc);
  return kOk;
}

int cmd_simulate(const Config& c) {
  if (c.samples < 1) throw UsageError("--samples must be at least 1");
  if (c.uniform == !c.strategy_path.empty()) throw UsageError("give exactly one of --strategy FILE or --uniform");
  auto el = load(c);
  auto props = properties(c, el, true);
  Analysis a = analyze(el, props.front(), solve_options(c), build_options(c), /*solve_game=*/false);
  const Tsg& g = a.game;
  Strategy strategy = uniform_strategy(g);
  if (!c.uniform) {
    std::ifstream f(c.strategy_path);
    if (!f) throw UsageError("cannot open strategy file '" + c.strategy_path + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("strategy file: " + std::string(e.what()));
    }
    MemorylessProfile profile = profile_from_json(g, doc);
    Strategy fallback = uniform_strategy(g);
    strategy = [profile, fallback](const TsgPath& h, std::mt19937_64& rng) -> ChoiceId {
      StateId s = h.last();
      return profile.defined(s) ? static_cast<ChoiceId>(profile.choice[s]) : fallback(h, rng);
    };
  }
  const auto target = label_states(g, a.property.objective.target);
  std::size_t price = 0;
  if (!a.property.objective.price.empty())
    price = static_cast<std::size_t>(std::find(g.price_names.begin(), g.price_names.end(),
                                               a.property.objective.price) - g.price_names.begin());
  Estimate e = estimate(g, strategy, target, price, static_cast<std::size_t>(c.samples), c.max_steps, c.seed);
  std::cout << "# seed " << c.seed << ", samples " << c.samples << ", strategy "
            << (c.uniform ? "uniform" : c.strategy_path) << "\n";
  std::cout << "# property " << a.property.text << "\n";
  std::cout << "probability " << format_value(e.probability) << " +- " << format_value(e.probability_halfwidth)
            << " (99% CI, " << e.hits << " hits, " << e.censored << " censored)\n";
  if (!g.price_names.empty())
    std::cout << "price[" << g.price_names[price] << "] " << format_value(e.price) << " +- "
              << format_value(e.price_halfwidth) << " (mean over hitting runs)\n";
  if (!c.trace_path.empty()) {
    std::ofstream f(c.trace_path);
    if (!f) throw UsageError("cannot write '" + c.trace_path + "'");
    write_trace(f, g, simulate(g, strategy, target, price, c.seed, c.max_steps), price);
  }
  if (!c.json_path.empty()) {
    nlohmann::json doc = {{"seed", c.seed},
                          {"samples", e.samples},
                          {"hits", e.hits},
                          {"censored", e.censored},
                          {"probability", e.probability},
                          {"probability_halfwidth", e.probability_halfwidth},
                          {"price", e.price},
                          {"price_halfwidth", e.price_halfwidth}};
    write_json(c.json_path, doc);
  }
  return kOk;
}

int cmd_export(const Config& c) {
  auto el = load(c);
  if (c.props.empty() && !c.coalition_given) {
    DigitalGame dg = build(el.model, {}, build_options(c));
    write_json(c.json_path, game_to_json(dg.game));
    return kOk;
  }
  Analysis a = analyze(el, properties(c, el).front(), solve_options(c), build_options(c), /*solve_game=*/false);
  write_json(c.json_path, game_to_json(a.game));
  return kOk;
}

int cmd_validate(const Config& c) {
  auto el = load(c);
  auto diags = validate_assumptions(el.model);
  for (const auto& d : diags)
    std::cerr << (d.is_error() ? "error" : "warning") << " [" << d.code << "]: " << d.message << "\n";
  if (count_errors(diags) > 0) return kModelError;
  std::cout << "ok: " << el.model.locations.size() << " locations, " << el.model.clocks.size() << " clocks, "
            << el.model.players.size() << " players, " << el.model.num_edges() << " edges\n";
  return kOk;
}

int cmd_print(const Config& c) {
  std::cout << dsl::print(load_source(model_input(c)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tptg: verification and strategy synthesis for turn-based probabilistic timed games"};
  app.require_subcommand(1);
  Config c;

  auto* check = app.add_subcommand("check", "compute the values of properties");
  add_model_options(check, c);
  add_prop_options(check, c);
  check->add_option("--bound", c.bound, "override the time bound of P properties");
  check->add_option("--json", c.json_path, "write results as JSON");

  auto* sweep = app.add_subcommand("sweep", "tabulate a property over a parameter");
  add_model_options(sweep, c);
  add_prop_options(sweep, c);
  sweep->add_option("--param", c.param, "T (time bound), p, k1, k2 or any model constant")->required();
  sweep->add_option("--values", c.values, "comma-separated values; a..b for integer ranges")->required();
  sweep->add_option("--csv", c.csv_path, "write the CSV here (default stdout)");

  auto* synth = app.add_subcommand("synth", "synthesize optimal memoryless strategies");
  add_model_options(synth, c);
  add_prop_options(synth, c);
  synth->add_option("--bound", c.bound, "override the time bound of P properties");
  synth->add_option("--json", c.json_path, "write the strategy JSON here (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate under a strategy");
  add_model_options(sim, c);
  add_prop_options(sim, c);
  sim->add_option("--bound", c.bound, "override the time bound of P properties");
  sim->add_option("--strategy", c.strategy_path, "strategy JSON written by synth");
  sim->add_flag("--uniform", c.uniform, "choose uniformly among available actions");
  sim->add_option("--samples", c.samples, "number of runs");
  sim->add_option("--seed", c.seed, "random seed");
  sim->add_option("--max-steps", c.max_steps, "censor runs after this many steps");
  sim->add_option("--trace", c.trace_path, "write one run as JSON lines");
  sim->add_option("--json", c.json_path, "write the estimate as JSON");

  auto* exp = app.add_subcommand("export-game", "write the explicit game as JSON");
  add_model_options(exp, c);
  add_prop_options(exp, c);
  exp->add_option("--bound", c.bound, "override the time bound of P properties");
  exp->add_option("--json", c.json_path, "output path (default stdout)");

  auto* val = app.add_subcommand("validate", "check the model's well-formedness assumptions");
  add_model_options(val, c);

  auto* prn = app.add_subcommand("print", "print the model in canonical form");
  add_model_options(prn, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (auto* cmd : {check, sweep, synth, sim, exp})
    if (cmd->parsed()) c.coalition_given = cmd->count("--coalition") > 0;

  try {
    if (check->parsed()) return cmd_check(c);
    if (sweep->parsed()) return cmd_sweep(c);
    if (synth->parsed()) return cmd_synth(c);
    if (sim->parsed()) return cmd_simulate(c);
    if (exp->parsed()) return cmd_export(c);
    if (val->parsed()) return cmd_validate(c);
    if (prn->parsed()) return cmd_print(c);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics())
      std::cerr << "  " << (d.is_error() ? "error" : "warning") << " [" << d.code << "]: " << d.message << "\n";
    return kModelError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kModelError;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  }
  return kOk;
}
