#include <sstream>

#include "tptg/dsl.hpp"

namespace tptg::dsl {

NrVariant parse_variant(const std::string& name) {
  if (name == "honest") return NrVariant::Honest;
  if (name == "malicious1") return NrVariant::Malicious1;
  if (name == "malicious2") return NrVariant::Malicious2;
  throw UsageError("unknown protocol variant '" + name + "' (expected honest, malicious1 or malicious2)");
}

std::string variant_name(NrVariant v) {
  switch (v) {
    case NrVariant::Honest: return "honest";
    case NrVariant::Malicious1: return "malicious1";
    case NrVariant::Malicious2: return "malicious2";
  }
  return "honest";
}

namespace {

void check_probability(const Rational& p) {
  if (p < Rational(0) || p > Rational(1)) throw UsageError("p must lie in [0,1], got " + p.to_string());
}

}  // namespace

ModelSource gen_nonrepudiation(NrVariant variant, Rational p, std::int64_t md, std::int64_t MD, std::int64_t ad,
                               std::int64_t AD) {
  check_probability(p);
  if (md < 0 || ad < 0 || md > MD || ad > AD) throw UsageError("delay bounds must satisfy 0 <= md <= MD, 0 <= ad <= AD");
  const bool malicious = variant != NrVariant::Honest;
  std::ostringstream os;
  os << "// Non-repudiation protocol (" << variant_name(variant) << " recipient).\n"
     << "// O sends messages and awaits acknowledgements; each message is the last with probability p.\n"
     << "const p = " << p.to_string() << ";\n"
     << "const md = " << md << ";\nconst MD = " << MD << ";\nconst ad = " << ad << ";\nconst AD = " << AD << ";\n"
     << "player O, R;\nclock x;\nprice time;\n"
     << "automaton Orig {\n"
     << "  init o_send;\n"
     << "  location o_send { inv x <= MD; rate time=1; [msg] x >= md -> {x} & o_wait; }\n"
     << "  location o_wait {\n"
     << "    inv x <= AD; rate time=1;\n"
     << "    [ack] x >= ad -> p : {x} & o_done + (1 - p) : {x} & o_send;\n";
  if (malicious) os << "    [timeout] x >= AD -> {x} & o_cheat;\n";
  os << "  }\n"
     << "  location o_done { inv x <= 0; rate time=1; }\n";
  if (malicious) os << "  location o_cheat { inv x <= 0; rate time=1; }\n";
  os << "}\n"
     << "automaton Recv {\n"
     << "  init r_idle;\n"
     << "  location r_idle { [msg] -> r_ack; }\n"
     << "  location r_ack {\n"
     << "    [ack] -> r_idle;\n";
  if (malicious) os << "    [guess] -> p : r_gain + (1 - p) : r_fail;\n";
  if (variant == NrVariant::Malicious2) os << "    [decode] -> p / 4 : r_gain + (1 - p) / 4 : r_known + 3/4 : r_tried;\n";
  os << "  }\n";
  if (variant == NrVariant::Malicious2) {
    os << "  location r_known { [ack] -> r_idle; }\n"
       << "  location r_tried { [ack] -> r_idle; [guess] -> p : r_gain + (1 - p) : r_fail; }\n";
  }
  os << "  location r_gain { }\n"
     << "  location r_fail { }\n"
     << "}\n"
     << "system Orig || Recv;\n"
     << "owner { Orig.o_wait -> R; true -> O; };\n"
     << "label terminated_ok = Orig.o_done;\n"
     << "label r_gains_info = Recv.r_gain;\n"
     << "label o_declares_cheat = " << (malicious ? "Orig.o_cheat" : "false") << ";\n";
  if (malicious) {
    os << "prop Pmax [F r_gains_info] coalition {R};\n"
       << "prop Pmax [F r_gains_info] coalition {O, R};\n"
       << "prop Pmax [F terminated_ok] coalition {O};\n";
  } else {
    os << "prop Emin [F terminated_ok] price time coalition {O, R};\n"
       << "prop Emax [F terminated_ok] price time coalition {R};\n"
       << "prop Pmax [F terminated_ok] <= 20 coalition {O};\n";
  }
  return parse(os.str());
}

ModelSource gen_taskgraph(std::int64_t k1, std::int64_t k2, Rational p) {
  check_probability(p);
  if (k1 < 0 || k2 < 0) throw UsageError("fault bounds k1, k2 must be natural numbers");
  // task i: operation and predecessors
  const bool is_add[7] = {false, true, false, false, true, false, true};
  const std::vector<std::vector<int>> preds = {{}, {}, {}, {1}, {1, 2}, {3}, {4, 5}};
  const int dur[3][2] = {{0, 0}, {2, 3}, {5, 7}};  // [processor][add, mult]
  const int idle_rate[3] = {0, 10, 20};
  const int busy_rate[3] = {0, 90, 30};

  std::ostringstream os;
  os << "// Scheduling the task graph of D*(C*(A+B)) + ((A+B) + (C*D)) on two processors.\n"
     << "// P1 takes " << dur[1][0] << " (add) / " << dur[1][1] << " (mult) time units, P2 " << dur[2][0] << " / "
     << dur[2][1] << "; processor j suffers at most kj faults, each a failure with probability p.\n"
     << "const k1 = " << k1 << ";\nconst k2 = " << k2 << ";\nconst p = " << p.to_string() << ";\n"
     << "player sched, env;\n"
     << "clock x1, x2, c;\n"
     << "price time, energy;\n"
     << "automaton Sched {\n";
  for (int i = 1; i <= 6; ++i) os << "  var s" << i << " : [0..2] init 0;\n";
  os << "  var b1 : [0..6] init 0;\n  var b2 : [0..6] init 0;\n"
     << "  init decide;\n"
     << "  location decide {\n    inv c <= 0; rate time=1;\n";
  for (int j = 1; j <= 2; ++j)
    for (int i = 1; i <= 6; ++i) {
      os << "    [p" << j << "_t" << i << "] s" << i << " == 0 & b" << j << " == 0";
      for (int k : preds[i]) os << " & s" << k << " == 2";
      os << " -> decide & s" << i << " := 1 & b" << j << " := " << i << ";\n";
    }
  os << "    [go] (b1 > 0 | b2 > 0) -> run;\n"
     << "    [finish] s1 == 2 & s2 == 2 & s3 == 2 & s4 == 2 & s5 == 2 & s6 == 2 -> done;\n"
     << "  }\n"
     << "  location run {\n    inv c <= 7; rate time=1;\n";
  for (int j = 1; j <= 2; ++j) {
    for (int i = 1; i <= 6; ++i)
      os << "    [end" << j << "] b" << j << " == " << i << " -> {c} & decide & s" << i << " := 2 & b" << j
         << " := 0;\n";
    os << "    [fault" << j << "] -> {c} & check" << j << ";\n";
  }
  os << "  }\n";
  for (int j = 1; j <= 2; ++j) {
    os << "  location check" << j << " {\n    inv c <= 0; rate time=1;\n";
    for (int i = 1; i <= 6; ++i)
      os << "    [abort" << j << "] b" << j << " == " << i << " -> {c} & decide & s" << i << " := 0 & b" << j
         << " := 0;\n";
    os << "    [resume" << j << "] -> run;\n  }\n";
  }
  os << "  location done { inv c <= 0; rate time=1; }\n"
     << "}\n";

  for (int j = 1; j <= 2; ++j) {
    const std::string x = "x" + std::to_string(j);
    const std::string J = std::to_string(j);
    os << "automaton P" << j << " {\n"
       << "  var f : [0..k" << j << "] init 0;\n"
       << "  init idle;\n"
       << "  location idle {\n    inv " << x << " <= 7; rate energy=" << idle_rate[j] << ";\n"
       << "    [go] -> {" << x << "} & idle;\n";
    for (int i = 1; i <= 6; ++i)
      os << "    [p" << j << "_t" << i << "] -> {" << x << "} & " << (is_add[i] ? "add" : "mult") << ";\n";
    os << "  }\n";
    for (int op = 0; op < 2; ++op) {
      const char* name = op == 0 ? "add" : "mult";
      os << "  location " << name << " {\n    inv " << x << " <= " << dur[j][op] << "; rate energy=" << busy_rate[j]
         << ";\n"
         << "    [go] -> " << name << ";\n"
         << "    [end" << J << "] " << x << " >= " << dur[j][op] << " -> {" << x << "} & idle;\n"
         << "    [fault" << J << "] f < k" << J << " -> p : {" << x << "} & fail & f := f + 1 + (1 - p) : " << name
         << " & f := f + 1;\n"
         << "    [resume" << J << "] -> " << name << ";\n"
         << "  }\n";
    }
    os << "  location fail {\n    inv " << x << " <= 0; rate energy=" << idle_rate[j] << ";\n"
       << "    [abort" << J << "] -> idle;\n  }\n"
       << "}\n";
  }
  os << "system Sched || P1 || P2;\n"
     << "owner { Sched.decide | Sched.check1 | Sched.check2 | Sched.done -> sched; true -> env; };\n"
     << "label all_done = Sched.done;\n"
     << "prop Emin [F all_done] price time coalition {sched};\n"
     << "prop Emin [F all_done] price energy coalition {sched};\n"
     << "prop Pmax [F all_done] <= 20 coalition {sched};\n";
  return parse(os.str());
}

}  // namespace tptg::dsl
