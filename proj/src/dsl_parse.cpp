#include <algorithm>
#include <cctype>
#include <set>

#include "tptg/dsl.hpp"

namespace tptg::dsl {

ParseError::ParseError(SourcePos pos, const std::string& message, const std::string& hint)
    : ModelError("line " + std::to_string(pos.line) + ", col " + std::to_string(pos.col) + ": " + message +
                 (hint.empty() ? "" : " (hint: " + hint + ")")),
      pos_(pos),
      message_(message),
      hint_(hint) {}

Expr Expr::number(Rational v, SourcePos pos) {
  Expr e;
  e.kind = Kind::Number;
  e.value = v;
  e.pos = pos;
  return e;
}

Expr Expr::ident(std::string name, SourcePos pos) {
  Expr e;
  e.kind = Kind::Ident;
  e.name = std::move(name);
  e.pos = pos;
  return e;
}

namespace {

// ── Lexer ───────────────────────────────────────────────────────────────────

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Lexed {
  std::vector<Token> tokens;
  std::vector<std::string> notes;
};

Lexed lex(const std::string& text) {
  static const std::vector<std::string> two = {":=", "==", "!=", "<=", ">=", "->", "||", ".."};
  static const std::string one = "{}[]();:,&|!+-*/=<>";
  Lexed out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  bool leading = true;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      std::size_t end = text.find('\n', i);
      if (end == std::string::npos) end = text.size();
      if (leading) {
        std::string note = text.substr(i + 2, end - i - 2);
        if (!note.empty() && note[0] == ' ') note.erase(0, 1);
        while (!note.empty() && (note.back() == '\r' || note.back() == ' ')) note.pop_back();
        out.notes.push_back(note);
      }
      advance(end - i);
      continue;
    }
    leading = false;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      while (j + 1 < text.size() && text[j] == '.' && ident_start(text[j + 1])) {
        ++j;
        while (j < text.size() && ident_char(text[j])) ++j;
      }
      out.tokens.push_back({Tok::Ident, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      out.tokens.push_back({Tok::Number, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    std::string p2 = text.substr(i, 2);
    if (std::find(two.begin(), two.end(), p2) != two.end()) {
      out.tokens.push_back({Tok::Punct, p2, pos});
      advance(2);
      continue;
    }
    if (one.find(c) != std::string::npos) {
      out.tokens.push_back({Tok::Punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }
  out.tokens.push_back({Tok::End, "", {line, col}});
  return out;
}

// ── Parser ──────────────────────────────────────────────────────────────────

bool is_cmp(const std::string& t) { return t == "==" || t == "!=" || t == "<" || t == "<=" || t == ">" || t == ">="; }

CmpOp cmp_of(const std::string& t) {
  if (t == "==") return CmpOp::Eq;
  if (t == "!=") return CmpOp::Ne;
  if (t == "<") return CmpOp::Lt;
  if (t == "<=") return CmpOp::Le;
  if (t == ">") return CmpOp::Gt;
  return CmpOp::Ge;
}

/// Folds an operator node whose operands are all literals.
Expr fold(Expr e) {
  if (e.kind == Expr::Kind::Number || e.kind == Expr::Kind::Ident) return e;
  for (const auto& a : e.args)
    if (a.kind != Expr::Kind::Number) return e;
  try {
    switch (e.kind) {
      case Expr::Kind::Neg:
        return Expr::number(-e.args[0].value, e.pos);
      case Expr::Kind::Add:
        return Expr::number(e.args[0].value + e.args[1].value, e.pos);
      case Expr::Kind::Sub:
        return Expr::number(e.args[0].value - e.args[1].value, e.pos);
      case Expr::Kind::Mul:
        return Expr::number(e.args[0].value * e.args[1].value, e.pos);
      case Expr::Kind::Div:
        if (e.args[1].value == Rational(0)) throw ParseError(e.pos, "division by zero");
        return Expr::number(e.args[0].value / e.args[1].value, e.pos);
      default:
        return e;
    }
  } catch (const std::overflow_error&) {
    throw ParseError(e.pos, "arithmetic overflow in constant expression");
  }
}

void collect_idents(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::Ident) out.push_back(&e);
  for (const auto& a : e.args) collect_idents(a, out);
}

void collect_idents(const Cond& c, std::vector<const Expr*>& out) {
  for (const auto& e : c.operands) collect_idents(e, out);
  for (const auto& a : c.args) collect_idents(a, out);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ModelSource model() {
    ModelSource m;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) throw ParseError(t.pos, "expected a declaration, found '" + t.text + "'", decl_hint());
      if (t.text == "const") m.consts.push_back(const_decl());
      else if (t.text == "player") names_decl("player", m.players);
      else if (t.text == "clock" || t.text == "shared") clock_decl(m.clocks);
      else if (t.text == "price") names_decl("price", m.prices);
      else if (t.text == "automaton") m.automata.push_back(automaton());
      else if (t.text == "system") system_decl(m.system);
      else if (t.text == "owner") owner_block(m.owners);
      else if (t.text == "label") m.labels.push_back(label_decl());
      else if (t.text == "prop") {
        next();
        m.props.push_back(prop_body());
      } else if (t.text == "urgent") {
        throw ParseError(t.pos, "unsupported extension: urgent locations");
      } else {
        throw ParseError(t.pos, "expected a declaration, found '" + t.text + "'", decl_hint());
      }
    }
    return m;
  }

  PropSrc prop_only() {
    if (peek().kind == Tok::Ident && peek().text == "prop") next();
    PropSrc p = prop_body(/*need_semicolon=*/false);
    if (!at_end()) throw ParseError(peek().pos, "unexpected '" + peek().text + "' after property");
    return p;
  }

 private:
  static std::string decl_hint() {
    return "declarations are const, player, clock, shared clock, price, automaton, system, owner, label, prop";
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is(const std::string& text, std::size_t k = 0) const {
    return peek(k).kind != Tok::End && peek(k).kind != Tok::Number && peek(k).text == text;
  }
  bool accept(const std::string& text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(const std::string& text, const std::string& hint = {}) {
    if (!is(text)) throw ParseError(peek().pos, "expected '" + text + "', found " + describe(peek()), hint);
    return next();
  }
  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

  std::string name(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) throw ParseError(t.pos, "expected " + what + ", found " + describe(t));
    if (t.text.find('.') != std::string::npos) throw ParseError(t.pos, what + " must not contain '.'");
    return next().text;
  }

  bool is_clock(const std::string& n) const { return clocks_.count(n) != 0; }

  ConstDecl const_decl() {
    ConstDecl d;
    d.pos = next().pos;
    d.name = name("constant name");
    expect("=");
    d.value = expr();
    expect(";");
    return d;
  }

  void names_decl(const std::string& kw, std::vector<std::string>& into) {
    expect(kw);
    do into.push_back(name(kw + " name"));
    while (accept(","));
    expect(";");
  }

  void clock_decl(std::vector<ClockDecl>& into) {
    bool shared = accept("shared");
    SourcePos pos = expect("clock").pos;
    do {
      ClockDecl d{name("clock name"), shared, pos};
      clocks_.insert(d.name);
      into.push_back(std::move(d));
    } while (accept(","));
    expect(";");
  }

  void system_decl(std::vector<std::string>& into) {
    expect("system");
    do into.push_back(name("automaton name"));
    while (accept("||"));
    expect(";", "components are joined with '||'");
  }

  void owner_block(std::vector<OwnerRule>& into) {
    expect("owner");
    expect("{");
    while (!accept("}")) {
      OwnerRule r;
      r.pos = peek().pos;
      r.when = cond();
      expect("->", "owner rules read: <condition> -> <player>;");
      r.player = name("player name");
      expect(";");
      into.push_back(std::move(r));
    }
    expect(";", "close the owner block with '};'");
  }

  LabelDecl label_decl() {
    LabelDecl d;
    d.pos = next().pos;
    d.name = name("label name");
    expect("=");
    d.pred = cond();
    expect(";");
    return d;
  }

  PropSrc prop_body(bool need_semicolon = true) {
    PropSrc p;
    p.pos = peek().pos;
    const Token& q = peek();
    if (q.kind != Tok::Ident || (q.text != "Pmax" && q.text != "Pmin" && q.text != "Emax" && q.text != "Emin"))
      throw ParseError(q.pos, "expected Pmax, Pmin, Emax or Emin, found " + describe(q));
    p.probability = q.text[0] == 'P';
    p.maximize = q.text.substr(1) == "max";
    next();
    expect("[");
    expect("F", "only reachability targets [F label] are supported");
    p.target = name("label name");
    expect("]");
    if (is("<=")) {
      SourcePos at = next().pos;
      if (!p.probability)
        throw ParseError(at, "time bounds apply to P properties", "use 'steps n' for a bounded horizon");
      p.time_bound = expr();
    }
    if (is("steps")) {
      SourcePos at = next().pos;
      if (p.probability) throw ParseError(at, "'steps' applies to E properties");
      p.steps = expr();
    }
    if (is("price")) {
      SourcePos at = next().pos;
      if (p.probability) throw ParseError(at, "'price' applies to E properties");
      p.price = name("price structure name");
    }
    expect("coalition", "properties end with coalition {players}");
    expect("{");
    if (!is("}")) {
      do p.coalition.push_back(name("player name"));
      while (accept(","));
    }
    expect("}");
    if (need_semicolon) expect(";");
    return p;
  }

  AutomatonSrc automaton() {
    AutomatonSrc a;
    a.pos = expect("automaton").pos;
    a.name = name("automaton name");
    expect("{");
    while (!accept("}")) {
      const Token& t = peek();
      if (t.text == "var") {
        VarDecl v;
        v.pos = next().pos;
        v.name = name("variable name");
        if (is_clock(v.name)) throw ParseError(v.pos, "'" + v.name + "' is already a clock");
        expect(":");
        expect("[");
        v.lo = expr();
        expect("..", "ranges read [lo..hi]");
        v.hi = expr();
        expect("]");
        expect("init");
        v.init = expr();
        expect(";");
        a.vars.push_back(std::move(v));
      } else if (t.text == "init") {
        next();
        a.init = name("location name");
        expect(";");
      } else if (t.text == "location") {
        a.locations.push_back(location());
      } else if (t.text == "urgent") {
        throw ParseError(t.pos, "unsupported extension: urgent locations");
      } else {
        throw ParseError(t.pos, "expected var, init or location, found " + describe(t));
      }
    }
    if (a.init.empty()) throw ParseError(a.pos, "automaton '" + a.name + "' has no init location");
    return a;
  }

  LocationSrc location() {
    LocationSrc l;
    l.pos = expect("location").pos;
    l.name = name("location name");
    expect("{");
    bool have_inv = false, have_rate = false;
    while (!accept("}")) {
      const Token& t = peek();
      if (t.text == "inv") {
        if (have_inv) throw ParseError(t.pos, "duplicate invariant", "conjoin atoms with '&'");
        have_inv = true;
        next();
        if (!accept("true")) {
          do l.invariant.push_back(clock_atom(true));
          while (accept("&"));
        }
        expect(";");
      } else if (t.text == "rate") {
        if (have_rate) throw ParseError(t.pos, "duplicate rate declaration");
        have_rate = true;
        next();
        l.rates = assigns();
        expect(";");
      } else if (t.text == "[") {
        l.edges.push_back(edge());
      } else {
        throw ParseError(t.pos, "expected inv, rate or an edge '[action] ...', found " + describe(t));
      }
    }
    return l;
  }

  std::vector<PriceAssign> assigns() {
    std::vector<PriceAssign> out;
    do {
      PriceAssign a;
      a.pos = peek().pos;
      a.name = name("price structure name");
      expect("=");
      a.value = expr();
      out.push_back(std::move(a));
    } while (accept(","));
    return out;
  }

  /// x<=c or x>=c; `only` demands a clock on the left.
  ClockAtomSrc clock_atom(bool only) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || !is_clock(t.text)) {
      if (only && t.kind == Tok::Ident)
        throw ParseError(t.pos, "unknown clock '" + t.text + "'", "declare it with 'clock " + t.text + ";'");
      if (only) throw ParseError(t.pos, "expected a clock constraint x<=c or x>=c, found " + describe(t));
    }
    ClockAtomSrc a;
    a.pos = t.pos;
    a.clock = next().text;
    const Token& op = peek();
    if (op.text == "<" || op.text == ">")
      throw ParseError(op.pos, "strict inequalities not allowed (closed constraints)",
                       "use " + std::string(op.text == "<" ? "<=" : ">=") + " with an integer bound");
    if (op.text == "==")
      throw ParseError(op.pos, "clock equality is not an atom", "write " + a.clock + ">=c & " + a.clock + "<=c");
    if (op.text == "+" || op.text == "-")
      throw ParseError(op.pos, "diagonal or arithmetic clock constraints not allowed",
                       "compare a single clock against a constant");
    if (op.text != "<=" && op.text != ">=")
      throw ParseError(op.pos, "expected <= or >= after clock '" + a.clock + "'");
    a.kind = op.text == "<=" ? BoundKind::Upper : BoundKind::Lower;
    next();
    a.bound = expr();
    std::vector<const Expr*> ids;
    collect_idents(a.bound, ids);
    for (const Expr* id : ids)
      if (is_clock(id->name))
        throw ParseError(id->pos, "diagonal constraints not allowed (clock '" + id->name + "' on the right)",
                         "compare a single clock against a constant");
    return a;
  }

  EdgeSrc edge() {
    EdgeSrc e;
    e.pos = expect("[").pos;
    e.action = name("action name");
    expect("]");
    if (!is("->")) {
      do {
        if (peek().kind == Tok::Ident && is_clock(peek().text)) {
          e.clock_guard.push_back(clock_atom(true));
        } else {
          Cond c = cond_unary();
          reject_clocks(c);
          e.data_guard.push_back(std::move(c));
        }
      } while (accept("&"));
    }
    expect("->", "edges read [action] guard -> branches;");
    do e.branches.push_back(branch());
    while (accept("+"));
    if (accept("cost")) e.costs = assigns();
    expect(";");
    return e;
  }

  void reject_clocks(const Cond& c) const {
    std::vector<const Expr*> ids;
    collect_idents(c, ids);
    for (const Expr* id : ids)
      if (is_clock(id->name))
        throw ParseError(id->pos,
                         "clock '" + id->name + "' may only appear in atoms x<=c / x>=c "
                         "(diagonal and arithmetic clock constraints are not allowed)");
  }

  /// Does a probability prefix "expr :" start here?
  bool has_prob_prefix(std::size_t from = 0) const {
    int depth = 0;
    for (std::size_t k = from;; ++k) {
      const Token& t = peek(k);
      if (t.kind == Tok::End) return false;
      if (t.kind != Tok::Punct) continue;
      if (t.text == "(") ++depth;
      else if (t.text == ")" && --depth < 0) return false;
      else if (depth == 0 && t.text == ":") return true;
      else if (depth == 0 && (t.text == "&" || t.text == ";" || t.text == "+" || t.text == "{")) return false;
    }
  }

  BranchSrc branch() {
    BranchSrc b;
    b.pos = peek().pos;
    if (has_prob_prefix()) {
      b.prob = expr();
      expect(":");
    }
    if (accept("{")) {
      if (!is("}")) {
        do {
          const Token& t = peek();
          std::string c = name("clock name");
          if (!is_clock(c)) throw ParseError(t.pos, "unknown clock '" + c + "'", "declare it with 'clock " + c + ";'");
          if (is(":=") || is("="))
            throw ParseError(peek().pos, "unsupported extension: integer clock resets", "clocks reset to 0 only");
          b.resets.push_back(c);
        } while (accept(","));
      }
      expect("}");
      expect("&", "resets are followed by '& target'");
    }
    b.target = name("target location");
    while (is("&") && peek(1).kind == Tok::Ident && peek(2).text == ":=") {
      next();
      Update u;
      u.pos = peek().pos;
      u.var = name("variable name");
      if (is_clock(u.var)) throw ParseError(u.pos, "unsupported extension: integer clock resets");
      expect(":=");
      u.value = expr();
      b.updates.push_back(std::move(u));
    }
    return b;
  }

  // Conditions

  Cond cond() {
    Cond first = cond_and();
    if (!is("|")) return first;
    Cond c;
    c.kind = Cond::Kind::Or;
    c.pos = first.pos;
    c.args.push_back(std::move(first));
    while (accept("|")) c.args.push_back(cond_and());
    return c;
  }

  Cond cond_and() {
    Cond first = cond_unary();
    if (!is("&")) return first;
    Cond c;
    c.kind = Cond::Kind::And;
    c.pos = first.pos;
    c.args.push_back(std::move(first));
    while (accept("&")) c.args.push_back(cond_unary());
    return c;
  }

  Cond cond_unary() {
    Cond c;
    c.pos = peek().pos;
    if (accept("!")) {
      c.kind = Cond::Kind::Not;
      c.args.push_back(cond_unary());
      return c;
    }
    if (accept("true")) {
      c.kind = Cond::Kind::True;
      return c;
    }
    if (accept("false")) {
      c.kind = Cond::Kind::False;
      return c;
    }
    if (is("(")) {
      std::size_t save = pos_;
      try {
        next();
        Cond inner = cond();
        expect(")");
        const std::string& t = peek().text;
        if (peek().kind == Tok::Punct && (is_cmp(t) || t == "+" || t == "-" || t == "*" || t == "/"))
          throw ParseError(peek().pos, "arithmetic");
        return inner;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    Expr lhs = expr();
    if (peek().kind == Tok::Punct && is_cmp(peek().text)) {
      c.kind = Cond::Kind::Cmp;
      c.op = cmp_of(next().text);
      c.operands.push_back(std::move(lhs));
      c.operands.push_back(expr());
      return c;
    }
    if (lhs.kind == Expr::Kind::Ident && lhs.name.find('.') != std::string::npos) {
      auto dot = lhs.name.find('.');
      c.kind = Cond::Kind::At;
      c.component = lhs.name.substr(0, dot);
      c.location = lhs.name.substr(dot + 1);
      if (c.location.find('.') != std::string::npos)
        throw ParseError(lhs.pos, "location test must read Component.location");
      return c;
    }
    throw ParseError(c.pos, "expected a comparison or a location test Component.location");
  }

  // Expressions

  Expr expr() {
    Expr e = term();
    while (is("+") || is("-")) {
      // "+ prob :" starts the next branch of a distribution
      if (is("+") && has_prob_prefix(1)) break;
      Expr op;
      op.pos = peek().pos;
      op.kind = next().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      op.args.push_back(std::move(e));
      op.args.push_back(term());
      e = fold(std::move(op));
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    while (is("*") || is("/")) {
      Expr op;
      op.pos = peek().pos;
      op.kind = next().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      op.args.push_back(std::move(e));
      op.args.push_back(factor());
      e = fold(std::move(op));
    }
    return e;
  }

  Expr factor() {
    const Token& t = peek();
    if (accept("-")) {
      Expr op;
      op.pos = t.pos;
      op.kind = Expr::Kind::Neg;
      op.args.push_back(factor());
      return fold(std::move(op));
    }
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Number) {
      next();
      try {
        return Expr::number(Rational::parse(t.text), t.pos);
      } catch (const std::exception&) {
        throw ParseError(t.pos, "number '" + t.text + "' out of range");
      }
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") throw ParseError(t.pos, "expected a number, found '" + t.text + "'");
      next();
      return Expr::ident(t.text, t.pos);
    }
    throw ParseError(t.pos, "expected an expression, found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> clocks_;
};

}  // namespace

ModelSource parse(const std::string& text) {
  auto lexed = lex(text);
  Parser p(std::move(lexed.tokens));
  ModelSource m = p.model();
  m.notes = std::move(lexed.notes);
  return m;
}

PropSrc parse_prop(const std::string& text) {
  auto lexed = lex(text);
  Parser p(std::move(lexed.tokens));
  return p.prop_only();
}

}  // namespace tptg::dsl
