#include "tptg/digital.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <numeric>

namespace tptg {

namespace {

std::vector<std::int64_t> advanced(const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& ceil,
                                   std::int64_t t) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) out[x] = std::min(v[x] + t, ceil[x]);
  return out;
}

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

std::vector<DigitalMove> enumerate_moves(const Tptg& m, const std::vector<std::int64_t>& ceilings,
                                         const DigitalState& s) {
  const Location& loc = m.locations.at(s.location);
  if (s.clocks.size() != m.clocks.size()) throw UsageError("digital state has wrong number of clocks");
  std::vector<const Edge*> edges;
  for (const auto& e : loc.edges) edges.push_back(&e);
  std::stable_sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) { return a->action < b->action; });

  std::int64_t t_cap = 1;
  for (auto c : ceilings) t_cap = std::max(t_cap, c);

  std::vector<DigitalMove> moves;
  for (std::int64_t t = 0; t <= t_cap; ++t) {
    auto v = advanced(s.clocks, ceilings, t);
    // invariants are conjunctions of x<=c / x>=c, so checking the endpoint
    // covers every intermediate delay
    if (!satisfies(v, loc.invariant)) break;
    for (const Edge* e : edges) {
      if (!satisfies(v, e->guard)) continue;
      DigitalMove mv;
      mv.label = {t, e->action};
      bool ok = true;
      for (const auto& br : e->branches) {
        if (br.prob == Rational(0)) continue;
        DigitalState next{br.target, v};
        for (ClockId x : br.resets) next.clocks[x] = 0;
        if (!satisfies(next.clocks, m.locations[br.target].invariant)) {
          ok = false;
          break;
        }
        auto it = std::find_if(mv.successors.begin(), mv.successors.end(),
                               [&](const auto& p) { return p.first == next; });
        if (it == mv.successors.end()) mv.successors.emplace_back(std::move(next), br.prob);
        else it->second += br.prob;
      }
      if (!ok) continue;
      mv.prices.resize(m.price_names.size());
      for (std::size_t k = 0; k < mv.prices.size(); ++k) mv.prices[k] = t * loc.rates[k] + e->prices[k];
      moves.push_back(std::move(mv));
    }
  }
  return moves;
}

std::size_t default_state_limit() {
  if (const char* env = std::getenv("TPTG_STATE_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 5'000'000;
}

// ── DigitalGame lookups ─────────────────────────────────────────────────────

std::size_t DigitalGame::hash_at(const std::int64_t* key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < stride_; ++i) h = mix(h ^ (static_cast<std::uint64_t>(key[i]) + i));
  return static_cast<std::size_t>(h);
}

DigitalState DigitalGame::state(StateId s) const {
  if (s >= flat_.size() / stride_) throw UsageError("state " + std::to_string(s) + " out of range");
  const std::int64_t* p = flat_.data() + static_cast<std::size_t>(s) * stride_;
  return {static_cast<LocationId>(p[0]), std::vector<std::int64_t>(p + 1, p + stride_)};
}

std::optional<StateId> DigitalGame::find(const DigitalState& s) const {
  if (s.clocks.size() + 1 != stride_ || table_.empty()) return std::nullopt;
  std::vector<std::int64_t> key{static_cast<std::int64_t>(s.location)};
  key.insert(key.end(), s.clocks.begin(), s.clocks.end());
  const std::size_t mask = table_.size() - 1;
  for (std::size_t i = hash_at(key.data()) & mask;; i = (i + 1) & mask) {
    if (table_[i] < 0) return std::nullopt;
    if (std::equal(key.begin(), key.end(), flat_.begin() + table_[i] * static_cast<std::int64_t>(stride_)))
      return static_cast<StateId>(table_[i]);
  }
}

std::string DigitalGame::describe(StateId s) const {
  auto st = state(s);
  std::string out = location_names.at(st.location) + "(";
  for (std::size_t x = 0; x < st.clocks.size(); ++x) {
    if (x) out += ",";
    out += clock_names[x] + "=" + std::to_string(st.clocks[x]);
  }
  return out + ")";
}

BuildStats DigitalGame::stats() const {
  BuildStats st;
  st.states = game.num_states();
  st.transitions = game.num_choices();
  st.branches = game.num_branches();
  for (const auto& p : game.players) st.states_per_player[p] = 0;
  for (auto o : game.owner) ++st.states_per_player[game.players[o]];
  return st;
}

// ── Build ───────────────────────────────────────────────────────────────────

class DigitalBuilder {
 public:
  DigitalBuilder(DigitalGame& g, std::size_t limit) : g_(g), limit_(limit) {}

  /// Interns `key` (location, clocks...); returns (id, newly added).
  std::pair<StateId, bool> intern(const std::vector<std::int64_t>& key) {
    if (g_.table_.empty()) g_.table_.assign(1024, -1);
    std::size_t mask = g_.table_.size() - 1;
    std::size_t i = g_.hash_at(key.data()) & mask;
    for (;; i = (i + 1) & mask) {
      std::int64_t id = g_.table_[i];
      if (id < 0) break;
      if (std::equal(key.begin(), key.end(), g_.flat_.begin() + id * static_cast<std::int64_t>(g_.stride_)))
        return {static_cast<StateId>(id), false};
    }
    std::size_t count = g_.flat_.size() / g_.stride_;
    if (count >= limit_)
      throw ResourceError("state limit of " + std::to_string(limit_) +
                          " states exceeded (raise with --state-limit or TPTG_STATE_LIMIT)");
    g_.table_[i] = static_cast<std::int64_t>(count);
    g_.flat_.insert(g_.flat_.end(), key.begin(), key.end());
    if (2 * (count + 1) > g_.table_.size()) rehash();
    return {static_cast<StateId>(count), true};
  }

 private:
  void rehash() {
    std::vector<std::int64_t> bigger(g_.table_.size() * 2, -1);
    const std::size_t mask = bigger.size() - 1;
    const std::size_t count = g_.flat_.size() / g_.stride_;
    for (std::size_t id = 0; id < count; ++id) {
      std::size_t i = g_.hash_at(g_.flat_.data() + id * g_.stride_) & mask;
      while (bigger[i] >= 0) i = (i + 1) & mask;
      bigger[i] = static_cast<std::int64_t>(id);
    }
    g_.table_ = std::move(bigger);
  }

  DigitalGame& g_;
  std::size_t limit_;
};

DigitalGame build(const Tptg& m, const std::vector<std::string>& targets, const BuildOptions& options) {
  auto diags = validate_assumptions(m);
  if (count_errors(diags) > 0) {
    std::string msg = "model violates the digital-clocks preconditions:";
    for (const auto& d : diags)
      if (d.is_error()) msg += "\n  " + d.message;
    throw ModelError(msg, diags);
  }
  std::vector<std::string> label_names = targets;
  if (label_names.empty())
    for (const auto& [name, _] : m.labels) label_names.push_back(name);
  for (const auto& name : label_names)
    if (!m.labels.count(name)) throw UsageError("unknown label '" + name + "'");

  DigitalGame g;
  g.ceilings = clock_ceilings(m);
  g.clock_names = m.clocks;
  for (const auto& l : m.locations) g.location_names.push_back(l.name);
  for (auto& d : diags)
    if (!d.is_error()) g.warnings.push_back(std::move(d));
  g.stride_ = 1 + m.clocks.size();

  DigitalBuilder interner(g, options.state_limit);
  TsgBuilder tsg(m.players, m.price_names);
  for (const auto& name : label_names) tsg.declare_label(name);

  auto key_of = [](const DigitalState& s) {
    std::vector<std::int64_t> key{static_cast<std::int64_t>(s.location)};
    key.insert(key.end(), s.clocks.begin(), s.clocks.end());
    return key;
  };
  auto add = [&](const DigitalState& s) {
    auto [id, fresh] = interner.intern(key_of(s));
    if (fresh) {
      tsg.add_state(m.locations[s.location].owner, g.describe(id));
      for (const auto& name : label_names) {
        const auto& lab = m.labels.at(name);
        if (lab.locations[s.location] && satisfies(s.clocks, lab.clocks)) tsg.set_label(name, id);
      }
    }
    return id;
  };

  DigitalState init{m.initial, std::vector<std::int64_t>(m.clocks.size(), 0)};
  if (!satisfies(init.clocks, m.locations[m.initial].invariant))
    throw ModelError("initial state violates the invariant of location '" + m.locations[m.initial].name + "'");
  tsg.set_initial(add(init));

  std::vector<double> prices(m.price_names.size());
  std::vector<Successor> succ;
  for (StateId s = 0; s < g.flat_.size() / g.stride_; ++s) {
    DigitalState cur = g.state(s);
    for (auto& mv : enumerate_moves(m, g.ceilings, cur)) {
      succ.clear();
      for (const auto& [next, prob] : mv.successors) succ.push_back({add(next), prob.to_double()});
      for (std::size_t k = 0; k < prices.size(); ++k) prices[k] = static_cast<double>(mv.prices[k]);
      tsg.add_choice(s, std::move(mv.label), prices, succ);
    }
  }
  g.game = tsg.finish();
  return g;
}

}  // namespace tptg
