#include "vpe/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace vpe {

namespace {

bool clean_name(const std::string& name) {
  if (name.empty()) return false;
  for (char ch : name) {
    if (std::isspace(static_cast<unsigned char>(ch))) return false;
    if (std::string_view(":.-()#,").find(ch) != std::string_view::npos) return false;
  }
  return true;
}

bool reserved_name(const std::string& name) {
  static const char* taken[] = {"p", "p'", "t", "a", "e", "i", "I", "Z"};
  for (const char* s : taken)
    if (name == s) return true;
  return name.size() >= 2 && (name.compare(0, 2, "t_") == 0 || name.compare(0, 2, "d_") == 0);
}

[[noreturn]] void afa_error(const std::string& msg) {
  throw std::invalid_argument("afa: " + msg);
}

}  // namespace

std::vector<std::string> AfaSpec::states() const {
  std::vector<std::string> out = existential;
  out.insert(out.end(), universal.begin(), universal.end());
  return out;
}

void AfaSpec::validate() const {
  std::set<std::string> seen;
  for (const std::string& q : states()) {
    if (!clean_name(q)) afa_error("bad state name '" + q + "'");
    if (reserved_name(q) || q.back() == '\'')
      afa_error("state name '" + q + "' is reserved by the hardness gadget");
    if (!seen.insert(q).second) afa_error("state '" + q + "' declared twice");
  }
  if (seen.empty()) afa_error("no states");
  if (!seen.count(initial)) afa_error("unknown initial state '" + initial + "'");
  for (const std::string& q : finals)
    if (!seen.count(q)) afa_error("unknown final state '" + q + "'");
  if (delta.size() != seen.size()) afa_error("delta must cover every state exactly once");
  for (const auto& [q, succs] : delta) {
    if (!seen.count(q)) afa_error("delta for unknown state '" + q + "'");
    if (succs.empty()) afa_error("state '" + q + "' has no successors");
    std::set<std::string> uniq;
    for (const std::string& s : succs) {
      if (!seen.count(s)) afa_error("unknown successor '" + s + "' of '" + q + "'");
      if (!uniq.insert(s).second) afa_error("duplicate successor '" + s + "' of '" + q + "'");
    }
  }
}

AfaSpec parse_afa(std::string_view text) {
  AfaSpec afa;
  bool saw_init = false, saw_final = false;
  std::istringstream lines{std::string(text)};
  std::string line;
  int ln = 0;
  while (std::getline(lines, line)) {
    ++ln;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    auto rest = [&] {
      std::vector<std::string> out;
      for (std::string w; words >> w;) out.push_back(std::move(w));
      return out;
    };
    if (key == "exists:") {
      auto v = rest();
      afa.existential.insert(afa.existential.end(), v.begin(), v.end());
    } else if (key == "forall:") {
      auto v = rest();
      afa.universal.insert(afa.universal.end(), v.begin(), v.end());
    } else if (key == "init:") {
      auto v = rest();
      if (v.size() != 1 || saw_init) throw ParseError(ln, "init: wants exactly one state");
      afa.initial = v[0];
      saw_init = true;
    } else if (key == "final:") {
      if (saw_final) throw ParseError(ln, "final: given twice");
      afa.finals = rest();
      saw_final = true;
    } else if (key == "delta:") {
      auto v = rest();
      if (v.size() < 3 || v[1] != "->")
        throw ParseError(ln, "delta: wants 'state -> succ...'");
      if (afa.delta.count(v[0])) throw ParseError(ln, "second delta for '" + v[0] + "'");
      afa.delta[v[0]] = {v.begin() + 2, v.end()};
    } else {
      throw ParseError(ln, "unknown directive '" + key + "'");
    }
  }
  if (!saw_init) afa_error("missing init:");
  afa.validate();
  return afa;
}

bool afa_emptiness(const AfaSpec& afa) {
  afa.validate();
  std::vector<std::string> all = afa.states();
  size_t n = all.size();
  std::map<std::string, size_t> pos;
  for (size_t k = 0; k < n; ++k) pos[all[k]] = k;

  std::vector<char> acc(n, 0);
  for (const std::string& q : afa.finals) acc[pos[q]] = 1;
  std::set<std::vector<char>> seen;
  while (seen.insert(acc).second) {
    if (acc[pos.at(afa.initial)]) return false;
    std::vector<char> next(n, 0);
    for (size_t k = 0; k < n; ++k) {
      const std::string& q = all[k];
      bool existential = k < afa.existential.size();
      bool ok = !existential;
      for (const std::string& s : afa.delta.at(q)) {
        bool hit = acc[pos[s]];
        ok = existential ? (ok || hit) : (ok && hit);
      }
      next[k] = ok;
    }
    acc = std::move(next);
  }
  return true;
}

HardInstance gen_hard_v1ca(const AfaSpec& afa) {
  afa.validate();
  HardInstance out;
  VpdaSystem& sys = out.system;

  SymbolId top_i = sys.ensure_symbol("I");
  SymbolId top_z = sys.ensure_symbol("Z");
  ActionId act_i = sys.ensure_action("i", ActionClass::Call);
  ActionId act_a = sys.ensure_action("a", ActionClass::Internal);
  ActionId act_e = sys.ensure_action("e", ActionClass::Internal);

  std::vector<std::string> all = afa.states();
  auto plain = [&](const std::string& q) { return sys.ensure_state(q); };
  auto primed = [&](const std::string& q) { return sys.ensure_state(q + "'"); };
  auto forcing = [&](const std::string& q) { return sys.ensure_state("t_" + q); };
  auto drop = [&](const std::string& q) { return sys.ensure_action("d_" + q, ActionClass::Return); };

  StateId p = sys.ensure_state("p");
  StateId pp = sys.ensure_state("p'");
  StateId t = sys.ensure_state("t");

  // pumping phase: grow the counter, then hand over to the initial state
  StateId q0 = plain(afa.initial), q0p = primed(afa.initial);
  sys.add_rule(p, top_z, act_i, p, {top_i, top_z});
  sys.add_rule(pp, top_z, act_i, pp, {top_i, top_z});
  sys.add_rule(p, top_i, act_i, p, {top_i, top_i});
  sys.add_rule(pp, top_i, act_i, pp, {top_i, top_i});
  sys.add_rule(p, top_z, act_a, q0, {top_z});
  sys.add_rule(pp, top_z, act_a, q0p, {top_z});
  sys.add_rule(p, top_i, act_a, q0, {top_i});
  sys.add_rule(pp, top_i, act_a, q0p, {top_i});

  // existential states: Attacker picks the successor on either side
  for (const std::string& q : afa.existential)
    for (const std::string& s : afa.delta.at(q)) {
      sys.add_rule(plain(q), top_i, drop(s), plain(s), {});
      sys.add_rule(primed(q), top_i, drop(s), primed(s), {});
    }

  // universal states: Defender's Forcing hands the choice to Defender
  for (const std::string& q : afa.universal) {
    sys.add_rule(plain(q), top_i, act_a, t, {top_i});
    for (const std::string& s : afa.delta.at(q)) {
      sys.add_rule(plain(q), top_i, act_a, forcing(s), {top_i});
      sys.add_rule(primed(q), top_i, act_a, forcing(s), {top_i});
    }
  }
  for (const std::string& q : all) {
    sys.add_rule(t, top_i, drop(q), plain(q), {});
    sys.add_rule(forcing(q), top_i, drop(q), primed(q), {});
    for (const std::string& r : all)
      if (r != q) sys.add_rule(forcing(q), top_i, drop(r), plain(r), {});
  }

  // only a final state can move once the counter is spent
  for (const std::string& q : afa.finals) sys.add_rule(plain(q), top_z, act_e, plain(q), {top_z});

  sys.finalize();
  out.left = {p, {top_z}};
  out.right = {pp, {top_z}};
  return out;
}

RegularityInstance gen_regularity_instance(const VpdaSystem& bpa, SymbolId x) {
  if (bpa.n_states() != 1)
    throw std::invalid_argument("gen_regularity_instance: the input must have one control state");
  if (x >= bpa.n_symbols()) throw std::invalid_argument("gen_regularity_instance: unknown symbol");
  for (const Rule& r : bpa.rules)
    if (r.pushed.size() > 2)
      throw std::invalid_argument("gen_regularity_instance: a rule pushes more than two symbols");

  RegularityInstance out;
  VpdaSystem& sys = out.system;
  StateId u = sys.ensure_state(bpa.state_names[0]);
  for (const std::string& name : bpa.symbol_names) sys.ensure_symbol(name);

  std::set<std::string> taken(bpa.symbol_names.begin(), bpa.symbol_names.end());
  taken.insert(bpa.state_names[0]);
  auto fresh = [&](std::string name) {
    while (taken.count(name)) name += "'";
    taken.insert(name);
    return name;
  };
  SymbolId probe = sys.ensure_symbol(fresh(bpa.symbol_names[x] + "'"));
  SymbolId b = sys.ensure_symbol(fresh("B"));
  SymbolId c = sys.ensure_symbol(fresh("C"));
  SymbolId d = sys.ensure_symbol(fresh("D"));
  ActionId call = sys.ensure_action(fresh("c"), ActionClass::Call);
  ActionId ret = sys.ensure_action(fresh("r"), ActionClass::Return);
  ActionId intern = sys.ensure_action(fresh("i"), ActionClass::Internal);
  ActionId expose = sys.ensure_action(fresh("e"), ActionClass::Internal);

  // the original behaviour, relabelled by arity
  for (const Rule& r : bpa.rules) {
    ActionId a = r.pushed.size() == 2 ? call : r.pushed.size() == 1 ? intern : ret;
    sys.add_rule(u, r.src_symbol, a, u, std::vector<SymbolId>(r.pushed.begin(), r.pushed.end()));
  }

  // the popping ladder, reachable only by draining x
  sys.add_rule(u, probe, call, u, {x, b});
  sys.add_rule(u, b, expose, u, {c});
  sys.add_rule(u, c, call, u, {c, d});
  sys.add_rule(u, c, ret, u, {});
  sys.add_rule(u, d, ret, u, {});

  sys.finalize();
  out.probe = probe;
  return out;
}

VpdaSystem gen_random(const RandomSystemParams& params) {
  if (params.states == 0 || params.symbols == 0)
    throw std::invalid_argument("gen_random: need at least one state and one symbol");
  if (params.rules > 0 && params.calls + params.returns + params.internals == 0)
    throw std::invalid_argument("gen_random: rules requested but the alphabet is empty");

  VpdaSystem sys;
  for (uint32_t k = 0; k < params.states; ++k) sys.ensure_state("q" + std::to_string(k));
  for (uint32_t k = 0; k < params.symbols; ++k) sys.ensure_symbol("X" + std::to_string(k));
  std::vector<std::pair<ActionId, ActionClass>> actions;
  for (uint32_t k = 0; k < params.calls; ++k)
    actions.emplace_back(sys.ensure_action("c" + std::to_string(k), ActionClass::Call),
                         ActionClass::Call);
  for (uint32_t k = 0; k < params.returns; ++k)
    actions.emplace_back(sys.ensure_action("r" + std::to_string(k), ActionClass::Return),
                         ActionClass::Return);
  for (uint32_t k = 0; k < params.internals; ++k)
    actions.emplace_back(sys.ensure_action("i" + std::to_string(k), ActionClass::Internal),
                         ActionClass::Internal);

  std::mt19937_64 rng(params.seed);
  auto draw = [&](uint32_t bound) { return static_cast<uint32_t>(rng() % bound); };
  std::set<std::tuple<StateId, SymbolId, ActionId, StateId, std::vector<SymbolId>>> chosen;
  uint64_t budget = 20ull * params.rules + 200;
  while (chosen.size() < params.rules && budget-- > 0) {
    auto [a, cls] = actions[draw(static_cast<uint32_t>(actions.size()))];
    StateId src = draw(params.states), dst = draw(params.states);
    SymbolId top = draw(params.symbols);
    std::vector<SymbolId> pushed(arity(cls));
    for (SymbolId& s : pushed) s = draw(params.symbols);
    chosen.emplace(src, top, a, dst, std::move(pushed));
  }
  for (const auto& [src, top, a, dst, pushed] : chosen) sys.add_rule(src, top, a, dst, pushed);
  sys.finalize();
  return sys;
}

}  // namespace vpe
