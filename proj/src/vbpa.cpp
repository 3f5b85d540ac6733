#include "vpe/vbpa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace vpe {

namespace {

void require_vbpa(const VpdaSystem& sys) {
  if (!sys.is_vbpa)
    throw std::invalid_argument("not a vBPA: the system must be visibly pushdown "
                                "with a single control state");
}

std::string fresh_name(std::string base, const std::unordered_map<std::string, uint32_t>& taken) {
  while (taken.count(base)) base += "'";
  return base;
}

}  // namespace

size_t FiniteLts::n_transitions() const {
  size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

uint32_t FiniteLts::state(std::string_view name) const {
  for (uint32_t i = 0; i < state_names.size(); ++i)
    if (state_names[i] == name) return i;
  throw std::invalid_argument("unknown state: " + std::string(name));
}

std::vector<uint32_t> FiniteLts::enabled(uint32_t s) const {
  std::vector<uint32_t> out;
  for (auto [a, t] : edges.at(s)) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string FiniteLts::to_text() const {
  std::string out;
  for (uint32_t s = 0; s < edges.size(); ++s)
    for (auto [a, t] : edges[s]) {
      out += state_names[s];
      out += " -";
      out += action_names[a];
      out += "-> ";
      out += state_names[t];
      out += "\n";
    }
  return out;
}

std::vector<SymbolId> empties(const VpdaSystem& sys) {
  require_vbpa(sys);
  std::vector<char> drains(sys.n_symbols(), 0);
  std::vector<uint32_t> need(sys.rules.size());
  // one entry per pushed occurrence, so duplicates decrement twice
  std::vector<std::vector<uint32_t>> uses(sys.n_symbols());
  std::deque<SymbolId> queue;
  auto mark = [&](SymbolId x) {
    if (!drains[x]) {
      drains[x] = 1;
      queue.push_back(x);
    }
  };
  for (uint32_t r = 0; r < sys.rules.size(); ++r) {
    need[r] = static_cast<uint32_t>(sys.rules[r].pushed.size());
    for (SymbolId s : sys.rules[r].pushed) uses[s].push_back(r);
    if (need[r] == 0) mark(sys.rules[r].src_symbol);
  }
  while (!queue.empty()) {
    SymbolId x = queue.front();
    queue.pop_front();
    for (uint32_t r : uses[x])
      if (--need[r] == 0) mark(sys.rules[r].src_symbol);
  }
  std::vector<SymbolId> out;
  for (SymbolId s = 0; s < drains.size(); ++s)
    if (drains[s]) out.push_back(s);
  return out;
}

FiniteLts reduce_to_finite(const VpdaSystem& sys) {
  require_vbpa(sys);
  std::vector<char> drains(sys.n_symbols(), 0);
  for (SymbolId s : empties(sys)) drains[s] = 1;

  FiniteLts out;
  out.state_names = sys.symbol_names;
  std::unordered_map<std::string, uint32_t> state_ids;
  for (uint32_t i = 0; i < out.state_names.size(); ++i) state_ids.emplace(out.state_names[i], i);
  auto add_state = [&](std::string name) {
    name = fresh_name(std::move(name), state_ids);
    uint32_t id = static_cast<uint32_t>(out.state_names.size());
    state_ids.emplace(name, id);
    out.state_names.push_back(std::move(name));
    return id;
  };
  uint32_t eps = add_state("eps");

  out.action_names = sys.alphabet.names;
  uint32_t act1 = static_cast<uint32_t>(out.action_names.size());
  out.action_names.push_back("#1");
  out.action_names.push_back("#2");

  std::map<std::pair<SymbolId, SymbolId>, uint32_t> pair_states;
  out.edges.resize(out.state_names.size());
  auto add_edge = [&](uint32_t s, uint32_t a, uint32_t t) {
    if (s >= out.edges.size()) out.edges.resize(s + 1);
    out.edges[s].emplace_back(a, t);
  };

  size_t call_rules = 0;
  for (const Rule& r : sys.rules) {
    switch (sys.alphabet.class_of(r.action)) {
      case ActionClass::Return:
        add_edge(r.src_symbol, r.action, eps);
        break;
      case ActionClass::Internal:
        add_edge(r.src_symbol, r.action, r.pushed[0]);
        break;
      case ActionClass::Call: {
        ++call_rules;
        std::pair<SymbolId, SymbolId> key{r.pushed[0], r.pushed[1]};
        auto it = pair_states.find(key);
        if (it == pair_states.end()) {
          uint32_t id = add_state("(" + sys.symbol_names[key.first] + "," +
                                  sys.symbol_names[key.second] + ")");
          it = pair_states.emplace(key, id).first;
          add_edge(id, act1, key.first);
          if (drains[key.first]) add_edge(id, act1 + 1, key.second);
        }
        add_edge(r.src_symbol, r.action, it->second);
        break;
      }
    }
  }
  out.edges.resize(out.state_names.size());
  for (auto& e : out.edges) std::sort(e.begin(), e.end());

  // linear-size guarantee of the construction
  if (out.n_states() != sys.n_symbols() + 1 + pair_states.size() ||
      pair_states.size() > call_rules ||
      out.n_transitions() > sys.rules.size() + 2 * pair_states.size())
    throw std::logic_error("finite reduction exceeded its size bound");
  return out;
}

namespace {

// all-pairs bisimilarity classes by signature refinement
std::vector<uint32_t> bisim_classes(const FiniteLts& lts) {
  size_t n = lts.n_states();
  std::vector<uint32_t> cls(n, 0);
  size_t n_classes = 1;
  for (;;) {
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> sig(n);
    for (size_t s = 0; s < n; ++s) {
      for (auto [a, t] : lts.edges[s]) sig[s].emplace_back(a, cls[t]);
      std::sort(sig[s].begin(), sig[s].end());
      sig[s].erase(std::unique(sig[s].begin(), sig[s].end()), sig[s].end());
    }
    std::vector<uint32_t> order(n);
    for (size_t s = 0; s < n; ++s) order[s] = static_cast<uint32_t>(s);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      if (cls[a] != cls[b]) return cls[a] < cls[b];
      return sig[a] < sig[b];
    });
    std::vector<uint32_t> next(n);
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
      if (i > 0 && (cls[order[i]] != cls[order[i - 1]] || sig[order[i]] != sig[order[i - 1]]))
        ++count;
      next[order[i]] = static_cast<uint32_t>(count);
    }
    ++count;
    if (count == n_classes) return cls;
    cls = std::move(next);
    n_classes = count;
  }
}

// Defender-safety evaluation of one directional relation (or bisim) on the
// finite LTS: materialize the pairs reachable from the root, then strip
// Attacker-won positions until a fixpoint remains.
bool pair_game(const FiniteLts& lts, uint32_t s0, uint32_t t0, Relation rel) {
  uint8_t init_mode = rel == Relation::TwoSimPre ? 1 : 0;
  auto key = [&](uint32_t x, uint32_t y, uint8_t m) {
    return (static_cast<uint64_t>(x) * lts.n_states() + y) * 2 + m;
  };

  auto head_ok = [&](uint32_t x, uint32_t y) {
    switch (rel) {
      case Relation::CsimPre:
        return lts.edges[x].empty() == lts.edges[y].empty();
      case Relation::RsimPre:
        return lts.enabled(x) == lts.enabled(y);
      default:
        return true;
    }
  };
  auto attacker_sides = [&](uint8_t mode) -> std::vector<std::pair<bool, uint8_t>> {
    switch (rel) {
      case Relation::SimPre:
      case Relation::CsimPre:
      case Relation::RsimPre:
        return {{false, mode}};
      case Relation::Bisim:
        return {{false, mode}, {true, mode}};
      case Relation::TwoSimPre:
        if (mode == 1) return {{false, 1}, {true, 0}};
        return {{true, 0}};
      default:
        throw std::logic_error("directional relation expected");
    }
  };

  struct Node {
    uint32_t x, y;
    uint8_t mode;
    bool head;
    // one entry per attack, listing the answered successor nodes
    std::vector<std::vector<uint32_t>> rounds;
  };
  std::vector<Node> nodes;
  std::unordered_map<uint64_t, uint32_t> index;
  std::deque<uint32_t> queue;
  auto intern = [&](uint32_t x, uint32_t y, uint8_t m) {
    auto [it, fresh] = index.try_emplace(key(x, y, m), static_cast<uint32_t>(nodes.size()));
    if (fresh) {
      nodes.push_back(Node{x, y, m, head_ok(x, y), {}});
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(s0, t0, init_mode);
  while (!queue.empty()) {
    uint32_t n = queue.front();
    queue.pop_front();
    uint32_t x = nodes[n].x, y = nodes[n].y;
    uint8_t mode = nodes[n].mode;
    std::vector<std::vector<uint32_t>> rounds;
    for (auto [right_side, mode2] : attacker_sides(mode)) {
      uint32_t from = right_side ? y : x;
      uint32_t to = right_side ? x : y;
      for (auto [a, from2] : lts.edges[from]) {
        std::vector<uint32_t> answers;
        for (auto [b, to2] : lts.edges[to]) {
          if (b != a) continue;
          answers.push_back(right_side ? intern(to2, from2, mode2) : intern(from2, to2, mode2));
        }
        rounds.push_back(std::move(answers));
      }
    }
    nodes[n].rounds = std::move(rounds);
  }

  std::vector<char> good(nodes.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t n = 0; n < nodes.size(); ++n) {
      if (!good[n]) continue;
      bool ok = nodes[n].head;
      for (const auto& answers : nodes[n].rounds) {
        if (!ok) break;
        bool answered = false;
        for (uint32_t q : answers)
          if (good[q]) { answered = true; break; }
        ok = ok && answered;
      }
      if (!ok) {
        good[n] = 0;
        changed = true;
      }
    }
  }
  return good[index.at(key(s0, t0, init_mode))];
}

}  // namespace

bool finite_check(const FiniteLts& lts, uint32_t s, uint32_t t, Relation rel) {
  if (s >= lts.n_states() || t >= lts.n_states())
    throw std::invalid_argument("unknown state id");
  if (rel == Relation::Bisim) {
    auto cls = bisim_classes(lts);
    return cls[s] == cls[t];
  }
  Relation pre = directional_part(rel);
  if (!pair_game(lts, s, t, pre)) return false;
  if (relation_is_equivalence(rel)) return pair_game(lts, t, s, pre);
  return true;
}

bool finite_check(const FiniteLts& lts, std::string_view s, std::string_view t, Relation rel) {
  return finite_check(lts, lts.state(s), lts.state(t), rel);
}

bool check_relation_vbpa(const VpdaSystem& sys, SymbolId left, SymbolId right, Relation rel) {
  require_vbpa(sys);
  if (left >= sys.n_symbols() || right >= sys.n_symbols())
    throw std::invalid_argument("unknown stack symbol id");
  FiniteLts lts = reduce_to_finite(sys);
  // symbol ids double as state ids of the reduction
  return finite_check(lts, left, right, rel);
}

}  // namespace vpe
