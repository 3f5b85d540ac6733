#include "vpe/saturation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

namespace vpe {

namespace {

uint64_t key2(uint32_t a, uint32_t b) { return (static_cast<uint64_t>(a) << 32) | b; }

TargetSet normalized(TargetSet t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

void PAutomaton::mark_final(uint32_t s) {
  if (s >= final_.size()) final_.resize(std::max<size_t>(s + 1, n_states_), false);
  final_[s] = true;
}

bool PAutomaton::covered(uint32_t from, uint32_t symbol, const TargetSet& targets) const {
  for (uint32_t tid : head_transitions(from, symbol)) {
    const TargetSet& s = trans_[tid].targets;
    if (s.size() <= targets.size() &&
        std::includes(targets.begin(), targets.end(), s.begin(), s.end()))
      return true;
  }
  return false;
}

int64_t PAutomaton::add_transition(uint32_t from, uint32_t symbol, TargetSet targets, Justification just) {
  targets = normalized(std::move(targets));
  // a transition demanding a superset of an existing one accepts nothing new
  if (covered(from, symbol, targets)) return -1;
  uint32_t id = static_cast<uint32_t>(trans_.size());
  trans_.push_back(ATransition{from, symbol, std::move(targets), std::move(just)});
  by_head_[key2(from, symbol)].push_back(id);
  return id;
}

const std::vector<uint32_t>& PAutomaton::head_transitions(uint32_t state, uint32_t symbol) const {
  static const std::vector<uint32_t> none;
  auto it = by_head_.find(key2(state, symbol));
  return it == by_head_.end() ? none : it->second;
}

bool PAutomaton::accepts(uint32_t state, std::span<const uint32_t> word) const {
  std::unordered_map<uint64_t, bool> memo;
  std::function<bool(uint32_t, size_t)> rec = [&](uint32_t s, size_t i) -> bool {
    if (i == word.size()) return is_final(s);
    uint64_t k = key2(s, static_cast<uint32_t>(i));
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (uint32_t tid : head_transitions(s, word[i])) {
      bool all = true;
      for (uint32_t u : trans_[tid].targets) all = all && rec(u, i + 1);
      if (all) { ok = true; break; }
    }
    memo.emplace(k, ok);
    return ok;
  };
  return rec(state, 0);
}

bool PAutomaton::nondeterministic() const {
  for (const ATransition& t : trans_)
    if (t.targets.size() != 1) return false;
  return true;
}

std::vector<std::tuple<uint32_t, uint32_t, TargetSet>> PAutomaton::transition_set() const {
  std::vector<std::tuple<uint32_t, uint32_t, TargetSet>> out;
  out.reserve(trans_.size());
  for (const ATransition& t : trans_) out.emplace_back(t.from, t.symbol, t.targets);
  std::sort(out.begin(), out.end());
  return out;
}

// --- target helpers -------------------------------------------------------

PAutomaton accepts_nothing(const VpdaSystem& sys) {
  return PAutomaton(static_cast<uint32_t>(sys.n_states()), static_cast<uint32_t>(sys.n_symbols()));
}

PAutomaton accepts_empty_stack_everywhere(const VpdaSystem& sys) {
  PAutomaton a = accepts_nothing(sys);
  for (uint32_t q = 0; q < sys.n_states(); ++q) a.mark_final(q);
  return a;
}

PAutomaton accepts_single(const VpdaSystem& sys, const Configuration& c) {
  PAutomaton a = accepts_nothing(sys);
  uint32_t cur = c.state;
  for (uint32_t sym : c.stack) {
    uint32_t nxt = a.add_state();
    a.add_transition(cur, sym, {nxt});
    cur = nxt;
  }
  a.mark_final(cur);
  return a;
}

PAutomaton accepts_head_any_tail(const VpdaSystem& sys, StateId p, SymbolId x) {
  PAutomaton a = accepts_nothing(sys);
  uint32_t f = a.add_state();
  a.add_transition(p, x, {f});
  for (uint32_t s = 0; s < sys.n_symbols(); ++s) a.add_transition(f, s, {f});
  a.mark_final(f);
  return a;
}

// --- shared saturation engine ----------------------------------------------

namespace {

struct RuleTable {
  std::vector<EngineRule> rules;
  std::vector<std::pair<uint32_t, uint32_t>> heads;
  std::vector<std::vector<uint32_t>> rules_of_head;
  std::vector<Player> owner;
  std::vector<char> losing;
  std::unordered_map<uint64_t, uint32_t> head_id;

  // retrigger indices: a new transition (c, s, ...) can complete runs of
  // rules whose right-hand side starts at control c with symbol s, or whose
  // second pushed symbol is s (the state in the middle of such a run is not
  // statically known, so those heads are retried whenever symbol s gains a
  // transition anywhere).
  std::unordered_map<uint64_t, std::vector<uint32_t>> first_uses;
  std::unordered_map<uint32_t, std::vector<uint32_t>> second_uses;

  uint32_t ensure_head(uint32_t c, uint32_t s, Player own, bool lose) {
    auto [it, fresh] = head_id.try_emplace(key2(c, s), static_cast<uint32_t>(heads.size()));
    if (fresh) {
      heads.emplace_back(c, s);
      rules_of_head.emplace_back();
      owner.push_back(own);
      losing.push_back(lose);
    }
    return it->second;
  }

  void add_rule(uint32_t head, const EngineRule& r) {
    uint32_t id = static_cast<uint32_t>(rules.size());
    rules.push_back(r);
    rules_of_head[head].push_back(id);
    if (r.pushed_len >= 1) first_uses[key2(r.dst, r.pushed[0])].push_back(head);
    if (r.pushed_len == 2) second_uses[r.pushed[1]].push_back(head);
  }
};

struct RunCandidate {
  TargetSet targets;
  StepRun run;
};

// All distinct leaf-state sets of automaton runs over the rule's right-hand
// side, starting at the rule's destination control.
std::vector<RunCandidate> enumerate_runs(const PAutomaton& aut, const EngineRule& r, Budget& budget) {
  std::vector<RunCandidate> out;
  std::set<TargetSet> seen;
  auto push = [&](TargetSet t, StepRun run) {
    t = normalized(std::move(t));
    // a candidate the head already covers dies here instead of fanning out
    // into the defender combinations below
    if (aut.covered(r.control, r.symbol, t)) return;
    if (seen.insert(t).second) out.push_back(RunCandidate{std::move(t), std::move(run)});
  };

  if (r.pushed_len == 0) {
    push({r.dst}, StepRun{});
    return out;
  }
  for (uint32_t t1 : aut.head_transitions(r.dst, r.pushed[0])) {
    TargetSet mid = aut.transitions()[t1].targets;
    if (r.pushed_len == 1) {
      budget.charge_position();
      push(std::move(mid), StepRun{static_cast<int32_t>(t1), {}});
      continue;
    }
    // one transition over the second symbol per intermediate state; an empty
    // mid set is already a run (everything below the first symbol accepted)
    std::vector<std::pair<uint32_t, uint32_t>> chosen;
    std::function<void(size_t, TargetSet)> rec = [&](size_t i, TargetSet acc) {
      // the set only grows along the recursion, so a covered prefix is dead
      if (aut.covered(r.control, r.symbol, normalized(acc))) return;
      if (i == mid.size()) {
        budget.charge_position();
        push(std::move(acc), StepRun{static_cast<int32_t>(t1), chosen});
        return;
      }
      uint32_t u = mid[i];
      for (uint32_t t2 : aut.head_transitions(u, r.pushed[1])) {
        const TargetSet& leaves = aut.transitions()[t2].targets;
        TargetSet next = acc;
        next.insert(next.end(), leaves.begin(), leaves.end());
        chosen.emplace_back(u, t2);
        rec(i + 1, std::move(next));
        chosen.pop_back();
      }
    };
    rec(0, {});
  }
  return out;
}

void saturate(const RuleTable& rt, PAutomaton& aut, Budget& budget) {
  std::deque<uint32_t> queue;
  std::vector<char> queued(rt.heads.size(), 1);
  for (uint32_t h = 0; h < rt.heads.size(); ++h) queue.push_back(h);

  auto enqueue = [&](uint32_t h) {
    if (!queued[h]) { queued[h] = 1; queue.push_back(h); }
  };

  auto try_add = [&](uint32_t h, TargetSet targets, Justification just) {
    auto [c, s] = rt.heads[h];
    int64_t id = aut.add_transition(c, s, std::move(targets), std::move(just));
    if (id < 0) return;
    budget.charge_transition();
    auto itf = rt.first_uses.find(key2(c, s));
    if (itf != rt.first_uses.end())
      for (uint32_t h2 : itf->second) enqueue(h2);
    auto its = rt.second_uses.find(s);
    if (its != rt.second_uses.end())
      for (uint32_t h2 : its->second) enqueue(h2);
  };

  // heads already won by the reaching player, whatever the stack below
  for (uint32_t h = 0; h < rt.heads.size(); ++h)
    if (rt.losing[h]) try_add(h, {}, Justification{Justification::Kind::Goal, 0, {}, {}});

  while (!queue.empty()) {
    uint32_t h = queue.front();
    queue.pop_front();
    queued[h] = 0;
    budget.check_wall();

    const auto& rids = rt.rules_of_head[h];
    if (rt.owner[h] == Player::Attacker) {
      for (uint32_t rid : rids)
        for (RunCandidate& cand : enumerate_runs(aut, rt.rules[rid], budget))
          try_add(h, std::move(cand.targets),
                  Justification{Justification::Kind::Choice, rid, std::move(cand.run), {}});
    } else {
      // one run per rule; a rule with no run yet blocks every combination,
      // and a head with no rules at all yields the empty combination (stuck)
      std::vector<std::vector<RunCandidate>> per_rule;
      per_rule.reserve(rids.size());
      bool blocked = false;
      for (uint32_t rid : rids) {
        per_rule.push_back(enumerate_runs(aut, rt.rules[rid], budget));
        if (per_rule.back().empty()) { blocked = true; break; }
      }
      if (blocked) continue;
      // small candidate sets first: cheap combinations come out early and
      // their coverage prunes the expensive ones
      for (auto& cands : per_rule)
        std::sort(cands.begin(), cands.end(), [](const RunCandidate& a, const RunCandidate& b) {
          return a.targets.size() < b.targets.size();
        });
      auto [hc, hs] = rt.heads[h];
      std::set<TargetSet> emitted;
      std::vector<std::pair<uint32_t, StepRun>> parts;
      std::function<void(size_t, TargetSet)> rec = [&](size_t i, TargetSet acc) {
        acc = normalized(std::move(acc));
        if (aut.covered(hc, hs, acc)) return;  // every completion stays covered
        if (i == per_rule.size()) {
          if (!emitted.insert(acc).second) return;
          try_add(h, acc, Justification{Justification::Kind::Combination, 0, {}, parts});
          return;
        }
        for (const RunCandidate& cand : per_rule[i]) {
          TargetSet next = acc;
          next.insert(next.end(), cand.targets.begin(), cand.targets.end());
          parts.emplace_back(rids[i], cand.run);
          budget.charge_position();
          rec(i + 1, std::move(next));
          parts.pop_back();
        }
      };
      rec(0, {});
    }
  }
}

void require_no_transitions_into_controls(const PAutomaton& a, const char* who) {
  for (const ATransition& t : a.transitions())
    for (uint32_t u : t.targets)
      if (u < a.n_controls())
        throw std::invalid_argument(std::string(who) +
                                    ": input automaton has a transition into a designated state");
}

RuleTable system_rules(const VpdaSystem& sys) {
  RuleTable rt;
  for (const Rule& r : sys.rules) {
    if (r.pushed.size() > 2)
      throw std::invalid_argument("saturation requires rules pushing at most 2 symbols");
    uint32_t h = rt.ensure_head(r.src_state, r.src_symbol, Player::Attacker, false);
    EngineRule er{r.src_state, r.src_symbol, r.dst_state, static_cast<uint32_t>(r.pushed.size()), {0, 0}, 0};
    for (size_t i = 0; i < r.pushed.size(); ++i) er.pushed[i] = r.pushed[i];
    rt.add_rule(h, er);
  }
  return rt;
}

}  // namespace

PAutomaton pre_star(const VpdaSystem& sys, const PAutomaton& target, const Limits& limits) {
  if (target.n_controls() != sys.n_states() || target.n_symbols() < sys.n_symbols())
    throw std::invalid_argument("pre_star: target automaton does not match the system");
  require_no_transitions_into_controls(target, "pre_star");
  Budget budget(limits);
  PAutomaton aut = target;
  RuleTable rt = system_rules(sys);
  saturate(rt, aut, budget);
  return aut;
}

PAutomaton post_star(const VpdaSystem& sys, const PAutomaton& source, const Limits& limits) {
  if (source.n_controls() != sys.n_states() || source.n_symbols() < sys.n_symbols())
    throw std::invalid_argument("post_star: source automaton does not match the system");
  if (!source.nondeterministic())
    throw std::invalid_argument("post_star: source automaton must be nondeterministic");
  require_no_transitions_into_controls(source, "post_star");

  Budget budget(limits);
  PAutomaton aut = source;
  const uint32_t n_controls = aut.n_controls();

  // one helper state per push rule, created up front for determinism
  std::vector<int64_t> push_state(sys.rules.size(), -1);
  for (size_t i = 0; i < sys.rules.size(); ++i) {
    if (sys.rules[i].pushed.size() > 2)
      throw std::invalid_argument("saturation requires rules pushing at most 2 symbols");
    if (sys.rules[i].pushed.size() == 2) push_state[i] = aut.add_state();
  }

  // eps[q]: runs of control q may silently start anywhere a pop landed
  std::vector<std::set<uint32_t>> eps(n_controls);
  std::unordered_map<uint32_t, std::vector<uint32_t>> eps_rev;
  std::unordered_map<uint32_t, std::vector<uint32_t>> from_index;

  std::deque<uint32_t> trans_queue;
  std::deque<std::pair<uint32_t, uint32_t>> eps_queue;
  for (uint32_t t = 0; t < aut.transitions().size(); ++t) {
    from_index[aut.transitions()[t].from].push_back(t);
    trans_queue.push_back(t);
  }

  auto add_trans = [&](uint32_t from, uint32_t sym, uint32_t to) {
    int64_t id = aut.add_transition(from, sym, {to});
    if (id >= 0) {
      budget.charge_transition();
      from_index[from].push_back(static_cast<uint32_t>(id));
      trans_queue.push_back(static_cast<uint32_t>(id));
    }
  };
  auto add_eps = [&](uint32_t q, uint32_t s) {
    if (eps[q].insert(s).second) {
      budget.charge_position();
      eps_rev[s].push_back(q);
      eps_queue.emplace_back(q, s);
    }
  };
  auto apply_rules = [&](uint32_t control, uint32_t sym, uint32_t tail) {
    for (uint32_t ri : sys.head_rules(control, sym)) {
      const Rule& r = sys.rules[ri];
      switch (r.pushed.size()) {
        case 0: add_eps(r.dst_state, tail); break;
        case 1: add_trans(r.dst_state, r.pushed[0], tail); break;
        default:
          add_trans(r.dst_state, r.pushed[0], static_cast<uint32_t>(push_state[ri]));
          add_trans(static_cast<uint32_t>(push_state[ri]), r.pushed[1], tail);
      }
    }
  };

  while (!trans_queue.empty() || !eps_queue.empty()) {
    budget.check_wall();
    if (!trans_queue.empty()) {
      uint32_t tid = trans_queue.front();
      trans_queue.pop_front();
      ATransition t = aut.transitions()[tid];  // copy: the vector may grow
      uint32_t tail = t.targets[0];
      if (t.from < n_controls) apply_rules(t.from, t.symbol, tail);
      if (auto it = eps_rev.find(t.from); it != eps_rev.end()) {
        std::vector<uint32_t> qs = it->second;  // snapshot: may grow underneath
        for (uint32_t q : qs) apply_rules(q, t.symbol, tail);
      }
      continue;
    }
    auto [q, s] = eps_queue.front();
    eps_queue.pop_front();
    std::vector<uint32_t> tids;
    if (auto it = from_index.find(s); it != from_index.end()) tids = it->second;
    for (uint32_t tid : tids) {
      ATransition t = aut.transitions()[tid];
      apply_rules(q, t.symbol, t.targets[0]);
    }
  }

  // fold the silent starts away; every effective pair was already processed,
  // so these additions need no further propagation
  for (uint32_t q = 0; q < n_controls; ++q) {
    for (uint32_t s : eps[q]) {
      if (aut.is_final(s)) aut.mark_final(q);
      std::vector<uint32_t> tids;
      if (auto it = from_index.find(s); it != from_index.end()) tids = it->second;
      for (uint32_t tid : tids) {
        ATransition t = aut.transitions()[tid];
        aut.add_transition(q, t.symbol, t.targets);
      }
    }
  }
  return aut;
}

bool member(const PAutomaton& aut, const Configuration& c) {
  return aut.accepts(c.state, std::span<const uint32_t>(c.stack));
}

bool infinite_intersection(const PAutomaton& a1, const PAutomaton& a2, StateId control) {
  if (!a1.nondeterministic() || !a2.nondeterministic())
    throw std::invalid_argument("infinite_intersection requires nondeterministic automata");
  if (control >= a1.n_controls() || control >= a2.n_controls())
    throw std::invalid_argument("infinite_intersection: control state out of range");
  const uint32_t n_sym = std::min(a1.n_symbols(), a2.n_symbols());

  std::unordered_map<uint64_t, uint32_t> id;
  std::vector<std::pair<uint32_t, uint32_t>> nodes;
  std::vector<std::vector<uint32_t>> adj;
  std::deque<uint32_t> queue;
  auto node = [&](uint32_t u, uint32_t v) -> uint32_t {
    auto [it, fresh] = id.try_emplace(key2(u, v), static_cast<uint32_t>(nodes.size()));
    if (fresh) {
      nodes.emplace_back(u, v);
      adj.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  node(control, control);
  while (!queue.empty()) {
    uint32_t n = queue.front();
    queue.pop_front();
    auto [u, v] = nodes[n];
    for (uint32_t x = 0; x < n_sym; ++x) {
      for (uint32_t t1 : a1.head_transitions(u, x)) {
        for (uint32_t t2 : a2.head_transitions(v, x)) {
          uint32_t m = node(a1.transitions()[t1].targets[0], a2.transitions()[t2].targets[0]);
          adj[n].push_back(m);
        }
      }
    }
  }

  // keep only pairs that can still reach a jointly accepting pair
  std::vector<std::vector<uint32_t>> radj(nodes.size());
  for (uint32_t n = 0; n < nodes.size(); ++n)
    for (uint32_t m : adj[n]) radj[m].push_back(n);
  std::vector<char> useful(nodes.size(), 0);
  std::deque<uint32_t> bfs;
  for (uint32_t n = 0; n < nodes.size(); ++n)
    if (a1.is_final(nodes[n].first) && a2.is_final(nodes[n].second)) {
      useful[n] = 1;
      bfs.push_back(n);
    }
  while (!bfs.empty()) {
    uint32_t n = bfs.front();
    bfs.pop_front();
    for (uint32_t m : radj[n])
      if (!useful[m]) {
        useful[m] = 1;
        bfs.push_back(m);
      }
  }

  // a cycle among useful pairs pumps arbitrarily long common stacks
  std::vector<uint8_t> color(nodes.size(), 0);
  for (uint32_t start = 0; start < nodes.size(); ++start) {
    if (!useful[start] || color[start]) continue;
    std::vector<std::pair<uint32_t, size_t>> stack;
    stack.emplace_back(start, 0);
    color[start] = 1;
    while (!stack.empty()) {
      auto [n, i] = stack.back();
      if (i < adj[n].size()) {
        ++stack.back().second;
        uint32_t m = adj[n][i];
        if (!useful[m]) continue;
        if (color[m] == 1) return true;
        if (color[m] == 0) {
          color[m] = 1;
          stack.emplace_back(m, 0);
        }
      } else {
        color[n] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

GameSolution solve_attacker_reachability(const GameArena& arena, uint32_t init_control,
                                         std::span<const uint32_t> init_word, const Limits& limits) {
  Budget budget(limits);
  RuleTable rt;
  std::vector<std::set<uint32_t>> pop_targets;                          // per head
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> first_subs;   // head -> (head, local rule)
  std::vector<std::vector<uint32_t>> second_subs;                       // head -> origin heads
  std::vector<std::vector<size_t>> init_subs;                           // head -> word positions
  std::set<std::pair<size_t, uint32_t>> chained;
  uint32_t max_control = init_control, max_symbol = 0;
  for (uint32_t s : init_word) max_symbol = std::max(max_symbol, s);

  // the arena is explored lazily; tasks keep the mutual recursion flat
  std::deque<std::function<void()>> tasks;
  std::function<uint32_t(uint32_t, uint32_t)> add_head;
  std::function<void(uint32_t, uint32_t, uint32_t)> expose;
  std::function<void(uint32_t, uint32_t)> record_pop;
  std::function<void(size_t, uint32_t)> chain;

  // heads reachable from the initial configuration, closed under: firing a
  // rule (its first pushed symbol becomes a head), vanishing prefixes (pops
  // of a head expose the symbol below under the popped-to control), and
  // walking the initial word as its prefixes become poppable
  add_head = [&](uint32_t c, uint32_t s) -> uint32_t {
    if (auto probe = rt.head_id.find(key2(c, s)); probe != rt.head_id.end()) return probe->second;
    budget.charge_position();
    uint32_t h = rt.ensure_head(c, s, arena.owner(c, s), arena.defender_losing(c, s));
    pop_targets.emplace_back();
    first_subs.emplace_back();
    second_subs.emplace_back();
    init_subs.emplace_back();
    max_control = std::max(max_control, c);
    max_symbol = std::max(max_symbol, s);
    for (EngineRule r : arena.moves(c, s)) {
      r.control = c;
      r.symbol = s;
      max_control = std::max(max_control, r.dst);
      for (uint32_t i = 0; i < r.pushed_len; ++i) max_symbol = std::max(max_symbol, r.pushed[i]);
      uint32_t local = static_cast<uint32_t>(rt.rules_of_head[h].size());
      rt.add_rule(h, r);
      if (r.pushed_len == 0) {
        tasks.push_back([&, h, dst = r.dst] { record_pop(h, dst); });
      } else {
        tasks.push_back([&, h, local, dst = r.dst, s0 = r.pushed[0]] {
          uint32_t child = add_head(dst, s0);
          first_subs[child].emplace_back(h, local);
          std::vector<uint32_t> known(pop_targets[child].begin(), pop_targets[child].end());
          for (uint32_t c3 : known) expose(h, local, c3);
        });
      }
    }
    return h;
  };

  // the first symbol pushed by rule `local` of head h can vanish, leaving
  // control c3 on top of whatever else that rule pushed
  expose = [&](uint32_t h, uint32_t local, uint32_t c3) {
    EngineRule r = rt.rules[rt.rules_of_head[h][local]];  // copy: add_head below grows rt.rules
    if (r.pushed_len == 1) {
      record_pop(h, c3);
      return;
    }
    uint32_t child = add_head(c3, r.pushed[1]);
    second_subs[child].push_back(h);
    std::vector<uint32_t> known(pop_targets[child].begin(), pop_targets[child].end());
    for (uint32_t c4 : known) record_pop(h, c4);
  };

  record_pop = [&](uint32_t h, uint32_t c) {
    if (!pop_targets[h].insert(c).second) return;
    max_control = std::max(max_control, c);
    for (auto [h2, local] : first_subs[h])
      tasks.push_back([&, h2 = h2, local = local, c] { expose(h2, local, c); });
    for (uint32_t h2 : second_subs[h])
      tasks.push_back([&, h2, c] { record_pop(h2, c); });
    for (size_t i : init_subs[h])
      tasks.push_back([&, i, c] { chain(i + 1, c); });
  };

  chain = [&](size_t i, uint32_t c) {
    if (i >= init_word.size()) return;
    if (!chained.emplace(i, c).second) return;
    uint32_t h = add_head(c, init_word[i]);
    init_subs[h].push_back(i);
    std::vector<uint32_t> known(pop_targets[h].begin(), pop_targets[h].end());
    for (uint32_t c2 : known) tasks.push_back([&, i, c2] { chain(i + 1, c2); });
  };

  if (!init_word.empty()) chain(0, init_control);
  while (!tasks.empty()) {
    auto task = std::move(tasks.front());
    tasks.pop_front();
    task();
    budget.check_wall();
  }

  PAutomaton aut(max_control + 1, max_symbol + 1);
  saturate(rt, aut, budget);

  GameSolution sol{.winning = std::move(aut)};
  for (uint32_t h = 0; h < rt.heads.size(); ++h)
    sol.head_rules[key2(rt.heads[h].first, rt.heads[h].second)] = rt.rules_of_head[h];
  sol.rules = std::move(rt.rules);
  sol.heads = std::move(rt.heads);
  sol.head_owner = std::move(rt.owner);
  sol.head_losing.assign(rt.losing.begin(), rt.losing.end());
  sol.head_id = std::move(rt.head_id);
  sol.heads_materialized = sol.heads.size();
  sol.transitions_added = budget.transitions();
  return sol;
}

}  // namespace vpe
