#include "vpe/regularity.hpp"

#include <deque>
#include <map>

#include "vpe/saturation.hpp"

namespace vpe {

namespace {

void require_vpda(const VpdaSystem& sys) {
  if (!sys.is_vpda)
    throw std::invalid_argument("not a visibly pushdown system");
}

// One truncated-stack quotient attempt: nullopt when some play pops through
// the kept prefix of a truncated stack, otherwise the finite LTS of the
// quotient.  Nodes are (control, top prefix of <= d symbols, deeper?).
std::optional<FiniteLts> try_quotient(const VpdaSystem& sys, const Configuration& c, uint32_t d,
                                      Budget& budget, uint32_t* d_used) {
  struct Node {
    StateId state;
    std::vector<SymbolId> prefix;
    bool deeper;
    bool operator<(const Node& o) const {
      if (state != o.state) return state < o.state;
      if (deeper != o.deeper) return deeper < o.deeper;
      return prefix < o.prefix;
    }
  };
  std::map<Node, uint32_t> index;
  std::vector<Node> nodes;
  std::deque<uint32_t> queue;
  auto intern = [&](Node n) {
    auto [it, fresh] = index.try_emplace(std::move(n), static_cast<uint32_t>(nodes.size()));
    if (fresh) {
      budget.charge_position();
      nodes.push_back(it->first);
      queue.push_back(it->second);
    }
    return it->second;
  };

  Node init{c.state, c.stack, c.stack.size() > d};
  if (init.prefix.size() > d) init.prefix.resize(d);
  intern(std::move(init));

  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edges;
  while (!queue.empty()) {
    budget.check_wall();
    uint32_t id = queue.front();
    queue.pop_front();
    Node n = nodes[id];
    if (n.prefix.empty() && n.deeper) return std::nullopt;  // popped into the unknown
    if (edges.size() <= id) edges.resize(id + 1);
    if (n.prefix.empty()) continue;  // fully drained, no moves
    for (uint32_t rid : sys.head_rules(n.state, n.prefix.front())) {
      const Rule& r = sys.rules[rid];
      Node next{r.dst_state, {}, n.deeper};
      next.prefix.assign(r.pushed.begin(), r.pushed.end());
      next.prefix.insert(next.prefix.end(), n.prefix.begin() + 1, n.prefix.end());
      if (next.prefix.size() > d) {
        next.prefix.resize(d);
        next.deeper = true;
      }
      edges[id].emplace_back(r.action, intern(std::move(next)));
    }
  }
  edges.resize(nodes.size());

  FiniteLts out;
  out.action_names = sys.alphabet.names;
  for (const Node& n : nodes) {
    std::string name = sys.format_configuration({n.state, n.prefix});
    if (n.deeper) name += "...";
    out.state_names.push_back(std::move(name));
  }
  for (auto& e : edges) std::sort(e.begin(), e.end());
  out.edges = std::move(edges);
  if (d_used) *d_used = d;
  return out;
}

FiniteLts deepening_witness(const VpdaSystem& sys, const Configuration& c, const Limits& limits,
                            uint32_t* d_used) {
  Budget budget(limits);
  for (uint32_t d = 1;; ++d) {
    if (auto lts = try_quotient(sys, c, d, budget, d_used)) return std::move(*lts);
  }
}

}  // namespace

std::string RegularityReport::text() const {
  if (!regular)
    return "non-regular: head " + state + ":" + symbol + " provides unbounded popping";
  return "regular: remembered-top depth " + std::to_string(d_max) + ", quotient with " +
         std::to_string(quotient_states) + " states and " + std::to_string(quotient_transitions) +
         " transitions";
}

std::optional<std::pair<StateId, SymbolId>> unbounded_popping(const VpdaSystem& sys,
                                                              const Configuration& c,
                                                              const Limits& limits) {
  require_vpda(sys);
  if (c.state >= sys.n_states()) throw std::invalid_argument("unknown control state");
  if (c.stack.empty()) return std::nullopt;

  PAutomaton drainable = pre_star(sys, accepts_empty_stack_everywhere(sys), limits);
  for (StateId q = 0; q < sys.n_states(); ++q)
    for (SymbolId y = 0; y < sys.n_symbols(); ++y) {
      PAutomaton fwd = post_star(sys, accepts_single(sys, {q, {y}}), limits);
      bool infinite = false;
      for (StateId r = 0; r < sys.n_states() && !infinite; ++r)
        infinite = infinite_intersection(fwd, drainable, r);
      if (!infinite) continue;
      PAutomaton from_head = pre_star(sys, accepts_head_any_tail(sys, q, y), limits);
      if (member(from_head, c)) return std::make_pair(q, y);
    }
  return std::nullopt;
}

bool is_regular(const VpdaSystem& sys, const Configuration& c, Relation tag,
                const Limits& limits) {
  (void)tag;  // the verdict is uniform between trace equivalence and bisimilarity
  return !unbounded_popping(sys, c, limits).has_value();
}

bool v1ca_fast_path(const VpdaSystem& sys, StateId p0) {
  if (!sys.is_v1ca) throw std::invalid_argument("not a v1CA");
  if (p0 >= sys.n_states()) throw std::invalid_argument("unknown control state");
  uint32_t n = static_cast<uint32_t>(sys.n_states());
  uint32_t cap = n * n + 2 * n;
  SymbolId top_i = sys.symbol("I"), top_z = sys.symbol("Z");

  // counter successors of (q, k); the counter moves with the action class
  auto moves = [&](StateId q, uint32_t k) {
    std::vector<std::pair<StateId, uint32_t>> out;
    for (uint32_t rid : sys.head_rules(q, k == 0 ? top_z : top_i)) {
      const Rule& r = sys.rules[rid];
      int dk = height_change(sys.alphabet.class_of(r.action));
      out.emplace_back(r.dst_state, static_cast<uint32_t>(static_cast<int>(k) + dk));
    }
    return out;
  };

  // counters reachable from the start, never exceeding n^2 + 2n on the way
  std::vector<char> seen(static_cast<size_t>(cap + 1) * n, 0);
  std::deque<std::pair<StateId, uint32_t>> queue{{p0, 0}};
  seen[p0 * static_cast<size_t>(cap + 1)] = 1;
  while (!queue.empty()) {
    auto [q, k] = queue.front();
    queue.pop_front();
    for (auto [q2, k2] : moves(q, k)) {
      if (k2 > cap) continue;
      char& cell = seen[q2 * static_cast<size_t>(cap + 1) + k2];
      if (!cell) {
        cell = 1;
        queue.emplace_back(q2, k2);
      }
    }
  }
  auto reachable_high = [&](StateId q) {
    for (uint32_t k = n; k <= cap; ++k)
      if (seen[q * static_cast<size_t>(cap + 1) + k]) return true;
    return false;
  };

  // (state, counter) pairs reachable from (q, n) in at most n steps; the
  // counter stays in [0, 2n], and counter 0 is only ever the final stop
  auto bounded = [&](StateId q) {
    std::vector<char> vis(static_cast<size_t>(2 * n + 1) * n, 0);
    std::deque<std::tuple<StateId, uint32_t, uint32_t>> bfs{{q, n, 0}};
    vis[q * static_cast<size_t>(2 * n + 1) + n] = 1;
    while (!bfs.empty()) {
      auto [s, k, steps] = bfs.front();
      bfs.pop_front();
      if (steps == n) continue;
      for (auto [s2, k2] : moves(s, k)) {
        char& cell = vis[s2 * static_cast<size_t>(2 * n + 1) + k2];
        if (!cell) {
          cell = 1;
          bfs.emplace_back(s2, k2, steps + 1);
        }
      }
    }
    return vis;
  };

  std::vector<std::vector<char>> near(n);
  auto near_of = [&](StateId q) -> const std::vector<char>& {
    if (near[q].empty()) near[q] = bounded(q);
    return near[q];
  };
  auto pumps_down = [&](StateId q) {
    const auto& vis = near_of(q);
    for (uint32_t k = 0; k < n; ++k)
      if (vis[q * static_cast<size_t>(2 * n + 1) + k]) return true;
    return false;
  };

  for (StateId p = 0; p < n; ++p) {
    if (!reachable_high(p)) continue;
    const auto& vis = near_of(p);
    bool pumps_up = false;
    for (uint32_t k = n + 1; k <= 2 * n && !pumps_up; ++k)
      pumps_up = vis[p * static_cast<size_t>(2 * n + 1) + k];
    if (!pumps_up) continue;
    for (StateId p2 = 0; p2 < n; ++p2) {
      bool handover = false;
      for (uint32_t k = 0; k <= 2 * n && !handover; ++k)
        handover = vis[p2 * static_cast<size_t>(2 * n + 1) + k];
      if (handover && pumps_down(p2)) return true;
    }
  }
  return false;
}

FiniteLts regular_witness(const VpdaSystem& sys, const Configuration& c, const Limits& limits) {
  if (unbounded_popping(sys, c, limits))
    throw std::invalid_argument("the configuration is not regular; no finite witness exists");
  return deepening_witness(sys, c, limits, nullptr);
}

RegularityReport regularity_report(const VpdaSystem& sys, const Configuration& c,
                                   const Limits& limits) {
  RegularityReport rep;
  if (auto head = unbounded_popping(sys, c, limits)) {
    rep.regular = false;
    rep.state = sys.state_names[head->first];
    rep.symbol = sys.symbol_names[head->second];
    return rep;
  }
  rep.regular = true;
  FiniteLts w = deepening_witness(sys, c, limits, &rep.d_max);
  rep.quotient_states = w.n_states();
  rep.quotient_transitions = w.n_transitions();
  return rep;
}

}  // namespace vpe
