#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "vpe/generators.hpp"
#include "vpe/relations.hpp"
#include "vpe/vbpa.hpp"

namespace vpe_test {

using namespace vpe;

// Exhaustive oracle on the configuration-pair game graph, independent of the
// product/saturation machinery: enumerate every pair reachable through
// attack/answer rounds, then strip losing pairs until a greatest fixpoint
// remains.  Returns nullopt when the graph exceeds `cap` pairs or any stack
// exceeds `max_stack` (the game is then not finite enough for this oracle).
inline std::optional<bool> exact_game_oracle_directional(const VpdaSystem& sys,
                                                         const Configuration& l,
                                                         const Configuration& r, Relation rel,
                                                         size_t cap = 2000,
                                                         size_t max_stack = 64) {
  struct Pos {
    Configuration l, r;
    uint8_t mode;
    bool operator<(const Pos& o) const {
      if (mode != o.mode) return mode < o.mode;
      if (l.state != o.l.state) return l.state < o.l.state;
      if (r.state != o.r.state) return r.state < o.r.state;
      if (l.stack != o.l.stack) return l.stack < o.l.stack;
      return r.stack < o.r.stack;
    }
  };

  auto head_ok = [&](const Pos& p) {
    switch (rel) {
      case Relation::CsimPre:
        return initial_actions(sys, p.l).empty() == initial_actions(sys, p.r).empty();
      case Relation::RsimPre:
        return initial_actions(sys, p.l) == initial_actions(sys, p.r);
      default:
        return true;
    }
  };

  // one attacker option: which side moves and the mode afterwards
  auto attacker_sides = [&](uint8_t mode) -> std::vector<std::pair<bool, uint8_t>> {
    switch (rel) {
      case Relation::SimPre:
      case Relation::CsimPre:
      case Relation::RsimPre:
        return {{false, mode}};  // left only
      case Relation::Bisim:
        return {{false, mode}, {true, mode}};
      case Relation::TwoSimPre:
        if (mode == 1) return {{false, 1}, {true, 0}};
        return {{true, 0}};
      default:
        throw std::logic_error("directional relation expected");
    }
  };

  // successors of a pair for one attacker side: per attacked action+move,
  // the list of answered pairs (empty list = attacker wins outright)
  auto rounds = [&](const Pos& p, bool right_side, uint8_t mode2)
      -> std::vector<std::vector<Pos>> {
    std::vector<std::vector<Pos>> out;
    const Configuration& from = right_side ? p.r : p.l;
    const Configuration& to = right_side ? p.l : p.r;
    for (const auto& [a, from2] : step(sys, from)) {
      std::vector<Pos> answers;
      for (const auto& [b, to2] : step(sys, to)) {
        if (b != a) continue;
        answers.push_back(right_side ? Pos{to2, from2, mode2} : Pos{from2, to2, mode2});
      }
      out.push_back(std::move(answers));
    }
    return out;
  };

  Pos init{l, r, static_cast<uint8_t>(rel == Relation::TwoSimPre ? 1 : 0)};
  std::map<Pos, size_t> index;
  std::vector<Pos> positions;
  std::deque<size_t> queue;
  auto intern = [&](const Pos& p) -> std::optional<size_t> {
    if (p.l.stack.size() > max_stack || p.r.stack.size() > max_stack) return std::nullopt;
    auto [it, fresh] = index.try_emplace(p, positions.size());
    if (fresh) {
      positions.push_back(p);
      queue.push_back(it->second);
    }
    return it->second;
  };
  if (!intern(init)) return std::nullopt;
  while (!queue.empty()) {
    if (positions.size() > cap) return std::nullopt;
    size_t n = queue.front();
    queue.pop_front();
    Pos p = positions[n];
    for (auto [right_side, mode2] : attacker_sides(p.mode))
      for (auto& answers : rounds(p, right_side, mode2))
        for (const Pos& q : answers)
          if (!intern(q)) return std::nullopt;
  }

  // greatest fixpoint: defender keeps a pair iff the head predicate holds and
  // every attack has some answer into a kept pair
  std::vector<char> good(positions.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t n = 0; n < positions.size(); ++n) {
      if (!good[n]) continue;
      const Pos& p = positions[n];
      bool ok = head_ok(p);
      for (auto [right_side, mode2] : attacker_sides(p.mode)) {
        if (!ok) break;
        for (auto& answers : rounds(p, right_side, mode2)) {
          bool answered = false;
          for (const Pos& q : answers)
            if (good[index.at(q)]) { answered = true; break; }
          if (!answered) { ok = false; break; }
        }
      }
      if (!ok) {
        good[n] = 0;
        changed = true;
      }
    }
  }
  return static_cast<bool>(good[index.at(init)]);
}

inline std::optional<bool> exact_game_oracle(const VpdaSystem& sys, const Configuration& l,
                                             const Configuration& r, Relation rel,
                                             size_t cap = 2000, size_t max_stack = 64) {
  Relation drel = directional_part(rel);
  auto fwd = exact_game_oracle_directional(sys, l, r, drel, cap, max_stack);
  if (!fwd) return std::nullopt;
  if (!*fwd) return false;
  if (relation_is_equivalence(rel) && rel != Relation::Bisim)
    return exact_game_oracle_directional(sys, r, l, drel, cap, max_stack);
  return true;
}

// Small random visibly systems, independent of the library's generator.
struct RandomSpec {
  uint32_t states = 3;
  uint32_t symbols = 3;
  uint32_t calls = 1;
  uint32_t returns = 1;
  uint32_t internals = 2;
  uint32_t rules = 10;
};

inline VpdaSystem random_vpda(std::mt19937& rng, const RandomSpec& spec = {}) {
  std::string text = "calls:";
  for (uint32_t i = 0; i < spec.calls; ++i) text += " c" + std::to_string(i);
  text += "\nreturns:";
  for (uint32_t i = 0; i < spec.returns; ++i) text += " r" + std::to_string(i);
  text += "\ninternals:";
  for (uint32_t i = 0; i < spec.internals; ++i) text += " i" + std::to_string(i);
  text += "\n";

  auto pick = [&](uint32_t n) { return std::uniform_int_distribution<uint32_t>(0, n - 1)(rng); };
  std::set<std::string> seen;
  for (uint32_t k = 0; k < spec.rules; ++k) {
    uint32_t cls = pick(3);
    std::string action, line;
    line = "q" + std::to_string(pick(spec.states)) + " X" + std::to_string(pick(spec.symbols));
    switch (cls) {
      case 0:
        action = "c" + std::to_string(pick(spec.calls));
        line += " -" + action + "-> q" + std::to_string(pick(spec.states)) + " X" +
                std::to_string(pick(spec.symbols)) + " X" + std::to_string(pick(spec.symbols));
        break;
      case 1:
        action = "r" + std::to_string(pick(spec.returns));
        line += " -" + action + "-> q" + std::to_string(pick(spec.states)) + " -";
        break;
      default:
        action = "i" + std::to_string(pick(spec.internals));
        line += " -" + action + "-> q" + std::to_string(pick(spec.states)) + " X" +
                std::to_string(pick(spec.symbols));
    }
    if (seen.insert(line).second) text += line + "\n";
  }
  return parse_system(text);
}

// Depth-bounded bisimilarity between a pushdown configuration and a state
// of a finite LTS whose action ids align with the system's alphabet.
inline bool mixed_bounded_bisim(const VpdaSystem& sys, const Configuration& c,
                                const FiniteLts& lts, uint32_t s, uint32_t depth) {
  if (depth == 0) return true;
  auto pd = step(sys, c);
  const auto& fs = lts.edges.at(s);
  for (const auto& [a, c2] : pd) {
    bool matched = false;
    for (auto [b, t] : fs)
      if (b == a && mixed_bounded_bisim(sys, c2, lts, t, depth - 1)) {
        matched = true;
        break;
      }
    if (!matched) return false;
  }
  for (auto [b, t] : fs) {
    bool matched = false;
    for (const auto& [a, c2] : pd)
      if (a == b && mixed_bounded_bisim(sys, c2, lts, t, depth - 1)) {
        matched = true;
        break;
      }
    if (!matched) return false;
  }
  return true;
}

// Random one-counter systems: stack alphabet {I, Z}, Z kept at the bottom.
// The first rule is fixed so I always occurs and q0 can always move.
inline VpdaSystem random_v1ca(std::mt19937& rng, uint32_t states = 3, uint32_t rules = 8) {
  std::string text =
      "calls: c\nreturns: r\ninternals: i\n"
      "q0 Z -c-> q0 I Z\n";
  auto pick = [&](uint32_t n) { return std::uniform_int_distribution<uint32_t>(0, n - 1)(rng); };
  std::set<std::string> seen;
  for (uint32_t k = 0; k + 1 < rules; ++k) {
    std::string src = "q" + std::to_string(pick(states));
    std::string dst = "q" + std::to_string(pick(states));
    std::string line;
    if (pick(4) == 0) {
      line = src + " Z " + (pick(2) == 0 ? "-c-> " + dst + " I Z" : "-i-> " + dst + " Z");
    } else {
      switch (pick(3)) {
        case 0: line = src + " I -c-> " + dst + " I I"; break;
        case 1: line = src + " I -r-> " + dst + " -"; break;
        default: line = src + " I -i-> " + dst + " I";
      }
    }
    if (seen.insert(line).second) text += line + "\n";
  }
  return parse_system(text);
}

// Random alternating automata over a one-letter alphabet, states s0..s{n-1}.
inline AfaSpec random_afa(std::mt19937& rng, int max_states) {
  int n = 1 + static_cast<int>(rng() % max_states);
  AfaSpec afa;
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) names.push_back("s" + std::to_string(k));
  for (int k = 0; k < n; ++k) (rng() % 2 ? afa.existential : afa.universal).push_back(names[k]);
  if (afa.existential.empty() && afa.universal.empty()) afa.existential.push_back(names[0]);
  afa.initial = names[rng() % n];
  for (int k = 0; k < n; ++k) {
    std::vector<std::string>& succ = afa.delta[names[k]];
    for (int j = 0; j < n; ++j)
      if (rng() % 3 == 0) succ.push_back(names[j]);
    if (succ.empty()) succ.push_back(names[rng() % n]);
  }
  for (int k = 0; k < n; ++k)
    if (rng() % 3 == 0) afa.finals.push_back(names[k]);
  return afa;
}

}  // namespace vpe_test
