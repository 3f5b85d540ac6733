#pragma once

#include <functional>

#include "vpe/core.hpp"

namespace vpe {

// Sorted, duplicate-free set of automaton states.
using TargetSet = std::vector<uint32_t>;

// A run of the automaton over the (<= 2 symbol) right-hand side of a rule,
// recorded so strategies can be rebuilt later.  Empty word: no transitions
// (the run stays in {dst}).  One symbol: `first`.  Two symbols: `first`,
// then per leaf state of `first` the transition taken for the second symbol.
struct StepRun {
  int32_t first = -1;
  std::vector<std::pair<uint32_t, uint32_t>> second;  // (state after first, transition id)
};

// Why a transition exists.  Preexisting: part of the input automaton.
// Goal: seeded because the head itself is already winning for the reaching
// player.  Choice: an existential head fired one rule.  Combination: a
// universal head combined one run per available rule (empty = stuck head).
struct Justification {
  enum class Kind : uint8_t { Preexisting, Goal, Choice, Combination };
  Kind kind = Kind::Preexisting;
  uint32_t rule = 0;  // Choice
  StepRun run;        // Choice
  std::vector<std::pair<uint32_t, StepRun>> parts;  // Combination: (rule id, run)
};

struct ATransition {
  uint32_t from;
  uint32_t symbol;
  TargetSet targets;  // empty set accepts everything below
  Justification just;
};

// Automaton over stack symbols recognizing sets of configurations: the
// configuration (control, word) is accepted iff an alternating run from the
// control's designated state consumes the word with every branch ending
// final.  The first n_controls states are those designated states, one per
// control state of the underlying system.
class PAutomaton {
 public:
  PAutomaton(uint32_t n_controls, uint32_t n_symbols)
      : n_controls_(n_controls), n_states_(n_controls), n_symbols_(n_symbols) {}

  uint32_t n_controls() const { return n_controls_; }
  uint32_t n_states() const { return n_states_; }
  uint32_t n_symbols() const { return n_symbols_; }

  uint32_t add_state() { final_.resize(n_states_ + 1, false); return n_states_++; }
  void mark_final(uint32_t s);
  bool is_final(uint32_t s) const { return s < final_.size() && final_[s]; }

  void grow_symbols(uint32_t n) { if (n > n_symbols_) n_symbols_ = n; }

  // Returns the new transition id, or -1 when the transition is subsumed:
  // some existing transition of the same head demands a subset of `targets`
  // (equality included), so the new one could not accept anything more.
  int64_t add_transition(uint32_t from, uint32_t symbol, TargetSet targets, Justification just = {});

  // true iff adding (from, symbol, targets) would be subsumed; `targets`
  // must be sorted and duplicate-free
  bool covered(uint32_t from, uint32_t symbol, const TargetSet& targets) const;

  const std::vector<ATransition>& transitions() const { return trans_; }
  const std::vector<uint32_t>& head_transitions(uint32_t state, uint32_t symbol) const;

  bool accepts(uint32_t state, std::span<const uint32_t> word) const;
  bool nondeterministic() const;  // every target set a singleton

  // Canonical view for order-independence comparisons.
  std::vector<std::tuple<uint32_t, uint32_t, TargetSet>> transition_set() const;

 private:
  uint32_t n_controls_, n_states_, n_symbols_;
  std::vector<ATransition> trans_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> by_head_;
  std::vector<bool> final_;
};

// --- target helpers -------------------------------------------------------

PAutomaton accepts_nothing(const VpdaSystem& sys);
PAutomaton accepts_empty_stack_everywhere(const VpdaSystem& sys);  // { q:- for all q }
PAutomaton accepts_single(const VpdaSystem& sys, const Configuration& c);
PAutomaton accepts_head_any_tail(const VpdaSystem& sys, StateId p, SymbolId x);  // p:x GAMMA*

// --- reachability saturation ----------------------------------------------

// All configurations that can reach a configuration accepted by target.
// The target automaton must have no transitions into designated states.
PAutomaton pre_star(const VpdaSystem& sys, const PAutomaton& target, const Limits& limits = {});

// All configurations reachable from a configuration accepted by source.
// Source must be nondeterministic with no transitions into designated states.
PAutomaton post_star(const VpdaSystem& sys, const PAutomaton& source, const Limits& limits = {});

bool member(const PAutomaton& aut, const Configuration& c);

// Do a1 and a2 accept infinitely many common stacks from `control`?
// Both automata must be nondeterministic.
bool infinite_intersection(const PAutomaton& a1, const PAutomaton& a2, StateId control);

// --- reachability games ----------------------------------------------------

enum class Player : uint8_t { Attacker, Defender };

struct EngineRule {
  uint32_t control, symbol;  // head
  uint32_t dst;
  uint32_t pushed_len = 0;
  uint32_t pushed[2] = {0, 0};
  uint32_t meta = 0;  // caller-owned tag (e.g. which product move this was)
};

// A pushdown game described by callbacks.  Controls and symbols are dense
// ids minted by the caller; moves() may mint new ids while being explored.
// Attacker wins a play that reaches a head with defender_losing, or any
// position whose owner has no move while the owner is the Defender; every
// infinite play and every position where the Attacker is stuck is won by
// the Defender.
struct GameArena {
  std::function<std::vector<EngineRule>(uint32_t control, uint32_t symbol)> moves;
  std::function<Player(uint32_t control, uint32_t symbol)> owner;
  std::function<bool(uint32_t control, uint32_t symbol)> defender_losing;
};

struct GameSolution {
  PAutomaton winning;  // Attacker's region, alternating
  // materialized part of the arena (reachable from the initial configuration)
  std::vector<EngineRule> rules{};
  std::vector<std::pair<uint32_t, uint32_t>> heads{};
  std::vector<Player> head_owner{};
  std::vector<char> head_losing{};
  std::unordered_map<uint64_t, uint32_t> head_id{};          // (control<<32|symbol) -> index
  std::unordered_map<uint64_t, std::vector<uint32_t>> head_rules{};  // -> rule ids

  uint64_t heads_materialized = 0;
  uint64_t transitions_added = 0;

  bool attacker_wins(uint32_t control, std::span<const uint32_t> word) const {
    return winning.accepts(control, word);
  }
};

// Materializes the sub-arena reachable from (init_control, init_word) and
// saturates the Attacker's winning region over it.
GameSolution solve_attacker_reachability(const GameArena& arena, uint32_t init_control,
                                         std::span<const uint32_t> init_word,
                                         const Limits& limits = {});

}  // namespace vpe
