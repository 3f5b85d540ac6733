#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vpe {

using StateId = uint32_t;
using SymbolId = uint32_t;
using ActionId = uint32_t;

enum class ActionClass : uint8_t { Call, Return, Internal };

// Stack symbols a rule is allowed to push for an action of the given class.
inline int arity(ActionClass c) {
  switch (c) {
    case ActionClass::Call: return 2;
    case ActionClass::Return: return 0;
    default: return 1;
  }
}

// Net stack-height change of one action of the given class.
inline int height_change(ActionClass c) { return arity(c) - 1; }

struct ParseError : std::runtime_error {
  int line;  // 1-based, 0 when not tied to a line
  ParseError(int line_, const std::string& msg);
};

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caps for every potentially unbounded computation. Stacks, explored
// positions and saturation transitions are bounded only by these.
struct Limits {
  uint64_t max_transitions = 10'000'000;  // automaton transitions added by saturation
  uint64_t max_positions = 10'000'000;    // configurations/heads/oracle nodes visited
  uint64_t max_stack = 1'000'000;         // longest stack ever materialized
  int64_t wall_ms = 60'000;
};

// Running budget against a Limits. Throws ResourceLimitError on exhaustion.
class Budget {
 public:
  explicit Budget(const Limits& l) : lim_(l), start_(std::chrono::steady_clock::now()) {}

  void charge_transition(uint64_t n = 1);
  void charge_position(uint64_t n = 1);
  void check_stack(size_t depth) const;
  void check_wall();

  uint64_t transitions() const { return transitions_; }
  uint64_t positions() const { return positions_; }
  double elapsed_ms() const;

 private:
  Limits lim_;
  std::chrono::steady_clock::time_point start_;
  uint64_t transitions_ = 0;
  uint64_t positions_ = 0;
  uint64_t tick_ = 0;
};

struct ActionAlphabet {
  std::vector<std::string> names;       // ActionId -> name
  std::vector<ActionClass> classes;     // ActionId -> class
  std::unordered_map<std::string, ActionId> index;

  ActionId add(const std::string& name, ActionClass cls);
  bool has(std::string_view name) const;
  ActionId id(std::string_view name) const;  // throws if unknown
  ActionClass class_of(ActionId a) const { return classes.at(a); }
  size_t size() const { return names.size(); }
};

struct Rule {
  StateId src_state;
  SymbolId src_symbol;
  ActionId action;
  StateId dst_state;
  std::vector<SymbolId> pushed;  // empty for pops; top of stack first
};

struct Configuration {
  StateId state = 0;
  std::vector<SymbolId> stack;  // index 0 is the top

  bool operator==(const Configuration& o) const { return state == o.state && stack == o.stack; }
};

struct ConfigurationHash {
  size_t operator()(const Configuration& c) const;
};

// A visibly pushdown system: control states, stack alphabet, a partitioned
// action alphabet and rules  p X -a-> q alpha.  The partition fixes |alpha|:
// calls push 2, returns push 0, internals push 1.  Returns on the empty
// stack do not exist: a configuration with an empty stack has no moves.
struct VpdaSystem {
  std::vector<std::string> state_names;
  std::vector<std::string> symbol_names;
  std::unordered_map<std::string, StateId> state_index;
  std::unordered_map<std::string, SymbolId> symbol_index;
  ActionAlphabet alphabet;
  std::vector<Rule> rules;

  // class flags, computed by finalize()
  bool is_vpda = false;  // every rule respects the arity of its action class
  bool is_vbpa = false;  // is_vpda and a single control state
  bool is_v1ca = false;  // is_vpda, stack alphabet {I, Z}, counter-shaped rules

  StateId ensure_state(const std::string& name);
  SymbolId ensure_symbol(const std::string& name);
  ActionId ensure_action(const std::string& name, ActionClass cls);
  void add_rule(StateId p, SymbolId x, ActionId a, StateId q, std::vector<SymbolId> pushed);

  // Sorts rules lexicographically by (state, symbol, action, pushed) names,
  // drops duplicates, rebuilds the head index and recomputes class flags.
  void finalize();

  size_t n_states() const { return state_names.size(); }
  size_t n_symbols() const { return symbol_names.size(); }

  StateId state(std::string_view name) const;
  SymbolId symbol(std::string_view name) const;
  const std::vector<uint32_t>& head_rules(StateId p, SymbolId x) const;

  std::string format_rule(const Rule& r) const;
  std::string format_configuration(const Configuration& c) const;
  // Accepts "p:XYZ" (every char a symbol), "p:X.Y.Z", "p:-", "p(n)" for
  // one-counter systems, and "pX"-style shorthand (longest state-name prefix).
  Configuration parse_configuration(std::string_view text) const;

  std::string to_text() const;  // round-trips through parse_system

 private:
  std::vector<std::vector<uint32_t>> head_index_;  // [p * n_symbols + x] -> rule ids
};

// Parses the textual format:
//
//   # comment
//   calls: a b
//   returns: c
//   internals:
//   p X -a-> q Y Z
//   p X -c-> q -
//
// The three alphabet lines must appear (in any order) before the first rule.
// States and stack symbols are declared implicitly by use; the three name
// spaces (states, symbols, actions) must be pairwise disjoint.  Action names
// starting with '#' are reserved and rejected.  With require_visibility the
// arity of every rule is validated against its action class.
VpdaSystem parse_system(std::string_view text, bool require_visibility = true);

// Throws std::invalid_argument with a per-rule report unless every rule
// pushes exactly the arity of its action class.
void validate_visibility(const VpdaSystem& sys);

// All moves of c, in the system's canonical rule order.
std::vector<std::pair<ActionId, Configuration>> step(const VpdaSystem& sys, const Configuration& c);

// Sorted set of actions enabled in c. Depends only on (state, top symbol).
std::vector<ActionId> initial_actions(const VpdaSystem& sys, const Configuration& c);
std::vector<ActionId> initial_actions_head(const VpdaSystem& sys, StateId p, SymbolId x);

// Sum of per-action height changes over w.
int stack_effect(const ActionAlphabet& alphabet, std::span<const ActionId> w);
int stack_effect(const ActionAlphabet& alphabet, const std::vector<std::string>& w);

}  // namespace vpe
