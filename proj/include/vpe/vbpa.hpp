#pragma once

#include "vpe/core.hpp"
#include "vpe/relations.hpp"

namespace vpe {

// Explicit finite labelled transition system.  For a reduction of a vBPA,
// states 0..n_symbols-1 are the stack symbols in system order, state
// n_symbols is the drained stack, and the pair states follow.
struct FiniteLts {
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  // per state, sorted by (action, dst)
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edges;

  size_t n_states() const { return state_names.size(); }
  size_t n_transitions() const;
  uint32_t state(std::string_view name) const;  // throws std::invalid_argument
  std::vector<uint32_t> enabled(uint32_t s) const;  // sorted action ids
  std::string to_text() const;                      // one "s -a-> t" line per edge
};

// Stack symbols that can drain to the empty stack, sorted.  vBPA only.
std::vector<SymbolId> empties(const VpdaSystem& sys);

// Finite system equivalent to the vBPA for the whole spectrum: returns go to
// the drained state, internals walk the symbol graph, a call lands in a pair
// state whose fresh action #1 picks the pushed top and #2 the symbol below
// it, the #2 edge existing only when the top can drain.
FiniteLts reduce_to_finite(const VpdaSystem& sys);

bool finite_check(const FiniteLts& lts, uint32_t s, uint32_t t, Relation rel);
bool finite_check(const FiniteLts& lts, std::string_view s, std::string_view t, Relation rel);

// Fast path for vBPA: decide rel between single-symbol configurations
// through the finite reduction.  Agrees with check_relation.
bool check_relation_vbpa(const VpdaSystem& sys, SymbolId left, SymbolId right, Relation rel);

}  // namespace vpe
