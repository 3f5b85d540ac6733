#pragma once

#include <optional>

#include "vpe/core.hpp"
#include "vpe/relations.hpp"
#include "vpe/vbpa.hpp"

namespace vpe {

struct RegularityReport {
  bool regular = false;
  // non-regular evidence: the head providing unbounded popping
  std::string state, symbol;
  // regular evidence: remembered-top depth that closed, and the quotient size
  uint32_t d_max = 0;
  size_t quotient_states = 0;
  size_t quotient_transitions = 0;
  std::string text() const;
};

// Head (q, Y) witnessing that c provides unbounded popping: infinitely many
// configurations reachable from qY can drain the whole stack, and c reaches
// qY with some tail below it.  nullopt when no head qualifies.  Works for
// any configuration; an empty stack never pops at all.
std::optional<std::pair<StateId, SymbolId>> unbounded_popping(const VpdaSystem& sys,
                                                              const Configuration& c,
                                                              const Limits& limits = {});

// Whether c is equivalent to some finite-state process.  The answer is the
// same for every relation between trace equivalence and bisimilarity; `tag`
// only names the caller's intent and never changes the result.
bool is_regular(const VpdaSystem& sys, const Configuration& c, Relation tag = Relation::Bisim,
                const Limits& limits = {});

// One-counter shortcut, equivalent to !is_regular for the configuration
// p0(0): some control reachable with a large counter can pump the counter
// up and hand over to a control that pumps it down.  All four searches stay
// within the bounds stated for them (counter <= n^2+2n, paths <= n steps).
bool v1ca_fast_path(const VpdaSystem& sys, StateId p0);

// Finite LTS bisimilar to c: stacks are truncated to their top d symbols,
// deepening d until no reachable move consults the stack below the kept
// prefix.  Throws std::invalid_argument when c is not regular.
FiniteLts regular_witness(const VpdaSystem& sys, const Configuration& c,
                          const Limits& limits = {});

RegularityReport regularity_report(const VpdaSystem& sys, const Configuration& c,
                                   const Limits& limits = {});

}  // namespace vpe
