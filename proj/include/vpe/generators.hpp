#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/core.hpp"

namespace vpe {

// One-way alternating finite automaton over a one-letter alphabet.  A word
// I^n is accepted when some computation tree of depth n has only final
// leaves; existential states pick one successor, universal states branch to
// all of them.
struct AfaSpec {
  std::vector<std::string> existential;
  std::vector<std::string> universal;
  std::string initial;
  std::map<std::string, std::vector<std::string>> delta;
  std::vector<std::string> finals;

  // existential then universal, in declaration order
  std::vector<std::string> states() const;

  // Throws std::invalid_argument unless the two state sets are disjoint,
  // delta is total with nonempty successor sets over known states, initial
  // and finals are known, and every name is clean: no whitespace or
  // format-reserved characters, not one of the names the hardness gadget
  // claims for itself (p, p', t, a, e, i, I, Z), no "t_"/"d_" prefix and no
  // trailing prime.
  void validate() const;
};

// Text format, one directive per line ('#' starts a comment):
//
//   exists: q0 q1
//   forall: q2
//   init: q0
//   final: q1
//   delta: q0 -> q1 q2
//
// Every state needs exactly one delta line.  Throws std::invalid_argument.
AfaSpec parse_afa(std::string_view text);

// true iff no word has an accepting computation tree.  Acc_0 = F,
// Acc_{k+1} = {q existential with a successor in Acc_k, or universal with
// all successors there}; the sequence is iterated until a set repeats.
bool afa_emptiness(const AfaSpec& afa);

struct HardInstance {
  VpdaSystem system;
  Configuration left;   // pZ
  Configuration right;  // p'Z
};

// Defender's Forcing reduction from AFA emptiness to relation checking on
// one-counter systems: left and right are related iff L(A) is empty, and
// this holds simultaneously for every relation between simulation preorder
// and bisimilarity.  Attacker pumps the counter to a candidate word length,
// switches to the checking phase, picks successors of existential states
// and is forced to accept Defender's choice at universal ones; a final
// state reached at counter zero gives Attacker a winning e-move.
HardInstance gen_hard_v1ca(const AfaSpec& afa);

struct RegularityInstance {
  VpdaSystem system;
  SymbolId probe;  // the fresh symbol X'
};

// Reduction from emptiness of a single-state pushdown system to regularity:
// rules are relabelled by arity onto a fresh alphabet (2 pushed -> call c,
// 1 -> internal i, 0 -> return r) and a popping ladder is attached behind
// the probe:
//
//   X' -c-> X B    B -e-> C    C -c-> C D    C -r-> -    D -r-> -
//
// The probe X' is regular iff X never drains, provided the input has
// finitely many reachable configurations (without that assumption X itself
// could already pop unboundedly, non-regular with an empty language).
// Throws std::invalid_argument on multiple control states or a rule pushing
// more than two symbols.
RegularityInstance gen_regularity_instance(const VpdaSystem& bpa, SymbolId x);

struct RandomSystemParams {
  uint32_t states = 2;
  uint32_t symbols = 2;
  uint32_t calls = 1;
  uint32_t returns = 1;
  uint32_t internals = 1;
  uint32_t rules = 8;
  uint64_t seed = 0;
};

// Seed-deterministic random visibly system.  Rules are drawn uniformly
// (action, head, target) until `rules` distinct ones are found or the draw
// budget runs out, so the rule count never exceeds the bound and falls
// short only when the rule space is too small.  Throws std::invalid_argument
// on zero states or symbols, or when rules > 0 with an empty alphabet.
VpdaSystem gen_random(const RandomSystemParams& params);

}  // namespace vpe
