#pragma once

#include <array>
#include <optional>

#include "vpe/product.hpp"
#include "vpe/saturation.hpp"

namespace vpe {

// The simulation-like spectrum, coarsest to finest: every relation implies
// the ones before it (bisim => 2sim-pre => rsim-pre => csim-pre => sim-pre,
// and each -eq implies both directions of its -pre).
enum class Relation : uint8_t {
  SimPre,
  SimEq,
  CsimPre,
  CsimEq,
  RsimPre,
  RsimEq,
  TwoSimPre,
  TwoSimEq,
  Bisim,
};

inline constexpr std::array<Relation, 9> all_relations{
    Relation::SimPre,  Relation::SimEq,  Relation::CsimPre,
    Relation::CsimEq,  Relation::RsimPre, Relation::RsimEq,
    Relation::TwoSimPre, Relation::TwoSimEq, Relation::Bisim,
};

std::string_view relation_name(Relation r);       // "sim-pre", ..., "2sim-eq", "bisim"
Relation parse_relation(std::string_view name);   // inverse; throws std::invalid_argument
bool relation_is_equivalence(Relation r);
Relation directional_part(Relation r);            // x-eq -> x-pre; identity otherwise

// Encodes one directional relation (or bisim) as a reachability game over
// the product: the Attacker owns settled tops and picks a side to move
// (which sides depends on the relation), the Defender owns annotated tops
// and picks the answer, and the ready/completed head predicates make a
// settled head immediately losing for the Defender.  Controls are
// (left state, right state, mode) triples; mode is the 2-nested switch
// budget and stays 0 elsewhere.
class RelationGame {
 public:
  RelationGame(const ProductSystem& prod, Relation rel);  // rel directional; -eq rejected

  // callbacks capture this; keep the object alive while the arena is used
  GameArena arena();

  uint32_t initial_control(StateId l, StateId r);
  std::vector<uint32_t> initial_word(std::span<const SymbolId> ls, std::span<const SymbolId> rs);

  struct ControlInfo {
    StateId left, right;
    uint8_t mode;
  };
  const ControlInfo& control_info(uint32_t id) const { return controls_[id]; }
  const MergedSymbol& symbol_info(uint32_t id) const { return symbols_[id]; }
  const ProductSystem& product() const { return prod_; }
  Relation relation() const { return rel_; }

  std::string print_position(uint32_t control, std::span<const uint32_t> word) const;

  // EngineRule.meta carries the driven side and the underlying action
  static constexpr uint32_t meta_right_bit = 1u << 31;
  static std::pair<bool, ActionId> decode_meta(uint32_t meta) {
    return {(meta & meta_right_bit) != 0, meta & ~meta_right_bit};
  }

  uint32_t control_id(StateId l, StateId r, uint8_t mode);
  uint32_t symbol_id(const MergedSymbol& m);

 private:
  std::vector<EngineRule> moves_for(uint32_t control, uint32_t symbol);
  bool losing_head(uint32_t control, uint32_t symbol) const;

  const ProductSystem& prod_;
  Relation rel_;
  uint8_t init_mode_;
  std::vector<ControlInfo> controls_;
  std::unordered_map<uint64_t, uint32_t> control_ids_;
  std::vector<MergedSymbol> symbols_;
  std::unordered_map<MergedSymbol, uint32_t, MergedSymbolHash> symbol_ids_;
};

// Attacker strategy fragment proving non-relatedness: every branch ends in
// a losing head or a Defender with no answer.  `via_*` describe the move
// that led to a node ("" at the root); Attacker nodes have exactly one
// child, Defender nodes one child per possible answer.
struct Witness {
  std::string position;   // rendered product position
  std::string via_kind;   // "", "attack", "answer"
  std::string via_side;   // "left" / "right"
  std::string via_action;
  std::string outcome;    // leaves: "initial-action-sets-differ",
                          // "completedness-differs", "no-defender-answer"
  std::vector<Witness> children;
};

std::string witness_text(const Witness& w);

struct CheckResult {
  bool holds = true;
  std::string failed_direction;  // "", "left-to-right", "right-to-left"
  std::optional<Witness> witness;
  uint64_t heads = 0;        // game positions materialized (summed over runs)
  uint64_t transitions = 0;  // saturation transitions added (summed)
};

// true iff `left rel right` in the system's transition semantics.
// Requires a visibly pushdown system and equal stack heights.
bool check_relation(const VpdaSystem& sys, const Configuration& left, const Configuration& right,
                    Relation rel, const Limits& limits = {});

CheckResult check_relation_full(const VpdaSystem& sys, const Configuration& left,
                                const Configuration& right, Relation rel, bool want_witness,
                                const Limits& limits = {});

// Depth-bounded game evaluation straight off the step semantics: true iff
// the Defender survives every play of at most `depth` rounds.  Agrees with
// check_relation once depth exceeds the (finite) reachable game graph.
bool bounded_oracle(const VpdaSystem& sys, const Configuration& left, const Configuration& right,
                    Relation rel, uint32_t depth, const Limits& limits = {});

// Witness for a non-related pair; throws std::invalid_argument if related.
Witness extract_witness(const VpdaSystem& sys, const Configuration& left,
                        const Configuration& right, Relation rel, const Limits& limits = {});

}  // namespace vpe
