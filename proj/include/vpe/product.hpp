#pragma once

#include <mutex>
#include <optional>

#include "vpe/core.hpp"

namespace vpe {

// One half of a merged stack symbol.  The product simulates two runs of the
// same system in lock-step; between the two halves of a round one side has
// already moved and the other side carries an obligation "answer action a
// from symbol X", written X.a.  The side that moved stores what it pushed
// (nothing, one symbol, or a call pair) as a single element.
enum class GKind : uint8_t { Eps, Single, Pair, Annot };

struct GElem {
  GKind kind = GKind::Eps;
  SymbolId a = 0, b = 0;  // Single: a; Pair: (a,b); Annot: a
  ActionId act = 0;       // Annot only

  static GElem eps() { return {}; }
  static GElem single(SymbolId x) { return {GKind::Single, x, 0, 0}; }
  static GElem pair(SymbolId x, SymbolId y) { return {GKind::Pair, x, y, 0}; }
  static GElem annot(SymbolId x, ActionId a) { return {GKind::Annot, x, 0, a}; }

  bool operator==(const GElem& o) const {
    return kind == o.kind && a == o.a && b == o.b && act == o.act;
  }
  int len() const { return kind == GKind::Eps ? 0 : kind == GKind::Pair ? 2 : 1; }
};

struct MergedSymbol {
  GElem left, right;
  bool operator==(const MergedSymbol& o) const { return left == o.left && right == o.right; }

  bool settled() const { return left.kind == GKind::Single && right.kind == GKind::Single; }
  bool left_pending() const { return left.kind == GKind::Annot; }
  bool right_pending() const { return right.kind == GKind::Annot; }
};

struct MergedSymbolHash {
  size_t operator()(const MergedSymbol& m) const {
    auto part = [](const GElem& g) {
      return (static_cast<size_t>(g.kind) << 24) ^ (static_cast<size_t>(g.a) << 12) ^
             (static_cast<size_t>(g.b) << 2) ^ (static_cast<size_t>(g.act) << 32);
    };
    return part(m.left) * 1000003u ^ part(m.right);
  }
};

// l / r drive one side of the pair; Self loops merely expose which actions
// each side currently enables (they never change the configuration).
enum class ProductLabel : uint8_t { Left, Right, SelfLeft, SelfRight };

struct ProductMove {
  ProductLabel label;
  ActionId action;  // underlying action of the driven side
  StateId dst_left, dst_right;
  std::vector<MergedSymbol> pushed;  // at most 2
};

struct ProductConfig {
  StateId left = 0, right = 0;
  std::vector<MergedSymbol> stack;
  bool operator==(const ProductConfig& o) const {
    return left == o.left && right == o.right && stack == o.stack;
  }
};

// Merges two same-height plain stacks position-wise. Throws on height mismatch.
std::vector<MergedSymbol> merge_stacks(std::span<const SymbolId> left, std::span<const SymbolId> right);

// Lock-step product of a system with itself.  Rules are instantiated per
// head on demand and memoized; the underlying system is never expanded
// wholesale.  Thread-safe for concurrent moves() calls.
class ProductSystem {
 public:
  explicit ProductSystem(const VpdaSystem& base);

  const VpdaSystem& base() const { return *base_; }

  // All product moves from head (l, r) with the given top symbol:
  //  - settled (X,Y): l-moves of the left side (annotating the right),
  //    r-moves of the right side (annotating the left), plus one visibility
  //    self-loop per enabled action on each side;
  //  - a pending side: the answering moves of that side only.
  const std::vector<ProductMove>& moves(StateId l, StateId r, const MergedSymbol& top) const;

  static GElem gelem_of(std::span<const SymbolId> pushed);

  std::string print_gelem(const GElem& g) const;
  std::string print_symbol(const MergedSymbol& m) const;  // "(X|Y)", "(XY|Y.a)", "(X.b|-)"
  std::string print_config(const ProductConfig& c) const;

 private:
  std::vector<ProductMove> compute_moves(StateId l, StateId r, const MergedSymbol& top) const;

  const VpdaSystem* base_;
  mutable std::mutex mu_;
  struct Key {
    StateId l, r;
    MergedSymbol m;
    bool operator==(const Key& o) const { return l == o.l && r == o.r && m == o.m; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return MergedSymbolHash()(k.m) * 31 + k.l * 7 + k.r;
    }
  };
  mutable std::unordered_map<Key, std::vector<ProductMove>, KeyHash> cache_;
};

// Applies a move to a product configuration (top symbol replaced by pushed).
ProductConfig apply_move(const ProductConfig& c, const ProductMove& m);

// BFS over product configurations up to `depth` moves, dumping every
// instantiated head-level rule once, in deterministic order.
std::string dump_product(const ProductSystem& prod, const ProductConfig& from, unsigned depth,
                         const Limits& limits = {});

}  // namespace vpe
