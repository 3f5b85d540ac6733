#include "vpe/product.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace vpe {

std::vector<MergedSymbol> merge_stacks(std::span<const SymbolId> left, std::span<const SymbolId> right) {
  if (left.size() != right.size())
    throw std::invalid_argument("cannot merge stacks of heights " + std::to_string(left.size()) +
                                " and " + std::to_string(right.size()));
  std::vector<MergedSymbol> out;
  out.reserve(left.size());
  for (size_t i = 0; i < left.size(); ++i)
    out.push_back(MergedSymbol{GElem::single(left[i]), GElem::single(right[i])});
  return out;
}

ProductSystem::ProductSystem(const VpdaSystem& base) : base_(&base) {
  if (!base.is_vpda) throw std::invalid_argument("product requires a visibly pushdown system");
}

GElem ProductSystem::gelem_of(std::span<const SymbolId> pushed) {
  switch (pushed.size()) {
    case 0: return GElem::eps();
    case 1: return GElem::single(pushed[0]);
    case 2: return GElem::pair(pushed[0], pushed[1]);
    default: throw std::invalid_argument("pushed sequence longer than 2");
  }
}

namespace {

// Unpacks a stored element back into the symbol sequence it represents.
void unpack(const GElem& g, std::vector<SymbolId>& out) {
  out.clear();
  switch (g.kind) {
    case GKind::Eps: break;
    case GKind::Single: out.push_back(g.a); break;
    case GKind::Pair: out.push_back(g.a); out.push_back(g.b); break;
    case GKind::Annot: throw std::logic_error("cannot unpack a pending obligation");
  }
}

std::vector<MergedSymbol> zip_merge(std::span<const SymbolId> left, std::span<const SymbolId> right) {
  assert(left.size() == right.size());
  std::vector<MergedSymbol> out;
  out.reserve(left.size());
  for (size_t i = 0; i < left.size(); ++i)
    out.push_back(MergedSymbol{GElem::single(left[i]), GElem::single(right[i])});
  return out;
}

}  // namespace

const std::vector<ProductMove>& ProductSystem::moves(StateId l, StateId r, const MergedSymbol& top) const {
  Key key{l, r, top};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto computed = compute_moves(l, r, top);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(computed)).first->second;
}

std::vector<ProductMove> ProductSystem::compute_moves(StateId l, StateId r, const MergedSymbol& top) const {
  const VpdaSystem& sys = *base_;
  std::vector<ProductMove> out;

  if (top.settled()) {
    SymbolId x = top.left.a, y = top.right.a;
    for (uint32_t ri : sys.head_rules(l, x)) {
      const Rule& rule = sys.rules[ri];
      out.push_back(ProductMove{ProductLabel::Left, rule.action, rule.dst_state, r,
                                {MergedSymbol{gelem_of(rule.pushed), GElem::annot(y, rule.action)}}});
    }
    for (uint32_t ri : sys.head_rules(r, y)) {
      const Rule& rule = sys.rules[ri];
      out.push_back(ProductMove{ProductLabel::Right, rule.action, l, rule.dst_state,
                                {MergedSymbol{GElem::annot(x, rule.action), gelem_of(rule.pushed)}}});
    }
    for (ActionId a : initial_actions_head(sys, l, x))
      out.push_back(ProductMove{ProductLabel::SelfLeft, a, l, r, {top}});
    for (ActionId a : initial_actions_head(sys, r, y))
      out.push_back(ProductMove{ProductLabel::SelfRight, a, l, r, {top}});
    return out;
  }

  std::vector<SymbolId> stored, answered;
  if (top.right_pending()) {
    // right side owes an answer: fire its rules for the pending action
    SymbolId x = top.right.a;
    ActionId a = top.right.act;
    unpack(top.left, stored);
    for (uint32_t ri : sys.head_rules(r, x)) {
      const Rule& rule = sys.rules[ri];
      if (rule.action != a) continue;
      assert(rule.pushed.size() == stored.size());
      out.push_back(ProductMove{ProductLabel::Right, a, l, rule.dst_state,
                                zip_merge(stored, rule.pushed)});
    }
    return out;
  }
  if (top.left_pending()) {
    SymbolId x = top.left.a;
    ActionId a = top.left.act;
    unpack(top.right, stored);
    for (uint32_t ri : sys.head_rules(l, x)) {
      const Rule& rule = sys.rules[ri];
      if (rule.action != a) continue;
      assert(rule.pushed.size() == stored.size());
      out.push_back(ProductMove{ProductLabel::Left, a, rule.dst_state, r,
                                zip_merge(rule.pushed, stored)});
    }
    return out;
  }
  (void)answered;
  throw std::logic_error("merged symbol with two pending obligations");
}

ProductConfig apply_move(const ProductConfig& c, const ProductMove& m) {
  ProductConfig next{m.dst_left, m.dst_right, {}};
  next.stack.reserve(m.pushed.size() + c.stack.size() - 1);
  next.stack.insert(next.stack.end(), m.pushed.begin(), m.pushed.end());
  next.stack.insert(next.stack.end(), c.stack.begin() + 1, c.stack.end());
  return next;
}

std::string ProductSystem::print_gelem(const GElem& g) const {
  const auto& sym = base_->symbol_names;
  switch (g.kind) {
    case GKind::Eps: return "-";
    case GKind::Single: return sym[g.a];
    case GKind::Pair: return sym[g.a] + sym[g.b];
    case GKind::Annot: return sym[g.a] + "." + base_->alphabet.names[g.act];
  }
  return "?";
}

std::string ProductSystem::print_symbol(const MergedSymbol& m) const {
  return "(" + print_gelem(m.left) + "|" + print_gelem(m.right) + ")";
}

std::string ProductSystem::print_config(const ProductConfig& c) const {
  std::string out = "(" + base_->state_names[c.left] + "," + base_->state_names[c.right] + ")";
  if (c.stack.empty()) return out + "-";
  for (const MergedSymbol& m : c.stack) out += print_symbol(m);
  return out;
}

namespace {

std::string label_text(const ProductSystem& prod, ProductLabel lab, ActionId act) {
  switch (lab) {
    case ProductLabel::Left: return "l";
    case ProductLabel::Right: return "r";
    case ProductLabel::SelfLeft: return prod.base().alphabet.names[act];
    case ProductLabel::SelfRight: return "~" + prod.base().alphabet.names[act];
  }
  return "?";
}

struct PcHash {
  size_t operator()(const ProductConfig& c) const {
    size_t h = c.left * 131 + c.right;
    for (const MergedSymbol& m : c.stack) h = h * 1000003u ^ MergedSymbolHash()(m);
    return h;
  }
};

}  // namespace

std::string dump_product(const ProductSystem& prod, const ProductConfig& from, unsigned depth,
                         const Limits& limits) {
  Budget budget(limits);
  std::unordered_map<ProductConfig, unsigned, PcHash> seen;
  std::deque<ProductConfig> queue;
  seen.emplace(from, 0);
  queue.push_back(from);

  // head -> rule lines, deduplicated
  std::set<std::string> lines;
  while (!queue.empty()) {
    ProductConfig c = queue.front();
    queue.pop_front();
    unsigned d = seen.at(c);
    if (c.stack.empty()) continue;
    std::string head = "(" + prod.base().state_names[c.left] + "," + prod.base().state_names[c.right] +
                       ") " + prod.print_symbol(c.stack[0]);
    for (const ProductMove& m : prod.moves(c.left, c.right, c.stack[0])) {
      std::string rhs = "(" + prod.base().state_names[m.dst_left] + "," +
                        prod.base().state_names[m.dst_right] + ")";
      std::string pushed;
      for (const MergedSymbol& s : m.pushed) pushed += " " + prod.print_symbol(s);
      if (m.pushed.empty()) pushed = " -";
      lines.insert(head + " -" + label_text(prod, m.label, m.action) + "-> " + rhs + pushed);
      if (d < depth && m.label != ProductLabel::SelfLeft && m.label != ProductLabel::SelfRight) {
        ProductConfig next = apply_move(c, m);
        budget.check_stack(next.stack.size());
        if (seen.emplace(next, d + 1).second) {
          budget.charge_position();
          queue.push_back(next);
        }
      }
    }
  }

  std::ostringstream out;
  out << "# product reachable from " << prod.print_config(from) << " within " << depth << " moves\n";
  for (const std::string& l : lines) out << l << "\n";
  return out.str();
}

}  // namespace vpe
