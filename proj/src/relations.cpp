#include "vpe/relations.hpp"

#include <algorithm>
#include <sstream>

namespace vpe {

namespace {

constexpr std::string_view names[] = {
    "sim-pre", "sim-eq", "csim-pre", "csim-eq", "rsim-pre",
    "rsim-eq", "2sim-pre", "2sim-eq", "bisim",
};

}  // namespace

std::string_view relation_name(Relation r) { return names[static_cast<size_t>(r)]; }

Relation parse_relation(std::string_view name) {
  for (size_t i = 0; i < std::size(names); ++i)
    if (names[i] == name) return static_cast<Relation>(i);
  throw std::invalid_argument("unknown relation '" + std::string(name) +
                              "' (expected one of: sim-pre sim-eq csim-pre csim-eq rsim-pre "
                              "rsim-eq 2sim-pre 2sim-eq bisim)");
}

bool relation_is_equivalence(Relation r) {
  switch (r) {
    case Relation::SimEq:
    case Relation::CsimEq:
    case Relation::RsimEq:
    case Relation::TwoSimEq:
    case Relation::Bisim:
      return true;
    default:
      return false;
  }
}

Relation directional_part(Relation r) {
  switch (r) {
    case Relation::SimEq: return Relation::SimPre;
    case Relation::CsimEq: return Relation::CsimPre;
    case Relation::RsimEq: return Relation::RsimPre;
    case Relation::TwoSimEq: return Relation::TwoSimPre;
    default: return r;
  }
}

// --- game encoding ----------------------------------------------------------

RelationGame::RelationGame(const ProductSystem& prod, Relation rel) : prod_(prod), rel_(rel) {
  switch (rel) {
    case Relation::SimEq:
    case Relation::CsimEq:
    case Relation::RsimEq:
    case Relation::TwoSimEq:
      throw std::invalid_argument("equivalences are answered as two directional games");
    default:
      break;
  }
  init_mode_ = rel == Relation::TwoSimPre ? 1 : 0;
}

uint32_t RelationGame::control_id(StateId l, StateId r, uint8_t mode) {
  uint64_t key = (static_cast<uint64_t>(l) << 33) | (static_cast<uint64_t>(r) << 1) | mode;
  auto [it, fresh] = control_ids_.try_emplace(key, static_cast<uint32_t>(controls_.size()));
  if (fresh) controls_.push_back(ControlInfo{l, r, mode});
  return it->second;
}

uint32_t RelationGame::symbol_id(const MergedSymbol& m) {
  auto [it, fresh] = symbol_ids_.try_emplace(m, static_cast<uint32_t>(symbols_.size()));
  if (fresh) symbols_.push_back(m);
  return it->second;
}

uint32_t RelationGame::initial_control(StateId l, StateId r) { return control_id(l, r, init_mode_); }

std::vector<uint32_t> RelationGame::initial_word(std::span<const SymbolId> ls,
                                                 std::span<const SymbolId> rs) {
  std::vector<uint32_t> out;
  for (const MergedSymbol& m : merge_stacks(ls, rs)) out.push_back(symbol_id(m));
  return out;
}

std::vector<EngineRule> RelationGame::moves_for(uint32_t control, uint32_t symbol) {
  const ControlInfo info = controls_[control];
  const MergedSymbol top = symbols_[symbol];
  const bool settled = top.settled();
  std::vector<EngineRule> out;
  for (const ProductMove& pm : prod_.moves(info.left, info.right, top)) {
    if (pm.label == ProductLabel::SelfLeft || pm.label == ProductLabel::SelfRight) continue;
    const bool moves_left = pm.label == ProductLabel::Left;
    uint8_t mode = info.mode;
    if (settled) {
      switch (rel_) {
        case Relation::SimPre:
        case Relation::CsimPre:
        case Relation::RsimPre:
          if (!moves_left) continue;
          break;
        case Relation::TwoSimPre:
          if (info.mode == 1) {
            mode = moves_left ? 1 : 0;  // attacking right spends the switch
          } else if (moves_left) {
            continue;
          }
          break;
        case Relation::Bisim:
          break;
        default:
          throw std::logic_error("unexpected relation in game encoding");
      }
    }
    EngineRule er{control, symbol, control_id(pm.dst_left, pm.dst_right, mode),
                  static_cast<uint32_t>(pm.pushed.size()), {0, 0},
                  pm.action | (moves_left ? 0 : meta_right_bit)};
    for (size_t i = 0; i < pm.pushed.size(); ++i) er.pushed[i] = symbol_id(pm.pushed[i]);
    out.push_back(er);
  }
  return out;
}

bool RelationGame::losing_head(uint32_t control, uint32_t symbol) const {
  const MergedSymbol& top = symbols_[symbol];
  if (!top.settled()) return false;
  const ControlInfo& info = controls_[control];
  const VpdaSystem& sys = prod_.base();
  switch (rel_) {
    case Relation::CsimPre: {
      bool l = initial_actions_head(sys, info.left, top.left.a).empty();
      bool r = initial_actions_head(sys, info.right, top.right.a).empty();
      return l != r;
    }
    case Relation::RsimPre:
      return initial_actions_head(sys, info.left, top.left.a) !=
             initial_actions_head(sys, info.right, top.right.a);
    default:
      return false;
  }
}

GameArena RelationGame::arena() {
  GameArena a;
  a.moves = [this](uint32_t c, uint32_t s) { return moves_for(c, s); };
  a.owner = [this](uint32_t, uint32_t s) {
    return symbols_[s].settled() ? Player::Attacker : Player::Defender;
  };
  a.defender_losing = [this](uint32_t c, uint32_t s) { return losing_head(c, s); };
  return a;
}

std::string RelationGame::print_position(uint32_t control, std::span<const uint32_t> word) const {
  const ControlInfo& info = controls_[control];
  ProductConfig pc;
  pc.left = info.left;
  pc.right = info.right;
  for (uint32_t s : word) pc.stack.push_back(symbols_[s]);
  std::string out = prod_.print_config(pc);
  if (rel_ == Relation::TwoSimPre && info.mode == 0) out += " [switched]";
  return out;
}

// --- witness reconstruction -------------------------------------------------

namespace {

// An accepting run of the alternating automaton: one transition per word
// position, one subtree per target state.  Rebuilt along justifications so
// each rebuild only uses transitions added strictly earlier, which is what
// makes the walk terminate.
struct RunTree {
  int32_t trans = -1;
  std::vector<RunTree> below;  // aligned with the transition's sorted targets
};

struct WitnessBuilder {
  const RelationGame& enc;
  const GameSolution& sol;
  Budget& budget;

  std::optional<RunTree> find_run(uint32_t state, std::span<const uint32_t> word) const {
    if (word.empty()) return sol.winning.is_final(state) ? std::optional<RunTree>(RunTree{}) : std::nullopt;
    for (uint32_t tid : sol.winning.head_transitions(state, word[0])) {
      const ATransition& t = sol.winning.transitions()[tid];
      RunTree node{static_cast<int32_t>(tid), {}};
      bool ok = true;
      for (uint32_t u : t.targets) {
        auto sub = find_run(u, word.subspan(1));
        if (!sub) { ok = false; break; }
        node.below.push_back(std::move(*sub));
      }
      if (ok) return node;
    }
    return std::nullopt;
  }

  // re-root the run after firing `rule` whose right-hand side was read by
  // `step`; `tails` maps old target states to their word-suffix subtrees
  RunTree reroot(const EngineRule& rule, const StepRun& step,
                 const std::unordered_map<uint32_t, const RunTree*>& tails) const {
    if (rule.pushed_len == 0) return *tails.at(rule.dst);
    const ATransition& t1 = sol.winning.transitions()[static_cast<uint32_t>(step.first)];
    RunTree root{step.first, {}};
    if (rule.pushed_len == 1) {
      for (uint32_t u : t1.targets) root.below.push_back(*tails.at(u));
      return root;
    }
    std::unordered_map<uint32_t, uint32_t> second;
    for (auto [u, tid] : step.second) second[u] = tid;
    for (uint32_t u : t1.targets) {
      uint32_t tid2 = second.at(u);
      RunTree mid{static_cast<int32_t>(tid2), {}};
      for (uint32_t v : sol.winning.transitions()[tid2].targets) mid.below.push_back(*tails.at(v));
      root.below.push_back(std::move(mid));
    }
    return root;
  }

  Witness expand(uint32_t control, std::vector<uint32_t> word, const RunTree& run,
                 std::string via_kind, std::string via_side, std::string via_action) const {
    budget.charge_position();
    Witness w;
    w.position = enc.print_position(control, word);
    w.via_kind = std::move(via_kind);
    w.via_side = std::move(via_side);
    w.via_action = std::move(via_action);
    if (run.trans < 0) throw std::logic_error("witness walk ran off the end of the stack");

    const ATransition& t = sol.winning.transitions()[static_cast<uint32_t>(run.trans)];
    std::unordered_map<uint32_t, const RunTree*> tails;
    for (size_t i = 0; i < t.targets.size(); ++i) tails[t.targets[i]] = &run.below[i];

    auto child_of = [&](uint32_t rule_id, const StepRun& step, const char* kind) {
      const EngineRule& r = sol.rules[rule_id];
      std::vector<uint32_t> next(r.pushed, r.pushed + r.pushed_len);
      next.insert(next.end(), word.begin() + 1, word.end());
      RunTree rerooted = reroot(r, step, tails);
      auto [right, action] = RelationGame::decode_meta(r.meta);
      return expand(r.dst, std::move(next), rerooted, kind, right ? "right" : "left",
                    std::string(enc.product().base().alphabet.names[action]));
    };

    switch (t.just.kind) {
      case Justification::Kind::Goal:
        w.outcome = enc.relation() == Relation::RsimPre ? "initial-action-sets-differ"
                                                        : "completedness-differs";
        break;
      case Justification::Kind::Choice:
        w.children.push_back(child_of(t.just.rule, t.just.run, "attack"));
        break;
      case Justification::Kind::Combination:
        if (t.just.parts.empty()) {
          w.outcome = "no-defender-answer";
        } else {
          for (const auto& [rule_id, step] : t.just.parts)
            w.children.push_back(child_of(rule_id, step, "answer"));
        }
        break;
      case Justification::Kind::Preexisting:
        throw std::logic_error("game automata have no preexisting transitions");
    }
    return w;
  }
};

void render_witness(const Witness& w, int indent, std::string& out) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  if (!w.via_kind.empty()) {
    out += pad;
    out += w.via_kind == "attack" ? "attacker plays " : "defender answers ";
    out += w.via_side;
    out += " ";
    out += w.via_action;
    out += " ->\n";
  }
  out += pad;
  out += w.position;
  if (!w.outcome.empty()) {
    out += "   [";
    out += w.outcome;
    out += "]";
  }
  out += "\n";
  for (const Witness& c : w.children) render_witness(c, indent + 1, out);
}

}  // namespace

std::string witness_text(const Witness& w) {
  std::string out;
  render_witness(w, 0, out);
  return out;
}

// --- relation queries -------------------------------------------------------

namespace {

struct DirectionalOutcome {
  bool defender_wins;
  std::optional<Witness> witness;
  uint64_t heads = 0, transitions = 0;
};

DirectionalOutcome run_direction(const ProductSystem& prod, Relation drel, const Configuration& a,
                                 const Configuration& b, bool want_witness, const Limits& limits) {
  RelationGame enc(prod, drel);
  GameArena arena = enc.arena();
  uint32_t init_c = enc.initial_control(a.state, b.state);
  std::vector<uint32_t> init_w = enc.initial_word(a.stack, b.stack);
  GameSolution sol = solve_attacker_reachability(arena, init_c, init_w, limits);

  DirectionalOutcome out;
  out.heads = sol.heads_materialized;
  out.transitions = sol.transitions_added;
  out.defender_wins = !sol.attacker_wins(init_c, init_w);
  if (!out.defender_wins && want_witness) {
    Budget budget(limits);
    WitnessBuilder wb{enc, sol, budget};
    auto run = wb.find_run(init_c, init_w);
    if (!run) throw std::logic_error("attacker wins but no accepting run found");
    out.witness = wb.expand(init_c, init_w, *run, "", "", "");
  }
  return out;
}

}  // namespace

CheckResult check_relation_full(const VpdaSystem& sys, const Configuration& left,
                                const Configuration& right, Relation rel, bool want_witness,
                                const Limits& limits) {
  if (!sys.is_vpda)
    throw std::invalid_argument("relation checking requires a visibly pushdown system");
  if (left.stack.size() != right.stack.size())
    throw std::invalid_argument("configurations must have equal stack heights");

  ProductSystem prod(sys);
  CheckResult res;
  Relation drel = directional_part(rel);

  DirectionalOutcome first = run_direction(prod, drel, left, right, want_witness, limits);
  res.heads += first.heads;
  res.transitions += first.transitions;
  if (!first.defender_wins) {
    res.holds = false;
    if (relation_is_equivalence(rel) && rel != Relation::Bisim) res.failed_direction = "left-to-right";
    res.witness = std::move(first.witness);
    return res;
  }
  if (relation_is_equivalence(rel) && rel != Relation::Bisim) {
    DirectionalOutcome second = run_direction(prod, drel, right, left, want_witness, limits);
    res.heads += second.heads;
    res.transitions += second.transitions;
    if (!second.defender_wins) {
      res.holds = false;
      res.failed_direction = "right-to-left";
      res.witness = std::move(second.witness);
    }
  }
  return res;
}

bool check_relation(const VpdaSystem& sys, const Configuration& left, const Configuration& right,
                    Relation rel, const Limits& limits) {
  return check_relation_full(sys, left, right, rel, false, limits).holds;
}

Witness extract_witness(const VpdaSystem& sys, const Configuration& left,
                        const Configuration& right, Relation rel, const Limits& limits) {
  CheckResult res = check_relation_full(sys, left, right, rel, true, limits);
  if (res.holds) throw std::invalid_argument("the configurations are related; no witness exists");
  return *res.witness;
}

// --- bounded oracle ---------------------------------------------------------

namespace {

struct OracleKey {
  std::string text;
  bool operator==(const OracleKey&) const = default;
};

struct BoundedOracle {
  const VpdaSystem& sys;
  Relation rel;  // directional
  Budget& budget;
  std::unordered_map<std::string, bool> memo;

  bool head_ok(const Configuration& l, const Configuration& r) const {
    switch (rel) {
      case Relation::CsimPre:
        return initial_actions(sys, l).empty() == initial_actions(sys, r).empty();
      case Relation::RsimPre:
        return initial_actions(sys, l) == initial_actions(sys, r);
      default:
        return true;
    }
  }

  // does every successor of `from` under each action have a successor of
  // `to` under the same action making the recursive call true?
  bool covered(const Configuration& from, const Configuration& to, bool swap_args, uint8_t mode,
               uint32_t depth) {
    auto from_moves = step(sys, from);
    auto to_moves = step(sys, to);
    for (const auto& [a, from2] : from_moves) {
      bool answered = false;
      for (const auto& [b, to2] : to_moves) {
        if (b != a) continue;
        bool sub = swap_args ? defender_survives(to2, from2, mode, depth)
                             : defender_survives(from2, to2, mode, depth);
        if (sub) { answered = true; break; }
      }
      if (!answered) return false;
    }
    return true;
  }

  bool defender_survives(const Configuration& l, const Configuration& r, uint8_t mode,
                         uint32_t depth) {
    budget.charge_position();
    std::string key = sys.format_configuration(l) + '|' + sys.format_configuration(r) + '|' +
                      static_cast<char>('0' + mode) + ':' + std::to_string(depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool res = head_ok(l, r);
    if (res && depth > 0) {
      switch (rel) {
        case Relation::SimPre:
        case Relation::CsimPre:
        case Relation::RsimPre:
          res = covered(l, r, false, 0, depth - 1);
          break;
        case Relation::Bisim:
          res = covered(l, r, false, 0, depth - 1) && covered(r, l, true, 0, depth - 1);
          break;
        case Relation::TwoSimPre:
          if (mode == 1)
            res = covered(l, r, false, 1, depth - 1) && covered(r, l, true, 0, depth - 1);
          else
            res = covered(r, l, true, 0, depth - 1);
          break;
        default:
          throw std::logic_error("unexpected relation in bounded oracle");
      }
    }
    memo.emplace(std::move(key), res);
    return res;
  }
};

}  // namespace

bool bounded_oracle(const VpdaSystem& sys, const Configuration& left, const Configuration& right,
                    Relation rel, uint32_t depth, const Limits& limits) {
  Budget budget(limits);
  Relation drel = directional_part(rel);
  BoundedOracle oracle{sys, drel, budget, {}};
  uint8_t mode = drel == Relation::TwoSimPre ? 1 : 0;
  bool fwd = oracle.defender_survives(left, right, mode, depth);
  if (!fwd) return false;
  if (relation_is_equivalence(rel) && rel != Relation::Bisim) {
    BoundedOracle back{sys, drel, budget, {}};
    return back.defender_survives(right, left, mode, depth);
  }
  return true;
}

}  // namespace vpe
