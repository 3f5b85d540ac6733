#include "vpe/core.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace vpe {

ParseError::ParseError(int line_, const std::string& msg)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
      line(line_) {}

void Budget::charge_transition(uint64_t n) {
  transitions_ += n;
  if (transitions_ > lim_.max_transitions)
    throw ResourceLimitError("transition budget exceeded (" + std::to_string(lim_.max_transitions) + ")");
  check_wall();
}

void Budget::charge_position(uint64_t n) {
  positions_ += n;
  if (positions_ > lim_.max_positions)
    throw ResourceLimitError("position budget exceeded (" + std::to_string(lim_.max_positions) + ")");
  check_wall();
}

void Budget::check_stack(size_t depth) const {
  if (depth > lim_.max_stack)
    throw ResourceLimitError("stack limit exceeded (" + std::to_string(lim_.max_stack) + ")");
}

void Budget::check_wall() {
  if (++tick_ % 1024 != 0) return;
  if (elapsed_ms() > static_cast<double>(lim_.wall_ms))
    throw ResourceLimitError("wall clock limit exceeded (" + std::to_string(lim_.wall_ms) + " ms)");
}

double Budget::elapsed_ms() const {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

size_t ConfigurationHash::operator()(const Configuration& c) const {
  size_t h = std::hash<uint32_t>()(c.state);
  for (SymbolId s : c.stack) h = h * 1000003u + s + 1;
  return h;
}

ActionId ActionAlphabet::add(const std::string& name, ActionClass cls) {
  auto it = index.find(name);
  if (it != index.end()) {
    if (classes[it->second] != cls)
      throw ParseError(0, "action '" + name + "' declared in two classes");
    return it->second;
  }
  ActionId id = static_cast<ActionId>(names.size());
  names.push_back(name);
  classes.push_back(cls);
  index.emplace(name, id);
  return id;
}

bool ActionAlphabet::has(std::string_view name) const {
  return index.find(std::string(name)) != index.end();
}

ActionId ActionAlphabet::id(std::string_view name) const {
  auto it = index.find(std::string(name));
  if (it == index.end()) throw std::invalid_argument("undeclared action '" + std::string(name) + "'");
  return it->second;
}

StateId VpdaSystem::ensure_state(const std::string& name) {
  auto it = state_index.find(name);
  if (it != state_index.end()) return it->second;
  if (symbol_index.count(name) || alphabet.has(name))
    throw ParseError(0, "name '" + name + "' already used in another name space");
  StateId id = static_cast<StateId>(state_names.size());
  state_names.push_back(name);
  state_index.emplace(name, id);
  return id;
}

SymbolId VpdaSystem::ensure_symbol(const std::string& name) {
  auto it = symbol_index.find(name);
  if (it != symbol_index.end()) return it->second;
  if (state_index.count(name) || alphabet.has(name))
    throw ParseError(0, "name '" + name + "' already used in another name space");
  SymbolId id = static_cast<SymbolId>(symbol_names.size());
  symbol_names.push_back(name);
  symbol_index.emplace(name, id);
  return id;
}

ActionId VpdaSystem::ensure_action(const std::string& name, ActionClass cls) {
  if (state_index.count(name) || symbol_index.count(name))
    throw ParseError(0, "name '" + name + "' already used in another name space");
  return alphabet.add(name, cls);
}

void VpdaSystem::add_rule(StateId p, SymbolId x, ActionId a, StateId q, std::vector<SymbolId> pushed) {
  rules.push_back(Rule{p, x, a, q, std::move(pushed)});
}

void VpdaSystem::finalize() {
  auto name_key = [this](const Rule& r) {
    std::vector<std::string> k{state_names[r.src_state], symbol_names[r.src_symbol],
                               alphabet.names[r.action], state_names[r.dst_state]};
    for (SymbolId s : r.pushed) k.push_back(symbol_names[s]);
    return k;
  };
  std::stable_sort(rules.begin(), rules.end(),
                   [&](const Rule& a, const Rule& b) { return name_key(a) < name_key(b); });
  rules.erase(std::unique(rules.begin(), rules.end(),
                          [](const Rule& a, const Rule& b) {
                            return a.src_state == b.src_state && a.src_symbol == b.src_symbol &&
                                   a.action == b.action && a.dst_state == b.dst_state &&
                                   a.pushed == b.pushed;
                          }),
              rules.end());

  head_index_.assign(n_states() * n_symbols(), {});
  for (uint32_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    head_index_[r.src_state * n_symbols() + r.src_symbol].push_back(i);
  }

  is_vpda = true;
  for (const Rule& r : rules)
    if (static_cast<int>(r.pushed.size()) != arity(alphabet.class_of(r.action))) is_vpda = false;
  is_vbpa = is_vpda && n_states() == 1;

  is_v1ca = false;
  if (is_vpda && n_symbols() == 2 && symbol_index.count("I") && symbol_index.count("Z")) {
    SymbolId I = symbol_index.at("I"), Z = symbol_index.at("Z");
    is_v1ca = true;
    for (const Rule& r : rules) {
      bool counter_only = true;  // pushed is I* (possibly followed by Z below)
      std::span<const SymbolId> body(r.pushed);
      if (r.src_symbol == Z) {
        if (r.pushed.empty() || r.pushed.back() != Z) { is_v1ca = false; continue; }
        body = body.subspan(0, body.size() - 1);
      }
      for (SymbolId s : body) counter_only = counter_only && s == I;
      if (!counter_only) is_v1ca = false;
    }
  }
}

StateId VpdaSystem::state(std::string_view name) const {
  auto it = state_index.find(std::string(name));
  if (it == state_index.end()) throw std::invalid_argument("undeclared state '" + std::string(name) + "'");
  return it->second;
}

SymbolId VpdaSystem::symbol(std::string_view name) const {
  auto it = symbol_index.find(std::string(name));
  if (it == symbol_index.end()) throw std::invalid_argument("undeclared symbol '" + std::string(name) + "'");
  return it->second;
}

const std::vector<uint32_t>& VpdaSystem::head_rules(StateId p, SymbolId x) const {
  static const std::vector<uint32_t> none;
  size_t i = p * n_symbols() + x;
  if (i >= head_index_.size()) return none;
  return head_index_[i];
}

std::string VpdaSystem::format_rule(const Rule& r) const {
  std::string out = state_names[r.src_state] + " " + symbol_names[r.src_symbol] + " -" +
                    alphabet.names[r.action] + "-> " + state_names[r.dst_state];
  if (r.pushed.empty()) {
    out += " -";
  } else {
    for (SymbolId s : r.pushed) out += " " + symbol_names[s];
  }
  return out;
}

std::string VpdaSystem::format_configuration(const Configuration& c) const {
  std::string out = state_names[c.state] + ":";
  if (c.stack.empty()) return out + "-";
  bool compact = true;
  for (SymbolId s : c.stack) compact = compact && symbol_names[s].size() == 1;
  for (size_t i = 0; i < c.stack.size(); ++i) {
    if (i && !compact) out += ".";
    out += symbol_names[c.stack[i]];
  }
  return out;
}

Configuration VpdaSystem::parse_configuration(std::string_view text) const {
  if (text.empty()) throw std::invalid_argument("empty configuration");

  // p(n): one-counter shorthand for p : I^n Z
  if (text.back() == ')') {
    size_t open = text.find('(');
    if (open != std::string_view::npos) {
      std::string st(text.substr(0, open));
      std::string num(text.substr(open + 1, text.size() - open - 2));
      if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad counter value in '" + std::string(text) + "'");
      if (!symbol_index.count("I") || !symbol_index.count("Z"))
        throw std::invalid_argument("p(n) notation needs stack symbols I and Z");
      Configuration c{state(st), {}};
      long n = std::stol(num);
      c.stack.assign(n, symbol_index.at("I"));
      c.stack.push_back(symbol_index.at("Z"));
      return c;
    }
  }

  auto parse_stack = [this](std::string_view s) {
    std::vector<SymbolId> stack;
    if (s == "-") return stack;
    if (s.find('.') != std::string_view::npos) {
      size_t pos = 0;
      while (pos <= s.size()) {
        size_t dot = s.find('.', pos);
        std::string_view part = s.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
        stack.push_back(symbol(part));
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
      }
      return stack;
    }
    // whole tail as one symbol name, else per-character
    auto it = symbol_index.find(std::string(s));
    if (it != symbol_index.end()) {
      stack.push_back(it->second);
      return stack;
    }
    for (char ch : s) stack.push_back(symbol(std::string_view(&ch, 1)));
    return stack;
  };

  size_t colon = text.find(':');
  if (colon != std::string_view::npos) {
    Configuration c{state(text.substr(0, colon)), {}};
    std::string_view tail = text.substr(colon + 1);
    if (tail.empty()) throw std::invalid_argument("missing stack in '" + std::string(text) + "'");
    c.stack = parse_stack(tail);
    return c;
  }

  // "pX" shorthand: longest declared state name that is a proper prefix
  size_t best = 0;
  for (const auto& [name, id] : state_index) {
    (void)id;
    if (name.size() < text.size() && text.substr(0, name.size()) == name) best = std::max(best, name.size());
  }
  if (best == 0) throw std::invalid_argument("cannot parse configuration '" + std::string(text) + "'");
  Configuration c{state(text.substr(0, best)), parse_stack(text.substr(best))};
  return c;
}

std::string VpdaSystem::to_text() const {
  std::ostringstream out;
  auto emit = [&](const char* label, ActionClass cls) {
    out << label;
    for (ActionId a = 0; a < alphabet.size(); ++a)
      if (alphabet.class_of(a) == cls) out << " " << alphabet.names[a];
    out << "\n";
  };
  emit("calls:", ActionClass::Call);
  emit("returns:", ActionClass::Return);
  emit("internals:", ActionClass::Internal);
  for (const Rule& r : rules) out << format_rule(r) << "\n";
  return out.str();
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> toks;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) toks.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

VpdaSystem parse_system(std::string_view text, bool require_visibility) {
  VpdaSystem sys;
  bool seen[3] = {false, false, false};
  bool rules_started = false;

  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize(line);
    if (!toks.empty()) {
      try {
        int cls = toks[0] == "calls:" ? 0 : toks[0] == "returns:" ? 1 : toks[0] == "internals:" ? 2 : -1;
        if (cls >= 0) {
          if (rules_started) throw ParseError(0, "alphabet line after first rule");
          if (seen[cls]) throw ParseError(0, "duplicate '" + toks[0] + "' line");
          seen[cls] = true;
          for (size_t i = 1; i < toks.size(); ++i) {
            if (toks[i][0] == '#') throw ParseError(0, "action name '" + toks[i] + "' uses reserved prefix '#'");
            sys.ensure_action(toks[i], static_cast<ActionClass>(cls));
          }
        } else {
          if (!(seen[0] && seen[1] && seen[2]))
            throw ParseError(0, "rule before calls:/returns:/internals: lines");
          rules_started = true;
          if (toks.size() < 4) throw ParseError(0, "incomplete rule (need: p X -a-> q alpha...)");
          const std::string& arrow = toks[2];
          if (arrow.size() < 4 || arrow.front() != '-' || arrow.substr(arrow.size() - 2) != "->")
            throw ParseError(0, "malformed transition arrow '" + arrow + "'");
          std::string action = arrow.substr(1, arrow.size() - 3);
          if (action.empty()) throw ParseError(0, "empty action in arrow");
          if (!sys.alphabet.has(action)) throw ParseError(0, "undeclared action '" + action + "'");
          StateId p = sys.ensure_state(toks[0]);
          SymbolId x = sys.ensure_symbol(toks[1]);
          StateId q = sys.ensure_state(toks[3]);
          std::vector<SymbolId> pushed;
          if (toks.size() == 5 && toks[4] == "-") {
            // explicit empty push
          } else {
            for (size_t i = 4; i < toks.size(); ++i) {
              if (toks[i] == "-") throw ParseError(0, "'-' mixed with pushed symbols");
              pushed.push_back(sys.ensure_symbol(toks[i]));
            }
            if (toks.size() == 4) throw ParseError(0, "missing right-hand side stack ('-' for empty)");
          }
          sys.add_rule(p, x, sys.alphabet.id(action), q, std::move(pushed));
        }
      } catch (ParseError& e) {
        if (e.line == 0) throw ParseError(lineno, e.what());
        throw;
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!(seen[0] && seen[1] && seen[2]))
    throw ParseError(lineno, "missing calls:/returns:/internals: declarations");

  sys.finalize();
  if (require_visibility) validate_visibility(sys);
  return sys;
}

void validate_visibility(const VpdaSystem& sys) {
  std::string report;
  for (const Rule& r : sys.rules) {
    int want = arity(sys.alphabet.class_of(r.action));
    if (static_cast<int>(r.pushed.size()) != want) {
      report += "  " + sys.format_rule(r) + "  (pushes " + std::to_string(r.pushed.size()) +
                ", class allows " + std::to_string(want) + ")\n";
    }
  }
  if (!report.empty()) throw std::invalid_argument("visibility violations:\n" + report);
}

std::vector<std::pair<ActionId, Configuration>> step(const VpdaSystem& sys, const Configuration& c) {
  std::vector<std::pair<ActionId, Configuration>> out;
  if (c.stack.empty()) return out;
  for (uint32_t ri : sys.head_rules(c.state, c.stack[0])) {
    const Rule& r = sys.rules[ri];
    Configuration next{r.dst_state, {}};
    next.stack.reserve(r.pushed.size() + c.stack.size() - 1);
    next.stack.insert(next.stack.end(), r.pushed.begin(), r.pushed.end());
    next.stack.insert(next.stack.end(), c.stack.begin() + 1, c.stack.end());
    out.emplace_back(r.action, std::move(next));
  }
  return out;
}

std::vector<ActionId> initial_actions_head(const VpdaSystem& sys, StateId p, SymbolId x) {
  std::vector<ActionId> out;
  for (uint32_t ri : sys.head_rules(p, x)) out.push_back(sys.rules[ri].action);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ActionId> initial_actions(const VpdaSystem& sys, const Configuration& c) {
  if (c.stack.empty()) return {};
  return initial_actions_head(sys, c.state, c.stack[0]);
}

int stack_effect(const ActionAlphabet& alphabet, std::span<const ActionId> w) {
  int h = 0;
  for (ActionId a : w) h += height_change(alphabet.class_of(a));
  return h;
}

int stack_effect(const ActionAlphabet& alphabet, const std::vector<std::string>& w) {
  int h = 0;
  for (const std::string& name : w) h += height_change(alphabet.class_of(alphabet.id(name)));
  return h;
}

}  // namespace vpe
