#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vpe/generators.hpp"
#include "vpe/product.hpp"
#include "vpe/regularity.hpp"
#include "vpe/relations.hpp"
#include "vpe/vbpa.hpp"
#include "vpe/verdict.hpp"

using namespace vpe;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << '\n';
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::string> relation_names = {
    "sim-pre", "sim-eq", "csim-pre", "csim-eq", "rsim-pre",
    "rsim-eq", "2sim-pre", "2sim-eq", "bisim"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decides simulation-like relations over visibly pushdown systems"};
  app.require_subcommand(1);

  Limits lim;
  std::string file, rel_name = "bisim", left, right, process, symbol;
  bool json = false, want_witness = false, force_generic = false;

  auto add_limit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--max-transitions", lim.max_transitions,
                    "saturation transition budget");
    cmd->add_option("--max-positions", lim.max_positions, "explored position budget");
    cmd->add_option("--timeout-ms", lim.wall_ms, "wall clock budget");
  };

  CLI::App* check = app.add_subcommand("check", "decide a relation between two configurations");
  check->add_option("--relation", rel_name, "one of the spectrum")
      ->required()
      ->check(CLI::IsMember(relation_names));
  check->add_option("file", file, "system description")->required();
  check->add_option("--left", left, "left configuration, e.g. p:X")->required();
  check->add_option("--right", right, "right configuration")->required();
  check->add_flag("--json", json, "machine-readable verdict");
  check->add_flag("--witness", want_witness, "extract a strategy fragment on failure");
  check->add_flag("--force-generic", force_generic, "skip the single-state fast path");
  add_limit_flags(check);

  CLI::App* regl = app.add_subcommand("regularity", "is the process finite up to equivalence?");
  regl->add_option("file", file, "system description")->required();
  regl->add_option("--process", process, "configuration to classify")->required();
  regl->add_option("--equivalence", rel_name,
                   "spectrum name; the answer is the same for all of them")
      ->check(CLI::IsMember(relation_names));
  regl->add_flag("--json", json, "machine-readable verdict");
  add_limit_flags(regl);

  CLI::App* reduce = app.add_subcommand("reduce", "print the finite system for a single-state input");
  reduce->add_option("file", file, "system description")->required();

  CLI::App* product = app.add_subcommand("product", "dump the lock-step product around a pair");
  product->add_option("file", file, "system description")->required();
  product->add_option("--left", left, "left configuration")->required();
  product->add_option("--right", right, "right configuration")->required();
  unsigned depth = 4;
  product->add_option("--depth", depth, "exploration radius");
  add_limit_flags(product);

  CLI::App* gen = app.add_subcommand("gen", "produce benchmark systems");
  gen->require_subcommand(1);
  CLI::App* gen_hard = gen->add_subcommand(
      "hard-v1ca", "one-counter pair that is bisimilar iff the automaton's language is empty");
  gen_hard->add_option("file", file, "alternating automaton description")->required();
  CLI::App* gen_reg = gen->add_subcommand(
      "regularity", "probe symbol that is regular iff the marked symbol never drains");
  gen_reg->add_option("file", file, "single-state system description")->required();
  gen_reg->add_option("--symbol", symbol, "symbol to mark")->required();
  CLI::App* gen_rand = gen->add_subcommand("random", "seed-deterministic random system");
  RandomSystemParams params;
  gen_rand->add_option("--states", params.states);
  gen_rand->add_option("--symbols", params.symbols);
  gen_rand->add_option("--calls", params.calls);
  gen_rand->add_option("--returns", params.returns);
  gen_rand->add_option("--internals", params.internals);
  gen_rand->add_option("--rules", params.rules);
  gen_rand->add_option("--seed", params.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 0 is --help, anything else a usage error
  }

  try {
    if (check->parsed()) {
      VpdaSystem sys = parse_system(read_file(file));
      Relation rel = parse_relation(rel_name);
      Configuration l = sys.parse_configuration(left);
      Configuration r = sys.parse_configuration(right);
      Verdict v;
      v.relation = rel_name;
      v.left = left;
      v.right = right;
      auto t0 = std::chrono::steady_clock::now();
      bool fast = sys.is_vbpa && l.stack.size() == 1 && r.stack.size() == 1 &&
                  !force_generic && !want_witness;
      if (fast) {
        v.holds = check_relation_vbpa(sys, l.stack[0], r.stack[0], rel);
      } else {
        CheckResult res = check_relation_full(sys, l, r, rel, want_witness, lim);
        v.holds = res.holds;
        v.positions = res.heads;
        v.transitions = res.transitions;
        if (res.witness) v.witness = witness_text(*res.witness);
      }
      v.wall_ms = ms_since(t0);
      emit(json ? to_json(v) : verdict_text(v));
      return v.holds ? 0 : 1;
    }

    if (regl->parsed()) {
      VpdaSystem sys = parse_system(read_file(file));
      parse_relation(rel_name);  // validated, result-independent
      Configuration c = sys.parse_configuration(process);
      auto t0 = std::chrono::steady_clock::now();
      RegularityReport rep = regularity_report(sys, c, lim);
      if (json) {
        Verdict v;
        v.holds = rep.regular;
        v.relation = "regularity";
        v.left = process;
        v.wall_ms = ms_since(t0);
        emit(to_json(v));
      } else {
        emit(rep.text());
      }
      return rep.regular ? 0 : 1;
    }

    if (reduce->parsed()) {
      VpdaSystem sys = parse_system(read_file(file));
      emit(reduce_to_finite(sys).to_text());
      return 0;
    }

    if (product->parsed()) {
      VpdaSystem sys = parse_system(read_file(file));
      Configuration l = sys.parse_configuration(left);
      Configuration r = sys.parse_configuration(right);
      ProductSystem prod(sys);
      ProductConfig from{l.state, r.state, merge_stacks(l.stack, r.stack)};
      emit(dump_product(prod, from, depth, lim));
      return 0;
    }

    if (gen_hard->parsed()) {
      HardInstance inst = gen_hard_v1ca(parse_afa(read_file(file)));
      emit("# related iff the automaton's language is empty\n# left: p:Z\n# right: p':Z\n" +
           inst.system.to_text());
      return 0;
    }
    if (gen_reg->parsed()) {
      VpdaSystem sys = parse_system(read_file(file), false);
      RegularityInstance inst = gen_regularity_instance(sys, sys.symbol(symbol));
      emit("# probe: " + inst.system.symbol_names[inst.probe] + "\n" + inst.system.to_text());
      return 0;
    }
    if (gen_rand->parsed()) {
      emit(gen_random(params).to_text());
      return 0;
    }
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
