// zddsynth: realizability checking and witness synthesis for forall-exists
// CNF problems.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zddsynth/formula.hpp"
#include "zddsynth/oracle.hpp"
#include "zddsynth/pipeline.hpp"
#include "zddsynth/planner.hpp"
#include "zddsynth/witness_io.hpp"

namespace fs = std::filesystem;
using namespace zsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPlanningExhausted = 10;
constexpr int kExitTimeout = 11;

struct Shared {
  std::string input;
  std::string sidecar;
  long plan_timeout_ms = 200'000;
  std::size_t width_target = 200;
  long exec_timeout_ms = 7'200'000;
  std::uint64_t seed = 0;
  std::string heuristic = "min-fill";
  std::string mode = "dp";
  std::string stats;
  std::string stats_file;
  std::string emit_tree;
  std::string tree;
  std::string out;
  std::size_t max_restarts = 32;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void add_shared(CLI::App* app, Shared& s, bool with_input = true) {
  if (with_input) app->add_option("input", s.input, "QDIMACS or DIMACS file ('-' for stdin)")->required();
  app->add_option("--sidecar", s.sidecar, "JSON {\"inputs\":[..],\"outputs\":[..]} overriding quantifiers");
  app->add_option("--plan-timeout-ms", s.plan_timeout_ms, "planning budget")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--width-target", s.width_target, "accept the first tree this narrow")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
  app->add_option("--exec-timeout-ms", s.exec_timeout_ms, "execution budget")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", s.seed, "seed for randomized tie-breaking")->capture_default_str();
  app->add_option("--heuristic", s.heuristic, "decomposition heuristic")
      ->check(CLI::IsMember({"min-fill", "mcs", "random-restarts"}))->capture_default_str();
  app->add_option("--max-restarts", s.max_restarts, "decomposer restarts")->capture_default_str();
  app->add_option("--mode", s.mode, "execution engine")
      ->check(CLI::IsMember({"dp", "monolithic"}))->capture_default_str();
  app->add_option("--stats", s.stats, "machine-readable stats")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--stats-file", s.stats_file, "append stats here instead of standard output");
  app->add_option("--emit-tree", s.emit_tree, "write the project-join tree as JSON");
  app->add_option("--tree", s.tree, "execute this project-join tree instead of planning");
}

CnfSpec load(const Shared& s) {
  const std::string text = read_file(s.input);
  const std::string name = s.input == "-" ? "<stdin>" : fs::path(s.input).filename().string();
  CnfSpec spec = s.sidecar.empty() ? parse_qdimacs(text, name)
                                   : parse_dimacs(text, read_file(s.sidecar), name);
  return preprocess(spec);
}

RunOptions options_from(const Shared& s) {
  RunOptions o;
  o.plan.plan_timeout = std::chrono::milliseconds(s.plan_timeout_ms);
  o.plan.width_target = s.width_target;
  o.plan.seed = s.seed;
  o.plan.heuristic = heuristic_from_string(s.heuristic);
  o.plan.max_restarts = s.max_restarts;
  o.exec_timeout = std::chrono::milliseconds(s.exec_timeout_ms);
  o.mode = mode_from_string(s.mode);
  if (!s.tree.empty()) o.tree = tree_from_json(read_file(s.tree));
  return o;
}

void emit_stats(const Shared& s, const RunStats& stats) {
  if (s.stats.empty()) return;
  std::string text;
  if (s.stats == "json") {
    text = stats_json(stats);
  } else {
    const bool fresh = s.stats_file.empty() || !fs::exists(s.stats_file) ||
                       fs::file_size(s.stats_file) == 0;
    text = (fresh ? stats_csv_header() : std::string()) + stats_csv_row(stats);
  }
  if (s.stats_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(s.stats_file, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + s.stats_file);
    out << text;
  }
}

int exit_for(const RunStats& stats) {
  if (stats.outcome == "PLANNING_EXHAUSTED") return kExitPlanningExhausted;
  if (stats.outcome == "TIMEOUT") return kExitTimeout;
  return kExitOk;
}

void summarize(const RunResult& r) {
  std::cout << "instance: " << r.stats.instance << '\n'
            << "outcome: " << r.stats.outcome << '\n'
            << "mode: " << r.stats.mode << '\n';
  if (r.stats.mode == "dp") std::cout << "pjt_width: " << r.stats.pjt_width << '\n';
  if (r.outcome == Outcome::PartiallyRealizable) {
    if (r.rset_truncated) std::cout << "rset_clauses: (too many to list)\n";
    else std::cout << "rset_clauses: " << r.rset.size() << '\n';
  }
  if (!r.stats.free_vars.empty()) {
    std::cout << "free_vars:";
    for (Prop p : r.stats.free_vars) std::cout << ' ' << p + 1;
    std::cout << " (treated as outputs)\n";
  }
  std::cout << std::fixed << std::setprecision(1) << "time_ms: parse " << r.stats.parse_ms
            << ", plan " << r.stats.plan_ms << ", exec " << r.stats.exec_ms << ", total "
            << r.stats.total_ms << '\n';
}

int run_solver(const Shared& s, bool synthesize, const std::string& dimacs_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const CnfSpec spec = load(s);
  const double parse_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  RunOptions opts = options_from(s);
  opts.synthesize = synthesize;
  RunResult r = run_pipeline(spec, opts);
  r.stats.parse_ms = parse_ms;
  r.stats.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!s.emit_tree.empty() && r.tree) write_file(s.emit_tree, tree_to_json(*r.tree));
  if (!s.out.empty()) {
    if (synthesize) {
      if (r.witnesses) write_file(s.out, emit_witnesses(*r.witnesses, spec));
    } else if (r.outcome) {
      if (r.rset_truncated) throw std::runtime_error("realizability set too large to write");
      write_file(s.out, rset_dimacs(r.rset, spec));
    }
  }
  if (!dimacs_dir.empty() && r.witnesses) {
    fs::create_directories(dimacs_dir);
    for (const auto& [y, cnf] : r.witnesses->cnf)
      write_file((fs::path(dimacs_dir) / ("y" + std::to_string(y + 1) + ".cnf")).string(),
                 witness_dimacs(*r.witnesses, y, spec));
  }
  summarize(r);
  if (synthesize && r.outcome == Outcome::NullaryRealizable)
    std::cout << "witnesses: none (no input has a solution)\n";
  emit_stats(s, r.stats);
  return exit_for(r.stats);
}

int run_plan(const Shared& s) {
  const CnfSpec spec = load(s);
  PlanConfig config = options_from(s).plan;
  try {
    const PlanResult p = plan(spec, config);
    if (!s.emit_tree.empty()) write_file(s.emit_tree, tree_to_json(p.tree));
    std::cout << "instance: " << spec.name << '\n'
              << "pjt_width: " << p.report.best_width << '\n'
              << "met_target: " << (p.report.met_target ? "true" : "false") << '\n'
              << "trees_examined: " << p.report.trees_examined << '\n'
              << "elapsed_ms: " << p.report.elapsed.count() << '\n';
    return kExitOk;
  } catch (const PlanningExhausted& e) {
    std::cout << "outcome: PLANNING_EXHAUSTED\n";
    std::cerr << e.what() << '\n';
    return kExitPlanningExhausted;
  }
}

int run_verify(const Shared& s, const std::string& witness_path) {
  const CnfSpec spec = load(s);
  const WitnessDocument doc = parse_witnesses(read_file(witness_path), spec);
  const WitnessCheck check = verify_witnesses(spec, doc.cnfs());
  if (check.pass) {
    std::cout << "verify: PASS\n";
    return kExitOk;
  }
  std::cout << "verify: FAIL\ncounterexample:";
  const auto xs = spec.inputs();
  for (std::size_t i = 0; i < xs.size(); ++i)
    std::cout << ' ' << (((*check.counterexample >> i) & 1u) ? "" : "-") << 'x' << xs[i] + 1;
  std::cout << '\n';
  return kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realizability checking and witness synthesis for forall-exists CNF"};
  app.require_subcommand(1);

  Shared realize_opts, synth_opts, plan_opts, verify_opts;
  auto* realize = app.add_subcommand("realize", "classify realizability");
  add_shared(realize, realize_opts);
  realize->add_option("--out", realize_opts.out, "write the realizability set as DIMACS");

  std::string dimacs_dir;
  auto* synth = app.add_subcommand("synth", "classify and construct witnesses");
  add_shared(synth, synth_opts);
  synth->add_option("--out", synth_opts.out, "write witnesses as JSON");
  synth->add_option("--emit-dimacs-dir", dimacs_dir, "write one DIMACS file per output");

  auto* plan_cmd = app.add_subcommand("plan", "compute a graded project-join tree only");
  add_shared(plan_cmd, plan_opts);

  std::string witness_path;
  auto* verify = app.add_subcommand("verify", "check witnesses exhaustively");
  verify->add_option("input", verify_opts.input, "problem file")->required();
  verify->add_option("witnesses", witness_path, "witness JSON")->required();
  verify->add_option("--sidecar", verify_opts.sidecar, "role sidecar JSON");

  std::string family, gen_out = "-";
  std::size_t gen_n = 1;
  RandomSpecParams rnd;
  auto* gen = app.add_subcommand("gen", "write a generated instance as QDIMACS");
  gen->add_option("family", family, "chain, mutex-like, qshifter-like or random")
      ->required()->check(CLI::IsMember({"chain", "mutex-like", "qshifter-like", "random"}));
  gen->add_option("n", gen_n, "family size")->check(CLI::PositiveNumber);
  gen->add_option("--num-x", rnd.num_x, "random: inputs");
  gen->add_option("--num-y", rnd.num_y, "random: outputs");
  gen->add_option("--num-clauses", rnd.num_clauses, "random: clauses");
  gen->add_option("--max-width", rnd.max_width, "random: literals per clause");
  gen->add_option("--seed", rnd.seed, "random: seed");
  gen->add_flag("--allow-pure-x", rnd.allow_pure_x, "random: start with an input-only clause");
  gen->add_option("--out", gen_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*realize) return run_solver(realize_opts, false, "");
    if (*synth) return run_solver(synth_opts, true, dimacs_dir);
    if (*plan_cmd) return run_plan(plan_opts);
    if (*verify) return run_verify(verify_opts, witness_path);
    if (*gen) {
      const CnfSpec spec = family == "random" ? gen_random(rnd) : gen_family(family, gen_n);
      write_file(gen_out, render_qdimacs(spec));
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
