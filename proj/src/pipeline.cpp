#include "zddsynth/pipeline.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "zddsynth/stack.hpp"
#include "zddsynth/synthesis.hpp"

namespace zsynth {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string describe(const std::vector<Violation>& vs) {
  std::string s;
  for (const auto& v : vs) {
    if (!s.empty()) s += "; ";
    s += v.kind + ": " + v.detail;
  }
  return s;
}

void execute(const CnfSpec& spec, const RunOptions& options, RunResult& out) {
  const PropOrder order = mcs_order(spec);
  zdd::ManagerOptions mopts;
  mopts.deadline = Deadline::after(options.exec_timeout);
  zdd::Manager m(spec.num_props, order.order, mopts);

  RealizabilityOutcome r;
  std::optional<WitnessSet> ws;
  if (options.mode == Mode::Monolithic) {
    r = classify_monolithic(m, spec);
    if (options.synthesize && r.kind != Outcome::NullaryRealizable)
      ws = synth_monolithic(m, build_family(spec, m), m.sorted_by_rank(spec.outputs()));
  } else {
    Valuations vals;
    r = check_partial(m, *out.tree, spec, vals);
    if (options.synthesize && r.kind != Outcome::NullaryRealizable)
      ws = dp_synth(m, *out.tree, vals, spec);
  }
  out.outcome = r.kind;
  out.stats.outcome = to_string(r.kind);
  try {
    out.rset = m.enumerate(r.rset, options.rset_cap);
  } catch (const CapExceeded&) {
    out.rset_truncated = true;
  }
  if (ws) out.witnesses = materialize(m, *ws, spec.name, to_string(options.mode));
  out.stats.peak_nodes = m.allocated_nodes();
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Dp ? "dp" : "monolithic"; }

Mode mode_from_string(const std::string& s) {
  if (s == "dp") return Mode::Dp;
  if (s == "monolithic") return Mode::Monolithic;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

RunResult run_pipeline(const CnfSpec& spec, const RunOptions& options) {
  RunResult out;
  out.stats.instance = spec.name;
  out.stats.mode = to_string(options.mode);
  out.stats.seed = options.plan.seed;
  out.stats.free_vars = spec.free_vars;

  if (options.mode == Mode::Dp) {
    const auto t = Clock::now();
    if (options.tree) {
      const auto problems = validate_pjt(*options.tree, spec);
      if (!problems.empty()) throw InvalidTree("invalid project-join tree: " + describe(problems));
      out.tree = options.tree;
      out.stats.trees_examined = 1;
      out.stats.met_target = true;
    } else {
      try {
        PlanResult p = plan(spec, options.plan);
        out.tree = std::move(p.tree);
        out.stats.trees_examined = p.report.trees_examined;
        out.stats.met_target = p.report.met_target;
      } catch (const PlanningExhausted&) {
        out.stats.plan_ms = ms_since(t);
        out.stats.outcome = "PLANNING_EXHAUSTED";
        return out;
      }
    }
    out.stats.pjt_width = pjt_width(*out.tree, spec);
    out.stats.plan_ms = ms_since(t);
  }

  const auto t = Clock::now();
  try {
    run_with_large_stack([&] { execute(spec, options, out); });
  } catch (const TimeoutError&) {
    out.outcome.reset();
    out.rset.clear();
    out.witnesses.reset();
    out.stats.outcome = "TIMEOUT";
  }
  out.stats.exec_ms = ms_since(t);
  return out;
}

std::string stats_json(const RunStats& s) {
  nlohmann::ordered_json j;
  j["instance"] = s.instance;
  j["mode"] = s.mode;
  j["outcome"] = s.outcome;
  j["parse_ms"] = s.parse_ms;
  j["plan_ms"] = s.plan_ms;
  j["exec_ms"] = s.exec_ms;
  j["total_ms"] = s.total_ms;
  j["pjt_width"] = s.pjt_width;
  j["peak_nodes"] = s.peak_nodes;
  j["trees_examined"] = s.trees_examined;
  j["met_target"] = s.met_target;
  j["seed"] = s.seed;
  std::vector<long> free;
  for (Prop p : s.free_vars) free.push_back(static_cast<long>(p) + 1);
  j["free_vars"] = free;
  return j.dump() + "\n";
}

std::string stats_csv_header() {
  return "instance,mode,outcome,parse_ms,plan_ms,exec_ms,total_ms,pjt_width,peak_nodes\n";
}

std::string stats_csv_row(const RunStats& s) {
  std::string name = s.instance;
  if (name.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : name) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    name = q + "\"";
  }
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << name << ',' << s.mode << ',' << s.outcome << ','
      << s.parse_ms << ',' << s.plan_ms << ',' << s.exec_ms << ',' << s.total_ms << ','
      << s.pjt_width << ',' << s.peak_nodes << '\n';
  return out.str();
}

}  // namespace zsynth
