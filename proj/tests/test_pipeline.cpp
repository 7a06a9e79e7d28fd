#include "doctest.h"
#include "json.hpp"
#include "runs.hpp"
#include "testkit.hpp"
#include "zddsynth/pipeline.hpp"

using namespace zsynth;
using namespace testkit;
using namespace std::chrono_literals;

namespace {

const char* kAppendix =
    "p cnf 8 5\na 1 2 3 0\ne 4 5 6 0\n1 4 -5 0\n-1 2 6 0\n1 -2 3 5 0\n-3 1 -4 0\n-3 2 -5 0\n";

RunOptions options(Mode mode, bool synth) {
  RunOptions o;
  o.plan = fast_plan();
  o.mode = mode;
  o.synthesize = synth;
  return o;
}

}  // namespace

TEST_CASE("both modes on the worked example") {
  const CnfSpec s = preprocess(parse_qdimacs(kAppendix, "appendix"));
  for (Mode mode : {Mode::Dp, Mode::Monolithic}) {
    const RunResult r = run_pipeline(s, options(mode, true));
    CHECK(r.stats.outcome == "FULLY_REALIZABLE");
    CHECK(r.stats.mode == to_string(mode));
    CHECK(r.rset.empty());
    REQUIRE(r.witnesses);
    CHECK(verify_witnesses(s, r.witnesses->cnfs()).pass);
    CHECK(r.stats.free_vars == std::vector<Prop>{6, 7});
    CHECK(r.stats.peak_nodes > 2);
    CHECK(r.tree.has_value() == (mode == Mode::Dp));
  }
}

TEST_CASE("partial outcome carries the realizability set") {
  const CnfSpec s = make_spec(1, 1, {cl({1}), cl({2})});
  const RunResult r = run_pipeline(s, options(Mode::Dp, false));
  CHECK(r.stats.outcome == "PARTIALLY_REALIZABLE");
  CHECK(r.rset == Clauses{cl({1})});
  CHECK(!r.witnesses);
}

TEST_CASE("nullary outcome produces no witnesses") {
  const CnfSpec s = make_spec(0, 1, {cl({1}), cl({-1})});
  for (Mode mode : {Mode::Dp, Mode::Monolithic}) {
    const RunResult r = run_pipeline(s, options(mode, true));
    CHECK(r.stats.outcome == "NULLARY_REALIZABLE");
    CHECK(!r.witnesses);
  }
}

TEST_CASE("supplied trees are validated") {
  const CnfSpec s = make_spec(1, 1, {cl({1, 2})});
  RunOptions o = options(Mode::Dp, true);
  o.tree = flat_tree(s);
  const RunResult ok = run_pipeline(s, o);
  CHECK(ok.stats.outcome == "FULLY_REALIZABLE");
  CHECK(ok.stats.trees_examined == 1);

  GradedProjectJoinTree bad;
  bad.root = bad.add_internal(Grade::Y, {0, 1}, {bad.add_leaf(0)});
  o.tree = bad;
  CHECK_THROWS_AS(run_pipeline(s, o), InvalidTree);
}

TEST_CASE("budgets become outcomes") {
  const CnfSpec big = gen_family("qshifter-like", 60);
  RunOptions o = options(Mode::Dp, false);
  o.plan.plan_timeout = 0ms;
  CHECK(run_pipeline(big, o).stats.outcome == "PLANNING_EXHAUSTED");

  const CnfSpec chain = gen_family("chain", 3000);
  RunOptions slow = options(Mode::Monolithic, true);
  slow.exec_timeout = 1ms;
  const RunResult r = run_pipeline(chain, slow);
  CHECK(r.stats.outcome == "TIMEOUT");
  CHECK(!r.outcome);
  CHECK(!r.witnesses);
}

TEST_CASE("modes agree on random instances") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CnfSpec s = random_small(rng, seed);
    const RunResult a = run_pipeline(s, options(Mode::Dp, true));
    const RunResult b = run_pipeline(s, options(Mode::Monolithic, true));
    CHECK(a.stats.outcome == b.stats.outcome);
    CHECK(truth_models(s, a.rset) == truth_models(s, b.rset));
    if (a.witnesses) CHECK(verify_witnesses(s, a.witnesses->cnfs()).pass);
    if (b.witnesses) CHECK(verify_witnesses(s, b.witnesses->cnfs()).pass);
  }
}

TEST_CASE("stats rendering") {
  RunStats st;
  st.instance = "a,b";
  st.mode = "dp";
  st.outcome = "FULLY_REALIZABLE";
  st.parse_ms = 1.5;
  st.pjt_width = 4;
  st.free_vars = {6};
  CHECK(stats_csv_header() ==
        "instance,mode,outcome,parse_ms,plan_ms,exec_ms,total_ms,pjt_width,peak_nodes\n");
  CHECK(stats_csv_row(st) == "\"a,b\",dp,FULLY_REALIZABLE,1.500,0.000,0.000,0.000,4,0\n");
  const auto j = nlohmann::json::parse(stats_json(st));
  CHECK(j["outcome"] == "FULLY_REALIZABLE");
  CHECK(j["free_vars"] == nlohmann::json::parse("[7]"));
  CHECK(j["pjt_width"] == 4);
  CHECK(mode_from_string("monolithic") == Mode::Monolithic);
  CHECK_THROWS(mode_from_string("fast"));
}
