#include <random>

#include "doctest.h"
#include "testkit.hpp"
#include "zddsynth/formula.hpp"

using namespace zsynth;
using namespace testkit;

namespace {

const char* kAppendix =
    "p cnf 8 5\na 1 2 3 0\ne 4 5 6 0\n1 4 -5 0\n-1 2 6 0\n1 -2 3 5 0\n-3 1 -4 0\n-3 2 -5 0\n";

CnfSpec raw(std::size_t nx, std::size_t ny, Clauses cs) {
  CnfSpec s;
  s.num_props = nx + ny;
  s.roles.assign(nx, Role::Input);
  s.roles.resize(nx + ny, Role::Output);
  s.clauses = std::move(cs);
  return s;
}

}  // namespace

TEST_CASE("parse minimal file") {
  const CnfSpec s = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
  CHECK(s.num_props == 2);
  CHECK(s.inputs() == std::vector<Prop>{0});
  CHECK(s.outputs() == std::vector<Prop>{1});
  CHECK(s.clauses == Clauses{cl({1, 2})});
  CHECK(s.free_vars.empty());
}

TEST_CASE("parse the worked example") {
  const CnfSpec s = parse_qdimacs(kAppendix, "appendix");
  CHECK(s.inputs() == std::vector<Prop>{0, 1, 2});
  CHECK(s.clauses.size() == 5);
  CHECK(s.clauses[0] == cl({1, 4, -5}));
  CHECK(s.clauses[4] == cl({-3, 2, -5}));
  // Variables 7 and 8 are declared but never quantified.
  CHECK(s.free_vars == std::vector<Prop>{6, 7});
  CHECK(s.is_output(6));
  CHECK(s.name == "appendix");
}

TEST_CASE("parse instance without inputs") {
  const CnfSpec s = parse_qdimacs("p cnf 1 1\ne 1 0\n-1 0\n");
  CHECK(s.inputs().empty());
  CHECK(s.outputs() == std::vector<Prop>{0});
  CHECK(s.clauses == Clauses{cl({-1})});
}

TEST_CASE("parse tolerates comments, split clauses and merged blocks") {
  const CnfSpec s = parse_qdimacs("c hello\np cnf 4 2\na 1 0\na 2 0\ne 3 4 0\n1 3\n -4 0 2 4 0\n");
  CHECK(s.inputs() == std::vector<Prop>{0, 1});
  CHECK(s.clauses == Clauses{cl({1, 3, -4}), cl({2, 4})});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_qdimacs("p cnf x 1\n1 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_qdimacs("1 2 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\n1 3 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\n1 2\n"), SyntaxError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\n1 0\na 2 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\ne 2 0\na 1 0\n1 0\n"), QuantifierError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 3 1\na 1 0\ne 2 0\na 3 0\n1 0\n"), QuantifierError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\na 1 0\ne 1 0\n1 0\n"), QuantifierError);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n"), CountMismatch);
  CHECK_THROWS_AS(parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n2 0\n"), CountMismatch);
}

TEST_CASE("sidecar overrides quantifier lines") {
  const char* text = "p cnf 3 1\na 1 0\ne 2 3 0\n1 2 3 0\n";
  const CnfSpec s = parse_dimacs(text, std::string_view(R"({"inputs":[2,3],"outputs":[1]})"));
  CHECK(s.inputs() == std::vector<Prop>{1, 2});
  CHECK(s.outputs() == std::vector<Prop>{0});
  CHECK(s.free_vars.empty());
  const CnfSpec plain = parse_dimacs("p cnf 2 1\n1 2 0\n", std::string_view(R"({"inputs":[1]})"));
  CHECK(plain.inputs() == std::vector<Prop>{0});
  CHECK(plain.free_vars == std::vector<Prop>{1});
  CHECK_THROWS_AS(parse_dimacs(text, std::string_view(R"({"inputs":[1],"outputs":[1]})")),
                  QuantifierError);
  CHECK_THROWS_AS(parse_dimacs(text, std::string_view("{")), SyntaxError);
  CHECK(parse_dimacs(text, std::nullopt) == parse_qdimacs(text));
}

TEST_CASE("preprocess examples") {
  // a = x1, b = x2 in the first case; both inputs here.
  CHECK(preprocess(raw(2, 1, {cl({1}), cl({1, 2})})).pure_x_clauses == Clauses{cl({1})});
  CHECK(preprocess(raw(0, 2, {cl({1}), cl({1, 2})})).clauses == Clauses{cl({1})});
  CHECK(preprocess(raw(1, 1, {cl({1, -1, 2})})).clauses.empty());
  const CnfSpec p = preprocess(raw(2, 1, {cl({1, 2}), cl({1, 3})}));
  CHECK(p.clauses == Clauses{cl({1, 3})});
  CHECK(p.pure_x_clauses == Clauses{cl({1, 2})});
  const CnfSpec e = preprocess(raw(1, 1, {cl({1, 2}), {}}));
  CHECK(e.trivially_nullary);
  CHECK(e.clauses.empty());
  CHECK(e.pure_x_clauses == Clauses{LiteralSet{}});
  const CnfSpec d = preprocess(raw(1, 1, {cl({2, 1}), cl({1, 2}), cl({2, 2, 1})}));
  CHECK(d.clauses == Clauses{cl({1, 2})});
}

TEST_CASE("preprocess is idempotent and model-preserving") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 300; ++round) {
    const std::size_t nx = rng() % 4, ny = 1 + rng() % 4;
    Clauses cs;
    for (std::size_t i = 0, k = rng() % 12; i < k; ++i) {
      LiteralSet c;
      for (std::size_t j = 0, w = 1 + rng() % 4; j < w; ++j)
        c.push_back({static_cast<Prop>(rng() % (nx + ny)), (rng() & 1u) != 0});
      cs.push_back(c);
    }
    const CnfSpec s = raw(nx, ny, cs);
    const CnfSpec p = preprocess(s);
    CHECK(preprocess(p) == p);
    CHECK(cnf_table(p.all_clauses(), nx + ny) == cnf_table(cs, nx + ny));
    for (const auto& c : p.clauses)
      CHECK(std::any_of(c.begin(), c.end(), [&](Literal l) { return p.is_output(l.prop); }));
    for (const auto& c : p.pure_x_clauses)
      CHECK(std::all_of(c.begin(), c.end(), [&](Literal l) { return p.is_input(l.prop); }));
    const auto all = p.all_clauses();
    CHECK(sorted(all) == minimize(all));
  }
}

TEST_CASE("render and parse round-trip") {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 200; ++round) {
    const std::size_t nx = rng() % 4, ny = 1 + rng() % 4;
    CnfSpec s = raw(nx, ny, random_clauses(rng, nx + ny, rng() % 8, 3));
    s.name = "rt";
    if (rng() % 3 == 0) s.free_vars.push_back(static_cast<Prop>(nx + ny - 1));
    CHECK(parse_qdimacs(render_qdimacs(s), "rt") == s);
  }
}

TEST_CASE("maximum-cardinality search order") {
  CHECK(mcs_order(raw(0, 3, {cl({1, 2, 3})})).order == std::vector<Prop>{0, 1, 2});
  CHECK(mcs_order(raw(0, 2, {cl({1}), cl({2})})).order == std::vector<Prop>{0, 1});
  CHECK(mcs_order(raw(0, 3, {cl({1, 2}), cl({2, 3})})).order == std::vector<Prop>{0, 1, 2});
  // Prefers the vertex with more numbered neighbours over a lower id.
  CHECK(mcs_order(raw(0, 4, {cl({1, 4}), cl({1, 3}), cl({3, 4}), cl({2})})).order ==
        std::vector<Prop>{0, 2, 3, 1});
}

TEST_CASE("mcs order is a deterministic permutation") {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 10;
    const CnfSpec s = raw(0, n, random_clauses(rng, n, rng() % 10, 3));
    auto order = mcs_order(s).order;
    CHECK(order == mcs_order(s).order);
    std::sort(order.begin(), order.end());
    for (Prop p = 0; p < n; ++p) CHECK(order[p] == p);
  }
}

TEST_CASE("building the formula family") {
  zdd::Manager empty_m(2);
  CHECK(build_family(raw(1, 1, {}), empty_m) == empty_m.empty());
  const CnfSpec app = preprocess(parse_qdimacs(kAppendix));
  zdd::Manager m(app.num_props, mcs_order(app).order);
  CHECK(m.stats(build_family(app, m)).clause_count == 5);
  const CnfSpec bad = preprocess(raw(1, 1, {cl({1}), {}}));
  CHECK(build_family(bad, m) == m.unit());
}

TEST_CASE("primal graph") {
  const CnfSpec s = raw(0, 3, {cl({1, 2}), cl({2, 3})});
  std::vector<const LiteralSet*> refs{&s.clauses[0], &s.clauses[1]};
  const PrimalGraph g = primal_graph_of(3, refs);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(!g.has_edge(0, 2));
}
