#include <random>

#include "doctest.h"
#include "testkit.hpp"
#include "zddsynth/zdd.hpp"

using namespace zsynth;
using namespace testkit;
using zdd::Family;
using zdd::Manager;

namespace {

Clauses list(const Manager& m, Family f) { return sorted(m.enumerate(f)); }

Family build(Manager& m, const Clauses& cs) { return m.clauses(cs); }

// a=1 b=2 c=3 d=4 w=5 over six props
constexpr int a = 1, b = 2, c = 3, d = 4, w = 5;

}  // namespace

TEST_CASE("terminal families") {
  Manager m(3);
  CHECK(m.stats(m.empty()).clause_count == 0);
  CHECK(m.stats(m.unit()).clause_count == 1);
  CHECK(m.stats(m.empty()).node_count == 1);
  CHECK(m.stats(m.unit()).node_count == 1);
  const auto truth = cnf_table(m.enumerate(m.empty()), 3);
  const auto falsity = cnf_table(m.enumerate(m.unit()), 3);
  CHECK(std::all_of(truth.begin(), truth.end(), [](bool v) { return v; }));
  CHECK(std::none_of(falsity.begin(), falsity.end(), [](bool v) { return v; }));
  const Family f = build(m, {cl({1, -2}), cl({3})});
  CHECK(m.union_sf(m.empty(), f) == f);
  CHECK(m.union_sf(f, m.empty()) == f);
}

TEST_CASE("single clause construction") {
  Manager m(8);
  CHECK(m.clause(LiteralSet{}) == m.unit());
  const Family f = m.clause(cl({1, -5, 4}));
  CHECK(list(m, f) == Clauses{cl({1, 4, -5})});
  CHECK(m.clause(cl({1, 2})) == m.clause(cl({2, 1})));
  CHECK_THROWS_AS(m.clause(cl({1, -1})), TautologicalClause);
  CHECK(m.clause(cl({1, -1, 2}), false) == m.empty());
}

TEST_CASE("subsumption-free union") {
  Manager m(8);
  CHECK(list(m, m.union_sf(build(m, {cl({a}), cl({a, b})}), build(m, {cl({b, c})}))) ==
        sorted({cl({a}), cl({b, c})}));
  const Family f = build(m, {cl({a, b}), cl({-c})});
  CHECK(m.union_sf(f, m.unit()) == m.unit());
  const Family both = m.union_sf(m.clause(cl({1, 4, -5})), m.clause(cl({1, -3, -4})));
  CHECK(list(m, both) == sorted({cl({1, 4, -5}), cl({1, -3, -4})}));
}

TEST_CASE("clause distribution") {
  Manager m(8);
  CHECK(list(m, m.distribute(build(m, {cl({a})}), build(m, {cl({b}), cl({c})}))) ==
        sorted({cl({a, b}), cl({a, c})}));
  CHECK(m.distribute(m.clause(cl({1})), m.clause(cl({-1}))) == m.empty());
  const Family r = m.distribute(m.clause(cl({1, -5})), m.clause(cl({1, -3})));
  CHECK(list(m, r) == Clauses{cl({1, -3, -5})});
  const auto lhs = cnf_table(m.enumerate(r), 8);
  const auto f1 = cnf_table({cl({1, -5})}, 8), f2 = cnf_table({cl({1, -3})}, 8);
  for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == (f1[i] || f2[i]));
}

TEST_CASE("selection") {
  Manager m(8);
  const Family z = build(m, {cl({1, 4, -5}), cl({1, -3, -4})});
  const auto s = m.select(z, 3);
  CHECK(list(m, s.pos) == Clauses{cl({1, -5})});
  CHECK(list(m, s.neg) == Clauses{cl({1, -3})});
  CHECK(s.absent == m.empty());
  const auto e = m.select(m.empty(), 2);
  CHECK((e.pos == m.empty() && e.neg == m.empty() && e.absent == m.empty()));
  const auto u = m.select(m.unit(), 2);
  CHECK((u.pos == m.empty() && u.neg == m.empty() && u.absent == m.unit()));
}

TEST_CASE("projection of one proposition") {
  // x1 = prop 0, x2 = prop 1, y = prop 2
  Manager m(3);
  CHECK(list(m, m.project(build(m, {cl({1, 3}), cl({-3, 2})}), 2)) == Clauses{cl({1, 2})});
  CHECK(m.project(build(m, {cl({3}), cl({-3})}), 2) == m.unit());
  CHECK(m.project(build(m, {cl({1, 3}), cl({-1, -3})}), 2) == m.empty());
}

TEST_CASE("projection of several propositions") {
  Manager m(2);
  const Family z = build(m, {cl({1}), cl({-1, 2})});
  CHECK(m.project(z, std::vector<Prop>{}) == z);
  CHECK(m.project(z, std::vector<Prop>{0, 1}) == m.empty());
  CHECK(m.project(build(m, {cl({1}), cl({-1})}), std::vector<Prop>{0, 1}) == m.unit());
}

TEST_CASE("cross builds an equivalent DNF") {
  Manager m(4);
  CHECK(list(m, m.cross(build(m, {cl({a}), cl({b})}))) == Clauses{cl({a, b})});
  CHECK(list(m, m.cross(build(m, {cl({a, b})}))) == sorted({cl({a}), cl({b})}));
  // y = 1, x = 2
  CHECK(list(m, m.cross(build(m, {cl({1, 2}), cl({-1})}))) == Clauses{cl({-1, 2})});
  CHECK(m.cross(m.empty()) == m.empty());
  CHECK_THROWS_AS(m.cross(m.unit()), FalsityHasNoDnf);
  CHECK(m.cross(m.unit(), true) == m.empty());
}

TEST_CASE("complementing cubes") {
  Manager m(4);
  CHECK(list(m, m.complement_cubes(build(m, {cl({c, d})}))) == Clauses{cl({-c, -d})});
  CHECK(m.complement_cubes(m.empty()) == m.empty());
  const Family two = m.set_union(m.clause(cl({a})), m.clause(cl({-b})));
  CHECK(list(m, m.complement_cubes(two)) == sorted({cl({-a}), cl({b})}));
}

TEST_CASE("substituting an output") {
  Manager m(5);
  const Family z = build(m, {cl({a, w}), cl({b, -w})});
  const Family g_cnf = build(m, {cl({c}), cl({d})});
  const Family g_dnf = m.cross(g_cnf);
  CHECK(list(m, g_dnf) == Clauses{cl({c, d})});
  const Family r = m.substitute(z, w - 1, g_cnf, g_dnf);
  CHECK(list(m, r) == sorted({cl({a, c}), cl({a, d}), cl({b, -c, -d})}));
  const Family no_w = build(m, {cl({a, b}), cl({-c})});
  CHECK(m.substitute(no_w, w - 1, g_cnf, g_dnf) == no_w);
  CHECK(m.substitute(m.clause(cl({w})), w - 1, m.empty(), m.empty()) == m.empty());
  CHECK(m.substitute(m.clause(cl({w, a})), w - 1, m.unit(), m.empty()) == m.clause(cl({a})));
  CHECK_THROWS(m.substitute(z, w - 1, m.clause(cl({w})), m.clause(cl({w}))));
}

TEST_CASE("enumeration") {
  Manager m(8);
  CHECK(m.enumerate(m.empty()).empty());
  CHECK(m.enumerate(m.unit()) == Clauses{LiteralSet{}});
  CHECK(m.enumerate(m.clause(cl({1, 4, -5}))) == Clauses{cl({1, 4, -5})});
  const Family many = build(m, {cl({1}), cl({2}), cl({3})});
  CHECK_THROWS_AS(m.enumerate(many, 2), CapExceeded);
  // Order follows the diagram levels, here the identity order.
  CHECK(m.enumerate(build(m, {cl({2}), cl({1})})) == Clauses{cl({1}), cl({2})});
}

TEST_CASE("family statistics") {
  Manager m(2);
  const auto s = m.stats(build(m, {cl({a}), cl({b})}));
  CHECK(s.clause_count == 2);
  // Node for a, node for b, and both terminals.
  CHECK(s.node_count == 4);
}

TEST_CASE("clause counts beyond 64 bits") {
  const std::size_t n = 70;
  Manager m(n);
  // Product of n two-literal clauses, disjoined pairwise: 2^n clauses.
  Family f = m.clause(cl({1}));
  f = m.set_union(f, m.clause(cl({-1})));
  for (int p = 2; p <= static_cast<int>(n); ++p) {
    const Family layer = m.set_union(m.clause(cl({p})), m.clause(cl({-p})));
    f = m.distribute(f, layer);
  }
  CHECK(m.stats(f).clause_count == boost::multiprecision::cpp_int(1) << n);
}

TEST_CASE("canonical handles regardless of construction order") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng() % 6;
    Manager m(n);
    Clauses cs = random_clauses(rng, n, 1 + rng() % 8, 3);
    const Family f1 = m.clauses(cs);
    std::shuffle(cs.begin(), cs.end(), rng);
    Family f2 = m.empty();
    for (const auto& c : cs) f2 = m.union_sf(m.clause(c), f2);
    CHECK(f1 == f2);
    CHECK(m.well_formed(f1));
  }
}

TEST_CASE("union_sf is conjunction and stays subsumption-free") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Manager m(n);
    const Clauses ca = random_clauses(rng, n, rng() % 6, 3);
    const Clauses cb = random_clauses(rng, n, rng() % 6, 3);
    const Clauses cc = random_clauses(rng, n, rng() % 6, 3);
    Family fa = m.empty(), fb = m.empty(), fc = m.empty();
    for (const auto& c : ca) fa = m.set_union(fa, m.clause(c));
    for (const auto& c : cb) fb = m.set_union(fb, m.clause(c));
    for (const auto& c : cc) fc = m.set_union(fc, m.clause(c));
    const Family u = m.union_sf(fa, fb);
    const Clauses got = m.enumerate(u);
    const auto ta = cnf_table(ca, n), tb = cnf_table(cb, n), tu = cnf_table(got, n);
    for (std::size_t r = 0; r < tu.size(); ++r) CHECK(tu[r] == (ta[r] && tb[r]));
    CHECK(sorted(got) == minimize(got));
    CHECK(m.union_sf(u, u) == u);
    CHECK(m.union_sf(fa, fb) == m.union_sf(fb, fa));
    CHECK(m.union_sf(m.union_sf(fa, fb), fc) == m.union_sf(fa, m.union_sf(fb, fc)));
    CHECK(m.well_formed(u));
  }
}

TEST_CASE("distribute is disjunction, tautology-free and subsumption-free") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Manager m(n);
    const Clauses ca = random_clauses(rng, n, rng() % 5, 3);
    const Clauses cb = random_clauses(rng, n, rng() % 5, 3);
    const Family r = m.distribute(m.clauses(ca), m.clauses(cb));
    const Clauses got = m.enumerate(r);
    const auto ta = cnf_table(ca, n), tb = cnf_table(cb, n), tr = cnf_table(got, n);
    for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr[i] == (ta[i] || tb[i]));
    for (const auto& c : got)
      for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].prop != c[i - 1].prop);
    CHECK(sorted(got) == minimize(got));
  }
}

TEST_CASE("selection partitions the clauses") {
  std::mt19937_64 rng(14);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Manager m(n);
    const Family z = m.clauses(random_clauses(rng, n, rng() % 8, 4));
    const Prop p = static_cast<Prop>(rng() % n);
    const auto s = m.select(z, p);
    Clauses lifted;
    for (auto c : m.enumerate(s.pos)) {
      c.push_back(Literal::pos(p));
      lifted.push_back(c);
    }
    for (auto c : m.enumerate(s.neg)) {
      c.push_back(Literal::neg(p));
      lifted.push_back(c);
    }
    for (const auto& c : m.enumerate(s.absent)) {
      CHECK(!mentions({c}, p));
      lifted.push_back(c);
    }
    CHECK(sorted(lifted) == sorted(m.enumerate(z)));
  }
}

TEST_CASE("projection matches existential quantification") {
  std::mt19937_64 rng(15);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 8;
    Manager m(n);
    const Clauses cs = random_clauses(rng, n, rng() % 10, 4);
    const Prop p = static_cast<Prop>(rng() % n);
    const Clauses got = m.enumerate(m.project(m.clauses(cs), p));
    CHECK(!mentions(got, p));
    CHECK(cnf_table(got, n) == exists(cnf_table(cs, n), p));
  }
}

TEST_CASE("cross agrees with the CNF and is an involution on positive families") {
  std::mt19937_64 rng(16);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Manager m(n);
    const Clauses cs = random_clauses(rng, n, rng() % 6, 3);
    const Family z = m.clauses(cs);
    if (z == m.unit()) continue;
    const Clauses dnf = m.enumerate(m.cross(z));
    if (z == m.empty()) {
      CHECK(dnf.empty());  // truth keeps its degenerate encoding
      continue;
    }
    CHECK(dnf_table(dnf, n) == cnf_table(cs, n));
    CHECK(sorted(dnf) == minimize(dnf));
  }
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 6;
    Manager m(n);
    Clauses cs = random_clauses(rng, n, 1 + rng() % 5, 3);
    for (auto& c : cs)
      for (auto& l : c) l.negative = false;
    const Family z = m.clauses(cs);
    CHECK(m.cross(m.cross(z)) == z);
  }
}

TEST_CASE("substitution matches functional composition") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng() % 7;
    Manager m(n);
    const Prop y = static_cast<Prop>(rng() % n);
    const Clauses z = random_clauses(rng, n, rng() % 8, 4);
    const Clauses g = random_clauses(rng, n, rng() % 4, 3, {y});
    const Family gf = m.clauses(g);
    const Family gd = (gf == m.empty() || gf == m.unit()) ? m.empty() : m.cross(gf);
    const Family r = m.substitute(m.clauses(z), y, gf, gd);
    const Clauses got = m.enumerate(r);
    CHECK(!mentions(got, y));
    CHECK(m.well_formed(r));
    CHECK(cnf_table(got, n) == compose(cnf_table(z, n), y, cnf_table(g, n)));
  }
}

TEST_CASE("non-identity variable orders") {
  std::mt19937_64 rng(18);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<Prop> order(n);
    for (Prop p = 0; p < n; ++p) order[p] = p;
    std::shuffle(order.begin(), order.end(), rng);
    Manager m(n, order);
    const Clauses cs = random_clauses(rng, n, rng() % 8, 3);
    const Prop p = static_cast<Prop>(rng() % n);
    const Family z = m.clauses(cs);
    CHECK(cnf_table(m.enumerate(z), n) == cnf_table(cs, n));
    CHECK(cnf_table(m.enumerate(m.project(z, p)), n) == exists(cnf_table(cs, n), p));
    CHECK(m.well_formed(m.project(z, p)));
  }
}

TEST_CASE("small cache ceiling keeps results intact") {
  zdd::ManagerOptions opts;
  opts.cache_ceiling = 8;
  std::mt19937_64 rng(19);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 3 + rng() % 5;
    Manager m(n, {}, opts);
    Manager ref(n);
    const Clauses cs = random_clauses(rng, n, 2 + rng() % 8, 3);
    const Prop p = static_cast<Prop>(rng() % n);
    CHECK(sorted(m.enumerate(m.project(m.clauses(cs), p))) ==
          sorted(ref.enumerate(ref.project(ref.clauses(cs), p))));
  }
}

TEST_CASE("deadline interrupts long operations") {
  zdd::ManagerOptions opts;
  opts.deadline = Deadline(Deadline::Clock::now() - std::chrono::seconds(1));
  const std::size_t n = 40;
  Manager m(n, {}, opts);
  std::mt19937_64 rng(20);
  CHECK_THROWS_AS(
      {
        for (int i = 0; i < 100000; ++i) m.clause(random_clause(rng, n, 8));
      },
      TimeoutError);
}
