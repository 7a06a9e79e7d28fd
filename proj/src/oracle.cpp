#include "zddsynth/oracle.hpp"

#include <algorithm>
#include <random>

namespace zsynth {

namespace {

constexpr std::size_t kMaxEnumerated = 20;

/// Clause as bit masks over a joint assignment.
struct MaskClause {
  Assignment pos = 0;
  Assignment neg = 0;
  bool satisfied(Assignment a) const { return (a & pos) != 0 || (~a & neg) != 0; }
};

std::vector<MaskClause> to_masks(const std::vector<LiteralSet>& cnf,
                                 const std::vector<int>& bit_of) {
  std::vector<MaskClause> out;
  out.reserve(cnf.size());
  for (const auto& c : cnf) {
    MaskClause mc;
    for (const Literal& l : c) {
      const int b = bit_of.at(l.prop);
      if (b < 0) throw std::invalid_argument("clause mentions a variable outside the enumeration");
      (l.negative ? mc.neg : mc.pos) |= Assignment{1} << b;
    }
    out.push_back(mc);
  }
  return out;
}

bool all_satisfied(const std::vector<MaskClause>& cnf, Assignment a) {
  return std::all_of(cnf.begin(), cnf.end(), [a](const MaskClause& c) { return c.satisfied(a); });
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

LiteralSet lits(std::initializer_list<int> dimacs) {
  LiteralSet c;
  for (int v : dimacs) c.push_back(Literal::from_dimacs(v));
  std::sort(c.begin(), c.end());
  return c;
}

CnfSpec blank_spec(std::size_t num_x, std::size_t num_y, std::string name) {
  CnfSpec s;
  s.num_props = num_x + num_y;
  s.roles.assign(num_x, Role::Input);
  s.roles.resize(num_x + num_y, Role::Output);
  s.name = std::move(name);
  return s;
}

}  // namespace

std::vector<Assignment> models_over(const std::vector<LiteralSet>& cnf,
                                    const std::vector<Prop>& vars) {
  if (vars.size() > kMaxEnumerated) throw TooLarge("too many variables to enumerate");
  Prop top = 0;
  for (Prop p : vars) top = std::max(top, p + 1);
  for (const auto& c : cnf)
    for (const Literal& l : c) top = std::max(top, l.prop + 1);
  std::vector<int> bit_of(top, -1);
  for (std::size_t i = 0; i < vars.size(); ++i) bit_of[vars[i]] = static_cast<int>(i);
  const auto masks = to_masks(cnf, bit_of);
  std::vector<Assignment> out;
  for (Assignment a = 0; a < (Assignment{1} << vars.size()); ++a)
    if (all_satisfied(masks, a)) out.push_back(a);
  return out;
}

bool evaluate_cnf(const std::vector<LiteralSet>& cnf, const std::vector<bool>& value) {
  return std::all_of(cnf.begin(), cnf.end(), [&](const LiteralSet& c) {
    return std::any_of(c.begin(), c.end(),
                       [&](const Literal& l) { return value.at(l.prop) != l.negative; });
  });
}

OracleVerdict classify_bruteforce(const CnfSpec& spec) {
  const auto xs = spec.inputs();
  const auto ys = spec.outputs();
  if (xs.size() + ys.size() > kMaxEnumerated)
    throw TooLarge("brute force is limited to 20 variables");
  std::vector<int> bit_of(spec.num_props, -1);
  for (std::size_t i = 0; i < xs.size(); ++i) bit_of[xs[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < ys.size(); ++i) bit_of[ys[i]] = static_cast<int>(xs.size() + i);
  const auto masks = to_masks(spec.all_clauses(), bit_of);

  OracleVerdict v;
  v.inputs = xs;
  for (Assignment x = 0; x < (Assignment{1} << xs.size()); ++x) {
    for (Assignment y = 0; y < (Assignment{1} << ys.size()); ++y) {
      if (all_satisfied(masks, x | (y << xs.size()))) {
        v.rset_assignments.push_back(x);
        break;
      }
    }
  }
  const std::size_t all = std::size_t{1} << xs.size();
  if (v.rset_assignments.empty()) v.kind = Outcome::NullaryRealizable;
  else if (v.rset_assignments.size() == all) v.kind = Outcome::FullyRealizable;
  else v.kind = Outcome::PartiallyRealizable;
  return v;
}

WitnessCheck verify_witnesses(const CnfSpec& spec, const WitnessCnfs& witnesses) {
  const auto xs = spec.inputs();
  const auto ys = spec.outputs();
  if (xs.size() > kMaxEnumerated) throw TooLarge("witness check is limited to 20 inputs");
  for (Prop y : ys)
    if (!witnesses.count(y))
      throw std::invalid_argument("no witness for y" + std::to_string(y + 1));
  for (const auto& [y, cnf] : witnesses)
    for (const auto& c : cnf)
      for (const Literal& l : c)
        if (l.prop >= spec.num_props || !spec.is_input(l.prop))
          throw std::invalid_argument("witness for y" + std::to_string(y + 1) +
                                      " mentions a non-input variable");

  const auto clauses = spec.all_clauses();
  std::vector<bool> value(spec.num_props, false);
  std::vector<Prop> y_vars = ys;
  for (Assignment x = 0; x < (Assignment{1} << xs.size()); ++x) {
    for (std::size_t i = 0; i < xs.size(); ++i) value[xs[i]] = ((x >> i) & 1u) != 0;
    for (Prop y : ys) value[y] = evaluate_cnf(witnesses.at(y), value);
    if (evaluate_cnf(clauses, value)) continue;
    // Failure only matters inside the realizability set.
    if (ys.size() > kMaxEnumerated) throw TooLarge("cannot decide membership of a failing input");
    bool realizable = false;
    for (Assignment y = 0; y < (Assignment{1} << ys.size()) && !realizable; ++y) {
      for (std::size_t i = 0; i < ys.size(); ++i) value[ys[i]] = ((y >> i) & 1u) != 0;
      realizable = evaluate_cnf(clauses, value);
    }
    if (realizable) return {false, x};
  }
  return {};
}

CnfSpec gen_random(const RandomSpecParams& p) {
  std::mt19937_64 rng(p.seed);
  CnfSpec s = blank_spec(p.num_x, p.num_y, "random-" + std::to_string(p.seed));
  const std::size_t n = p.num_x + p.num_y;
  if (n == 0) return preprocess(s);
  auto clause_over = [&](std::size_t lo, std::size_t hi) {
    const std::size_t span = hi - lo;
    const std::size_t width = 1 + draw(rng, std::min(p.max_width == 0 ? 1 : p.max_width, span));
    std::vector<Prop> pool(span);
    for (std::size_t i = 0; i < span; ++i) pool[i] = static_cast<Prop>(lo + i);
    LiteralSet c;
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t j = k + draw(rng, span - k);
      std::swap(pool[k], pool[j]);
      c.push_back({pool[k], (rng() & 1u) != 0});
    }
    std::sort(c.begin(), c.end());
    return c;
  };
  for (std::size_t i = 0; i < p.num_clauses; ++i) {
    if (i == 0 && p.allow_pure_x && p.num_x > 0) {
      s.clauses.push_back(clause_over(0, p.num_x));
      continue;
    }
    LiteralSet c = clause_over(0, n);
    while (!p.allow_pure_x && p.num_y > 0 &&
           std::none_of(c.begin(), c.end(), [&](const Literal& l) { return l.prop >= p.num_x; }))
      c = clause_over(0, n);
    s.clauses.push_back(std::move(c));
  }
  return preprocess(s);
}

CnfSpec gen_family(const std::string& name, std::size_t n) {
  if (n == 0) throw std::invalid_argument("family size must be at least 1");
  const int N = static_cast<int>(n);
  if (name == "chain") {
    // x_i = i, y_i = n + i for i = 1..n+1
    CnfSpec s = blank_spec(n, n + 1, "chain-" + std::to_string(n));
    for (int i = 1; i <= N; ++i) {
      s.clauses.push_back(lits({i, N + i, -(N + i + 1)}));
      s.clauses.push_back(lits({-(N + i), N + i + 1}));
    }
    return preprocess(s);
  }
  if (name == "mutex-like") {
    // Block b has requests r = 3b+1..3b+3 (inputs) and grants after all
    // inputs. A grant needs its request, grants exclude each other, every
    // request is answered, and first grants of neighbouring blocks clash.
    CnfSpec s = blank_spec(3 * n, 3 * n, "mutex-like-" + std::to_string(n));
    const int X = 3 * N;
    for (int b = 0; b < N; ++b) {
      const int r[3] = {3 * b + 1, 3 * b + 2, 3 * b + 3};
      const int g[3] = {X + 3 * b + 1, X + 3 * b + 2, X + 3 * b + 3};
      for (int j = 0; j < 3; ++j) {
        s.clauses.push_back(lits({-g[j], r[j]}));
        s.clauses.push_back(lits({-r[j], g[0], g[1], g[2]}));
        for (int k = j + 1; k < 3; ++k) s.clauses.push_back(lits({-g[j], -g[k]}));
      }
      if (b + 1 < N) s.clauses.push_back(lits({-g[0], -(g[0] + 3)}));
    }
    return preprocess(s);
  }
  if (name == "qshifter-like") {
    // y_i follows x_{i+1 mod n}; every pair of outputs is tied by a
    // redundant consistency clause, so the outputs form a clique.
    CnfSpec s = blank_spec(n, n, "qshifter-like-" + std::to_string(n));
    auto x = [&](int i) { return 1 + (i % N); };
    auto y = [&](int i) { return N + 1 + i; };
    for (int i = 0; i < N; ++i) {
      s.clauses.push_back(lits({-x(i + 1), y(i)}));
      s.clauses.push_back(lits({x(i + 1), -y(i)}));
      for (int j = i + 1; j < N; ++j)
        s.clauses.push_back(lits({-y(i), -y(j), x(i + 1), x(j + 1)}));
    }
    return preprocess(s);
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

}  // namespace zsynth
