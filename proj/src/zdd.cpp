#include "zddsynth/zdd.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace zsynth {

Literal Literal::from_dimacs(int lit) {
  if (lit == 0) throw std::invalid_argument("literal 0 is not a variable");
  return {static_cast<Prop>(std::abs(lit) - 1), lit < 0};
}

int Literal::to_dimacs() const {
  const int v = static_cast<int>(prop) + 1;
  return negative ? -v : v;
}

std::string to_string(const LiteralSet& lits) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out << ',';
    out << lits[i].to_dimacs();
  }
  out << '}';
  return out.str();
}

namespace zdd {

namespace {

inline std::size_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

}  // namespace

std::size_t Manager::NodeKeyHash::operator()(const NodeKey& k) const noexcept {
  return mix((std::uint64_t{k.level} << 40) ^ (std::uint64_t{k.lo} << 20) ^
             std::uint64_t{k.hi} ^ (std::uint64_t{k.hi} << 52));
}

std::size_t Manager::CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  return mix((std::uint64_t{k.a} << 32 | k.b) ^
             (std::uint64_t{static_cast<std::uint8_t>(k.op)} << 59));
}

Manager::Manager(std::size_t num_props, std::span<const Prop> order,
                 ManagerOptions options)
    : rank_(num_props), options_(options) {
  if (order.empty()) {
    order_.resize(num_props);
    std::iota(order_.begin(), order_.end(), Prop{0});
  } else {
    if (order.size() != num_props)
      throw std::invalid_argument("variable order must list every proposition");
    order_.assign(order.begin(), order.end());
  }
  std::vector<bool> seen(num_props, false);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const Prop p = order_[i];
    if (p >= num_props || seen[p])
      throw std::invalid_argument("variable order is not a permutation");
    seen[p] = true;
    rank_[p] = i;
  }
  nodes_.push_back({kTerminalLevel, 0, 0});  // 0: {}
  nodes_.push_back({kTerminalLevel, 1, 1});  // 1: {{}}
}

std::vector<Prop> Manager::sorted_by_rank(std::span<const Prop> props) const {
  std::vector<Prop> out(props.begin(), props.end());
  std::sort(out.begin(), out.end(),
            [this](Prop a, Prop b) { return rank_.at(a) < rank_.at(b); });
  return out;
}

NodeId Manager::make(std::uint32_t level, NodeId lo, NodeId hi) {
  if (hi == 0) return lo;  // zero-suppression
  const NodeKey key{level, lo, hi};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (++allocations_since_check_ >= 4096) {
    allocations_since_check_ = 0;
    options_.deadline.check("decision-diagram operation");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({level, lo, hi});
  unique_.emplace(key, id);
  return id;
}

std::optional<NodeId> Manager::lookup(Op op, NodeId a, NodeId b) const {
  if (auto it = cache_.find({op, a, b}); it != cache_.end()) return it->second;
  return std::nullopt;
}

NodeId Manager::remember(Op op, NodeId a, NodeId b, NodeId result) {
  if (cache_.size() >= options_.cache_ceiling) cache_.clear();
  cache_[{op, a, b}] = result;
  return result;
}

Manager::Split Manager::split(NodeId n, std::uint32_t pair) const {
  Split s{0, 0, n};
  if (level_of(s.absent) == 2 * pair) {
    s.pos = nodes_[s.absent].hi;
    s.absent = nodes_[s.absent].lo;
  }
  if (level_of(s.absent) == 2 * pair + 1) {
    s.neg = nodes_[s.absent].hi;
    s.absent = nodes_[s.absent].lo;
  }
  return s;
}

NodeId Manager::join(std::uint32_t pair, NodeId pos, NodeId neg, NodeId absent) {
  return make(2 * pair, make(2 * pair + 1, absent, neg), pos);
}

Family Manager::clause(std::span<const Literal> literals, bool strict) {
  std::vector<std::uint32_t> levels;
  levels.reserve(literals.size());
  for (const Literal& l : literals) {
    if (l.prop >= num_props())
      throw std::out_of_range("literal refers to unknown proposition");
    levels.push_back(level(l));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] / 2 == levels[i - 1] / 2) {
      if (strict)
        throw TautologicalClause("clause contains both literals of a proposition");
      return empty();
    }
  }
  NodeId r = 1;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) r = make(*it, 0, r);
  return Family{r};
}

Family Manager::clauses(std::span<const LiteralSet> list, bool strict) {
  std::vector<Family> parts;
  parts.reserve(list.size());
  for (const auto& c : list) parts.push_back(clause(c, strict));
  if (parts.empty()) return empty();
  // Pairwise reduction keeps operand sizes balanced.
  while (parts.size() > 1) {
    std::vector<Family> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(union_sf(parts[i], parts[i + 1]));
    if (parts.size() % 2) next.push_back(parts.back());
    parts.swap(next);
  }
  return parts.front();
}

NodeId Manager::subset0(NodeId f, std::uint32_t level) {
  const std::uint32_t top = level_of(f);
  if (top > level) return f;
  if (top == level) return nodes_[f].lo;
  if (auto hit = lookup(Op::Subset0, f, level)) return *hit;
  const Node n = nodes_[f];
  const NodeId lo = subset0(n.lo, level);
  const NodeId hi = subset0(n.hi, level);
  return remember(Op::Subset0, f, level, make(n.level, lo, hi));
}

NodeId Manager::subset1(NodeId f, std::uint32_t level) {
  const std::uint32_t top = level_of(f);
  if (top > level) return 0;
  if (top == level) return nodes_[f].hi;
  if (auto hit = lookup(Op::Subset1, f, level)) return *hit;
  const Node n = nodes_[f];
  const NodeId lo = subset1(n.lo, level);
  const NodeId hi = subset1(n.hi, level);
  return remember(Op::Subset1, f, level, make(n.level, lo, hi));
}

NodeId Manager::union_rec(NodeId f, NodeId g) {
  if (f == 0) return g;
  if (g == 0 || f == g) return f;
  if (f > g) std::swap(f, g);
  if (auto hit = lookup(Op::Union, f, g)) return *hit;
  const Node a = nodes_[f];
  const Node b = nodes_[g];
  NodeId r;
  if (a.level < b.level) {
    r = make(a.level, union_rec(a.lo, g), a.hi);
  } else if (b.level < a.level) {
    r = make(b.level, union_rec(f, b.lo), b.hi);
  } else {
    const NodeId lo = union_rec(a.lo, b.lo);
    r = make(a.level, lo, union_rec(a.hi, b.hi));
  }
  return remember(Op::Union, f, g, r);
}

bool Manager::contains_empty(Family z) const {
  NodeId n = z.id;
  while (n > 1) n = nodes_[n].lo;
  return n == 1;
}

// Sets of f that are not supersets (or equal) of any set of g.
NodeId Manager::nonsup_rec(NodeId f, NodeId g) {
  if (g == 0 || f == 0) return f;
  if (f == g || contains_empty(Family{g})) return 0;
  if (f == 1) return 1;
  if (auto hit = lookup(Op::NonSup, f, g)) return *hit;
  const Node a = nodes_[f];
  const Node b = nodes_[g];
  NodeId r;
  if (b.level < a.level) {
    r = nonsup_rec(f, b.lo);
  } else if (a.level < b.level) {
    const NodeId lo = nonsup_rec(a.lo, g);
    r = make(a.level, lo, nonsup_rec(a.hi, g));
  } else {
    const NodeId lo = nonsup_rec(a.lo, b.lo);
    const NodeId hi = nonsup_rec(nonsup_rec(a.hi, b.lo), b.hi);
    r = make(a.level, lo, hi);
  }
  return remember(Op::NonSup, f, g, r);
}

NodeId Manager::minimal_rec(NodeId f) {
  if (f <= 1) return f;
  if (auto hit = lookup(Op::Minimal, f, 0)) return *hit;
  const Node n = nodes_[f];
  const NodeId lo = minimal_rec(n.lo);
  const NodeId hi = nonsup_rec(minimal_rec(n.hi), lo);
  const NodeId r = make(n.level, lo, hi);
  remember(Op::Minimal, r, 0, r);
  return remember(Op::Minimal, f, 0, r);
}

// Both operands minimal; the result is minimal.
NodeId Manager::union_sf_rec(NodeId f, NodeId g) {
  if (f == 0) return g;
  if (g == 0 || f == g) return f;
  if (f == 1 || g == 1) return 1;
  if (f > g) std::swap(f, g);
  if (auto hit = lookup(Op::UnionSf, f, g)) return *hit;
  const Node a = nodes_[f];
  const Node b = nodes_[g];
  const std::uint32_t top = std::min(a.level, b.level);
  const NodeId f0 = a.level == top ? a.lo : f;
  const NodeId f1 = a.level == top ? a.hi : 0;
  const NodeId g0 = b.level == top ? b.lo : g;
  const NodeId g1 = b.level == top ? b.hi : 0;
  const NodeId lo = union_sf_rec(f0, g0);
  const NodeId hi = nonsup_rec(union_sf_rec(f1, g1), lo);
  const NodeId r = make(top, lo, hi);
  remember(Op::Minimal, r, 0, r);
  return remember(Op::UnionSf, f, g, r);
}

// Both operands minimal and tautology-free.
NodeId Manager::distribute_rec(NodeId f, NodeId g) {
  if (f == 0 || g == 0) return 0;
  if (f == 1) return g;
  if (g == 1 || f == g) return f;
  if (f > g) std::swap(f, g);
  if (auto hit = lookup(Op::Distribute, f, g)) return *hit;
  const std::uint32_t pair = std::min(level_of(f), level_of(g)) / 2;
  const Split a = split(f, pair);
  const Split b = split(g, pair);
  const NodeId absent = distribute_rec(a.absent, b.absent);
  NodeId pos = union_sf_rec(distribute_rec(a.pos, b.pos), distribute_rec(a.pos, b.absent));
  pos = nonsup_rec(union_sf_rec(pos, distribute_rec(a.absent, b.pos)), absent);
  NodeId neg = union_sf_rec(distribute_rec(a.neg, b.neg), distribute_rec(a.neg, b.absent));
  neg = nonsup_rec(union_sf_rec(neg, distribute_rec(a.absent, b.neg)), absent);
  const NodeId r = join(pair, pos, neg, absent);
  remember(Op::Minimal, r, 0, r);
  return remember(Op::Distribute, f, g, r);
}

// Minimal transversals that never pick both literals of one proposition.
NodeId Manager::transversal_rec(NodeId f) {
  if (f == 0) return 1;
  if (f == 1) return 0;
  if (auto hit = lookup(Op::Transversal, f, 0)) return *hit;
  const std::uint32_t pair = level_of(f) / 2;
  const Split s = split(f, pair);
  const NodeId with_pos = transversal_rec(union_sf_rec(s.neg, s.absent));
  const NodeId with_neg = transversal_rec(union_sf_rec(s.pos, s.absent));
  const NodeId without =
      transversal_rec(union_sf_rec(union_sf_rec(s.pos, s.neg), s.absent));
  const NodeId r = join(pair, nonsup_rec(with_pos, without),
                        nonsup_rec(with_neg, without), without);
  return remember(Op::Transversal, f, 0, r);
}

NodeId Manager::complement_rec(NodeId f) {
  if (f <= 1) return f;
  if (auto hit = lookup(Op::Complement, f, 0)) return *hit;
  const std::uint32_t pair = level_of(f) / 2;
  const Split s = split(f, pair);
  const NodeId absent = complement_rec(s.absent);
  const NodeId pos = complement_rec(s.neg);
  const NodeId neg = complement_rec(s.pos);
  return remember(Op::Complement, f, 0, join(pair, pos, neg, absent));
}

Family Manager::set_union(Family a, Family b) { return Family{union_rec(a.id, b.id)}; }

Family Manager::minimal(Family z) { return Family{minimal_rec(z.id)}; }

Family Manager::union_sf(Family a, Family b) {
  return Family{union_sf_rec(minimal_rec(a.id), minimal_rec(b.id))};
}

Family Manager::distribute(Family a, Family b) {
  return Family{distribute_rec(minimal_rec(a.id), minimal_rec(b.id))};
}

Selection Manager::select(Family z, Prop p) {
  const Literal pl = Literal::pos(p);
  const std::uint32_t pv = level(pl);
  const std::uint32_t nv = pv + 1;
  return Selection{Family{subset1(z.id, pv)}, Family{subset1(z.id, nv)},
                   Family{subset0(subset0(z.id, pv), nv)}};
}

Family Manager::project(Family z, Prop p) {
  const Selection s = select(minimal(z), p);
  return union_sf(distribute(s.pos, s.neg), s.absent);
}

Family Manager::project(Family z, std::span<const Prop> ps) {
  Family r = minimal(z);
  for (Prop p : ps) r = project(r, p);
  return r;
}

Family Manager::cross(Family z, bool allow_degenerate) {
  const NodeId m = minimal_rec(z.id);
  if (m == 0) return empty();
  if (m == 1) {
    if (allow_degenerate) return empty();
    throw FalsityHasNoDnf("the unsatisfiable CNF has no cube cover");
  }
  return Family{transversal_rec(m)};
}

Family Manager::complement_cubes(Family z) { return Family{complement_rec(z.id)}; }

Family Manager::substitute(Family z, Prop y, Family g_cnf, Family g_dnf) {
  if (mentions(g_cnf, y))
    throw std::invalid_argument("substituent mentions the substituted proposition");
  const Selection s = select(minimal(z), y);
  Family negated;
  if (g_cnf == empty())
    negated = unit();
  else if (g_cnf == unit())
    negated = empty();
  else
    negated = complement_cubes(g_dnf);
  const Family from_pos = distribute(s.pos, g_cnf);
  const Family from_neg = distribute(s.neg, negated);
  return union_sf(union_sf(from_pos, from_neg), s.absent);
}

std::vector<LiteralSet> Manager::enumerate(Family z, std::size_t cap) const {
  std::vector<std::vector<std::uint32_t>> paths;
  std::vector<std::uint32_t> path;
  std::function<void(NodeId)> walk = [&](NodeId n) {
    while (true) {
      if (n == 0) return;
      if (n == 1) {
        if (paths.size() >= cap)
          throw CapExceeded("family has more sets than the enumeration cap");
        paths.push_back(path);
        return;
      }
      const Node node = nodes_[n];
      path.push_back(node.level);
      walk(node.hi);
      path.pop_back();
      n = node.lo;
    }
  };
  walk(z.id);
  std::sort(paths.begin(), paths.end());
  std::vector<LiteralSet> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    LiteralSet lits;
    lits.reserve(p.size());
    for (std::uint32_t lv : p) lits.push_back(literal_at(lv));
    std::sort(lits.begin(), lits.end());
    out.push_back(std::move(lits));
  }
  return out;
}

FamilyStats Manager::stats(Family z) const {
  using boost::multiprecision::cpp_int;
  std::unordered_map<NodeId, cpp_int> count;
  count[0] = 0;
  count[1] = 1;
  std::vector<std::pair<NodeId, bool>> stack{{z.id, false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (count.count(n)) continue;
    const Node node = nodes_[n];
    if (expanded) {
      count[n] = count.at(node.lo) + count.at(node.hi);
      continue;
    }
    stack.push_back({n, true});
    if (!count.count(node.lo)) stack.push_back({node.lo, false});
    if (!count.count(node.hi)) stack.push_back({node.hi, false});
  }
  // Reachable nodes only; the memo may hold the terminals unreachable from z.
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> todo{z.id};
  while (!todo.empty()) {
    const NodeId n = todo.back();
    todo.pop_back();
    if (!seen.insert(n).second || n <= 1) continue;
    todo.push_back(nodes_[n].lo);
    todo.push_back(nodes_[n].hi);
  }
  return FamilyStats{count.at(z.id), seen.size()};
}

bool Manager::well_formed(Family z) const {
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> todo{z.id};
  while (!todo.empty()) {
    const NodeId n = todo.back();
    todo.pop_back();
    if (n <= 1 || !seen.insert(n).second) continue;
    const Node& node = nodes_[n];
    if (node.hi == 0) return false;
    if (level_of(node.lo) <= node.level || level_of(node.hi) <= node.level) return false;
    if ((node.level & 1u) == 0 && level_of(node.hi) == node.level + 1) return false;
    todo.push_back(node.lo);
    todo.push_back(node.hi);
  }
  return true;
}

std::vector<Prop> Manager::support(Family z) const {
  std::vector<bool> used(num_props(), false);
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> todo{z.id};
  while (!todo.empty()) {
    const NodeId n = todo.back();
    todo.pop_back();
    if (n <= 1 || !seen.insert(n).second) continue;
    used[order_[nodes_[n].level / 2]] = true;
    todo.push_back(nodes_[n].lo);
    todo.push_back(nodes_[n].hi);
  }
  std::vector<Prop> out;
  for (std::size_t r = 0; r < order_.size(); ++r)
    if (used[order_[r]]) out.push_back(order_[r]);
  return out;
}

bool Manager::mentions(Family z, Prop p) const {
  const std::uint32_t pair = static_cast<std::uint32_t>(rank_.at(p));
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> todo{z.id};
  while (!todo.empty()) {
    const NodeId n = todo.back();
    todo.pop_back();
    if (n <= 1 || !seen.insert(n).second) continue;
    const std::uint32_t lp = nodes_[n].level / 2;
    if (lp == pair) return true;
    if (lp > pair) continue;
    todo.push_back(nodes_[n].lo);
    todo.push_back(nodes_[n].hi);
  }
  return false;
}

}  // namespace zdd
}  // namespace zsynth
