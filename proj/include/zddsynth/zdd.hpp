/// @file zdd.hpp
/// Zero-suppressed decision diagrams over literal variables, used as a
/// canonical store for sets of clauses (CNF) and sets of cubes (DNF).
///
/// Every proposition p owns two adjacent decision variables: the positive
/// literal at level 2*rank(p) and the negative literal at 2*rank(p)+1, where
/// rank is the position of p in the manager's proposition order. Lower levels
/// sit closer to the root.
///
/// Terminal 0 is the empty family (no clauses, logically true as a CNF);
/// terminal 1 is the family {{}} (the empty clause, logically false).

#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zsynth {

/// Dense proposition index, 0-based. DIMACS variable v maps to v - 1.
using Prop = std::uint32_t;

struct Literal {
  Prop prop = 0;
  bool negative = false;

  static Literal pos(Prop p) { return {p, false}; }
  static Literal neg(Prop p) { return {p, true}; }
  static Literal from_dimacs(int lit);
  int to_dimacs() const;
  Literal complement() const { return {prop, !negative}; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A clause or a cube: literals sorted by (prop, polarity).
using LiteralSet = std::vector<Literal>;

std::string to_string(const LiteralSet& lits);

class TautologicalClause : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FalsityHasNoDnf : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock budget checked cooperatively between operations.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::time_point at) : at_(at) {}
  static Deadline after(std::chrono::milliseconds budget) {
    return Deadline(Clock::now() + budget);
  }
  static Deadline never() { return Deadline(); }

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check(const char* where = "operation") const {
    if (expired()) throw TimeoutError(std::string("deadline exceeded during ") + where);
  }
  std::optional<Clock::time_point> at() const { return at_; }

 private:
  std::optional<Clock::time_point> at_;
};

namespace zdd {

using NodeId = std::uint32_t;

/// Handle to a family inside one Manager. Plain value; meaningless without
/// the Manager that created it.
struct Family {
  NodeId id = 0;
  friend bool operator==(Family, Family) = default;
};

struct Selection {
  Family pos;     ///< clauses containing p, with p removed
  Family neg;     ///< clauses containing !p, with !p removed
  Family absent;  ///< clauses mentioning neither literal
};

struct FamilyStats {
  boost::multiprecision::cpp_int clause_count;
  std::size_t node_count = 0;
};

struct ManagerOptions {
  /// Operation caches are cleared wholesale once they hold this many entries.
  std::size_t cache_ceiling = std::size_t{1} << 23;
  /// Checked every few thousand node allocations.
  Deadline deadline;
};

class Manager {
 public:
  /// `order` lists every proposition once, top of the diagram first. An
  /// empty order means identity.
  explicit Manager(std::size_t num_props, std::span<const Prop> order = {},
                   ManagerOptions options = {});

  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  std::size_t num_props() const { return rank_.size(); }
  std::size_t rank(Prop p) const { return rank_.at(p); }
  std::uint32_t level(Literal l) const {
    return static_cast<std::uint32_t>(2 * rank_.at(l.prop) + (l.negative ? 1 : 0));
  }
  Literal literal_at(std::uint32_t level) const {
    return {order_[level / 2], (level & 1u) != 0};
  }
  /// Props sorted by position in the variable order.
  std::vector<Prop> sorted_by_rank(std::span<const Prop> props) const;

  void set_deadline(Deadline d) { options_.deadline = d; }

  Family empty() const { return Family{0}; }
  Family unit() const { return Family{1}; }

  /// Family holding exactly one clause. A tautological literal set throws
  /// TautologicalClause when `strict`, otherwise yields empty() (truth).
  Family clause(std::span<const Literal> literals, bool strict = true);
  /// Subsumption-free union of the given clauses.
  Family clauses(std::span<const LiteralSet> list, bool strict = true);

  /// Plain set union (no subsumption removal).
  Family set_union(Family a, Family b);
  /// Removes every set that strictly or equally contains another member.
  Family minimal(Family z);

  /// Conjunction of two CNFs: union with subsumed clauses removed.
  Family union_sf(Family a, Family b);
  /// Disjunction of two CNFs: pairwise clause unions, tautologies dropped,
  /// subsumption-free.
  Family distribute(Family a, Family b);

  Selection select(Family z, Prop p);
  /// Existential quantification of one proposition by resolution.
  Family project(Family z, Prop p);
  /// Left fold of project over `ps`.
  Family project(Family z, std::span<const Prop> ps);

  /// Minimal consistent transversals: the DNF equivalent of a CNF.
  /// cross(empty()) is empty() (truth, degenerate encoding). cross(unit())
  /// throws FalsityHasNoDnf unless `allow_degenerate`, which maps it to
  /// empty() as well.
  Family cross(Family z, bool allow_degenerate = false);
  /// Replaces every literal by its complement.
  Family complement_cubes(Family z);
  /// CNF of z[y := g], where g is given as a CNF and its equivalent DNF.
  /// g_cnf == empty() encodes truth and g_cnf == unit() falsity; g_dnf is
  /// ignored in both cases.
  Family substitute(Family z, Prop y, Family g_cnf, Family g_dnf);

  /// Sets of z in lexicographic order of their level sequences.
  std::vector<LiteralSet> enumerate(Family z,
                                    std::size_t cap = std::size_t{1} << 20) const;
  FamilyStats stats(Family z) const;
  /// Propositions with at least one literal in some set of z, by rank.
  std::vector<Prop> support(Family z) const;
  bool mentions(Family z, Prop p) const;
  bool contains_empty(Family z) const;
  /// Structural self-check of every node reachable from z: zero-suppressed,
  /// levels increasing downwards, and no set holding both literals of a
  /// proposition.
  bool well_formed(Family z) const;

  /// Total nodes allocated, terminals included.
  std::size_t allocated_nodes() const { return nodes_.size(); }
  std::size_t cache_entries() const { return cache_.size(); }
  void clear_caches() { cache_.clear(); }

 private:
  struct Node {
    std::uint32_t level;
    NodeId lo;
    NodeId hi;
  };
  struct NodeKey {
    std::uint32_t level;
    NodeId lo;
    NodeId hi;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const noexcept;
  };
  enum class Op : std::uint8_t {
    Subset0,
    Subset1,
    Union,
    Minimal,
    NonSup,
    UnionSf,
    Distribute,
    Transversal,
    Complement,
  };
  struct CacheKey {
    Op op;
    NodeId a;
    NodeId b;
    friend bool operator==(const CacheKey&, const CacheKey&) = default;
  };
  struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const noexcept;
  };
  struct Split {
    NodeId pos;
    NodeId neg;
    NodeId absent;
  };

  static constexpr std::uint32_t kTerminalLevel = 0xffffffffu;

  std::uint32_t level_of(NodeId n) const { return nodes_[n].level; }
  NodeId make(std::uint32_t level, NodeId lo, NodeId hi);
  std::optional<NodeId> lookup(Op op, NodeId a, NodeId b) const;
  NodeId remember(Op op, NodeId a, NodeId b, NodeId result);
  /// Splits n on the proposition owning level pair (2k, 2k+1).
  Split split(NodeId n, std::uint32_t pair) const;
  NodeId join(std::uint32_t pair, NodeId pos, NodeId neg, NodeId absent);

  NodeId subset0(NodeId f, std::uint32_t level);
  NodeId subset1(NodeId f, std::uint32_t level);
  NodeId union_rec(NodeId f, NodeId g);
  NodeId minimal_rec(NodeId f);
  NodeId nonsup_rec(NodeId f, NodeId g);
  NodeId union_sf_rec(NodeId f, NodeId g);
  NodeId distribute_rec(NodeId f, NodeId g);
  NodeId transversal_rec(NodeId f);
  NodeId complement_rec(NodeId f);

  std::vector<Prop> order_;
  std::vector<std::size_t> rank_;
  ManagerOptions options_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeKey, NodeId, NodeKeyHash> unique_;
  std::unordered_map<CacheKey, NodeId, CacheKeyHash> cache_;
  std::size_t allocations_since_check_ = 0;
};

}  // namespace zdd
}  // namespace zsynth
