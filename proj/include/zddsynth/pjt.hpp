/// @file pjt.hpp
/// Graded project-join trees: leaves are clauses, internal nodes carry a
/// label of propositions to quantify and a grade (X or Y). Every X-graded
/// node sits above every Y-graded node.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/zdd.hpp"

namespace zsynth {

using NodeIndex = std::size_t;
inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

enum class Grade : std::uint8_t { X, Y };

struct PjtNode {
  bool leaf = false;
  /// Index into CnfSpec::leaf_clause for clause leaves.
  std::size_t clause = kNoNode;
  /// Leaves that stand for a collapsed subtree carry its family instead.
  std::optional<zdd::Family> summary;
  std::vector<Prop> label;
  Grade grade = Grade::Y;
  std::vector<NodeIndex> children;
  NodeIndex parent = kNoNode;
};

class GradedProjectJoinTree {
 public:
  std::vector<PjtNode> nodes;
  NodeIndex root = kNoNode;

  NodeIndex add_leaf(std::size_t clause);
  NodeIndex add_internal(Grade grade, std::vector<Prop> label,
                         std::vector<NodeIndex> children);

  bool is_internal(NodeIndex n) const { return !nodes.at(n).leaf; }
  /// Highest Y-graded internal nodes: the root, or children of X nodes.
  std::vector<NodeIndex> y_tree_roots() const;
  /// X-graded nodes whose children are all Y-graded internal nodes.
  std::vector<NodeIndex> x_tree_leaves() const;
  /// Pre-order from `from`, parents before children.
  std::vector<NodeIndex> preorder(NodeIndex from) const;
  /// Post-order from `from`, children before parents.
  std::vector<NodeIndex> postorder(NodeIndex from) const;
  /// Strict ancestors of n, nearest first.
  std::vector<NodeIndex> ancestors(NodeIndex n) const;
  /// Copy holding only nodes reachable from the root, renumbered in pre-order.
  GradedProjectJoinTree compacted() const;
};

struct Violation {
  std::string kind;  ///< structure, leaf-bijection, partition, descent, grade, X-above-Y, tree-roots
  std::string detail;
};

/// Checks every structural condition; an empty result means valid.
std::vector<Violation> validate_pjt(const GradedProjectJoinTree& tree, const CnfSpec& spec);

/// Max over internal nodes of |support|, where support(n) is the set of
/// propositions of leaf clauses below n minus labels strictly below n.
std::size_t pjt_width(const GradedProjectJoinTree& tree, const CnfSpec& spec);

/// JSON: {"root": id, "nodes": [{id, kind, clause|label+grade, children}]}.
/// Labels use DIMACS variable numbers.
std::string tree_to_json(const GradedProjectJoinTree& tree);
GradedProjectJoinTree tree_from_json(std::string_view text);

}  // namespace zsynth
