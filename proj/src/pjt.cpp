#include "zddsynth/pjt.hpp"

#include <algorithm>
#include <unordered_set>

#include "json.hpp"

namespace zsynth {

NodeIndex GradedProjectJoinTree::add_leaf(std::size_t clause) {
  PjtNode n;
  n.leaf = true;
  n.clause = clause;
  nodes.push_back(std::move(n));
  return nodes.size() - 1;
}

NodeIndex GradedProjectJoinTree::add_internal(Grade grade, std::vector<Prop> label,
                                              std::vector<NodeIndex> children) {
  const NodeIndex id = nodes.size();
  PjtNode n;
  n.grade = grade;
  std::sort(label.begin(), label.end());
  n.label = std::move(label);
  n.children = std::move(children);
  nodes.push_back(std::move(n));
  for (NodeIndex c : nodes[id].children) nodes.at(c).parent = id;
  return id;
}

std::vector<NodeIndex> GradedProjectJoinTree::y_tree_roots() const {
  std::vector<NodeIndex> out;
  if (root == kNoNode) return out;
  for (NodeIndex n : preorder(root)) {
    const PjtNode& node = nodes[n];
    if (node.leaf || node.grade != Grade::Y) continue;
    if (n == root || (node.parent != kNoNode && !nodes[node.parent].leaf &&
                      nodes[node.parent].grade == Grade::X))
      out.push_back(n);
  }
  return out;
}

std::vector<NodeIndex> GradedProjectJoinTree::x_tree_leaves() const {
  std::vector<NodeIndex> out;
  if (root == kNoNode) return out;
  for (NodeIndex n : preorder(root)) {
    const PjtNode& node = nodes[n];
    if (node.leaf || node.grade != Grade::X) continue;
    const bool all_y = std::all_of(node.children.begin(), node.children.end(), [&](NodeIndex c) {
      return !nodes[c].leaf && nodes[c].grade == Grade::Y;
    });
    if (all_y) out.push_back(n);
  }
  return out;
}

std::vector<NodeIndex> GradedProjectJoinTree::preorder(NodeIndex from) const {
  std::vector<NodeIndex> out;
  std::vector<NodeIndex> stack{from};
  std::vector<bool> seen(nodes.size(), false);
  while (!stack.empty()) {
    const NodeIndex n = stack.back();
    stack.pop_back();
    if (seen.at(n)) continue;  // guards against malformed (cyclic) input
    seen[n] = true;
    out.push_back(n);
    const auto& ch = nodes[n].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeIndex> GradedProjectJoinTree::postorder(NodeIndex from) const {
  std::vector<NodeIndex> pre = preorder(from);
  // Reverse of a (root, right-to-left children) pre-order is a post-order.
  std::vector<NodeIndex> out;
  out.reserve(pre.size());
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{from, 0}};
  std::vector<bool> seen(nodes.size(), false);
  seen[from] = true;
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < nodes[n].children.size()) {
      const NodeIndex c = nodes[n].children[next++];
      if (!seen.at(c)) {
        seen[c] = true;
        stack.push_back({c, 0});
      }
      continue;
    }
    out.push_back(n);
    stack.pop_back();
  }
  return out;
}

std::vector<NodeIndex> GradedProjectJoinTree::ancestors(NodeIndex n) const {
  std::vector<NodeIndex> out;
  for (NodeIndex p = nodes.at(n).parent; p != kNoNode; p = nodes.at(p).parent) {
    out.push_back(p);
    if (out.size() > nodes.size()) break;
  }
  return out;
}

GradedProjectJoinTree GradedProjectJoinTree::compacted() const {
  GradedProjectJoinTree out;
  if (root == kNoNode) return out;
  const std::vector<NodeIndex> order = preorder(root);
  std::vector<NodeIndex> remap(nodes.size(), kNoNode);
  for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = i;
  out.nodes.reserve(order.size());
  for (NodeIndex old : order) {
    PjtNode n = nodes[old];
    n.parent = n.parent == kNoNode ? kNoNode : remap[n.parent];
    for (auto& c : n.children) c = remap[c];
    out.nodes.push_back(std::move(n));
  }
  out.root = 0;
  out.nodes[0].parent = kNoNode;
  return out;
}

std::vector<Violation> validate_pjt(const GradedProjectJoinTree& tree, const CnfSpec& spec) {
  std::vector<Violation> out;
  auto report = [&](std::string kind, std::string detail) {
    out.push_back({std::move(kind), std::move(detail)});
  };
  const auto& nodes = tree.nodes;
  if (tree.root >= nodes.size()) {
    report("structure", "missing root");
    return out;
  }
  if (nodes[tree.root].parent != kNoNode) report("structure", "root has a parent");

  // Reachability, parent links, and Euler intervals for ancestor queries.
  std::vector<std::size_t> tin(nodes.size(), 0), tout(nodes.size(), 0);
  std::vector<bool> seen(nodes.size(), false);
  std::size_t clock = 0;
  {
    std::vector<std::pair<NodeIndex, std::size_t>> stack{{tree.root, 0}};
    seen[tree.root] = true;
    tin[tree.root] = clock++;
    while (!stack.empty()) {
      auto& [n, next] = stack.back();
      const auto& ch = nodes[n].children;
      if (next < ch.size()) {
        const NodeIndex c = ch[next++];
        if (c >= nodes.size()) {
          report("structure", "child index out of range");
          continue;
        }
        if (seen[c]) {
          report("structure", "node " + std::to_string(c) + " reached twice");
          continue;
        }
        if (nodes[c].parent != n)
          report("structure", "parent link of node " + std::to_string(c) + " is inconsistent");
        seen[c] = true;
        tin[c] = clock++;
        stack.push_back({c, 0});
        continue;
      }
      tout[n] = clock++;
      stack.pop_back();
    }
  }
  for (NodeIndex n = 0; n < nodes.size(); ++n)
    if (!seen[n]) report("structure", "node " + std::to_string(n) + " unreachable from root");
  if (!out.empty()) return out;
  auto is_ancestor = [&](NodeIndex a, NodeIndex d) {
    return tin[a] <= tin[d] && tout[d] <= tout[a];
  };

  // Leaves versus clauses.
  std::vector<std::size_t> hits(spec.leaf_count(), 0);
  std::vector<NodeIndex> leaf_of(spec.leaf_count(), kNoNode);
  for (NodeIndex n = 0; n < nodes.size(); ++n) {
    const PjtNode& node = nodes[n];
    if (!node.leaf) continue;
    if (!node.children.empty()) report("structure", "leaf " + std::to_string(n) + " has children");
    if (node.summary) continue;
    if (node.clause >= hits.size()) {
      report("leaf-bijection", "leaf " + std::to_string(n) + " maps to no clause");
      continue;
    }
    ++hits[node.clause];
    leaf_of[node.clause] = n;
  }
  for (std::size_t c = 0; c < hits.size(); ++c)
    if (hits[c] != 1)
      report("leaf-bijection", "clause " + std::to_string(c) + " appears " +
                                   std::to_string(hits[c]) + " times");

  // Labels partition the propositions.
  std::vector<NodeIndex> owner(spec.num_props, kNoNode);
  for (NodeIndex n = 0; n < nodes.size(); ++n) {
    if (nodes[n].leaf) continue;
    for (Prop p : nodes[n].label) {
      if (p >= spec.num_props) {
        report("partition", "label mentions unknown variable " + std::to_string(p + 1));
        continue;
      }
      if (owner[p] != kNoNode)
        report("partition", "variable " + std::to_string(p + 1) + " labelled twice");
      owner[p] = n;
      const bool ok = nodes[n].grade == Grade::X ? spec.is_input(p) : spec.is_output(p);
      if (!ok)
        report("grade", "variable " + std::to_string(p + 1) + " on a node of the wrong grade");
    }
  }
  for (Prop p = 0; p < spec.num_props; ++p)
    if (owner[p] == kNoNode) report("partition", "variable " + std::to_string(p + 1) + " unlabelled");

  // Every clause lies below the node labelling each of its variables.
  for (std::size_t c = 0; c < leaf_of.size(); ++c) {
    if (leaf_of[c] == kNoNode) continue;
    for (const Literal& l : spec.leaf_clause(c)) {
      const NodeIndex o = l.prop < owner.size() ? owner[l.prop] : kNoNode;
      if (o != kNoNode && !is_ancestor(o, leaf_of[c]))
        report("descent", "clause " + std::to_string(c) + " is not below the node labelling " +
                              std::to_string(l.prop + 1));
    }
  }

  // X-graded nodes never below Y-graded ones.
  std::vector<bool> under_y(nodes.size(), false);
  for (NodeIndex n : tree.preorder(tree.root)) {
    const PjtNode& node = nodes[n];
    const bool parent_y = node.parent != kNoNode && under_y[node.parent];
    if (!node.leaf && node.grade == Grade::X && parent_y)
      report("X-above-Y", "X node " + std::to_string(n) + " lies below a Y node");
    under_y[n] = parent_y || (!node.leaf && node.grade == Grade::Y);
  }

  // Derived node sets agree with their definitions, recomputed independently.
  std::vector<NodeIndex> roots, xleaves;
  for (NodeIndex n = 0; n < nodes.size(); ++n) {
    const PjtNode& node = nodes[n];
    if (node.leaf) continue;
    if (node.grade == Grade::Y) {
      const bool top = node.parent == kNoNode || !under_y[node.parent];
      if (top) roots.push_back(n);
    } else {
      bool all_y = true;
      for (NodeIndex c : node.children) all_y = all_y && !nodes[c].leaf && nodes[c].grade == Grade::Y;
      if (all_y) xleaves.push_back(n);
    }
  }
  auto sorted = [](std::vector<NodeIndex> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(tree.y_tree_roots()) != roots)
    report("tree-roots", "YTreeRoots differs from the highest Y-graded nodes");
  if (sorted(tree.x_tree_leaves()) != xleaves)
    report("tree-roots", "XTreeLeaves differs from X nodes with only Y-graded children");
  const bool x_empty = spec.inputs().empty();
  const auto yr = tree.y_tree_roots();
  const bool root_in = std::find(yr.begin(), yr.end(), tree.root) != yr.end();
  if (root_in != x_empty)
    report("tree-roots", "root must be a Y tree root exactly when there are no inputs");
  return out;
}

std::size_t pjt_width(const GradedProjectJoinTree& tree, const CnfSpec& spec) {
  if (tree.root == kNoNode) return 0;
  // Small-to-large merge of post-supports.
  std::vector<std::unordered_set<Prop>> post(tree.nodes.size());
  std::size_t width = 0;
  for (NodeIndex n : tree.postorder(tree.root)) {
    const PjtNode& node = tree.nodes[n];
    auto& mine = post[n];
    if (node.leaf) {
      if (node.clause != kNoNode && node.clause < spec.leaf_count())
        for (const Literal& l : spec.leaf_clause(node.clause)) mine.insert(l.prop);
      continue;
    }
    for (NodeIndex c : node.children) {
      auto& theirs = post[c];
      if (theirs.size() > mine.size()) mine.swap(theirs);
      mine.insert(theirs.begin(), theirs.end());
      std::unordered_set<Prop>().swap(theirs);
    }
    width = std::max(width, mine.size());
    for (Prop p : node.label) mine.erase(p);
  }
  return width;
}

std::string tree_to_json(const GradedProjectJoinTree& tree) {
  nlohmann::ordered_json doc;
  doc["root"] = tree.root == kNoNode ? -1 : static_cast<long>(tree.root);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (NodeIndex n = 0; n < tree.nodes.size(); ++n) {
    const PjtNode& node = tree.nodes[n];
    nlohmann::ordered_json j;
    j["id"] = n;
    j["kind"] = node.leaf ? "leaf" : "internal";
    if (node.leaf) {
      j["clause"] = node.clause;
    } else {
      std::vector<long> label;
      for (Prop p : node.label) label.push_back(static_cast<long>(p) + 1);
      j["label"] = label;
      j["grade"] = node.grade == Grade::X ? "X" : "Y";
    }
    j["children"] = node.children;
    list.push_back(std::move(j));
  }
  doc["nodes"] = std::move(list);
  return doc.dump(1);
}

GradedProjectJoinTree tree_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("tree: ") + e.what());
  }
  GradedProjectJoinTree tree;
  try {
    const auto& list = doc.at("nodes");
    tree.nodes.resize(list.size());
    for (const auto& j : list) {
      const auto id = j.at("id").get<std::size_t>();
      if (id >= tree.nodes.size()) throw SyntaxError("tree: node id out of range");
      PjtNode& node = tree.nodes[id];
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "leaf") {
        node.leaf = true;
        node.clause = j.at("clause").get<std::size_t>();
      } else if (kind == "internal") {
        for (long v : j.at("label").get<std::vector<long>>()) {
          if (v < 1) throw SyntaxError("tree: label variables are 1-based");
          node.label.push_back(static_cast<Prop>(v - 1));
        }
        std::sort(node.label.begin(), node.label.end());
        const auto grade = j.at("grade").get<std::string>();
        if (grade != "X" && grade != "Y") throw SyntaxError("tree: grade must be X or Y");
        node.grade = grade == "X" ? Grade::X : Grade::Y;
      } else {
        throw SyntaxError("tree: unknown node kind '" + kind + "'");
      }
      node.children = j.at("children").get<std::vector<NodeIndex>>();
    }
    const long root = doc.at("root").get<long>();
    tree.root = root < 0 ? kNoNode : static_cast<NodeIndex>(root);
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("tree: ") + e.what());
  }
  for (NodeIndex n = 0; n < tree.nodes.size(); ++n)
    for (NodeIndex c : tree.nodes[n].children) {
      if (c >= tree.nodes.size()) throw SyntaxError("tree: child index out of range");
      tree.nodes[c].parent = n;
    }
  if (tree.root != kNoNode && tree.root >= tree.nodes.size())
    throw SyntaxError("tree: root out of range");
  return tree;
}

}  // namespace zsynth
