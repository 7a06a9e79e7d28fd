#include "zddsynth/realizability.hpp"

namespace zsynth {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::FullyRealizable: return "FULLY_REALIZABLE";
    case Outcome::PartiallyRealizable: return "PARTIALLY_REALIZABLE";
    case Outcome::NullaryRealizable: return "NULLARY_REALIZABLE";
  }
  return "";
}

zdd::Family leaf_family(zdd::Manager& m, const PjtNode& leaf, const CnfSpec& spec) {
  if (leaf.summary) return *leaf.summary;
  return m.clause(spec.leaf_clause(leaf.clause));
}

ValuationStatus compute_valuations(zdd::Manager& m, const GradedProjectJoinTree& t,
                                   const CnfSpec& spec, NodeIndex n, Valuations& vals) {
  const zdd::Family falsity = m.unit();
  for (NodeIndex v : t.postorder(n)) {
    const PjtNode& node = t.nodes[v];
    if (node.leaf) {
      const zdd::Family f = leaf_family(m, node, spec);
      vals.pre[v] = f;
      vals.post[v] = f;
      if (f == falsity) return ValuationStatus::NullaryDetected;
      continue;
    }
    zdd::Family pre = m.empty();
    for (NodeIndex c : node.children) pre = m.union_sf(pre, vals.post.at(c));
    vals.pre[v] = pre;
    if (pre == falsity) return ValuationStatus::NullaryDetected;
    const zdd::Family post = m.project(pre, m.sorted_by_rank(node.label));
    vals.post[v] = post;
    if (post == falsity) return ValuationStatus::NullaryDetected;
  }
  return ValuationStatus::Ok;
}

RSet get_rset(zdd::Manager& m, const GradedProjectJoinTree& t, const CnfSpec& spec,
              Valuations& vals) {
  RSet out;
  out.rset = m.empty();
  const auto roots = t.y_tree_roots();
  for (NodeIndex r : roots) {
    if (compute_valuations(m, t, spec, r, vals) == ValuationStatus::NullaryDetected) {
      out.nullary = true;
      out.rset = m.unit();
      return out;
    }
    out.rset = m.union_sf(out.rset, vals.post.at(r));
  }
  for (const auto& c : spec.pure_x_clauses) out.rset = m.union_sf(out.rset, m.clause(c));

  GradedProjectJoinTree t_new = t;
  for (NodeIndex r : roots) {
    PjtNode& node = t_new.nodes[r];
    node.leaf = true;
    node.summary = vals.post.at(r);
    node.label.clear();
    node.children.clear();
  }
  out.t_new = t_new.compacted();
  return out;
}

RealizabilityOutcome check_partial(zdd::Manager& m, const GradedProjectJoinTree& t,
                                   const CnfSpec& spec, Valuations& vals) {
  RSet r = get_rset(m, t, spec, vals);
  if (r.nullary) return {Outcome::NullaryRealizable, m.unit()};
  if (r.rset == m.empty()) return {Outcome::FullyRealizable, m.empty()};
  Valuations upper;
  if (compute_valuations(m, r.t_new, spec, r.t_new.root, upper) ==
          ValuationStatus::NullaryDetected ||
      upper.post.at(r.t_new.root) == m.unit())
    return {Outcome::NullaryRealizable, m.unit()};
  return {Outcome::PartiallyRealizable, r.rset};
}

RealizabilityOutcome classify_monolithic(zdd::Manager& m, const CnfSpec& spec) {
  const zdd::Family phi = build_family(spec, m);
  const auto ys = m.sorted_by_rank(spec.outputs());
  const zdd::Family rset = m.project(phi, ys);
  if (rset == m.empty()) return {Outcome::FullyRealizable, rset};
  if (rset == m.unit()) return {Outcome::NullaryRealizable, rset};
  // Nullary also when the X-only CNF is unsatisfiable.
  if (m.project(rset, m.sorted_by_rank(spec.inputs())) == m.unit())
    return {Outcome::NullaryRealizable, m.unit()};
  return {Outcome::PartiallyRealizable, rset};
}

}  // namespace zsynth
