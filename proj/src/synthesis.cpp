#include "zddsynth/synthesis.hpp"

#include <algorithm>

namespace zsynth {

Witness make_witness(zdd::Manager& m, zdd::Family cnf) {
  if (cnf == m.empty() || cnf == m.unit()) return {cnf, m.empty()};
  return {cnf, m.cross(cnf)};
}

Witness witness_single(zdd::Manager& m, zdd::Family z, Prop y) {
  return make_witness(m, m.select(z, y).neg);
}

WitnessSet synth_monolithic(zdd::Manager& m, zdd::Family z, const std::vector<Prop>& y_order) {
  std::vector<zdd::Family> stages{z};
  stages.reserve(y_order.size() + 1);
  for (Prop y : y_order) stages.push_back(m.project(stages.back(), y));

  WitnessSet ws;
  for (std::size_t i = y_order.size(); i-- > 0;) {
    zdd::Family zi = stages[i];
    for (std::size_t j = i + 1; j < y_order.size(); ++j) {
      const Witness& g = ws.witnesses.at(y_order[j]);
      zi = m.substitute(zi, y_order[j], g.cnf, g.dnf);
    }
    ws.witnesses[y_order[i]] = witness_single(m, zi, y_order[i]);
    ws.synth_order.push_back(y_order[i]);
  }
  return ws;
}

WitnessSet dp_synth(zdd::Manager& m, const GradedProjectJoinTree& t, const Valuations& vals,
                    const CnfSpec& spec) {
  std::vector<NodeIndex> order;
  const auto roots = t.y_tree_roots();
  for (NodeIndex r : roots) order.push_back(r);
  for (NodeIndex r : roots)
    for (NodeIndex d : t.preorder(r))
      if (d != r && !t.nodes[d].leaf) order.push_back(d);

  WitnessSet ws;
  for (NodeIndex n : order) {
    const auto it = vals.pre.find(n);
    if (it == vals.pre.end())
      throw MissingValuations("no pre-valuation for node " + std::to_string(n));
    const WitnessSet local = synth_monolithic(m, it->second, m.sorted_by_rank(t.nodes[n].label));
    for (Prop y : local.synth_order) {
      Witness g = local.witnesses.at(y);
      bool rewritten = false;
      for (Prop p : m.support(g.cnf)) {
        if (!spec.is_output(p)) continue;
        const auto anc = ws.witnesses.find(p);
        if (anc == ws.witnesses.end())
          throw MissingValuations("witness for y" + std::to_string(p + 1) +
                                  " depends on an unsolved output");
        g.cnf = m.substitute(g.cnf, p, anc->second.cnf, anc->second.dnf);
        rewritten = true;
      }
      if (rewritten) g = make_witness(m, g.cnf);
      ws.witnesses[y] = g;
      ws.synth_order.push_back(y);
    }
  }
  return ws;
}

zdd::Family apply_witnesses(zdd::Manager& m, zdd::Family z, const WitnessSet& ws) {
  for (Prop y : ws.synth_order) {
    const Witness& g = ws.witnesses.at(y);
    z = m.substitute(z, y, g.cnf, g.dnf);
  }
  return z;
}

}  // namespace zsynth
