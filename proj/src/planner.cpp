#include "zddsynth/planner.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_set>

namespace zsynth {

namespace {

std::vector<const LiteralSet*> leaf_refs(const CnfSpec& spec) {
  std::vector<const LiteralSet*> refs;
  refs.reserve(spec.leaf_count());
  for (const auto& c : spec.clauses) refs.push_back(&c);
  for (const auto& c : spec.pure_x_clauses) refs.push_back(&c);
  return refs;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t attempt) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (attempt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> random_keys(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> keys(n);
  for (auto& k : keys) k = rng();
  return keys;
}

/// Elimination bags plus order to a rooted decomposition: each bag hangs
/// below the bag of its earliest-eliminated other member.
TreeDecomposition assemble(const std::vector<std::vector<Prop>>& bags,
                           const std::vector<Prop>& order) {
  TreeDecomposition td;
  const std::size_t n = bags.size();
  if (n == 0) {
    td.bags = {{}};
    td.parent = {kNoNode};
    td.root = 0;
    return td;
  }
  std::vector<std::size_t> position(n, 0);
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  td.bags = bags;
  td.parent.assign(n, kNoNode);
  for (Prop v = 0; v < n; ++v) {
    std::size_t best = kNoNode;
    for (Prop u : bags[v])
      if (u != v && (best == kNoNode || position[u] < position[best])) best = u;
    td.parent[v] = best;
  }
  td.root = order.back();
  for (Prop v = 0; v < n; ++v)
    if (td.parent[v] == kNoNode && v != td.root) td.parent[v] = td.root;
  return td;
}

/// Graph under vertex elimination; records the bag each elimination creates.
class Eliminator {
 public:
  explicit Eliminator(const PrimalGraph& g) : adj_(g.size()), eliminated_(g.size(), false) {
    for (Prop v = 0; v < g.size(); ++v) adj_[v].insert(g.adjacency[v].begin(), g.adjacency[v].end());
    bags_.resize(g.size());
  }

  std::size_t fill(Prop v) const {
    std::vector<Prop> n(adj_[v].begin(), adj_[v].end());
    std::size_t missing = 0;
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j)
        if (!adj_[n[i]].count(n[j])) ++missing;
    return missing;
  }

  /// Eliminates v; returns the vertices whose fill value may have changed.
  std::vector<Prop> eliminate(Prop v) {
    std::vector<Prop> nbrs(adj_[v].begin(), adj_[v].end());
    std::sort(nbrs.begin(), nbrs.end());
    std::vector<Prop> bag = nbrs;
    bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
    bags_[v] = std::move(bag);
    order_.push_back(v);

    std::unordered_set<Prop> touched(nbrs.begin(), nbrs.end());
    for (Prop u : nbrs) adj_[u].erase(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        const Prop a = nbrs[i], b = nbrs[j];
        if (adj_[a].count(b)) continue;
        // Common neighbours of a and b lose one missing pair.
        for (Prop w : adj_[a])
          if (adj_[b].count(w)) touched.insert(w);
        adj_[a].insert(b);
        adj_[b].insert(a);
      }
    adj_[v].clear();
    eliminated_[v] = true;
    std::vector<Prop> out(touched.begin(), touched.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  TreeDecomposition finish() const { return assemble(bags_, order_); }

  const std::unordered_set<Prop>& neighbours(Prop v) const { return adj_[v]; }

 private:
  std::vector<std::unordered_set<Prop>> adj_;
  std::vector<bool> eliminated_;
  std::vector<Prop> order_;
  std::vector<std::vector<Prop>> bags_;
};

std::optional<TreeDecomposition> min_fill(const PrimalGraph& graph, std::uint64_t seed,
                                          const Deadline& deadline) {
  const std::size_t n = graph.size();
  Eliminator elim(graph);
  const auto keys = random_keys(n, seed);
  std::vector<std::size_t> fill(n);
  std::set<std::tuple<std::size_t, std::uint64_t, Prop>> queue;
  for (Prop v = 0; v < n; ++v) {
    fill[v] = elim.fill(v);
    queue.insert({fill[v], keys[v], v});
  }
  std::vector<bool> done(n, false);
  std::size_t steps = 0;
  while (!queue.empty()) {
    if ((++steps & 63u) == 0 && deadline.expired()) return std::nullopt;
    const Prop v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    done[v] = true;
    for (Prop u : elim.eliminate(v)) {
      if (done[u]) continue;
      queue.erase({fill[u], keys[u], u});
      fill[u] = elim.fill(u);
      queue.insert({fill[u], keys[u], u});
    }
  }
  return elim.finish();
}

std::optional<TreeDecomposition> mcs_elimination(const PrimalGraph& graph, std::uint64_t seed,
                                                 const Deadline& deadline) {
  const std::size_t n = graph.size();
  const auto keys = random_keys(n, seed);
  std::set<std::tuple<long, std::uint64_t, Prop>> queue;
  std::vector<long> weight(n, 0);
  std::vector<bool> numbered(n, false);
  for (Prop v = 0; v < n; ++v) queue.insert({0, keys[v], v});
  std::vector<Prop> visit;
  visit.reserve(n);
  while (!queue.empty()) {
    if ((visit.size() & 255u) == 255u && deadline.expired()) return std::nullopt;
    const Prop v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    numbered[v] = true;
    visit.push_back(v);
    for (Prop u : graph.adjacency[v]) {
      if (numbered[u]) continue;
      queue.erase({-weight[u], keys[u], u});
      ++weight[u];
      queue.insert({-weight[u], keys[u], u});
    }
  }
  std::reverse(visit.begin(), visit.end());
  if (deadline.expired()) return std::nullopt;
  return decomposition_from_order(graph, visit);
}

/// Greedy elimination on a hypergraph kept in quotient form: eliminating v
/// merges every edge through v. Avoids materialising the cliques of wide
/// pseudo-clauses. Degree estimates are refreshed lazily on pop.
TreeDecomposition hyper_min_degree(std::size_t n, std::vector<std::vector<Prop>> edges,
                                   std::uint64_t seed) {
  const auto keys = random_keys(n, seed);
  std::vector<bool> alive(edges.size(), true);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::sort(edges[e].begin(), edges[e].end());
    edges[e].erase(std::unique(edges[e].begin(), edges[e].end()), edges[e].end());
    for (Prop p : edges[e]) incident[p].push_back(e);
  }
  auto estimate = [&](Prop v) {
    std::size_t s = 0;
    for (std::size_t e : incident[v])
      if (alive[e]) s += edges[e].size();
    return s;
  };
  std::set<std::tuple<std::size_t, std::uint64_t, Prop>> queue;
  for (Prop v = 0; v < n; ++v) queue.insert({estimate(v), keys[v], v});
  std::vector<std::vector<Prop>> bags(n);
  std::vector<Prop> order;
  order.reserve(n);
  while (!queue.empty()) {
    auto [est, key, v] = *queue.begin();
    queue.erase(queue.begin());
    const std::size_t now = estimate(v);
    if (now > est) {
      queue.insert({now, key, v});
      continue;
    }
    std::vector<Prop> merged{v};
    for (std::size_t e : incident[v]) {
      if (!alive[e]) continue;
      merged.insert(merged.end(), edges[e].begin(), edges[e].end());
      alive[e] = false;
      std::vector<Prop>().swap(edges[e]);
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    bags[v] = merged;
    order.push_back(v);
    std::vector<std::size_t>().swap(incident[v]);
    merged.erase(std::lower_bound(merged.begin(), merged.end(), v));
    if (merged.empty()) continue;
    const std::size_t id = edges.size();
    for (Prop u : merged) {
      auto& inc = incident[u];
      inc.erase(std::remove_if(inc.begin(), inc.end(), [&](std::size_t e) { return !alive[e]; }),
                inc.end());
      inc.push_back(id);
    }
    edges.push_back(std::move(merged));
    alive.push_back(true);
  }
  return assemble(bags, order);
}

/// Bag of `td` that contains every prop in `props` and comes first in
/// post-order, or kNoNode.
class BagFinder {
 public:
  explicit BagFinder(const TreeDecomposition& td, std::size_t num_props) : td_(td) {
    const auto post = td.postorder();
    rank_.assign(td.bags.size(), 0);
    for (std::size_t i = 0; i < post.size(); ++i) rank_[post[i]] = i;
    occurrences_.resize(num_props);
    for (std::size_t b = 0; b < td.bags.size(); ++b)
      for (Prop p : td.bags[b])
        if (p < num_props) occurrences_[p].push_back(b);
  }

  std::size_t find(const std::vector<Prop>& props) const {
    if (props.empty()) return kNoNode;
    Prop pivot = props.front();
    for (Prop p : props) {
      if (p >= occurrences_.size()) return kNoNode;
      if (occurrences_[p].size() < occurrences_[pivot].size()) pivot = p;
    }
    std::size_t best = kNoNode;
    for (std::size_t b : occurrences_[pivot]) {
      const auto& bag = td_.bags[b];
      const bool all = std::all_of(props.begin(), props.end(), [&](Prop p) {
        return std::binary_search(bag.begin(), bag.end(), p);
      });
      if (all && (best == kNoNode || rank_[b] < rank_[best])) best = b;
    }
    return best;
  }

  std::size_t occurrence_count(Prop p) const { return occurrences_[p].size(); }

 private:
  const TreeDecomposition& td_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<std::size_t>> occurrences_;
};

std::vector<Prop> props_of(const LiteralSet& c) {
  std::vector<Prop> out;
  out.reserve(c.size());
  for (const Literal& l : c) out.push_back(l.prop);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// One grade of the construction: places each item at the first bag holding
/// its propositions and opens a node wherever labelable propositions are
/// forgotten. Items without propositions are returned at the top.
std::vector<NodeIndex> build_level(GradedProjectJoinTree& tree, const TreeDecomposition& td,
                                   std::size_t num_props,
                                   const std::vector<std::vector<Prop>>& item_props,
                                   const std::vector<NodeIndex>& item_nodes, Grade grade,
                                   const std::vector<bool>& labelable) {
  BagFinder finder(td, num_props);
  std::vector<std::vector<NodeIndex>> placed(td.bags.size());
  std::vector<NodeIndex> top;
  for (std::size_t i = 0; i < item_nodes.size(); ++i) {
    if (item_props[i].empty()) {
      top.push_back(item_nodes[i]);
      continue;
    }
    const std::size_t b = finder.find(item_props[i]);
    if (b == kNoNode) throw InvalidDecomposition("no bag contains all variables of a clause");
    placed[b].push_back(item_nodes[i]);
  }

  const auto kids = td.children();
  std::vector<std::vector<NodeIndex>> pending(td.bags.size());
  for (std::size_t b : td.postorder()) {
    std::vector<NodeIndex> items;
    for (std::size_t c : kids[b]) {
      items.insert(items.end(), pending[c].begin(), pending[c].end());
      std::vector<NodeIndex>().swap(pending[c]);
    }
    items.insert(items.end(), placed[b].begin(), placed[b].end());
    std::vector<Prop> label;
    const std::size_t par = td.parent[b];
    for (Prop p : td.bags[b]) {
      if (p >= num_props || !labelable[p]) continue;
      if (par != kNoNode && std::binary_search(td.bags[par].begin(), td.bags[par].end(), p))
        continue;
      label.push_back(p);
    }
    if (!label.empty()) {
      const NodeIndex n = tree.add_internal(grade, std::move(label), std::move(items));
      pending[b] = {n};
    } else {
      pending[b] = std::move(items);
    }
  }
  top.insert(top.end(), pending[td.root].begin(), pending[td.root].end());
  return top;
}

}  // namespace

std::size_t TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return w == 0 ? 0 : w - 1;
}

std::vector<std::vector<std::size_t>> TreeDecomposition::children() const {
  std::vector<std::vector<std::size_t>> out(bags.size());
  for (std::size_t b = 0; b < parent.size(); ++b)
    if (parent[b] != kNoNode && b != root) out.at(parent[b]).push_back(b);
  return out;
}

std::vector<std::size_t> TreeDecomposition::postorder() const {
  std::vector<std::size_t> out;
  if (bags.empty()) return out;
  const auto kids = children();
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
  std::vector<bool> seen(bags.size(), false);
  seen[root] = true;
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    if (next < kids[b].size()) {
      const std::size_t c = kids[b][next++];
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back({c, 0});
      }
      continue;
    }
    out.push_back(b);
    stack.pop_back();
  }
  return out;
}

std::string to_string(Heuristic h) {
  switch (h) {
    case Heuristic::MinFill: return "min-fill";
    case Heuristic::Mcs: return "mcs";
    case Heuristic::RandomRestarts: return "random-restarts";
  }
  return "min-fill";
}

Heuristic heuristic_from_string(const std::string& s) {
  if (s == "min-fill") return Heuristic::MinFill;
  if (s == "mcs") return Heuristic::Mcs;
  if (s == "random-restarts") return Heuristic::RandomRestarts;
  throw std::invalid_argument("unknown heuristic '" + s + "'");
}

PrimalGraph primal_graph(const CnfSpec& spec) {
  return primal_graph_of(spec.num_props, leaf_refs(spec));
}

TreeDecomposition decomposition_from_order(const PrimalGraph& graph,
                                           const std::vector<Prop>& elimination_order) {
  if (elimination_order.size() != graph.size())
    throw std::invalid_argument("elimination order must list every vertex once");
  Eliminator elim(graph);
  std::vector<bool> seen(graph.size(), false);
  for (Prop v : elimination_order) {
    if (v >= graph.size() || seen[v])
      throw std::invalid_argument("elimination order must list every vertex once");
    seen[v] = true;
    elim.eliminate(v);
  }
  return elim.finish();
}

std::vector<std::string> check_decomposition(const TreeDecomposition& td,
                                             const PrimalGraph& graph,
                                             const std::vector<const LiteralSet*>& clauses) {
  std::vector<std::string> out;
  const std::size_t nb = td.bags.size();
  if (nb == 0 || td.root >= nb || td.parent.size() != nb) {
    out.push_back("malformed decomposition");
    return out;
  }
  if (td.parent[td.root] != kNoNode) out.push_back("root has a parent");
  for (std::size_t b = 0; b < nb; ++b) {
    if (b != td.root && (td.parent[b] == kNoNode || td.parent[b] >= nb))
      out.push_back("bag " + std::to_string(b) + " has no valid parent");
    if (!std::is_sorted(td.bags[b].begin(), td.bags[b].end()))
      out.push_back("bag " + std::to_string(b) + " is not sorted");
  }
  if (!out.empty()) return out;
  if (td.postorder().size() != nb) {
    out.push_back("bags do not form a single tree");
    return out;
  }

  const std::size_t n = graph.size();
  std::vector<std::size_t> count(n, 0), tops(n, 0);
  for (std::size_t b = 0; b < nb; ++b)
    for (Prop p : td.bags[b]) {
      if (p >= n) {
        out.push_back("bag mentions unknown vertex " + std::to_string(p));
        continue;
      }
      ++count[p];
      const std::size_t par = td.parent[b];
      if (par == kNoNode || !std::binary_search(td.bags[par].begin(), td.bags[par].end(), p))
        ++tops[p];
    }
  for (Prop p = 0; p < n; ++p) {
    if (count[p] == 0) out.push_back("vertex " + std::to_string(p) + " is in no bag");
    else if (tops[p] != 1) out.push_back("bags of vertex " + std::to_string(p) + " are disconnected");
  }
  if (!out.empty()) return out;

  BagFinder finder(td, n);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto props = props_of(*clauses[i]);
    if (!props.empty() && finder.find(props) == kNoNode)
      out.push_back("clause " + std::to_string(i) + " is in no bag");
  }
  for (Prop a = 0; a < n; ++a)
    for (Prop b : graph.adjacency[a])
      if (a < b && finder.find({a, b}) == kNoNode)
        out.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " is in no bag");
  return out;
}

Decomposer::Decomposer(PrimalGraph graph, PlanConfig config, std::size_t lower_bound)
    : graph_(std::move(graph)), config_(config), lower_bound_(lower_bound) {}

std::optional<TreeDecomposition> Decomposer::next(const Deadline& deadline) {
  while (attempt_ < std::max<std::size_t>(config_.max_restarts, 1)) {
    if (best_ && *best_ <= lower_bound_) return std::nullopt;
    if (deadline.expired()) return std::nullopt;
    const std::uint64_t seed = mix_seed(config_.seed, attempt_);
    bool use_mcs = config_.heuristic == Heuristic::Mcs;
    if (config_.heuristic == Heuristic::RandomRestarts) use_mcs = (attempt_ % 2) == 1;
    ++attempt_;
    auto td = use_mcs ? mcs_elimination(graph_, seed, deadline) : min_fill(graph_, seed, deadline);
    if (!td) return std::nullopt;
    const std::size_t w = td->width();
    if (best_ && w >= *best_) continue;
    best_ = w;
    return td;
  }
  return std::nullopt;
}

std::vector<TreeDecomposition> decompose(const PrimalGraph& graph, const PlanConfig& config,
                                         const Deadline& deadline) {
  Decomposer d(graph, config);
  std::vector<TreeDecomposition> out;
  while (auto td = d.next(deadline)) out.push_back(std::move(*td));
  return out;
}

GradedProjectJoinTree build_graded_pjt(const CnfSpec& spec, const TreeDecomposition& td_lower,
                                       const PlanConfig& config) {
  const auto refs = leaf_refs(spec);
  {
    const auto problems = check_decomposition(td_lower, primal_graph(spec), refs);
    if (!problems.empty()) throw InvalidDecomposition(problems.front());
  }
  const std::size_t n = spec.num_props;
  std::vector<bool> occurs(n, false);
  for (const LiteralSet* c : refs)
    for (const Literal& l : *c) occurs[l.prop] = true;

  GradedProjectJoinTree tree;

  // Stage A: Y-forest over the clauses that mention outputs.
  std::vector<std::vector<Prop>> item_props;
  std::vector<NodeIndex> items;
  for (std::size_t i = 0; i < spec.clauses.size(); ++i) {
    items.push_back(tree.add_leaf(i));
    item_props.push_back(props_of(spec.clauses[i]));
  }
  std::vector<bool> y_label(n, false), x_label(n, false);
  for (Prop p = 0; p < n; ++p) {
    y_label[p] = occurs[p] && spec.is_output(p);
    x_label[p] = occurs[p] && spec.is_input(p);
  }
  std::vector<NodeIndex> forest =
      build_level(tree, td_lower, n, item_props, items, Grade::Y, y_label);

  std::vector<Prop> idle_y, idle_x;
  for (Prop p = 0; p < n; ++p) {
    if (occurs[p]) continue;
    (spec.is_output(p) ? idle_y : idle_x).push_back(p);
  }
  if (!idle_y.empty()) {
    if (forest.empty()) {
      forest.push_back(tree.add_internal(Grade::Y, idle_y, {}));
    } else {
      auto& label = tree.nodes[forest.front()].label;
      label.insert(label.end(), idle_y.begin(), idle_y.end());
      std::sort(label.begin(), label.end());
    }
  }

  // Stage B: X-tree over pseudo-clauses of the forest roots and pure-X clauses.
  std::vector<NodeIndex> upper_items = forest;
  std::vector<std::vector<Prop>> upper_props;
  for (NodeIndex r : forest) {
    std::vector<Prop> xs;
    for (NodeIndex d : tree.preorder(r)) {
      const PjtNode& node = tree.nodes[d];
      if (!node.leaf) continue;
      for (const Literal& l : spec.leaf_clause(node.clause))
        if (spec.is_input(l.prop)) xs.push_back(l.prop);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    upper_props.push_back(std::move(xs));
  }
  for (std::size_t j = 0; j < spec.pure_x_clauses.size(); ++j) {
    upper_items.push_back(tree.add_leaf(spec.clauses.size() + j));
    upper_props.push_back(props_of(spec.pure_x_clauses[j]));
  }

  if (spec.inputs().empty()) {
    if (upper_items.size() == 1 && !tree.nodes[upper_items[0]].leaf) {
      tree.root = upper_items[0];
    } else {
      tree.root = tree.add_internal(Grade::Y, {}, upper_items);
    }
    return tree.compacted();
  }

  const auto td_upper = hyper_min_degree(n, upper_props, mix_seed(config.seed, 0x5eed));
  std::vector<NodeIndex> xtops =
      build_level(tree, td_upper, n, upper_props, upper_items, Grade::X, x_label);

  if (xtops.size() == 1 && !tree.nodes[xtops[0]].leaf &&
      tree.nodes[xtops[0]].grade == Grade::X) {
    tree.root = xtops[0];
    auto& label = tree.nodes[tree.root].label;
    label.insert(label.end(), idle_x.begin(), idle_x.end());
    std::sort(label.begin(), label.end());
  } else {
    tree.root = tree.add_internal(Grade::X, idle_x, xtops);
  }
  return tree.compacted();
}

DecompositionSource::DecompositionSource(const CnfSpec& spec, PlanConfig config)
    : spec_(spec), config_(config), decomposer_(primal_graph(spec), config, [&] {
        std::size_t w = 0;
        for (std::size_t i = 0; i < spec.leaf_count(); ++i)
          w = std::max(w, spec.leaf_clause(i).size());
        return w == 0 ? 0 : w - 1;
      }()) {}

std::optional<GradedProjectJoinTree> DecompositionSource::next(const Deadline& deadline,
                                                               std::stop_token stop) {
  if (stop.stop_requested()) return std::nullopt;
  auto td = decomposer_.next(deadline);
  if (!td || stop.stop_requested()) return std::nullopt;
  return build_graded_pjt(spec_, *td, config_);
}

PlanResult plan(const CnfSpec& spec, const PlanConfig& config) {
  DecompositionSource source(spec, config);
  return plan(spec, config, source);
}

PlanResult plan(const CnfSpec& spec, const PlanConfig& config, PlanSource& source) {
  using Clock = Deadline::Clock;
  const auto start = Clock::now();
  const auto cutoff = start + config.plan_timeout;
  const Deadline deadline(cutoff);

  struct Emission {
    GradedProjectJoinTree tree;
    Clock::time_point at;
  };
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<Emission> queue;
  bool finished = false;
  std::exception_ptr failure;

  std::jthread worker([&](std::stop_token stop) {
    try {
      while (!stop.stop_requested()) {
        auto t = source.next(deadline, stop);
        if (!t) break;
        const auto at = Clock::now();
        std::lock_guard lock(mutex);
        queue.push_back({std::move(*t), at});
        cv.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mutex);
      failure = std::current_exception();
    }
    std::lock_guard lock(mutex);
    finished = true;
    cv.notify_all();
  });

  std::optional<GradedProjectJoinTree> best;
  PlanReport report;
  auto consume = [&](Emission& e) {
    if (e.at > cutoff) return false;
    ++report.trees_examined;
    const std::size_t w = pjt_width(e.tree, spec);
    if (!best || w < report.best_width) {
      best = std::move(e.tree);
      report.best_width = w;
    }
    return w <= config.width_target;
  };

  bool met = false;
  {
    std::unique_lock lock(mutex);
    while (!met) {
      cv.wait_until(lock, cutoff, [&] { return !queue.empty() || finished; });
      while (!queue.empty() && !met) {
        Emission e = std::move(queue.front());
        queue.pop_front();
        met = consume(e);
      }
      if (met || (finished && queue.empty()) || Clock::now() >= cutoff) break;
    }
  }
  worker.request_stop();
  worker.join();
  if (!met) {
    while (!queue.empty() && !met) {
      met = consume(queue.front());
      queue.pop_front();
    }
  }
  if (failure && !best) std::rethrow_exception(failure);

  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  report.met_target = met;
  if (!best) throw PlanningExhausted("no project-join tree was produced within the planning budget");
  return {std::move(*best), report};
}

}  // namespace zsynth
