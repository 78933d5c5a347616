#include "hyperricci/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "hyperricci/error.hpp"
#include "hyperricci/parallel.hpp"
#include "hyperricci/transport.hpp"

namespace hyperricci {

std::uint32_t SimpleGraph::add_node(std::string name) {
  names_.push_back(std::move(name));
  adjacency_.emplace_back();
  return static_cast<std::uint32_t>(names_.size() - 1);
}

std::size_t SimpleGraph::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u >= node_count() || v >= node_count()) throw Error("edge endpoint out of range");
  if (u == v) throw Error("loops are not allowed: " + names_[u]);
  for (const auto& [x, e] : adjacency_[u])
    if (x == v) throw Error("repeated edge " + names_[u] + " - " + names_[v]);
  const std::size_t e = edges_.size();
  edges_.emplace_back(std::min(u, v), std::max(u, v));
  adjacency_[u].emplace_back(v, e);
  adjacency_[v].emplace_back(u, e);
  return e;
}

std::uint32_t SimpleGraph::node(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("unknown node " + name);
  return static_cast<std::uint32_t>(it - names_.begin());
}

std::vector<std::uint32_t> SimpleGraph::closed_neighborhood(std::uint32_t x) const {
  std::vector<std::uint32_t> out{x};
  for (const auto& [y, e] : adjacency_.at(x)) out.push_back(y);
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::designated: return "f";
    case EdgeClass::spoke_s: return "p-s";
    case EdgeClass::spoke_t: return "p-t";
    case EdgeClass::bridge: return "bridge";
    case EdgeClass::tree_inner: return "tree-inner";
    case EdgeClass::tree_leaf: return "tree-leaf";
  }
  return "?";
}

CounterexampleGraph build_Gn(std::size_t q, std::size_t k) {
  if (q < 1) throw Error("q must be at least 1");
  if (k < 1 || k > kMaxTreeDepth) throw Error("tree depth must lie in [1, " + std::to_string(kMaxTreeDepth) + "]");
  CounterexampleGraph out;
  out.q = q;
  out.k = k;
  auto& g = out.graph;
  std::vector<std::uint32_t> p;
  for (std::size_t i = 1; i <= q; ++i) p.push_back(g.add_node("p" + std::to_string(i)));
  out.s = g.add_node("s");
  out.t = g.add_node("t");
  auto add = [&](std::uint32_t u, std::uint32_t v, EdgeClass c) {
    out.classes.push_back(c);
    return g.add_edge(u, v);
  };
  for (std::uint32_t x : p) add(x, out.s, EdgeClass::spoke_s);
  for (std::uint32_t x : p) add(x, out.t, EdgeClass::spoke_t);
  out.f = add(out.s, out.t, EdgeClass::designated);

  out.root = g.add_node("r");
  add(out.t, out.root, EdgeClass::bridge);
  std::vector<std::uint32_t> level{out.root};
  for (std::size_t depth = 1; depth <= k; ++depth) {
    std::vector<std::uint32_t> next;
    next.reserve(level.size() * 10);
    for (std::uint32_t parent : level)
      for (int child = 0; child < 10; ++child) {
        const std::uint32_t x = g.add_node(g.name(parent) + std::to_string(child));
        add(parent, x, depth == k ? EdgeClass::tree_leaf : EdgeClass::tree_inner);
        next.push_back(x);
      }
    level = std::move(next);
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unit lengths: closed neighbourhoods of adjacent nodes are within 3 hops,
// so a depth-limited BFS suffices.
std::unordered_map<std::uint32_t, double> hops_from(const SimpleGraph& g, std::uint32_t src) {
  std::unordered_map<std::uint32_t, double> dist{{src, 0.0}};
  std::vector<std::uint32_t> frontier{src};
  for (int depth = 1; depth <= 3 && !frontier.empty(); ++depth) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t x : frontier)
      for (const auto& [y, e] : g.adjacent(x))
        if (dist.emplace(y, depth).second) next.push_back(y);
    frontier = std::move(next);
  }
  return dist;
}

std::vector<double> dijkstra(const SimpleGraph& g, std::uint32_t src, const std::vector<double>& w) {
  std::vector<double> dist(g.node_count(), kInf);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.emplace(0.0, src);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (const auto& [y, e] : g.adjacent(x))
      if (d + w[e] < dist[y]) {
        dist[y] = d + w[e];
        heap.emplace(dist[y], y);
      }
  }
  return dist;
}

std::vector<NodeId> as_ids(const std::vector<std::uint32_t>& xs) {
  std::vector<NodeId> out;
  out.reserve(xs.size());
  for (std::uint32_t x : xs) out.push_back(NodeId{x});
  return out;
}

}  // namespace

GraphCurvature graph_ollivier_ricci(const SimpleGraph& g, std::size_t e, const std::vector<double>& weights) {
  if (e >= g.edge_count()) throw Error("edge index out of range");
  if (!weights.empty()) {
    if (weights.size() != g.edge_count()) throw Error("one weight per edge is required");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw Error("edge weights must be positive and finite");
  }
  const auto [u, v] = g.edge(e);
  const auto left = g.closed_neighborhood(u);
  const auto right = g.closed_neighborhood(v);
  Eigen::MatrixXd cost(left.size(), right.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (weights.empty()) {
      const auto dist = hops_from(g, left[i]);
      for (std::size_t j = 0; j < right.size(); ++j) cost(i, j) = dist.at(right[j]);
    } else {
      const auto dist = dijkstra(g, left[i], weights);
      for (std::size_t j = 0; j < right.size(); ++j) cost(i, j) = dist[right[j]];
    }
  }
  const Eigen::VectorXd supply = Eigen::VectorXd::Constant(left.size(), 1.0 / left.size());
  const Eigen::VectorXd demand = Eigen::VectorXd::Constant(right.size(), 1.0 / right.size());
  const auto plan = transport(as_ids(left), as_ids(right), std::move(cost), supply, demand);
  const double length = weights.empty() ? 1.0 : weights[e];
  return GraphCurvature{1.0 - plan.objective / length, plan.objective};
}

std::vector<GraphCurvature> all_graph_curvatures(const SimpleGraph& g, const std::vector<double>& weights,
                                                 unsigned threads) {
  std::vector<GraphCurvature> out(g.edge_count());
  parallel_for(g.edge_count(), threads, [&](std::size_t e) { out[e] = graph_ollivier_ricci(g, e, weights); });
  return out;
}

double tvd(const SimpleGraph& g, std::size_t e) {
  const auto [u, v] = g.edge(e);
  const auto left = g.closed_neighborhood(u);
  const auto right = g.closed_neighborhood(v);
  const double a = 1.0 / left.size(), b = 1.0 / right.size();
  std::vector<std::uint32_t> shared;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(shared));
  const double only_left = static_cast<double>(left.size() - shared.size()) * a;
  const double only_right = static_cast<double>(right.size() - shared.size()) * b;
  return 0.5 * (static_cast<double>(shared.size()) * std::abs(a - b) + only_left + only_right);
}

std::vector<double> normalized_flow_update(const std::vector<double>& weights, const std::vector<double>& curvatures,
                                           double initial_curvature_sum, double s_step) {
  if (weights.size() != curvatures.size()) throw Error("weights and curvatures differ in length");
  if (initial_curvature_sum == 0.0) throw Error("initial curvature sum is zero; the normalized update is undefined");
  double current = 0.0;
  for (std::size_t e = 0; e < weights.size(); ++e) current += weights[e] * curvatures[e];
  std::vector<double> out(weights.size());
  for (std::size_t e = 0; e < weights.size(); ++e)
    out[e] = weights[e] - weights[e] * curvatures[e] + s_step * weights[e] * current / initial_curvature_sum;
  return out;
}

std::vector<double> normalized_flow_step(const SimpleGraph& g, double s_step, unsigned threads) {
  const auto curv = all_graph_curvatures(g, {}, threads);
  std::vector<double> c(curv.size());
  for (std::size_t e = 0; e < c.size(); ++e) c[e] = curv[e].curvature;
  const std::vector<double> ones(c.size(), 1.0);
  return normalized_flow_update(ones, c, std::accumulate(c.begin(), c.end(), 0.0), s_step);
}

NormalizedRun normalized_flow_run(const SimpleGraph& g, double s_step, std::size_t steps, unsigned threads) {
  NormalizedRun run;
  run.weights.emplace_back(g.edge_count(), 1.0);
  double initial_sum = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& w = run.weights.back();
    const auto curv = all_graph_curvatures(g, t == 0 ? std::vector<double>{} : w, threads);
    std::vector<double> c(curv.size());
    for (std::size_t e = 0; e < c.size(); ++e) c[e] = curv[e].curvature;
    if (t == 0)
      for (std::size_t e = 0; e < c.size(); ++e) initial_sum += w[e] * c[e];
    run.curvatures.push_back(c);
    run.weights.push_back(normalized_flow_update(w, c, initial_sum, s_step));
    const auto& next = run.weights.back();
    if (std::any_of(next.begin(), next.end(), [](double x) { return !(x > 0.0); })) {
      run.stopped = true;
      run.stopped_at = run.weights.size() - 1;
      break;
    }
  }
  return run;
}

NegativityReport verify_negativity(std::size_t q, std::size_t k, double s_step, unsigned threads) {
  const auto gn = build_Gn(q, k);
  const auto& g = gn.graph;
  NegativityReport r;
  r.q = q;
  r.k = k;
  r.s_step = s_step;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  r.curvatures = all_graph_curvatures(g, {}, threads);
  r.tvds.resize(r.edges);
  for (std::size_t e = 0; e < r.edges; ++e) r.tvds[e] = tvd(g, e);

  for (const auto& c : r.curvatures) r.curvature_sum += c.curvature;
  const double m = static_cast<double>(r.edges);
  r.scaled_sum = s_step / m * r.curvature_sum;
  r.curvature_f = r.curvatures[gn.f].curvature;
  r.weight_f = 1.0 - r.curvature_f + r.scaled_sum;
  r.min_weight = kInf;
  for (std::size_t e = 0; e < r.edges; ++e) {
    const double w = 1.0 - r.curvatures[e].curvature + r.scaled_sum;
    if (w < r.min_weight) {
      r.min_weight = w;
      r.min_edge = e;
    }
  }
  r.negative = r.min_weight < -kTheoremGuard;
  r.f_negative = r.weight_f < -kTheoremGuard;
  r.f_bound_holds = r.curvature_f >= 1.0 - 3.0 / (static_cast<double>(q) + 3.0) - kTheoremGuard;

  r.sandwich_holds = true;
  r.leaf_bound_holds = true;
  for (EdgeClass c : {EdgeClass::designated, EdgeClass::spoke_s, EdgeClass::spoke_t, EdgeClass::bridge,
                      EdgeClass::tree_inner, EdgeClass::tree_leaf}) {
    EdgeClassSummary summary{c, 0, kInf, -kInf, 0.0, true};
    for (std::size_t e = 0; e < r.edges; ++e) {
      if (gn.classes[e] != c) continue;
      const double curv = r.curvatures[e].curvature, d = r.tvds[e];
      ++summary.count;
      summary.min_curvature = std::min(summary.min_curvature, curv);
      summary.max_curvature = std::max(summary.max_curvature, curv);
      summary.max_tvd = std::max(summary.max_tvd, d);
      if (curv < 1.0 - 3.0 * d - kTheoremGuard || curv > 1.0 - d + kTheoremGuard) summary.sandwich_holds = false;
      if (c == EdgeClass::tree_leaf && r.curvatures[e].emd < 35.0 / 24.0 - kTheoremGuard) r.leaf_bound_holds = false;
    }
    if (summary.count == 0) continue;
    r.sandwich_holds = r.sandwich_holds && summary.sandwich_holds;
    r.classes.push_back(summary);
  }
  return r;
}

}  // namespace hyperricci
