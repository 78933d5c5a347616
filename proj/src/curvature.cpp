#include "hyperricci/curvature.hpp"

#include <string>

#include "hyperricci/error.hpp"
#include "hyperricci/parallel.hpp"

namespace hyperricci {

Laziness::Laziness(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("laziness must lie strictly between 0 and 1");
}

namespace {

// Shared walk for both directed sides. `spread(x)` lists the hyperedges a
// share at x is routed through and `ends(e)` the nodes that receive it.
template <typename Spread, typename Ends>
NodeDistribution route_shares(const DirectedHypergraph& h, std::span<const NodeId> start, Spread spread, Ends ends) {
  NodeDistribution p;
  const double share = 1.0 / static_cast<double>(start.size());
  const auto edges = h.edges();
  for (NodeId x : start) {
    const auto via = spread(x);
    if (via.empty()) {
      p.add(x, share);
      continue;
    }
    const double per_edge = share / static_cast<double>(via.size());
    for (std::uint32_t pos : via) {
      const auto receivers = ends(edges[pos]);
      const double per_node = per_edge / static_cast<double>(receivers.size());
      for (NodeId y : receivers) p.add(y, per_node);
    }
  }
  return p;
}

double mean_pairwise_emd(const DistanceCache<UndirectedHyperedge>& distances, const UndirectedHyperedge& e,
                         const std::vector<NodeDistribution>& walk) {
  const auto& members = e.members;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      total += emd(distances, walk[members[i].value], walk[members[j].value]).objective;
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace

NodeDistribution directed_tail_distribution(const DirectedHypergraph& h, EdgeId e) {
  return route_shares(
      h, h.edge(e).tail, [&](NodeId x) { return h.incoming(x); },
      [](const DirectedHyperedge& f) { return std::span<const NodeId>(f.tail); });
}

NodeDistribution directed_head_distribution(const DirectedHypergraph& h, EdgeId e) {
  return route_shares(
      h, h.edge(e).head, [&](NodeId x) { return h.outgoing(x); },
      [](const DirectedHyperedge& f) { return std::span<const NodeId>(f.head); });
}

NodeDistribution undirected_node_distribution(const UndirectedHypergraph& h, NodeId x, Laziness alpha) {
  h.require(x);
  const auto incident = h.outgoing(x);
  if (incident.empty()) throw Error("node " + h.label(x) + " belongs to no hyperedge");
  const auto edges = h.edges();

  std::size_t denominator = 0;
  for (std::uint32_t pos : incident) denominator += edges[pos].members.size() - 1;

  NodeDistribution p;
  if (denominator == 0) {
    p.add(x, 1.0);
    return p;
  }
  p.add(x, alpha.value());
  const double rest = 1.0 - alpha.value();
  for (std::uint32_t pos : incident) {
    const auto& members = edges[pos].members;
    const double others = static_cast<double>(members.size() - 1);
    if (others == 0.0) continue;
    const double allocated = rest * others / static_cast<double>(denominator);
    for (NodeId y : members)
      if (y != x) p.add(y, allocated / others);
  }
  return p;
}

double directed_ricci(const DistanceCache<DirectedHyperedge>& distances, EdgeId e) {
  const auto& h = distances.hypergraph();
  const double w = h.edge(e).weight;
  if (!(w > 0.0)) throw Error("curvature of zero-weight hyperedge " + std::to_string(e.value));
  const auto plan = emd(distances, directed_tail_distribution(h, e), directed_head_distribution(h, e));
  return 1.0 - plan.objective / w;
}

double undirected_ricci(const DistanceCache<UndirectedHyperedge>& distances, EdgeId e, Laziness alpha) {
  const auto& h = distances.hypergraph();
  const auto& edge = h.edge(e);
  if (edge.members.size() < 2) return 1.0;
  std::vector<NodeDistribution> walk(h.universe_size());
  for (NodeId x : edge.members) walk[x.value] = undirected_node_distribution(h, x, alpha);
  return 1.0 - mean_pairwise_emd(distances, edge, walk);
}

CurvatureMap all_curvatures(const DirectedHypergraph& h, unsigned threads) {
  DistanceCache<DirectedHyperedge> distances(h);
  const auto edges = h.edges();
  std::vector<double> values(edges.size());
  parallel_for(edges.size(), threads, [&](std::size_t i) { values[i] = directed_ricci(distances, edges[i].id); });
  CurvatureMap out;
  for (std::size_t i = 0; i < edges.size(); ++i) out.emplace_hint(out.end(), edges[i].id, values[i]);
  return out;
}

CurvatureMap all_curvatures(const UndirectedHypergraph& h, Laziness alpha, unsigned threads) {
  DistanceCache<UndirectedHyperedge> distances(h);
  std::vector<NodeDistribution> walk(h.universe_size());
  for (NodeId x : h.nodes())
    if (!h.outgoing(x).empty()) walk[x.value] = undirected_node_distribution(h, x, alpha);

  const auto edges = h.edges();
  std::vector<double> values(edges.size());
  parallel_for(edges.size(), threads, [&](std::size_t i) {
    values[i] = edges[i].members.size() < 2 ? 1.0 : 1.0 - mean_pairwise_emd(distances, edges[i], walk);
  });
  CurvatureMap out;
  for (std::size_t i = 0; i < edges.size(); ++i) out.emplace_hint(out.end(), edges[i].id, values[i]);
  return out;
}

}  // namespace hyperricci
