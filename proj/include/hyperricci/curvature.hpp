#pragma once

#include <map>

#include "hyperricci/distance_cache.hpp"
#include "hyperricci/hypergraph.hpp"
#include "hyperricci/transport.hpp"

namespace hyperricci {

/// Probability a lazy walk stays put when building undirected node
/// distributions. Must lie strictly between 0 and 1.
class Laziness {
 public:
  static constexpr double kDefault = 0.1;

  constexpr Laziness() = default;
  explicit Laziness(double alpha);

  constexpr double value() const { return alpha_; }

 private:
  double alpha_ = kDefault;
};

using CurvatureMap = std::map<EdgeId, double>;

// Directed distributions depend on incidence structure only, never on weights.
//
// Tail side: each tail node gets an equal share. A node with incoming
// hyperedges passes its share back, split equally over those hyperedges and
// then equally over each one's tail; a node with none keeps it.
NodeDistribution directed_tail_distribution(const DirectedHypergraph& h, EdgeId e);
// Head side: the mirror image, pushing shares forward over outgoing hyperedges
// to their heads.
NodeDistribution directed_head_distribution(const DirectedHypergraph& h, EdgeId e);

/// Lazy walk from `x`: mass alpha stays on x, the rest is split over the
/// hyperedges containing x in proportion to |members| - 1 and then evenly over
/// their other members. A node covered only by singleton hyperedges keeps all
/// of its mass. Throws for a node with no hyperedges.
NodeDistribution undirected_node_distribution(const UndirectedHypergraph& h, NodeId x, Laziness alpha = {});

/// 1 - EMD(tail distribution, head distribution) / w(e). Requires w(e) > 0.
double directed_ricci(const DistanceCache<DirectedHyperedge>& distances, EdgeId e);

/// 1 - mean EMD between the lazy-walk distributions of every unordered pair of
/// members (not divided by the weight). Singleton hyperedges score 1.
double undirected_ricci(const DistanceCache<UndirectedHyperedge>& distances, EdgeId e, Laziness alpha = {});

/// Curvature of every hyperedge of `h`; per-edge work runs on `threads`
/// workers and the result is independent of the worker count.
CurvatureMap all_curvatures(const DirectedHypergraph& h, unsigned threads = 1);
CurvatureMap all_curvatures(const UndirectedHypergraph& h, Laziness alpha = {}, unsigned threads = 1);

}  // namespace hyperricci
