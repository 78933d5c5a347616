#pragma once

#include <Eigen/Dense>

#include <map>
#include <span>
#include <vector>

#include "hyperricci/distance_cache.hpp"
#include "hyperricci/hypergraph.hpp"
#include "hyperricci/transport_simplex.hpp"

namespace hyperricci {

/// Tolerance on probability totals and marginal constraints.
inline constexpr double kMassTolerance = 1e-9;

/// Sparse probability mass over nodes.
class NodeDistribution {
 public:
  NodeDistribution() = default;
  NodeDistribution(std::initializer_list<std::pair<const NodeId, double>> masses) : mass_(masses) {}
  explicit NodeDistribution(std::map<NodeId, double> masses) : mass_(std::move(masses)) {}

  void add(NodeId x, double mass) { mass_[x] += mass; }
  double operator[](NodeId x) const;
  const std::map<NodeId, double>& masses() const { return mass_; }
  /// Nodes carrying strictly positive mass, ascending.
  std::vector<NodeId> support() const;
  double total() const;

  /// Throws `Error` unless masses are non-negative, the support is nonempty
  /// and the total is 1 within `kMassTolerance`.
  void validate() const;

  friend bool operator==(const NodeDistribution&, const NodeDistribution&) = default;

 private:
  std::map<NodeId, double> mass_;
};

/// Optimal shipment plan between two supports.
struct TransportPlan {
  std::vector<NodeId> sources;
  std::vector<NodeId> sinks;
  Eigen::MatrixXd cost;
  Eigen::MatrixXd shipments;
  Eigen::VectorXd row_potential;
  Eigen::VectorXd col_potential;
  double objective = 0.0;
  /// Mass routed over lanes with no connecting path (priced at the penalty).
  double penalized_mass = 0.0;

  bool used_penalty() const { return penalized_mass > 0.0; }
};

/// Largest violation of c(u,v) - row(u) - col(v) >= 0 over all lanes (0 when
/// dual feasible).
double dual_infeasibility(const TransportPlan& plan);
/// |primal objective - dual objective|.
double duality_gap(const TransportPlan& plan, const Eigen::VectorXd& supply, const Eigen::VectorXd& demand);

/// Finite stand-in for unreachable pairs: one more than the total weight,
/// which exceeds every simple path length.
template <typename Edge>
double unreachable_penalty(const Hypergraph<Edge>& h) {
  return 1.0 + h.total_weight();
}

/// Distances from each source-support node to each sink-support node, with
/// unreachable pairs priced at `unreachable_penalty(h)`.
template <typename Edge>
Eigen::MatrixXd cost_matrix(const DistanceCache<Edge>& distances, std::span<const NodeId> src,
                            std::span<const NodeId> dst);

template <typename Edge>
Eigen::MatrixXd cost_matrix(const Hypergraph<Edge>& h, std::span<const NodeId> src, std::span<const NodeId> dst);

/// Earth mover's distance between `pl` and `pr` under hypergraph distances.
/// Totals differing by at most `kMassTolerance` are rebalanced by scaling the
/// smaller side; a larger imbalance is an error.
template <typename Edge>
TransportPlan emd(const DistanceCache<Edge>& distances, const NodeDistribution& pl, const NodeDistribution& pr);

template <typename Edge>
TransportPlan emd(const Hypergraph<Edge>& h, const NodeDistribution& pl, const NodeDistribution& pr);

/// Transport between two mass vectors under an explicit cost matrix. Used by
/// the hypergraph EMD and by the plain-graph curvature code.
TransportPlan transport(std::vector<NodeId> sources, std::vector<NodeId> sinks, Eigen::MatrixXd cost,
                        Eigen::VectorXd supply, Eigen::VectorXd demand);

}  // namespace hyperricci
