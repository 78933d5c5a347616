#include "hyperricci/transport.hpp"

#include <algorithm>
#include <cmath>

#include "hyperricci/error.hpp"

namespace hyperricci {

double NodeDistribution::operator[](NodeId x) const {
  auto it = mass_.find(x);
  return it == mass_.end() ? 0.0 : it->second;
}

std::vector<NodeId> NodeDistribution::support() const {
  std::vector<NodeId> out;
  for (const auto& [x, m] : mass_)
    if (m > 0.0) out.push_back(x);
  return out;
}

double NodeDistribution::total() const {
  double t = 0.0;
  for (const auto& [_, m] : mass_) t += m;
  return t;
}

void NodeDistribution::validate() const {
  for (const auto& [x, m] : mass_)
    if (!(m >= 0.0) || !std::isfinite(m)) throw Error("distribution has a negative or non-finite mass");
  if (support().empty()) throw Error("distribution has empty support");
  if (std::abs(total() - 1.0) > kMassTolerance) throw Error("distribution does not sum to 1");
}

double dual_infeasibility(const TransportPlan& plan) {
  const Eigen::MatrixXd reduced =
      plan.cost - plan.row_potential.replicate(1, plan.cost.cols()) -
      plan.col_potential.transpose().replicate(plan.cost.rows(), 1);
  return std::max(0.0, -reduced.minCoeff());
}

double duality_gap(const TransportPlan& plan, const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
  return std::abs(plan.objective - (supply.dot(plan.row_potential) + demand.dot(plan.col_potential)));
}

TransportPlan transport(std::vector<NodeId> sources, std::vector<NodeId> sinks, Eigen::MatrixXd cost,
                        Eigen::VectorXd supply, Eigen::VectorXd demand) {
  if (supply.size() == 0 || demand.size() == 0) throw Error("transport requires nonempty supports");
  const double out_total = supply.sum();
  const double in_total = demand.sum();
  if (std::abs(out_total - in_total) > kMassTolerance)
    throw Error("unbalanced masses: " + std::to_string(out_total) + " vs " + std::to_string(in_total));
  if (out_total < in_total)
    supply *= in_total / out_total;
  else if (in_total < out_total)
    demand *= out_total / in_total;

  auto solution = solve_transport<double>(cost, supply, demand);
  TransportPlan plan;
  plan.sources = std::move(sources);
  plan.sinks = std::move(sinks);
  plan.cost = std::move(cost);
  plan.shipments = std::move(solution.flow);
  plan.row_potential = std::move(solution.row_potential);
  plan.col_potential = std::move(solution.col_potential);
  plan.objective = solution.objective;
  return plan;
}

template <typename Edge>
Eigen::MatrixXd cost_matrix(const DistanceCache<Edge>& distances, std::span<const NodeId> src,
                            std::span<const NodeId> dst) {
  const double penalty = unreachable_penalty(distances.hypergraph());
  Eigen::MatrixXd cost(src.size(), dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& row = distances.from(src[i]);
    for (std::size_t j = 0; j < dst.size(); ++j) {
      distances.hypergraph().require(dst[j]);
      const double d = row[dst[j].value];
      cost(i, j) = reachable(d) ? d : penalty;
    }
  }
  return cost;
}

template <typename Edge>
Eigen::MatrixXd cost_matrix(const Hypergraph<Edge>& h, std::span<const NodeId> src, std::span<const NodeId> dst) {
  return cost_matrix(DistanceCache<Edge>(h), src, dst);
}

template <typename Edge>
TransportPlan emd(const DistanceCache<Edge>& distances, const NodeDistribution& pl, const NodeDistribution& pr) {
  auto src = pl.support();
  auto dst = pr.support();
  if (src.empty() || dst.empty()) throw Error("EMD requires distributions with nonempty support");
  for (const auto* p : {&pl, &pr})
    for (const auto& [x, m] : p->masses())
      if (!(m >= 0.0)) throw Error("EMD input has a negative mass");

  Eigen::VectorXd supply(src.size()), demand(dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) supply(i) = pl[src[i]];
  for (std::size_t j = 0; j < dst.size(); ++j) demand(j) = pr[dst[j]];
  Eigen::MatrixXd cost = cost_matrix(distances, src, dst);

  TransportPlan plan = transport(std::move(src), std::move(dst), std::move(cost), supply, demand);
  const double penalty = unreachable_penalty(distances.hypergraph());
  plan.penalized_mass = (plan.cost.array() == penalty).select(plan.shipments, 0.0).sum();
  return plan;
}

template <typename Edge>
TransportPlan emd(const Hypergraph<Edge>& h, const NodeDistribution& pl, const NodeDistribution& pr) {
  return emd(DistanceCache<Edge>(h), pl, pr);
}

template Eigen::MatrixXd cost_matrix(const DistanceCache<DirectedHyperedge>&, std::span<const NodeId>,
                                     std::span<const NodeId>);
template Eigen::MatrixXd cost_matrix(const DistanceCache<UndirectedHyperedge>&, std::span<const NodeId>,
                                     std::span<const NodeId>);
template Eigen::MatrixXd cost_matrix(const DirectedHypergraph&, std::span<const NodeId>, std::span<const NodeId>);
template Eigen::MatrixXd cost_matrix(const UndirectedHypergraph&, std::span<const NodeId>, std::span<const NodeId>);
template TransportPlan emd(const DistanceCache<DirectedHyperedge>&, const NodeDistribution&, const NodeDistribution&);
template TransportPlan emd(const DistanceCache<UndirectedHyperedge>&, const NodeDistribution&,
                           const NodeDistribution&);
template TransportPlan emd(const DirectedHypergraph&, const NodeDistribution&, const NodeDistribution&);
template TransportPlan emd(const UndirectedHypergraph&, const NodeDistribution&, const NodeDistribution&);

}  // namespace hyperricci
