#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hyperricci/curvature.hpp"
#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

inline constexpr double kDirectedEpsilon = 0.005;
inline constexpr double kUndirectedEpsilon = 0.000005;

/// Weights at or below this after a flow update are treated as zero and the
/// hyperedge is dropped for good.
inline constexpr double kPruneTolerance = 1e-12;

struct FlowConfig {
  std::size_t iterations = 40;    // eta
  std::size_t surgery_period = 2; // tau
  double surgery_percent = 8.0;   // delta
  std::size_t max_cores = 2;      // kappa
  std::optional<double> epsilon;  // per-orientation default when unset
  Laziness alpha;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  /// Throws `Error` naming the first out-of-range parameter.
  void validate() const;
  double epsilon_for(bool directed) const {
    return epsilon ? *epsilon : (directed ? kDirectedEpsilon : kUndirectedEpsilon);
  }
};

struct Convergence {
  double average = 0.0;
  double deviation = 0.0;
  friend bool operator==(const Convergence&, const Convergence&) = default;
};

struct IterationRecord {
  std::size_t iteration = 0;
  /// Unset when no hyperedge survived from the previous iteration.
  std::optional<Convergence> convergence;
  std::size_t common_edges = 0;
  std::vector<EdgeId> pruned;
  std::vector<EdgeId> surgery;
  std::size_t live_edges = 0;
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct FlowTrace {
  double epsilon = 0.0;
  std::vector<IterationRecord> iterations;
  /// First iteration whose average weight change is at most epsilon.
  std::optional<std::size_t> first_converged;
  /// Every hyperedge was gone before the last iteration.
  bool stopped_early = false;
  friend bool operator==(const FlowTrace&, const FlowTrace&) = default;
};

template <typename Edge>
struct FlowResult {
  Hypergraph<Edge> final;
  FlowTrace trace;
};

struct StepResult {
  WeightMap weights;  // surviving hyperedges only
  std::vector<EdgeId> pruned;
};

/// w' = w (1 - Ric) for every weighted hyperedge; zero results are pruned.
StepResult flow_step(const WeightMap& weights, const CurvatureMap& curvature);

inline double sigmoid(double w) { return 1.0 / (1.0 + std::exp(-w)); }
WeightMap sigmoid_renormalize(const WeightMap& weights);

/// ceil(percent/100 * edges), never more than `edges`.
std::size_t surgery_count(std::size_t edges, double percent);

/// Heaviest `surgery_count` hyperedges, ties by ascending id.
std::vector<EdgeId> surgery(const WeightMap& weights, double percent);

/// Mean and population deviation of |next - prev| over hyperedges present in
/// both maps. Throws when they share none.
Convergence convergence_metrics(const WeightMap& previous, const WeightMap& next);

template <typename Edge>
FlowResult<Edge> run_flow(const Hypergraph<Edge>& h, const FlowConfig& config);

/// One tab-separated line per iteration under a header line:
/// iteration, delta_ave, delta_std, common, live, pruned ids, surgery ids.
void write_trace(std::ostream& out, const FlowTrace& trace);

}  // namespace hyperricci
