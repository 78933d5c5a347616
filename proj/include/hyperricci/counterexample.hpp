#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperricci {

/// Undirected simple graph on nodes 0..n-1. Edge lengths default to 1.
class SimpleGraph {
 public:
  std::uint32_t add_node(std::string name);
  /// Returns the new edge's index. Rejects loops and repeated edges.
  std::size_t add_edge(std::uint32_t u, std::uint32_t v);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::pair<std::uint32_t, std::uint32_t>& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  const std::string& name(std::uint32_t x) const { return names_.at(x); }
  std::uint32_t node(const std::string& name) const;
  std::size_t degree(std::uint32_t x) const { return adjacency_.at(x).size(); }
  /// Neighbours of x paired with the joining edge index.
  const std::vector<std::pair<std::uint32_t, std::size_t>>& adjacent(std::uint32_t x) const { return adjacency_.at(x); }
  /// x together with its neighbours, ascending.
  std::vector<std::uint32_t> closed_neighborhood(std::uint32_t x) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adjacency_;
};

enum class EdgeClass { designated, spoke_s, spoke_t, bridge, tree_inner, tree_leaf };

std::string to_string(EdgeClass c);

/// p_1..p_q each joined to s and t, the edge f = {s,t}, a complete 10-ary
/// tree of depth k, and a bridge from t to the tree root.
struct CounterexampleGraph {
  SimpleGraph graph;
  std::size_t q = 0;
  std::size_t k = 0;
  std::uint32_t s = 0;
  std::uint32_t t = 0;
  std::uint32_t root = 0;
  std::size_t f = 0;
  std::vector<EdgeClass> classes;  // per edge
};

inline constexpr std::size_t kMaxTreeDepth = 5;

/// Requires q >= 1 and 1 <= k <= kMaxTreeDepth.
CounterexampleGraph build_Gn(std::size_t q, std::size_t k);

struct GraphCurvature {
  double curvature = 0.0;
  double emd = 0.0;
};

/// 1 - EMD(uniform on Nbr[u], uniform on Nbr[v]) / w(e), where distances are
/// shortest paths under `weights` (unit lengths when empty).
GraphCurvature graph_ollivier_ricci(const SimpleGraph& g, std::size_t e, const std::vector<double>& weights = {});

/// Every edge, computed on `threads` workers.
std::vector<GraphCurvature> all_graph_curvatures(const SimpleGraph& g, const std::vector<double>& weights = {},
                                                 unsigned threads = 1);

/// Total variation distance between the two closed-neighbourhood uniforms.
double tvd(const SimpleGraph& g, std::size_t e);

/// One update of the normalized flow from iterate t:
///   w' = w - w C + s w (sum_h w(h) C(h)) / initial_curvature_sum
/// where initial_curvature_sum is sum_h w0(h) C0(h). Throws when it is zero.
std::vector<double> normalized_flow_update(const std::vector<double>& weights, const std::vector<double>& curvatures,
                                           double initial_curvature_sum, double s_step);

/// The first step from unit weights, evaluated exactly as the update above
/// (the two curvature sums coincide, so each edge gets 1 - C(e) + s_step).
std::vector<double> normalized_flow_step(const SimpleGraph& g, double s_step, unsigned threads = 1);

struct NormalizedRun {
  std::vector<std::vector<double>> weights;  // weights[0] is all ones
  std::vector<std::vector<double>> curvatures;
  /// Index of the first iterate holding a non-positive weight, if any; the
  /// run stops there since distances are no longer defined.
  std::size_t stopped_at = 0;
  bool stopped = false;
};

/// Iterates the normalized flow, recomputing curvature under the current
/// weights at each step.
NormalizedRun normalized_flow_run(const SimpleGraph& g, double s_step, std::size_t steps, unsigned threads = 1);

struct EdgeClassSummary {
  EdgeClass edge_class;
  std::size_t count = 0;
  double min_curvature = 0.0;
  double max_curvature = 0.0;
  double max_tvd = 0.0;
  bool sandwich_holds = true;
};

struct NegativityReport {
  std::size_t q = 0;
  std::size_t k = 0;
  double s_step = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double curvature_f = 0.0;
  double curvature_sum = 0.0;
  /// (s/m) * sum of curvatures.
  double scaled_sum = 0.0;
  /// 1 - C(f) + (s/m) * sum of curvatures.
  double weight_f = 0.0;
  std::size_t min_edge = 0;
  double min_weight = 0.0;
  bool negative = false;    // some edge
  bool f_negative = false;  // the edge f itself
  bool f_bound_holds = false;     // C(f) >= 1 - 3/(q+3)
  bool sandwich_holds = false;    // on every edge
  bool leaf_bound_holds = false;  // leaf-edge EMD >= 35/24
  std::vector<EdgeClassSummary> classes;
  std::vector<GraphCurvature> curvatures;
  std::vector<double> tvds;
};

/// Guard used for the bound checks and for calling a weight negative.
inline constexpr double kTheoremGuard = 1e-9;

NegativityReport verify_negativity(std::size_t q, std::size_t k, double s_step, unsigned threads = 1);

}  // namespace hyperricci
