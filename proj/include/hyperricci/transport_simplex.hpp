#pragma once

// Exact solver for balanced transportation problems
//
//   minimize   sum_ij cost(i,j) * flow(i,j)
//   subject to sum_j flow(i,j) = supply(i),  sum_i flow(i,j) = demand(j),  flow >= 0
//
// using the primal network simplex on the complete bipartite graph with an
// artificial root. Trees are kept strongly feasible (Cunningham's leaving arc
// rule), which rules out cycling on the heavily degenerate transportation
// polytope. Entering arcs come from block-search pricing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyperricci {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct TransportSolution {
  Matrix<Scalar> flow;
  /// Dual variables: cost(i,j) - row_potential(i) - col_potential(j) >= 0,
  /// with equality on every basic cell.
  Vector<Scalar> row_potential;
  Vector<Scalar> col_potential;
  Scalar objective{0};
  std::size_t pivots = 0;
};

namespace detail {

template <typename Scalar>
class BipartiteNetworkSimplex {
 public:
  BipartiteNetworkSimplex(const Matrix<Scalar>& cost, const Vector<Scalar>& supply, const Vector<Scalar>& demand)
      : cost_(cost), rows_(cost.rows()), cols_(cost.cols()) {
    const std::int64_t nodes = rows_ + cols_;
    root_ = nodes;
    real_arcs_ = rows_ * cols_;
    const std::int64_t arcs = real_arcs_ + nodes;

    Scalar max_cost{0};
    for (std::int64_t k = 0; k < real_arcs_; ++k) max_cost = std::max(max_cost, abs_(cost_(k / cols_, k % cols_)));
    art_cost_ = (max_cost + Scalar(1)) * Scalar(nodes + 1);
    tolerance_ = art_cost_ * Scalar(64) * std::numeric_limits<Scalar>::epsilon();

    flow_.assign(arcs, Scalar(0));
    in_tree_.assign(arcs, 0);
    parent_.assign(nodes + 1, -1);
    pred_.assign(nodes + 1, -1);
    up_.assign(nodes + 1, 0);
    potential_.assign(nodes + 1, Scalar(0));
    children_.assign(nodes + 1, {});
    mark_.assign(nodes + 1, 0);

    // Initial strongly feasible tree: every node hangs off the root through
    // its artificial arc, carrying its whole supply or demand.
    for (std::int64_t v = 0; v < nodes; ++v) {
      const std::int64_t arc = real_arcs_ + v;
      parent_[v] = root_;
      pred_[v] = arc;
      in_tree_[arc] = 1;
      children_[root_].push_back(v);
      if (v < rows_) {
        up_[v] = 1;  // v -> root
        flow_[arc] = supply(v);
        potential_[v] = -art_cost_;
      } else {
        up_[v] = 0;  // root -> v
        flow_[arc] = demand(v - rows_);
        potential_[v] = art_cost_;
      }
    }
    block_ = std::max<std::int64_t>(10, static_cast<std::int64_t>(std::sqrt(double(real_arcs_))));
  }

  TransportSolution<Scalar> run() {
    TransportSolution<Scalar> out;
    while (select_entering()) {
      pivot();
      ++out.pivots;
    }

    Scalar stranded{0};
    for (std::int64_t v = 0; v < rows_ + cols_; ++v) stranded += flow_[real_arcs_ + v];
    if (stranded > tolerance_ * Scalar(rows_ + cols_))
      throw std::runtime_error("transportation problem is infeasible (unbalanced masses)");

    out.flow.resize(rows_, cols_);
    for (std::int64_t k = 0; k < real_arcs_; ++k) {
      Scalar f = flow_[k];
      out.flow(k / cols_, k % cols_) = f > Scalar(0) ? f : Scalar(0);
    }
    out.row_potential.resize(rows_);
    out.col_potential.resize(cols_);
    for (std::int64_t i = 0; i < rows_; ++i) out.row_potential(i) = -potential_[i];
    for (std::int64_t j = 0; j < cols_; ++j) out.col_potential(j) = potential_[rows_ + j];
    out.objective = (cost_.array() * out.flow.array()).sum();
    return out;
  }

 private:
  static Scalar abs_(Scalar x) { return x < Scalar(0) ? -x : x; }

  std::int64_t source(std::int64_t arc) const {
    if (arc < real_arcs_) return arc / cols_;
    const std::int64_t v = arc - real_arcs_;
    return v < rows_ ? v : root_;
  }
  std::int64_t target(std::int64_t arc) const {
    if (arc < real_arcs_) return rows_ + arc % cols_;
    const std::int64_t v = arc - real_arcs_;
    return v < rows_ ? root_ : v;
  }
  Scalar arc_cost(std::int64_t arc) const {
    return arc < real_arcs_ ? cost_(arc / cols_, arc % cols_) : art_cost_;
  }
  Scalar reduced_cost(std::int64_t arc) const {
    return arc_cost(arc) + potential_[source(arc)] - potential_[target(arc)];
  }

  bool select_entering() {
    Scalar best{0};
    std::int64_t best_arc = -1;
    std::int64_t scanned_in_block = 0;
    for (std::int64_t n = 0; n < real_arcs_; ++n) {
      const std::int64_t arc = next_arc_;
      next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
      if (!in_tree_[arc]) {
        const Scalar rc = reduced_cost(arc);
        if (rc < best) {
          best = rc;
          best_arc = arc;
        }
      }
      if (++scanned_in_block == block_) {
        if (best < -tolerance_) break;
        scanned_in_block = 0;
      }
    }
    if (best < -tolerance_) {
      entering_ = best_arc;
      return true;
    }
    return false;
  }

  std::int64_t find_join(std::int64_t a, std::int64_t b) {
    ++stamp_;
    for (std::int64_t u = a; u != -1; u = parent_[u]) mark_[u] = stamp_;
    std::int64_t u = b;
    while (mark_[u] != stamp_) u = parent_[u];
    return u;
  }

  void pivot() {
    const std::int64_t first = source(entering_);
    const std::int64_t second = target(entering_);
    const std::int64_t join = find_join(first, second);

    // Flow travels first -> second over the entering arc, up from second to
    // the join and back down to first. Ties on the first side keep the
    // earliest candidate, ties on the second side the latest.
    Scalar delta = std::numeric_limits<Scalar>::infinity();
    std::int64_t leaving_node = -1;
    int side = 0;
    for (std::int64_t u = first; u != join; u = parent_[u]) {
      if (up_[u] && flow_[pred_[u]] < delta) {
        delta = flow_[pred_[u]];
        leaving_node = u;
        side = 1;
      }
    }
    for (std::int64_t u = second; u != join; u = parent_[u]) {
      if (!up_[u] && flow_[pred_[u]] <= delta) {
        delta = flow_[pred_[u]];
        leaving_node = u;
        side = 2;
      }
    }
    if (side == 0) throw std::runtime_error("transportation problem is unbounded");

    if (delta > Scalar(0)) {
      flow_[entering_] += delta;
      for (std::int64_t u = first; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? -delta : delta;
      for (std::int64_t u = second; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? delta : -delta;
    }

    const std::int64_t u_in = side == 1 ? first : second;
    const std::int64_t v_in = side == 1 ? second : first;
    const std::int64_t leaving_arc = pred_[leaving_node];
    flow_[leaving_arc] = Scalar(0);
    in_tree_[leaving_arc] = 0;
    in_tree_[entering_] = 1;

    // Re-hang the cut subtree: reverse the path u_in .. leaving_node, then
    // attach u_in below v_in through the entering arc.
    path_.clear();
    for (std::int64_t u = u_in;; u = parent_[u]) {
      path_.push_back(u);
      if (u == leaving_node) break;
    }
    detach(parent_[leaving_node], leaving_node);
    for (std::size_t k = path_.size() - 1; k >= 1; --k) {
      const std::int64_t node = path_[k];
      const std::int64_t child = path_[k - 1];
      detach(node, child);
      parent_[node] = child;
      pred_[node] = pred_[child];
      up_[node] = !up_[child];
      children_[child].push_back(node);
    }
    parent_[u_in] = v_in;
    pred_[u_in] = entering_;
    up_[u_in] = source(entering_) == u_in;
    children_[v_in].push_back(u_in);

    const Scalar c = arc_cost(entering_);
    const Scalar wanted = up_[u_in] ? potential_[v_in] - c : potential_[v_in] + c;
    shift_subtree(u_in, wanted - potential_[u_in]);
  }

  void detach(std::int64_t parent, std::int64_t child) {
    auto& list = children_[parent];
    list.erase(std::find(list.begin(), list.end(), child));
  }

  void shift_subtree(std::int64_t top, Scalar shift) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const std::int64_t u = stack_.back();
      stack_.pop_back();
      potential_[u] += shift;
      for (std::int64_t c : children_[u]) stack_.push_back(c);
    }
  }

  const Matrix<Scalar>& cost_;
  std::int64_t rows_, cols_, root_ = 0, real_arcs_ = 0, block_ = 10;
  Scalar art_cost_{0}, tolerance_{0};
  std::vector<Scalar> flow_;
  std::vector<char> in_tree_;
  std::vector<std::int64_t> parent_, pred_;
  std::vector<char> up_;
  std::vector<Scalar> potential_;
  std::vector<std::vector<std::int64_t>> children_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
  std::int64_t next_arc_ = 0, entering_ = -1;
  std::vector<std::int64_t> path_, stack_;
};

}  // namespace detail

/// Solves the balanced transportation problem exactly (up to floating-point
/// rounding of the pivots). Supplies and demands must be non-negative and
/// have equal totals; callers rebalance beforehand.
template <typename Scalar>
TransportSolution<Scalar> solve_transport(const Matrix<Scalar>& cost, const Vector<Scalar>& supply,
                                          const Vector<Scalar>& demand) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw std::invalid_argument("cost matrix shape does not match supply/demand sizes");
  if (cost.rows() == 0 || cost.cols() == 0) throw std::invalid_argument("empty transportation problem");
  if ((supply.array() < Scalar(0)).any() || (demand.array() < Scalar(0)).any())
    throw std::invalid_argument("negative supply or demand");
  return detail::BipartiteNetworkSimplex<Scalar>(cost, supply, demand).run();
}

}  // namespace hyperricci
