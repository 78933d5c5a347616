#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

/// Memoized single-source distances for one hypergraph snapshot. Rows are
/// populated lazily and at most once; concurrent `from()` calls are safe.
/// The cache refers to `h`, which must outlive it.
template <typename Edge>
class DistanceCache {
 public:
  explicit DistanceCache(const Hypergraph<Edge>& h)
      : h_(&h), once_(new std::once_flag[h.universe_size()]), rows_(h.universe_size()) {}

  const Hypergraph<Edge>& hypergraph() const { return *h_; }

  const std::vector<double>& from(NodeId source) const {
    h_->require(source);
    std::call_once(once_[source.value], [&] { rows_[source.value] = single_source_distances(*h_, source); });
    return rows_[source.value];
  }

  double operator()(NodeId from_node, NodeId to_node) const { return from(from_node)[to_node.value]; }

 private:
  const Hypergraph<Edge>* h_;
  std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<std::vector<double>> rows_;
};

}  // namespace hyperricci
