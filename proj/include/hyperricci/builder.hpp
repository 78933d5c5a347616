#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <string_view>
#include <type_traits>
#include <vector>

#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

/// Incremental construction by label. Node ids follow first mention; edge ids
/// follow insertion order.
template <typename Edge>
class HypergraphBuilder {
 public:
  HypergraphBuilder() : table_(std::make_shared<NodeTable>()) {}

  NodeId node(std::string_view label) {
    const NodeId id = table_->intern(label);
    if (id.value >= seen_.size()) seen_.resize(id.value + 1, 0);
    if (!seen_[id.value]) {
      seen_[id.value] = 1;
      nodes_.push_back(id);
    }
    return id;
  }

  std::vector<NodeId> nodes(std::initializer_list<std::string_view> labels) {
    std::vector<NodeId> out;
    for (auto l : labels) out.push_back(node(l));
    return out;
  }

  EdgeId add(std::vector<NodeId> tail, std::vector<NodeId> head, double weight = 1.0)
    requires std::is_same_v<Edge, DirectedHyperedge>
  {
    const EdgeId id = next_id();
    edges_.push_back(DirectedHyperedge{id, std::move(tail), std::move(head), weight});
    return id;
  }

  EdgeId add(std::initializer_list<std::string_view> tail, std::initializer_list<std::string_view> head,
             double weight = 1.0)
    requires std::is_same_v<Edge, DirectedHyperedge>
  {
    auto t = nodes(tail);
    return add(std::move(t), nodes(head), weight);
  }

  EdgeId add(std::vector<NodeId> members, double weight = 1.0)
    requires std::is_same_v<Edge, UndirectedHyperedge>
  {
    const EdgeId id = next_id();
    edges_.push_back(UndirectedHyperedge{id, std::move(members), weight});
    return id;
  }

  EdgeId add(std::initializer_list<std::string_view> members, double weight = 1.0)
    requires std::is_same_v<Edge, UndirectedHyperedge>
  {
    return add(nodes(members), weight);
  }

  void set_sink(NodeId sink) { sink_ = sink; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Snapshots the node table, so the builder may keep growing afterwards.
  Hypergraph<Edge> build() const {
    return Hypergraph<Edge>(std::make_shared<const NodeTable>(*table_), nodes_, edges_, sink_);
  }

 private:
  EdgeId next_id() { return EdgeId{static_cast<std::uint32_t>(edges_.size())}; }

  std::shared_ptr<NodeTable> table_;
  std::vector<NodeId> nodes_;
  std::vector<char> seen_;
  std::vector<Edge> edges_;
  std::optional<NodeId> sink_;
};

using DirectedBuilder = HypergraphBuilder<DirectedHyperedge>;
using UndirectedBuilder = HypergraphBuilder<UndirectedHyperedge>;

}  // namespace hyperricci
