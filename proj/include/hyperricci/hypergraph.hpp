#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hyperricci {

struct NodeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(EdgeId, EdgeId) = default;
};

/// Distance value for node pairs with no connecting path.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool reachable(double distance) { return distance < kUnreachable; }

/// Interned node labels. Ids are dense and assigned in insertion order; the
/// table is shared (immutably) between a hypergraph and everything derived
/// from it so that node ids stay comparable across snapshots.
class NodeTable {
 public:
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId id) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, NodeId, std::less<>> index_;
};

struct DirectedHyperedge {
  EdgeId id;
  std::vector<NodeId> tail;  // sorted, unique
  std::vector<NodeId> head;  // sorted, unique
  double weight = 1.0;
};

struct UndirectedHyperedge {
  EdgeId id;
  std::vector<NodeId> members;  // sorted, unique
  double weight = 1.0;
};

// Orientation-agnostic views used by the generic algorithms: a path may leave
// a hyperedge's node through any of its sources and arrive at any target.
inline std::span<const NodeId> sources(const DirectedHyperedge& e) { return e.tail; }
inline std::span<const NodeId> targets(const DirectedHyperedge& e) { return e.head; }
inline std::span<const NodeId> sources(const UndirectedHyperedge& e) { return e.members; }
inline std::span<const NodeId> targets(const UndirectedHyperedge& e) { return e.members; }

/// Sorted union of every node incident to `e`.
std::vector<NodeId> pins(const DirectedHyperedge& e);
std::vector<NodeId> pins(const UndirectedHyperedge& e);

using WeightMap = std::map<EdgeId, double>;

/// Immutable edge-weighted hypergraph over a shared node table.
///
/// The node set may be a strict subset of the table (after node removal);
/// per-node queries are indexed by `NodeId::value` over the whole table.
template <typename Edge>
class Hypergraph {
 public:
  using edge_type = Edge;
  static constexpr bool is_directed = std::is_same_v<Edge, DirectedHyperedge>;

  Hypergraph();

  /// Validates and indexes. Node and edge lists are sorted on entry; edge ids
  /// must be unique. Throws `Error` on any structural violation.
  Hypergraph(std::shared_ptr<const NodeTable> labels, std::vector<NodeId> nodes,
             std::vector<Edge> edges, std::optional<NodeId> sink = std::nullopt);

  const NodeTable& labels() const { return *labels_; }
  const std::shared_ptr<const NodeTable>& label_table() const { return labels_; }
  std::size_t universe_size() const { return labels_->size(); }

  std::span<const NodeId> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(NodeId x) const { return x.value < present_.size() && present_[x.value] != 0; }
  /// Throws `UnknownNodeError` when `x` is not in the node set.
  void require(NodeId x) const;
  NodeId node(std::string_view label) const;
  const std::string& label(NodeId x) const { return labels_->label(x); }

  const Edge* find_edge(EdgeId id) const;
  const Edge& edge(EdgeId id) const;

  /// Positions (into `edges()`) of hyperedges having `x` among their sources.
  std::span<const std::uint32_t> outgoing(NodeId x) const { return out_[x.value]; }
  /// Positions of hyperedges having `x` among their targets.
  std::span<const std::uint32_t> incoming(NodeId x) const { return in_[x.value]; }

  std::optional<NodeId> sink() const { return sink_; }
  double total_weight() const;

  WeightMap weights() const;
  /// Keeps exactly the hyperedges named in `w`, with the given weights.
  Hypergraph with_weights(const WeightMap& w) const;

 private:
  void build_index();

  std::shared_ptr<const NodeTable> labels_;
  std::vector<NodeId> nodes_;
  std::vector<char> present_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
  std::optional<NodeId> sink_;
};

using DirectedHypergraph = Hypergraph<DirectedHyperedge>;
using UndirectedHypergraph = Hypergraph<UndirectedHyperedge>;

extern template class Hypergraph<DirectedHyperedge>;
extern template class Hypergraph<UndirectedHyperedge>;

struct DirectedDegree {
  std::size_t in = 0;
  std::size_t out = 0;
  friend bool operator==(const DirectedDegree&, const DirectedDegree&) = default;
};

DirectedDegree degrees(const DirectedHypergraph& h, NodeId x);
std::size_t degree(const UndirectedHypergraph& h, NodeId x);

/// Shortest-path lengths from `source`, indexed by `NodeId::value` over the
/// node table. Crossing a hyperedge costs its weight; directed hyperedges are
/// crossed tail to head only. Nodes outside the hypergraph read as unreachable.
template <typename Edge>
std::vector<double> single_source_distances(const Hypergraph<Edge>& h, NodeId source);

template <typename Edge>
double distance(const Hypergraph<Edge>& h, NodeId from, NodeId to);

/// Connected components (weak components for directed input), each sorted,
/// ordered by their smallest node.
template <typename Edge>
std::vector<std::vector<NodeId>> components(const Hypergraph<Edge>& h);

template <typename Edge>
bool is_connected(const Hypergraph<Edge>& h);

/// Drops `removed` from the node set together with every hyperedge touching
/// it. Removing every node is an error.
template <typename Edge>
Hypergraph<Edge> remove_nodes(const Hypergraph<Edge>& h, std::span<const NodeId> removed);

/// Sub-hypergraph on `kept`: hyperedges whose pins all lie in `kept`.
template <typename Edge>
Hypergraph<Edge> induced(const Hypergraph<Edge>& h, std::span<const NodeId> kept);

}  // namespace hyperricci
