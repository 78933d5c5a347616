#include "hyperricci/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <utility>

#include "hyperricci/error.hpp"

namespace hyperricci {

NodeId NodeTable::intern(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  NodeId id{static_cast<std::uint32_t>(labels_.size())};
  labels_.emplace_back(label);
  index_.emplace(std::string(label), id);
  return id;
}

std::optional<NodeId> NodeTable::find(std::string_view label) const {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::string& NodeTable::label(NodeId id) const {
  if (id.value >= labels_.size()) throw UnknownNodeError("#" + std::to_string(id.value));
  return labels_[id.value];
}

namespace {

void sort_unique(std::vector<NodeId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string edge_name(EdgeId id) { return "hyperedge " + std::to_string(id.value); }

}  // namespace

std::vector<NodeId> pins(const DirectedHyperedge& e) {
  std::vector<NodeId> out;
  std::set_union(e.tail.begin(), e.tail.end(), e.head.begin(), e.head.end(), std::back_inserter(out));
  return out;
}

std::vector<NodeId> pins(const UndirectedHyperedge& e) { return e.members; }

template <typename Edge>
Hypergraph<Edge>::Hypergraph() : labels_(std::make_shared<NodeTable>()) {}

template <typename Edge>
Hypergraph<Edge>::Hypergraph(std::shared_ptr<const NodeTable> labels, std::vector<NodeId> nodes,
                             std::vector<Edge> edges, std::optional<NodeId> sink)
    : labels_(std::move(labels)), nodes_(std::move(nodes)), edges_(std::move(edges)), sink_(sink) {
  if (!labels_) throw Error("hypergraph requires a node table");
  sort_unique(nodes_);
  present_.assign(labels_->size(), 0);
  for (NodeId x : nodes_) {
    if (x.value >= labels_->size()) throw UnknownNodeError("#" + std::to_string(x.value));
    present_[x.value] = 1;
  }

  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    if (i > 0 && edges_[i - 1].id == e.id) throw Error("duplicate " + edge_name(e.id));
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw Error(edge_name(e.id) + " has a negative or non-finite weight");
    if constexpr (is_directed) {
      sort_unique(e.tail);
      sort_unique(e.head);
      if (e.tail.empty() || e.head.empty()) throw Error(edge_name(e.id) + " has an empty tail or head");
      if (e.tail == e.head) throw Error(edge_name(e.id) + " has identical tail and head");
    } else {
      sort_unique(e.members);
      if (e.members.empty()) throw Error(edge_name(e.id) + " has no members");
    }
    for (NodeId x : pins(e)) {
      if (!contains(x)) throw UnknownNodeError(labels_->label(x) + " (referenced by " + edge_name(e.id) + ")");
    }
  }

  if (sink_) {
    if constexpr (!is_directed) throw Error("undirected hypergraphs have no sink");
    if (!contains(*sink_)) throw UnknownNodeError("sink #" + std::to_string(sink_->value));
  }
  build_index();
  if (sink_ && !out_[sink_->value].empty()) throw Error("the sink node appears in a tail");
}

template <typename Edge>
void Hypergraph<Edge>::build_index() {
  out_.assign(labels_->size(), {});
  in_.assign(labels_->size(), {});
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    for (NodeId x : sources(edges_[i])) out_[x.value].push_back(i);
    for (NodeId x : targets(edges_[i])) in_[x.value].push_back(i);
  }
}

template <typename Edge>
void Hypergraph<Edge>::require(NodeId x) const {
  if (!contains(x)) {
    throw UnknownNodeError(x.value < labels_->size() ? labels_->label(x) : "#" + std::to_string(x.value));
  }
}

template <typename Edge>
NodeId Hypergraph<Edge>::node(std::string_view label) const {
  auto id = labels_->find(label);
  if (!id || !contains(*id)) throw UnknownNodeError(std::string(label));
  return *id;
}

template <typename Edge>
const Edge* Hypergraph<Edge>::find_edge(EdgeId id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId key) { return e.id < key; });
  return it != edges_.end() && it->id == id ? &*it : nullptr;
}

template <typename Edge>
const Edge& Hypergraph<Edge>::edge(EdgeId id) const {
  if (const Edge* e = find_edge(id)) return *e;
  throw Error(edge_name(id) + " is not live in this hypergraph");
}

template <typename Edge>
double Hypergraph<Edge>::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.weight;
  return total;
}

template <typename Edge>
WeightMap Hypergraph<Edge>::weights() const {
  WeightMap w;
  for (const Edge& e : edges_) w.emplace_hint(w.end(), e.id, e.weight);
  return w;
}

template <typename Edge>
Hypergraph<Edge> Hypergraph<Edge>::with_weights(const WeightMap& w) const {
  std::vector<Edge> kept;
  kept.reserve(w.size());
  for (const Edge& e : edges_) {
    if (auto it = w.find(e.id); it != w.end()) {
      kept.push_back(e);
      kept.back().weight = it->second;
    }
  }
  if (kept.size() != w.size()) throw Error("weight map names a hyperedge that is not live");
  return Hypergraph(labels_, nodes_, std::move(kept), sink_);
}

template class Hypergraph<DirectedHyperedge>;
template class Hypergraph<UndirectedHyperedge>;

DirectedDegree degrees(const DirectedHypergraph& h, NodeId x) {
  h.require(x);
  return {h.incoming(x).size(), h.outgoing(x).size()};
}

std::size_t degree(const UndirectedHypergraph& h, NodeId x) {
  h.require(x);
  return h.outgoing(x).size();
}

template <typename Edge>
std::vector<double> single_source_distances(const Hypergraph<Edge>& h, NodeId source) {
  h.require(source);
  std::vector<double> dist(h.universe_size(), kUnreachable);
  // A hyperedge costs the same whichever member it is entered from, so it is
  // relaxed once, from the first (closest) settled source node.
  std::vector<char> expanded(h.edge_count(), 0);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source.value] = 0.0;
  queue.emplace(0.0, source.value);
  const auto edges = h.edges();
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (std::uint32_t pos : h.outgoing(NodeId{u})) {
      if (expanded[pos]) continue;
      expanded[pos] = 1;
      const double reach = d + edges[pos].weight;
      for (NodeId y : targets(edges[pos])) {
        if (reach < dist[y.value]) {
          dist[y.value] = reach;
          queue.emplace(reach, y.value);
        }
      }
    }
  }
  return dist;
}

template <typename Edge>
double distance(const Hypergraph<Edge>& h, NodeId from, NodeId to) {
  h.require(to);
  return single_source_distances(h, from)[to.value];
}

template <typename Edge>
std::vector<std::vector<NodeId>> components(const Hypergraph<Edge>& h) {
  std::vector<std::uint32_t> parent(h.universe_size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto root = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : h.edges()) {
    const auto all = pins(e);
    for (std::size_t i = 1; i < all.size(); ++i) {
      auto a = root(all[0].value), b = root(all[i].value);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are the smallest member of each set, so ordering by root orders
  // components by their smallest node.
  std::map<std::uint32_t, std::vector<NodeId>> grouped;
  for (NodeId x : h.nodes()) grouped[root(x.value)].push_back(x);
  std::vector<std::vector<NodeId>> out;
  out.reserve(grouped.size());
  for (auto& [_, members] : grouped) out.push_back(std::move(members));
  return out;
}

template <typename Edge>
bool is_connected(const Hypergraph<Edge>& h) {
  return components(h).size() <= 1;
}

template <typename Edge>
Hypergraph<Edge> remove_nodes(const Hypergraph<Edge>& h, std::span<const NodeId> removed) {
  std::vector<char> gone(h.universe_size(), 0);
  for (NodeId x : removed) {
    h.require(x);
    gone[x.value] = 1;
  }
  std::vector<NodeId> nodes;
  for (NodeId x : h.nodes())
    if (!gone[x.value]) nodes.push_back(x);
  if (nodes.empty() && h.node_count() > 0) throw Error("cannot remove every node of a hypergraph");

  std::vector<Edge> edges;
  for (const Edge& e : h.edges()) {
    const auto all = pins(e);
    if (std::none_of(all.begin(), all.end(), [&](NodeId x) { return gone[x.value] != 0; })) edges.push_back(e);
  }
  return Hypergraph<Edge>(h.label_table(), std::move(nodes), std::move(edges),
                          h.sink() && !gone[h.sink()->value] ? h.sink() : std::nullopt);
}

template <typename Edge>
Hypergraph<Edge> induced(const Hypergraph<Edge>& h, std::span<const NodeId> kept) {
  std::vector<char> keep(h.universe_size(), 0);
  for (NodeId x : kept) {
    h.require(x);
    keep[x.value] = 1;
  }
  std::vector<NodeId> removed;
  for (NodeId x : h.nodes())
    if (!keep[x.value]) removed.push_back(x);
  return remove_nodes(h, removed);
}

#define HYPERRICCI_INSTANTIATE(E)                                                             \
  template std::vector<double> single_source_distances(const Hypergraph<E>&, NodeId);        \
  template double distance(const Hypergraph<E>&, NodeId, NodeId);                            \
  template std::vector<std::vector<NodeId>> components(const Hypergraph<E>&);                \
  template bool is_connected(const Hypergraph<E>&);                                          \
  template Hypergraph<E> remove_nodes(const Hypergraph<E>&, std::span<const NodeId>);        \
  template Hypergraph<E> induced(const Hypergraph<E>&, std::span<const NodeId>);

HYPERRICCI_INSTANTIATE(DirectedHyperedge)
HYPERRICCI_INSTANTIATE(UndirectedHyperedge)

#undef HYPERRICCI_INSTANTIATE

}  // namespace hyperricci
