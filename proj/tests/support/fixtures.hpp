#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "hyperricci/builder.hpp"
#include "hyperricci/hypergraph.hpp"

namespace hyperricci::testing {

// nodes {a,b,c,d}; e1: {a,b} -> {c}; e2: {c} -> {d}; unit weights.
inline DirectedHypergraph hd1() {
  DirectedBuilder b;
  b.nodes({"a", "b", "c", "d"});
  b.add({"a", "b"}, {"c"});
  b.add({"c"}, {"d"});
  return b.build();
}

// s1..s8 with {s1,s2,s3,s4}, {s1,s5,s7}, {s5,s6}, {s2,s8}; unit weights.
inline UndirectedHypergraph hu1() {
  UndirectedBuilder b;
  b.nodes({"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"});
  b.add({"s1", "s2", "s3", "s4"});
  b.add({"s1", "s5", "s7"});
  b.add({"s5", "s6"});
  b.add({"s2", "s8"});
  return b.build();
}

inline std::vector<NodeId> pick(std::mt19937_64& rng, std::size_t universe, std::size_t count) {
  std::vector<std::uint32_t> all(universe);
  for (std::uint32_t i = 0; i < universe; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < count && i < universe; ++i) out.push_back(NodeId{all[i]});
  return out;
}

/// Connected undirected hypergraph with `n` nodes; includes singleton
/// hyperedges now and then. Weights are drawn from [0.25, 2] when `weighted`.
inline UndirectedHypergraph random_undirected(std::mt19937_64& rng, std::size_t n, bool weighted = true) {
  UndirectedBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.node("v" + std::to_string(i));
  std::uniform_real_distribution<double> weight(0.25, 2.0);
  std::uniform_int_distribution<std::size_t> size(1, std::min<std::size_t>(4, n));
  auto w = [&] { return weighted ? weight(rng) : 1.0; };
  const std::size_t extra = n / 2 + 1;
  for (std::size_t k = 0; k < extra; ++k) b.add(pick(rng, n, size(rng)), w());
  // chain random pairs across the node order so the result is connected
  std::vector<NodeId> order = pick(rng, n, n);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> earlier(0, i - 1);
    std::vector<NodeId> members{order[i], order[earlier(rng)]};
    if (n > 2 && rng() % 3 == 0) members.push_back(order[earlier(rng)]);
    b.add(members, w());
  }
  return b.build();
}

/// Weakly connected directed hypergraph with `n` nodes.
inline DirectedHypergraph random_directed(std::mt19937_64& rng, std::size_t n, bool weighted = true) {
  DirectedBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.node("v" + std::to_string(i));
  std::uniform_real_distribution<double> weight(0.25, 2.0);
  std::uniform_int_distribution<std::size_t> size(1, std::min<std::size_t>(3, n - 1));
  auto w = [&] { return weighted ? weight(rng) : 1.0; };
  auto add_split = [&](std::vector<NodeId> pins) {
    std::uniform_int_distribution<std::size_t> cut(1, pins.size() - 1);
    const std::size_t c = cut(rng);
    std::vector<NodeId> tail(pins.begin(), pins.begin() + c), head(pins.begin() + c, pins.end());
    b.add(tail, head, w());
  };
  for (std::size_t k = 0; k < n; ++k) add_split(pick(rng, n, size(rng) + 1));
  std::vector<NodeId> order = pick(rng, n, n);
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> earlier(0, i - 1);
    std::vector<NodeId> pair{order[i], order[earlier(rng)]};
    if (rng() % 2) std::swap(pair[0], pair[1]);
    add_split(pair);
  }
  return b.build();
}

}  // namespace hyperricci::testing
