#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "hyperricci/builder.hpp"
#include "hyperricci/error.hpp"
#include "hyperricci/hypergraph.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hyperricci;
using hyperricci::testing::hd1;
using hyperricci::testing::hu1;

namespace {

std::vector<NodeId> ids(const auto& h, std::initializer_list<const char*> labels) {
  std::vector<NodeId> out;
  for (auto l : labels) out.push_back(h.node(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("directed degrees") {
  const auto h = hd1();
  CHECK(degrees(h, h.node("c")) == DirectedDegree{1, 1});
  CHECK(degrees(h, h.node("a")) == DirectedDegree{0, 1});
  CHECK(degrees(h, h.node("d")) == DirectedDegree{1, 0});
  CHECK_THROWS_AS(degrees(h, NodeId{17}), UnknownNodeError);
}

TEST_CASE("unknown labels are reported") {
  const auto h = hd1();
  CHECK_THROWS_WITH_AS(h.node("zz"), doctest::Contains("zz"), UnknownNodeError);
}

TEST_CASE("undirected degrees") {
  const auto h = hu1();
  CHECK(degree(h, h.node("s1")) == 2);
  CHECK(degree(h, h.node("s6")) == 1);
}

TEST_CASE("shortest paths on the small fixtures") {
  const auto d = hd1();
  CHECK(distance(d, d.node("a"), d.node("d")) == 2.0);
  CHECK_FALSE(reachable(distance(d, d.node("d"), d.node("a"))));
  CHECK(distance(d, d.node("b"), d.node("b")) == 0.0);

  const auto u = hu1();
  CHECK(distance(u, u.node("s6"), u.node("s8")) == 4.0);
  CHECK(distance(u, u.node("s8"), u.node("s6")) == 4.0);
}

TEST_CASE("single source distances") {
  const auto d = hd1();
  const auto from_a = single_source_distances(d, d.node("a"));
  CHECK(from_a[d.node("a").value] == 0.0);
  CHECK(from_a[d.node("c").value] == 1.0);
  CHECK(from_a[d.node("d").value] == 2.0);
  CHECK_FALSE(reachable(from_a[d.node("b").value]));

  const auto u = hu1();
  const auto from_s5 = single_source_distances(u, u.node("s5"));
  const std::map<std::string, double> expected{{"s5", 0}, {"s1", 1}, {"s7", 1}, {"s6", 1},
                                               {"s2", 2}, {"s3", 2}, {"s4", 2}, {"s8", 3}};
  for (const auto& [label, value] : expected) CHECK(from_s5[u.node(label).value] == value);
  CHECK_THROWS_AS(single_source_distances(u, NodeId{99}), UnknownNodeError);
}

TEST_CASE("components") {
  const auto u = hu1();
  const auto all = components(u);
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 8);

  WeightMap w = u.weights();
  w.erase(EdgeId{1});  // {s1,s5,s7}
  const auto split = components(u.with_weights(w));
  // s7 loses its only hyperedge and stands alone
  REQUIRE(split.size() == 3);
  CHECK(split[0] == ids(u, {"s1", "s2", "s3", "s4", "s8"}));
  CHECK(split[1] == ids(u, {"s5", "s6"}));
  CHECK(split[2] == ids(u, {"s7"}));

  CHECK(components(UndirectedHypergraph{}).empty());
}

TEST_CASE("components of a directed hypergraph ignore orientation") {
  DirectedBuilder b;
  b.add({"x"}, {"y"});
  b.add({"z"}, {"y"});
  b.node("lone");
  const auto h = b.build();
  const auto parts = components(h);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == ids(h, {"x", "y", "z"}));
  CHECK_FALSE(is_connected(h));
}

TEST_CASE("remove_nodes") {
  const auto d = hd1();
  const std::vector<NodeId> c{d.node("c")};
  const auto without_c = remove_nodes(d, c);
  CHECK(without_c.node_count() == 3);
  CHECK(without_c.edge_count() == 0);
  CHECK_FALSE(without_c.contains(d.node("c")));

  const auto u = hu1();
  const std::vector<NodeId> s8{u.node("s8")};
  const auto without_s8 = remove_nodes(u, s8);
  CHECK(without_s8.edge_count() == 3);
  CHECK(without_s8.find_edge(EdgeId{3}) == nullptr);

  const auto same = remove_nodes(u, std::span<const NodeId>{});
  CHECK(same.node_count() == u.node_count());
  CHECK(same.weights() == u.weights());

  std::vector<NodeId> everything(u.nodes().begin(), u.nodes().end());
  CHECK_THROWS_AS(remove_nodes(u, everything), Error);
}

TEST_CASE("induced keeps only hyperedges inside the kept set") {
  const auto u = hu1();
  const auto kept = ids(u, {"s1", "s5", "s6", "s7"});
  const auto sub = induced(u, kept);
  CHECK(sub.node_count() == 4);
  CHECK(sub.edge_count() == 2);
}

TEST_CASE("structural validation") {
  auto table = std::make_shared<NodeTable>();
  const NodeId a = table->intern("a"), b = table->intern("b");
  const std::vector<NodeId> nodes{a, b};
  using D = DirectedHyperedge;
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a}, {b}, -1.0}}), Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a}, {b}, NAN}}), Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a, b}, {b, a}, 1.0}}), Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {}, {b}, 1.0}}), Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, {a}, {D{EdgeId{0}, {a}, {b}, 1.0}}), Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a}, {b}, 1.0}, D{EdgeId{0}, {b}, {a}, 1.0}}),
                  Error);
  CHECK_THROWS_AS(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a}, {b}, 1.0}}, a), Error);
  CHECK_NOTHROW(DirectedHypergraph(table, nodes, {D{EdgeId{0}, {a}, {b}, 0.0}}, b));
  CHECK_THROWS_AS(UndirectedHypergraph(table, nodes, {UndirectedHyperedge{EdgeId{0}, {}, 1.0}}), Error);
  CHECK_NOTHROW(UndirectedHypergraph(table, nodes, {UndirectedHyperedge{EdgeId{0}, {a}, 1.0}}));
}

TEST_CASE("zero-weight hyperedges are free hops") {
  UndirectedBuilder b;
  b.add({"x", "y"}, 0.0);
  b.add({"y", "z"}, 2.5);
  const auto h = b.build();
  CHECK(distance(h, h.node("x"), h.node("z")) == 2.5);
}

TEST_CASE("with_weights rejects hyperedges that are gone") {
  const auto u = hu1();
  WeightMap w = u.weights();
  w.erase(EdgeId{0});
  const auto smaller = u.with_weights(w);
  CHECK_THROWS_AS(smaller.with_weights(u.weights()), Error);
}

TEST_CASE("distance properties on random hypergraphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 10;
    const auto u = hyperricci::testing::random_undirected(rng, n);
    const auto d = hyperricci::testing::random_directed(rng, n);
    const auto fu = hyperricci::testing::floyd_warshall(u);
    const auto fd = hyperricci::testing::floyd_warshall(d);

    for (NodeId x : u.nodes()) {
      const auto du = single_source_distances(u, x);
      const auto dd = single_source_distances(d, x);
      CHECK(du[x.value] == 0.0);
      CHECK(dd[x.value] == 0.0);
      for (NodeId y : u.nodes()) {
        CHECK(du[y.value] == doctest::Approx(fu[x.value][y.value]).epsilon(1e-12));
        if (reachable(fd[x.value][y.value]))
          CHECK(dd[y.value] == doctest::Approx(fd[x.value][y.value]).epsilon(1e-12));
        else
          CHECK_FALSE(reachable(dd[y.value]));
        CHECK(du[y.value] == doctest::Approx(distance(u, y, x)).epsilon(1e-12));
        for (NodeId z : u.nodes()) CHECK(du[z.value] <= du[y.value] + fu[y.value][z.value] + 1e-9);
      }
    }

    for (const auto& e : d.edges())
      for (NodeId a : e.tail)
        for (NodeId b : e.head) CHECK(distance(d, a, b) <= e.weight + 1e-12);

    std::size_t degree_sum = 0, member_sum = 0;
    for (NodeId x : u.nodes()) degree_sum += degree(u, x);
    for (const auto& e : u.edges()) member_sum += e.members.size();
    CHECK(degree_sum == member_sum);

    // removal never shortens surviving distances
    const std::vector<NodeId> gone{u.nodes()[trial % n]};
    const auto smaller = remove_nodes(u, gone);
    for (NodeId x : smaller.nodes()) {
      const auto before = single_source_distances(u, x);
      const auto after = single_source_distances(smaller, x);
      for (NodeId y : smaller.nodes())
        if (reachable(after[y.value])) CHECK(after[y.value] >= before[y.value] - 1e-12);
    }

    // components partition the node set and never split a hyperedge
    const auto parts = components(smaller);
    std::vector<int> owner(smaller.universe_size(), -1);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < parts.size(); ++c) {
      if (c > 0) CHECK(parts[c - 1].front() < parts[c].front());
      for (NodeId x : parts[c]) {
        CHECK(owner[x.value] == -1);
        owner[x.value] = static_cast<int>(c);
        ++covered;
      }
    }
    CHECK(covered == smaller.node_count());
    for (const auto& e : smaller.edges())
      for (NodeId x : e.members) CHECK(owner[x.value] == owner[e.members.front().value]);
  }
}
