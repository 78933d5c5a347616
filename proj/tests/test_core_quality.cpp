#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "hyperricci/builder.hpp"
#include "hyperricci/core_quality.hpp"
#include "hyperricci/error.hpp"
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

// Two 4-cliques of pairwise hyperedges joined through a hub node.
UndirectedHypergraph two_blocks() {
  UndirectedBuilder b;
  for (const char* block : {"x", "y"})
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        b.add({std::string(block) + std::to_string(i), std::string(block) + std::to_string(j)});
  b.add({"x0", "hub", "y0"});
  return b.build();
}

CoreReport report_with(std::vector<Metric> values, double stretch, double disconnected) {
  CoreReport r;
  r.metrics.values = std::move(values);
  r.metrics.values.push_back({"stretch", stretch});
  r.metrics.values.push_back({"disconnected", disconnected});
  r.metrics.centrality.stretch = stretch;
  r.metrics.centrality.disconnected = disconnected;
  for (const auto& m : r.metrics.values) r.p_values[m.name] = 1e-9;
  return r;
}

}  // namespace

TEST_CASE("undirected cohesiveness desk values") {
  const auto h = hu1();
  CHECK(cohesiveness(h, ids(h, {"s5", "s6"})) == 0.75);
  CHECK(cohesiveness(h, ids(h, {"s2", "s8"})) == 0.75);
  std::vector<NodeId> everything(h.nodes().begin(), h.nodes().end());
  CHECK(cohesiveness(h, everything) == 1.0);
  CHECK_THROWS_AS(cohesiveness(h, std::vector<NodeId>{}), Error);

  UndirectedBuilder b;
  b.add({"u", "v"});
  b.node("alone");
  const auto g = b.build();
  CHECK_THROWS_AS(cohesiveness(g, ids(g, {"alone"})), Error);
}

TEST_CASE("directed cohesiveness skips zero-degree nodes") {
  const auto h = hd1();
  // c's only incoming hyperedge {a,b}->{c} reaches outside the core
  const auto cd = cohesiveness(h, ids(h, {"c", "d"}));
  CHECK(cd.in == 0.5);
  CHECK(cd.in_nodes == 2);
  CHECK(cd.out == 1.0);
  CHECK(cd.out_nodes == 1);

  const auto closed = cohesiveness(h, ids(h, {"a", "b", "c", "d"}));
  CHECK(closed.in == 1.0);
  CHECK(closed.out == 1.0);

  CHECK_THROWS_AS(cohesiveness(h, ids(h, {"a", "b"})), Error);  // no in-degree at all
  CHECK_THROWS_AS(cohesiveness(h, ids(h, {"d"})), Error);       // no out-degree
}

TEST_CASE("directed centrality on HD1") {
  const auto h = hd1();
  const auto c_only = ids(h, {"c"});
  const auto c = centrality(h, c_only, c_only);
  CHECK(c.disconnected == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
  CHECK(c.disconnected_pairs == 2);
  CHECK(c.stretched_pairs == 0);
  CHECK(c.unreachable_pairs == 4);
  CHECK(c.stretch == 1.0);
  CHECK(c.stretch_undefined);
  CHECK_THROWS_AS(centrality(h, c_only, ids(h, {"a", "b", "c"})), Error);
}

TEST_CASE("undirected centrality on HU1") {
  const auto h = hu1();
  const auto s1 = ids(h, {"s1"});
  const auto c = centrality(h, s1, s1);
  // only (s5,s6) and (s2,s8) keep a path once s1 and its hyperedges go
  CHECK(c.disconnected_pairs == 19);
  CHECK(c.disconnected == doctest::Approx(19.0 / 21.0).epsilon(1e-15));
  CHECK(c.stretched_pairs == 2);
  CHECK(c.stretch == 1.0);
  CHECK_FALSE(c.stretch_undefined);

  // the leaf s8 sits on no shortest path and cuts nothing
  const auto s8 = ids(h, {"s8"});
  const auto quiet = centrality(h, s8, s8, 3);
  CHECK(quiet.disconnected == 0.0);
  CHECK(quiet.stretch == 1.0);
}

TEST_CASE("centrality needs positive weights") {
  UndirectedBuilder b;
  b.add({"a", "b"}, 0.0);
  b.add({"b", "c"});
  const auto h = b.build();
  CHECK_THROWS_AS(centrality(h, ids(h, {"a"}), ids(h, {"a"})), Error);
}

TEST_CASE("pairs skip every reported core") {
  const auto h = hu1();
  const auto s5 = ids(h, {"s5"});
  const auto both = ids(h, {"s5", "s8"});
  const auto c = centrality(h, both, s5);
  CHECK(c.pairs == 15);  // C(6,2) over {s1,s2,s3,s4,s6,s7}
  CHECK(c.disconnected_pairs == 9);  // s6 and s7 are cut off
  CHECK(c.disconnected == doctest::Approx(9.0 / 21.0).epsilon(1e-15));
}

TEST_CASE("core extraction") {
  const auto h = two_blocks();
  WeightMap w = h.weights();
  w.erase(EdgeId{12});
  const auto split = h.with_weights(w);

  const auto both = extract_cores(split, h, 2, SizeBand{0.01, 0.5});
  REQUIRE(both.cores.size() == 2);
  CHECK(both.diagnostic.empty());
  CHECK(both.cores[0].nodes == ids(h, {"x0", "x1", "x2", "x3"}));
  CHECK(both.cores[1].nodes == ids(h, {"y0", "y1", "y2", "y3"}));
  CHECK(both.cores[0].size_fraction == doctest::Approx(4.0 / 9.0));

  CHECK(extract_cores(split, h, 1).cores.size() == 1);
  // the lone hub is 1/9 of the nodes, inside a wider band but smaller than the blocks
  const auto wide = extract_cores(split, h, 5, SizeBand{0.1, 0.5});
  REQUIRE(wide.cores.size() == 3);
  CHECK(wide.cores[2].nodes == ids(h, {"hub"}));

  const auto whole = extract_cores(h, h, 2);
  CHECK(whole.cores.empty());
  CHECK_FALSE(whole.diagnostic.empty());

  CHECK_THROWS_AS(extract_cores(split, h, 0), Error);
  CHECK_THROWS_AS(extract_cores(split, h, 2, SizeBand{0.6, 0.5}), Error);
}

TEST_CASE("equal-sized cores are ordered by their smallest node") {
  UndirectedBuilder b;
  b.add({"p", "q"});
  b.add({"a", "b"});
  b.add({"q", "a"});
  b.nodes({"z1", "z2", "z3", "z4"});
  const auto h = b.build();
  WeightMap w = h.weights();
  w.erase(EdgeId{2});
  const auto cores = extract_cores(h.with_weights(w), h, 2, SizeBand{0.0, 0.5});
  REQUIRE(cores.cores.size() == 2);
  CHECK(cores.cores[0].nodes == ids(h, {"p", "q"}));
  CHECK(cores.cores[1].nodes == ids(h, {"a", "b"}));
}

TEST_CASE("the sink never joins a core") {
  DirectedBuilder b;
  b.add({"a"}, {"b"});
  b.add({"b"}, {"sink"});
  for (int i = 0; i < 6; ++i) b.add({"u" + std::to_string(i)}, {"u" + std::to_string(i + 1)});
  b.add({"u6"}, {"a"});
  b.set_sink(b.node("sink"));
  const auto h = b.build();
  WeightMap w = h.weights();
  w.erase(EdgeId{8});
  const auto cores = extract_cores(h.with_weights(w), h, 2);
  REQUIRE(cores.cores.size() == 1);
  CHECK(cores.cores[0].nodes == ids(h, {"a", "b"}));
  CHECK(cores.cores[0].size_fraction == doctest::Approx(0.2));
}

TEST_CASE("validity thresholds") {
  auto good = report_with({{"r_in", 0.8063}, {"r_out", 0.7907}}, 2.7211, 0.7345);
  CHECK(validity_check(good).valid);

  auto loose = report_with({{"r_deg", 0.4}}, 2.0, 0.6);
  const auto v = validity_check(loose);
  CHECK_FALSE(v.valid);
  CHECK(v.reasons == std::vector<std::string>{"cohesiveness ≤ 0.5"});

  auto peripheral = report_with({{"r_deg", 0.9}}, 1.2, 0.3);
  CHECK(validity_check(peripheral).reasons == std::vector<std::string>{"centrality thresholds"});

  auto half = report_with({{"r_deg", 0.5}}, 1.5, 0.0);
  CHECK(validity_check(half).reasons == std::vector<std::string>{"cohesiveness ≤ 0.5"});

  auto weak = report_with({{"r_deg", 0.9}}, 1.0, 0.5);
  weak.p_values["stretch"] = 1e-5;
  CHECK(validity_check(weak).reasons == std::vector<std::string>{"p-value ≥ 1e-5 for stretch"});

  auto untested = report_with({{"r_deg", 0.9}}, 3.0, 0.0);
  untested.p_values.clear();
  CHECK(validity_check(untested).reasons.size() == 3);
}

TEST_CASE("metrics match the brute-force oracle on small hypergraphs") {
  std::mt19937_64 rng(77);
  std::size_t checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + trial % 9;
    auto run = [&](const auto& h) {
      std::uniform_int_distribution<std::size_t> size(1, n - 2);
      auto core = hyperricci::testing::pick(rng, n, size(rng));
      std::sort(core.begin(), core.end());
      auto others = hyperricci::testing::pick(rng, n, rng() % 3);
      std::vector<NodeId> all = core;
      for (NodeId x : others)
        if (std::find(all.begin(), all.end(), x) == all.end()) all.push_back(x);
      std::sort(all.begin(), all.end());

      const auto oracle = hyperricci::testing::brute_force_quality(h, all, core);
      CoreMetrics m;
      try {
        m = evaluate_core(h, all, core, 1 + trial % 4);
      } catch (const Error&) {
        // only a directed core without in- or out-degree is undefined
        const bool undefined = std::any_of(oracle.cohesion.begin(), oracle.cohesion.end(),
                                           [](double v) { return std::isnan(v); });
        CHECK(undefined);
        return;
      }
      ++checked;
      const std::size_t cohesion_count = oracle.cohesion.size();
      REQUIRE(m.values.size() == cohesion_count + 2);
      for (std::size_t i = 0; i < cohesion_count; ++i) {
        CHECK(m.values[i].value == oracle.cohesion[i]);
        CHECK(m.values[i].value >= 0.0);
        CHECK(m.values[i].value <= 1.0);
      }
      const auto& c = m.centrality;
      CHECK(c.disconnected_pairs == oracle.zeta);
      CHECK(c.stretched_pairs == oracle.xi);
      CHECK(c.unreachable_pairs == oracle.never);
      CHECK(c.pairs == oracle.pairs);
      CHECK(c.disconnected_pairs + c.stretched_pairs + c.unreachable_pairs == c.pairs);
      CHECK(c.disconnected == oracle.disconnected);
      CHECK(c.stretch_undefined == oracle.stretch_undefined);
      CHECK(c.stretch == doctest::Approx(oracle.stretch).epsilon(1e-12));
      CHECK(c.stretch >= 1.0);
      CHECK(c.disconnected >= 0.0);
      CHECK(c.disconnected <= 1.0);
      CHECK(m.at(kStretch) == c.stretch);
    };
    run(hyperricci::testing::random_undirected(rng, n, trial % 2 == 0));
    run(hyperricci::testing::random_directed(rng, n, trial % 2 == 0));
  }
  CHECK(checked >= 60);
}

TEST_CASE("growing a core keeps the metrics in range") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = hyperricci::testing::random_undirected(rng, 12);
    const auto order = hyperricci::testing::pick(rng, 12, 10);
    std::vector<NodeId> core;
    std::size_t previous_rest = h.node_count();
    for (NodeId x : order) {
      core.push_back(x);
      std::sort(core.begin(), core.end());
      const auto m = evaluate_core(h, core, core);
      const std::size_t rest = h.node_count() - core.size();
      CHECK(rest < previous_rest);
      previous_rest = rest;
      CHECK(m.centrality.pairs == rest * (rest - 1) / 2);
      CHECK(m.at(kCohesion) >= 0.0);
      CHECK(m.at(kCohesion) <= 1.0);
      CHECK(m.at(kStretch) >= 1.0);
      CHECK(m.at(kDisconnected) <= 1.0);
    }
  }
}

TEST_CASE("reports round-trip through JSON") {
  const auto h = two_blocks();
  WeightMap w = h.weights();
  w.erase(EdgeId{12});
  auto report = assess_cores(h, extract_cores(h.with_weights(w), h, 2), 2);
  REQUIRE(report.cores.size() == 2);
  CHECK_FALSE(report.directed);
  CHECK(report.cores[0].metrics.at(kCohesion) == doctest::Approx((3 * 1.0 + 0.75) / 4));
  CHECK_FALSE(report.cores[0].verdict.valid);
  report.cores[1].p_values = {{"r_deg", 1e-12}, {"stretch", 0.25}, {"disconnected", 3e-7}};
  report.cores[1].verdict = validity_check(report.cores[1]);

  const std::string text = report_json(report, h.labels());
  const auto back = parse_report_json(text, h.labels());
  CHECK(report_json(back, h.labels()) == text);
  CHECK(back.cores[1].nodes == report.cores[1].nodes);
  CHECK(back.cores[1].metrics.values == report.cores[1].metrics.values);
  CHECK(back.cores[1].p_values == report.cores[1].p_values);

  CHECK_THROWS_AS(parse_report_json("{\"directed\": true}", h.labels()), ParseError);
  CHECK_THROWS_AS(parse_report_json("not json", h.labels()), ParseError);
}

TEST_CASE("report table layout") {
  const auto h = hd1();
  CoreExtraction extraction;
  extraction.cores.push_back(Core{ids(h, {"c"}), 0.25});
  const auto report = assess_cores(h, extraction);
  std::ostringstream out;
  write_report_table(out, report);
  const std::string text = out.str();
  std::istringstream first(text.substr(0, text.find('\n')));
  std::vector<std::string> columns;
  for (std::string word; first >> word;) columns.push_back(word);
  CHECK(columns == std::vector<std::string>{"core_#", "core_size", "r_in", "r_out", "stretch", "disconnected", "valid"});
  CHECK(text.find("1.0000*") != std::string::npos);
  CHECK(text.find("0.3333") != std::string::npos);

  std::ostringstream empty;
  QualityReport none;
  none.diagnostic = "nothing fits";
  write_report_table(empty, none);
  CHECK(empty.str() == "no cores: nothing fits\n");
}
