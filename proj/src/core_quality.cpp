#include "hyperricci/core_quality.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hyperricci/error.hpp"
#include "hyperricci/parallel.hpp"

namespace hyperricci {

void SizeBand::validate() const {
  if (!(low >= 0.0 && low <= high && high <= 1.0))
    throw Error("size band must satisfy 0 <= low <= high <= 1");
}

bool SizeBand::admits(std::size_t size, std::size_t total) const {
  if (total == 0) return false;
  const double fraction = static_cast<double>(size) / static_cast<double>(total);
  return fraction >= low && fraction <= high;
}

template <typename Edge>
CoreExtraction extract_cores(const Hypergraph<Edge>& final_h, const Hypergraph<Edge>& original,
                             std::size_t max_cores, const SizeBand& band) {
  band.validate();
  if (max_cores == 0) throw Error("at least one core must be requested");
  for (NodeId x : final_h.nodes()) original.require(x);

  const std::size_t total = original.node_count();
  std::vector<Core> fitting;
  std::size_t seen = 0;
  for (auto part : components(final_h)) {
    if (original.sink()) std::erase(part, *original.sink());
    if (part.empty()) continue;
    ++seen;
    if (!band.admits(part.size(), total)) continue;
    fitting.push_back(Core{part, static_cast<double>(part.size()) / static_cast<double>(total)});
  }
  std::stable_sort(fitting.begin(), fitting.end(), [](const Core& a, const Core& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
    return a.nodes.front() < b.nodes.front();
  });
  if (fitting.size() > max_cores) fitting.resize(max_cores);

  CoreExtraction out;
  out.cores = std::move(fitting);
  if (out.cores.empty()) {
    std::ostringstream msg;
    msg << "no component within the size band [" << band.low * 100 << "%, " << band.high * 100 << "%] of "
        << total << " nodes (" << seen << " components)";
    out.diagnostic = msg.str();
  }
  return out;
}

namespace {

template <typename Edge>
std::vector<char> membership(const Hypergraph<Edge>& h, std::span<const NodeId> nodes) {
  std::vector<char> in(h.universe_size(), 0);
  for (NodeId x : nodes) {
    h.require(x);
    in[x.value] = 1;
  }
  return in;
}

template <typename Edge>
bool inside(const Edge& e, const std::vector<char>& in) {
  const auto all = pins(e);
  return std::all_of(all.begin(), all.end(), [&](NodeId x) { return in[x.value] != 0; });
}

// Fraction of the hyperedges at `positions` that lie inside the core.
template <typename Edge>
double internal_share(const Hypergraph<Edge>& h, std::span<const std::uint32_t> positions,
                      const std::vector<char>& in) {
  std::size_t internal = 0;
  for (std::uint32_t p : positions)
    if (inside(h.edges()[p], in)) ++internal;
  return static_cast<double>(internal) / static_cast<double>(positions.size());
}

struct CohesionSums {
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
};

// Side 0 runs over incoming (or incident) hyperedges, side 1 over outgoing ones.
template <typename Edge>
CohesionSums cohesion_sums(const Hypergraph<Edge>& h, std::span<const NodeId> core) {
  const auto in = membership(h, core);
  CohesionSums s;
  for (NodeId x : h.nodes()) {
    if (!in[x.value]) continue;
    for (int side = 0; side < (Hypergraph<Edge>::is_directed ? 2 : 1); ++side) {
      const auto positions = side == 0 ? h.incoming(x) : h.outgoing(x);
      if (positions.empty()) continue;
      s.sum[side] += internal_share(h, positions, in);
      ++s.count[side];
    }
  }
  return s;
}

}  // namespace

double cohesiveness(const UndirectedHypergraph& h, std::span<const NodeId> core) {
  if (core.empty()) throw Error("core is empty");
  for (NodeId x : core)
    if (h.contains(x) && h.incoming(x).empty()) throw Error("core node " + h.label(x) + " has degree 0");
  const auto s = cohesion_sums(h, core);
  return s.sum[0] / static_cast<double>(s.count[0]);
}

DirectedCohesion cohesiveness(const DirectedHypergraph& h, std::span<const NodeId> core) {
  if (core.empty()) throw Error("core is empty");
  const auto s = cohesion_sums(h, core);
  if (s.count[0] == 0) throw Error("no core node has incoming hyperedges");
  if (s.count[1] == 0) throw Error("no core node has outgoing hyperedges");
  return DirectedCohesion{s.sum[0] / static_cast<double>(s.count[0]), s.sum[1] / static_cast<double>(s.count[1]),
                          s.count[0], s.count[1]};
}

template <typename Edge>
Centrality centrality(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores, std::span<const NodeId> core,
                      unsigned threads) {
  constexpr bool ordered = Hypergraph<Edge>::is_directed;
  const auto in_core = membership(h, core);
  auto excluded = membership(h, all_cores);
  for (std::size_t i = 0; i < excluded.size(); ++i) excluded[i] |= in_core[i];
  for (const Edge& e : h.edges())
    if (!(e.weight > 0.0)) throw Error("quality metrics need positive hyperedge weights");

  const std::size_t core_size = static_cast<std::size_t>(std::count(in_core.begin(), in_core.end(), 1));
  const std::size_t rest = h.node_count() - core_size;
  if (rest < 2) throw Error("fewer than two nodes lie outside the core");

  const auto without = remove_nodes(h, core);
  std::vector<NodeId> pool;
  for (NodeId x : h.nodes())
    if (!excluded[x.value]) pool.push_back(x);

  struct Slot {
    std::size_t disconnected = 0, stretched = 0, unreachable = 0, pairs = 0;
    double ratio_sum = 0.0;
  };
  std::vector<Slot> slots(pool.size());
  parallel_for(pool.size(), threads, [&](std::size_t i) {
    const auto before = single_source_distances(h, pool[i]);
    const auto after = single_source_distances(without, pool[i]);
    Slot& s = slots[i];
    for (std::size_t j = ordered ? 0 : i + 1; j < pool.size(); ++j) {
      if (j == i) continue;
      const std::uint32_t v = pool[j].value;
      ++s.pairs;
      if (!reachable(before[v])) {
        ++s.unreachable;
      } else if (!reachable(after[v])) {
        ++s.disconnected;
      } else {
        ++s.stretched;
        s.ratio_sum += after[v] / before[v];
      }
    }
  });

  Centrality c;
  double ratio_sum = 0.0;
  for (const Slot& s : slots) {
    c.disconnected_pairs += s.disconnected;
    c.stretched_pairs += s.stretched;
    c.unreachable_pairs += s.unreachable;
    c.pairs += s.pairs;
    ratio_sum += s.ratio_sum;
  }
  const double denominator =
      ordered ? static_cast<double>(rest) * static_cast<double>(rest - 1) : static_cast<double>(rest) * (rest - 1) / 2.0;
  c.disconnected = static_cast<double>(c.disconnected_pairs) / denominator;
  if (c.stretched_pairs == 0) {
    c.stretch = 1.0;
    c.stretch_undefined = true;
  } else {
    c.stretch = ratio_sum / static_cast<double>(c.stretched_pairs);
  }
  return c;
}

bool is_cohesion_metric(std::string_view name) {
  return name == kCohesion || name == kCohesionIn || name == kCohesionOut;
}

double CoreMetrics::at(std::string_view name) const {
  for (const auto& m : values)
    if (m.name == name) return m.value;
  throw Error("metric not computed: " + std::string(name));
}

namespace {

template <typename Edge>
CoreMetrics evaluate(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores, std::span<const NodeId> core,
                     unsigned threads, bool lenient) {
  CoreMetrics m;
  if (lenient) {
    if (core.empty()) throw Error("core is empty");
    const auto s = cohesion_sums(h, core);
    const std::string_view names[2] = {Hypergraph<Edge>::is_directed ? kCohesionIn : kCohesion, kCohesionOut};
    const bool complete = Hypergraph<Edge>::is_directed || s.count[0] == core.size();
    for (int side = 0; side < (Hypergraph<Edge>::is_directed ? 2 : 1); ++side)
      if (s.count[side] > 0 && complete)
        m.values.push_back({std::string(names[side]), s.sum[side] / static_cast<double>(s.count[side])});
  } else if constexpr (Hypergraph<Edge>::is_directed) {
    const auto c = cohesiveness(h, core);
    m.values.push_back({std::string(kCohesionIn), c.in});
    m.values.push_back({std::string(kCohesionOut), c.out});
  } else {
    m.values.push_back({std::string(kCohesion), cohesiveness(h, core)});
  }
  m.centrality = centrality(h, all_cores, core, threads);
  m.values.push_back({std::string(kStretch), m.centrality.stretch});
  m.values.push_back({std::string(kDisconnected), m.centrality.disconnected});
  return m;
}

}  // namespace

template <typename Edge>
CoreMetrics evaluate_core(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores, std::span<const NodeId> core,
                          unsigned threads) {
  return evaluate(h, all_cores, core, threads, false);
}

template <typename Edge>
CoreMetrics evaluate_lenient(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores,
                             std::span<const NodeId> core, unsigned threads) {
  return evaluate(h, all_cores, core, threads, true);
}

Verdict validity_check(const CoreReport& report) {
  Verdict v;
  bool cohesive = true;
  for (const auto& m : report.metrics.values)
    if (is_cohesion_metric(m.name) && !(m.value > 0.5)) cohesive = false;
  if (!cohesive) v.reasons.push_back("cohesiveness ≤ 0.5");

  const auto& c = report.metrics.centrality;
  if (!(c.stretch >= 1.5 || c.disconnected >= 0.5)) v.reasons.push_back("centrality thresholds");

  for (const auto& m : report.metrics.values) {
    const auto p = report.p_values.find(m.name);
    if (p == report.p_values.end())
      v.reasons.push_back("p-value missing for " + m.name);
    else if (!(p->second < kSignificanceLevel))
      v.reasons.push_back("p-value ≥ 1e-5 for " + m.name);
  }
  v.valid = v.reasons.empty();
  return v;
}

template <typename Edge>
QualityReport assess_cores(const Hypergraph<Edge>& original, const CoreExtraction& extraction, unsigned threads) {
  QualityReport report;
  report.directed = Hypergraph<Edge>::is_directed;
  report.node_count = original.node_count();
  report.edge_count = original.edge_count();
  report.diagnostic = extraction.diagnostic;

  std::vector<NodeId> all;
  for (const auto& core : extraction.cores) all.insert(all.end(), core.nodes.begin(), core.nodes.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  for (const auto& core : extraction.cores) {
    CoreReport r;
    r.nodes = core.nodes;
    r.size_fraction = core.size_fraction;
    r.metrics = evaluate_core(original, all, core.nodes, threads);
    r.verdict = validity_check(r);
    report.cores.push_back(std::move(r));
  }
  return report;
}

using Json = nlohmann::ordered_json;

std::string report_json(const QualityReport& report, const NodeTable& labels) {
  Json doc;
  doc["directed"] = report.directed;
  doc["nodes"] = report.node_count;
  doc["hyperedges"] = report.edge_count;
  doc["diagnostic"] = report.diagnostic;
  doc["cores"] = Json::array();
  for (std::size_t i = 0; i < report.cores.size(); ++i) {
    const auto& r = report.cores[i];
    Json core;
    core["core"] = i + 1;
    core["size"] = r.nodes.size();
    core["size_fraction"] = r.size_fraction;
    Json metrics = Json::object();
    for (const auto& m : r.metrics.values) metrics[m.name] = m.value;
    core["metrics"] = metrics;
    const auto& c = r.metrics.centrality;
    core["stretch_undefined"] = c.stretch_undefined;
    core["pairs"] = {{"total", c.pairs},
                     {"disconnected", c.disconnected_pairs},
                     {"stretched", c.stretched_pairs},
                     {"unreachable", c.unreachable_pairs}};
    Json p = Json::object();
    for (const auto& m : r.metrics.values)
      if (auto it = r.p_values.find(m.name); it != r.p_values.end()) p[m.name] = it->second;
    core["p_values"] = p;
    core["valid"] = r.verdict.valid;
    core["reasons"] = r.verdict.reasons;
    Json members = Json::array();
    for (NodeId x : r.nodes) members.push_back(labels.label(x));
    core["members"] = members;
    doc["cores"].push_back(core);
  }
  return doc.dump(2) + "\n";
}

QualityReport parse_report_json(std::string_view text, const NodeTable& labels) {
  QualityReport report;
  try {
    const Json doc = Json::parse(text);
    report.directed = doc.at("directed").get<bool>();
    report.node_count = doc.at("nodes").get<std::size_t>();
    report.edge_count = doc.at("hyperedges").get<std::size_t>();
    report.diagnostic = doc.at("diagnostic").get<std::string>();
    for (const auto& core : doc.at("cores")) {
      CoreReport r;
      r.size_fraction = core.at("size_fraction").get<double>();
      for (const auto& label : core.at("members")) {
        const auto id = labels.find(label.get<std::string>());
        if (!id) throw UnknownNodeError(label.get<std::string>());
        r.nodes.push_back(*id);
      }
      std::sort(r.nodes.begin(), r.nodes.end());
      for (const auto& [name, value] : core.at("metrics").items()) r.metrics.values.push_back({name, value.get<double>()});
      auto& c = r.metrics.centrality;
      c.stretch = r.metrics.at(kStretch);
      c.disconnected = r.metrics.at(kDisconnected);
      c.stretch_undefined = core.at("stretch_undefined").get<bool>();
      const auto& pairs = core.at("pairs");
      c.pairs = pairs.at("total").get<std::size_t>();
      c.disconnected_pairs = pairs.at("disconnected").get<std::size_t>();
      c.stretched_pairs = pairs.at("stretched").get<std::size_t>();
      c.unreachable_pairs = pairs.at("unreachable").get<std::size_t>();
      for (const auto& [name, value] : core.at("p_values").items()) r.p_values[name] = value.get<double>();
      r.verdict.valid = core.at("valid").get<bool>();
      r.verdict.reasons = core.at("reasons").get<std::vector<std::string>>();
      report.cores.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("core report: ") + e.what());
  }
  return report;
}

namespace {

std::string fixed(double value, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << value;
  return s.str();
}

std::string scientific(double value) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << value;
  return s.str();
}

}  // namespace

void write_report_table(std::ostream& out, const QualityReport& report) {
  if (report.cores.empty()) {
    out << "no cores";
    if (!report.diagnostic.empty()) out << ": " << report.diagnostic;
    out << "\n";
    return;
  }
  std::vector<std::string> header{"core_#", "core_size"};
  for (const auto& m : report.cores.front().metrics.values) header.push_back(m.name);
  const std::size_t metric_count = header.size() - 2;
  const bool with_p = std::any_of(report.cores.begin(), report.cores.end(),
                                  [](const CoreReport& r) { return !r.p_values.empty(); });
  if (with_p)
    for (std::size_t i = 0; i < metric_count; ++i) header.push_back("p(" + header[2 + i] + ")");
  header.push_back("valid");

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.cores.size(); ++i) {
    const auto& r = report.cores[i];
    std::vector<std::string> row{std::to_string(i + 1), std::to_string(r.nodes.size())};
    for (const auto& m : r.metrics.values) {
      std::string cell = fixed(m.value);
      if (m.name == kStretch && r.metrics.centrality.stretch_undefined) cell += "*";
      row.push_back(cell);
    }
    if (with_p)
      for (const auto& m : r.metrics.values) {
        const auto p = r.p_values.find(m.name);
        row.push_back(p == r.p_values.end() ? "NA" : scientific(p->second));
      }
    row.push_back(r.verdict.valid ? "yes" : "no");
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      out << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  bool footnote = false;
  for (std::size_t i = 0; i < report.cores.size(); ++i) {
    const auto& r = report.cores[i];
    if (r.metrics.centrality.stretch_undefined) footnote = true;
    if (!r.verdict.valid) {
      out << "core " << i + 1 << ":";
      for (const auto& reason : r.verdict.reasons) out << " [" << reason << "]";
      out << "\n";
    }
  }
  if (footnote) out << "* no node pair kept a path; stretch reported as 1\n";
}

#define HYPERRICCI_INSTANTIATE(E)                                                                              \
  template CoreExtraction extract_cores(const Hypergraph<E>&, const Hypergraph<E>&, std::size_t,               \
                                        const SizeBand&);                                                      \
  template Centrality centrality(const Hypergraph<E>&, std::span<const NodeId>, std::span<const NodeId>,       \
                                 unsigned);                                                                    \
  template CoreMetrics evaluate_core(const Hypergraph<E>&, std::span<const NodeId>, std::span<const NodeId>,   \
                                     unsigned);                                                                \
  template CoreMetrics evaluate_lenient(const Hypergraph<E>&, std::span<const NodeId>,                          \
                                        std::span<const NodeId>, unsigned);                                    \
  template QualityReport assess_cores(const Hypergraph<E>&, const CoreExtraction&, unsigned);

HYPERRICCI_INSTANTIATE(DirectedHyperedge)
HYPERRICCI_INSTANTIATE(UndirectedHyperedge)

#undef HYPERRICCI_INSTANTIATE

}  // namespace hyperricci
