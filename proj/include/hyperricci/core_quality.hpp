#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

/// Admissible core sizes as fractions of the original node count, inclusive.
struct SizeBand {
  double low = 0.01;
  double high = 0.50;

  void validate() const;
  bool admits(std::size_t size, std::size_t total) const;
};

struct Core {
  std::vector<NodeId> nodes;  // sorted
  double size_fraction = 0.0;
};

struct CoreExtraction {
  std::vector<Core> cores;
  /// Non-empty when no component fell inside the size band.
  std::string diagnostic;
};

/// Components of the post-flow hypergraph that fit the band, largest first
/// (ties by smallest node), at most `max_cores` of them. The sink never
/// belongs to a core.
template <typename Edge>
CoreExtraction extract_cores(const Hypergraph<Edge>& final_h, const Hypergraph<Edge>& original,
                             std::size_t max_cores, const SizeBand& band = {});

/// Mean fraction of each core node's degree made up of hyperedges lying
/// entirely inside the core.
double cohesiveness(const UndirectedHypergraph& h, std::span<const NodeId> core);

struct DirectedCohesion {
  double in = 0.0;
  double out = 0.0;
  std::size_t in_nodes = 0;   // nodes with nonzero in-degree, averaged over
  std::size_t out_nodes = 0;  // likewise for out-degree
};

/// Nodes whose in- (out-) degree is zero sit out of the in (out) average.
/// Throws when either average would be over no node at all.
DirectedCohesion cohesiveness(const DirectedHypergraph& h, std::span<const NodeId> core);

struct Centrality {
  double disconnected = 0.0;
  double stretch = 1.0;
  bool stretch_undefined = false;  // no pair kept a path, stretch pinned at 1
  std::size_t disconnected_pairs = 0;
  std::size_t stretched_pairs = 0;
  std::size_t unreachable_pairs = 0;  // already apart before removing the core
  std::size_t pairs = 0;
};

/// Pairs range over nodes outside `core` and outside every node in
/// `all_cores`; ordered for directed input, unordered otherwise. Requires
/// positive weights and at least two nodes outside `core`.
template <typename Edge>
Centrality centrality(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores, std::span<const NodeId> core,
                      unsigned threads = 1);

struct Metric {
  std::string name;
  double value = 0.0;
  friend bool operator==(const Metric&, const Metric&) = default;
};

// Metric names, in report column order.
inline constexpr std::string_view kCohesion = "r_deg";
inline constexpr std::string_view kCohesionIn = "r_in";
inline constexpr std::string_view kCohesionOut = "r_out";
inline constexpr std::string_view kStretch = "stretch";
inline constexpr std::string_view kDisconnected = "disconnected";

bool is_cohesion_metric(std::string_view name);

struct CoreMetrics {
  std::vector<Metric> values;
  Centrality centrality;

  /// Throws `Error` for a metric that was not computed.
  double at(std::string_view name) const;
};

template <typename Edge>
CoreMetrics evaluate_core(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores, std::span<const NodeId> core,
                          unsigned threads = 1);

/// Like `evaluate_core`, except that a cohesion metric undefined for this node
/// set is left out rather than raised.
template <typename Edge>
CoreMetrics evaluate_lenient(const Hypergraph<Edge>& h, std::span<const NodeId> all_cores,
                             std::span<const NodeId> core, unsigned threads = 1);

inline constexpr double kSignificanceLevel = 1e-5;

struct Verdict {
  bool valid = false;
  std::vector<std::string> reasons;
};

struct CoreReport {
  std::vector<NodeId> nodes;
  double size_fraction = 0.0;
  CoreMetrics metrics;
  std::map<std::string, double> p_values;  // empty until significance ran
  Verdict verdict;
};

/// Cohesion above 1/2, then stretch of at least 1.5 or disconnection of at
/// least 1/2, then every metric significant.
Verdict validity_check(const CoreReport& report);

struct QualityReport {
  bool directed = false;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<CoreReport> cores;
  std::string diagnostic;
};

/// Scores every extracted core against the original hypergraph; verdicts
/// are provisional until p-values are attached.
template <typename Edge>
QualityReport assess_cores(const Hypergraph<Edge>& original, const CoreExtraction& extraction, unsigned threads = 1);

std::string report_json(const QualityReport& report, const NodeTable& labels);
/// Inverse of `report_json`; node labels are resolved against `labels`.
QualityReport parse_report_json(std::string_view text, const NodeTable& labels);

/// Fixed-width table, one row per core, columns as in `report_json`.
void write_report_table(std::ostream& out, const QualityReport& report);

}  // namespace hyperricci
