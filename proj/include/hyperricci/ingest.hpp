#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

struct Reaction {
  std::string id;
  std::vector<std::string> reactants;
  std::vector<std::string> products;  // may be empty
  bool reversible = false;
};

struct PaperRecord {
  std::string id;
  std::vector<std::string> authors;
};

/// What an ingest step left out, for the stats report.
struct IngestNotes {
  std::size_t records = 0;          // reactions or papers read
  std::size_t dropped_records = 0;  // filtered before building
  std::size_t component_nodes_dropped = 0;
  std::size_t component_edges_dropped = 0;
  std::vector<std::string> messages;
};

struct ReactionOptions {
  /// Also emit products -> reactants for reactions flagged reversible.
  bool reverse_reversible = false;
  std::string sink_label = "sink";
};

/// One hyperedge per reaction (plus reversals when asked), unit weights.
/// Productless reactions point at a single shared sink. The largest weak
/// component is kept.
DirectedHypergraph reactions_to_hypergraph(const std::vector<Reaction>& reactions, const ReactionOptions& options = {},
                                           IngestNotes* notes = nullptr);

/// Line format: optional "id:" prefix, terms joined by " + ", sides split by
/// "->" (or "<->" / "<=>" when reversible). A numeric coefficient before a
/// term is dropped. '#' starts a comment.
std::vector<Reaction> parse_reactions(std::istream& in);

/// BiGG model JSON: negative coefficients are reactants, positive products;
/// a negative lower flux bound marks the reaction reversible.
std::vector<Reaction> parse_bigg_model(std::istream& in);

inline constexpr std::size_t kMaxAuthors = 15;

/// Whitespace runs collapse to one space, ends trimmed, ASCII lowercased.
std::string normalize_author(std::string_view name);

/// Rows "paper_id,authors" with authors separated by ';'. Fields may be
/// double-quoted. A first row starting "paper_id" is a header.
std::vector<PaperRecord> parse_coauthors(std::istream& in);

/// Papers with `max_authors` or more authors are dropped; one hyperedge per
/// remaining paper; the largest component is kept.
UndirectedHypergraph papers_to_hypergraph(const std::vector<PaperRecord>& records, std::size_t max_authors = kMaxAuthors,
                                          IngestNotes* notes = nullptr);

/// Largest (weak) component, node and edge order preserved, ids renumbered.
/// Ties go to the component holding the smallest node.
template <typename Edge>
Hypergraph<Edge> largest_component(const Hypergraph<Edge>& h);

using AnyHypergraph = std::variant<DirectedHypergraph, UndirectedHypergraph>;

/// Versioned text format; see README for the layout.
template <typename Edge>
void write_native(std::ostream& out, const Hypergraph<Edge>& h);
AnyHypergraph read_native(std::istream& in);

struct DegreeSummary {
  double average = 0.0;
  std::size_t max = 0;
  std::size_t min = 0;
  friend bool operator==(const DegreeSummary&, const DegreeSummary&) = default;
};

struct HypergraphStats {
  bool directed = false;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  DegreeSummary degree;  // undirected only
  DegreeSummary in;      // directed only
  DegreeSummary out;     // directed only
};

template <typename Edge>
HypergraphStats first_order_stats(const Hypergraph<Edge>& h);

void write_stats(std::ostream& out, const HypergraphStats& stats, const IngestNotes* notes = nullptr);

}  // namespace hyperricci
