#include "hyperricci/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hyperricci/builder.hpp"
#include "hyperricci/error.hpp"
#include "hyperricci/format.hpp"

namespace hyperricci {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void dedupe_keep_order(std::vector<std::string>& v) {
  std::vector<std::string> out;
  for (auto& s : v)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  v = std::move(out);
}

bool is_number(std::string_view s) {
  double ignored;
  return !s.empty() && parse_double(s, ignored);
}

// "2 A + B" -> {A, B}
std::vector<std::string> parse_side(std::string_view side, std::size_t line) {
  std::vector<std::string> out;
  side = trim(side);
  if (side.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = start; i + 2 < side.size(); ++i)
      if (std::isspace(static_cast<unsigned char>(side[i])) && side[i + 1] == '+' &&
          std::isspace(static_cast<unsigned char>(side[i + 2]))) {
        cut = i;
        break;
      }
    std::string_view term = trim(side.substr(start, cut == std::string_view::npos ? side.npos : cut - start));
    const std::size_t gap = term.find_first_of(" \t");
    if (gap != std::string_view::npos && is_number(term.substr(0, gap))) term = trim(term.substr(gap));
    if (term.empty()) throw ParseError("empty term in reaction", line);
    if (term.find_first_of(" \t") != std::string_view::npos)
      throw ParseError("species name with whitespace: '" + std::string(term) + "'", line);
    out.emplace_back(term);
    if (cut == std::string_view::npos) break;
    start = cut + 3;
  }
  dedupe_keep_order(out);
  return out;
}

template <typename Edge>
void note_component(const Hypergraph<Edge>& before, const Hypergraph<Edge>& after, IngestNotes* notes,
                    std::string_view what) {
  if (!notes) return;
  notes->component_nodes_dropped = before.node_count() - after.node_count();
  notes->component_edges_dropped = before.edge_count() - after.edge_count();
  if (notes->component_nodes_dropped > 0) {
    std::ostringstream msg;
    msg << "input is not " << what << "; kept the largest component (" << after.node_count() << " of "
        << before.node_count() << " nodes)";
    notes->messages.push_back(msg.str());
  }
}

}  // namespace

std::vector<Reaction> parse_reactions(std::istream& in) {
  std::vector<Reaction> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != text.npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    Reaction r;
    const std::size_t arrow = text.find("->");
    const std::size_t colon = text.find(':');
    if (colon != text.npos && (arrow == text.npos || colon < arrow)) {
      r.id = std::string(trim(text.substr(0, colon)));
      if (r.id.empty()) throw ParseError("empty reaction id", line);
      text = text.substr(colon + 1);
    } else {
      r.id = "R" + std::to_string(out.size() + 1);
    }

    std::size_t split = text.find("<->"), width = 3;
    if (split == text.npos) split = text.find("<=>");
    if (split != text.npos) {
      r.reversible = true;
    } else {
      split = text.find("->");
      width = 2;
    }
    if (split == text.npos) throw ParseError("reaction has no arrow", line);
    r.reactants = parse_side(text.substr(0, split), line);
    r.products = parse_side(text.substr(split + width), line);
    if (r.reactants.empty()) throw ParseError("reaction " + r.id + " has no reactants", line);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Reaction> parse_bigg_model(std::istream& in) {
  std::vector<Reaction> out;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& entry : doc.at("reactions")) {
      Reaction r;
      r.id = entry.at("id").get<std::string>();
      for (const auto& [metabolite, coefficient] : entry.at("metabolites").items()) {
        const double c = coefficient.get<double>();
        if (c < 0)
          r.reactants.push_back(metabolite);
        else if (c > 0)
          r.products.push_back(metabolite);
      }
      if (r.reactants.empty()) throw ParseError("reaction " + r.id + " has no reactants");
      r.reversible = entry.value("lower_bound", 0.0) < 0.0;
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("BiGG model: ") + e.what());
  }
  return out;
}

DirectedHypergraph reactions_to_hypergraph(const std::vector<Reaction>& reactions, const ReactionOptions& options,
                                           IngestNotes* notes) {
  DirectedBuilder b;
  bool sink_used = false;
  auto ids = [&](const std::vector<std::string>& names, const std::string& reaction) {
    std::vector<NodeId> out;
    for (const auto& n : names) {
      if (n == options.sink_label)
        throw ParseError("reaction " + reaction + " names the reserved sink node '" + n + "'");
      out.push_back(b.node(n));
    }
    return out;
  };
  for (const auto& r : reactions) {
    if (r.reactants.empty()) throw ParseError("reaction " + r.id + " has no reactants");
    auto tail = ids(r.reactants, r.id);
    if (r.products.empty()) {
      b.add(tail, {b.node(options.sink_label)});
      sink_used = true;
      continue;
    }
    auto head = ids(r.products, r.id);
    b.add(tail, head);
    if (r.reversible && options.reverse_reversible) b.add(head, tail);
  }
  if (sink_used) b.set_sink(b.node(options.sink_label));
  if (notes) notes->records = reactions.size();
  const auto full = b.build();
  auto kept = largest_component(full);
  note_component(full, kept, notes, "weakly connected");
  return kept;
}

std::string normalize_author(std::string_view name) {
  std::string out;
  bool gap = false;
  for (char c : trim(name)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = true;
      continue;
    }
    if (gap) out.push_back(' ');
    gap = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

namespace {

// One CSV record; quoted fields may hold commas and doubled quotes.
std::vector<std::string> csv_fields(std::string_view line, std::size_t number) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quote", number);
  return out;
}

}  // namespace

std::vector<PaperRecord> parse_coauthors(std::istream& in) {
  std::vector<PaperRecord> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    const auto fields = csv_fields(raw, line);
    if (out.empty() && line == 1 && normalize_author(fields.front()) == "paper_id") continue;
    if (fields.size() != 2) throw ParseError("expected paper_id,authors", line);
    PaperRecord p;
    p.id = std::string(trim(fields[0]));
    if (p.id.empty()) throw ParseError("empty paper id", line);
    std::string_view rest(fields[1]);
    while (true) {
      const std::size_t semi = rest.find(';');
      const std::string name = normalize_author(rest.substr(0, semi));
      if (!name.empty()) p.authors.push_back(name);
      if (semi == rest.npos) break;
      rest = rest.substr(semi + 1);
    }
    dedupe_keep_order(p.authors);
    if (p.authors.empty()) throw ParseError("paper " + p.id + " lists no authors", line);
    out.push_back(std::move(p));
  }
  return out;
}

UndirectedHypergraph papers_to_hypergraph(const std::vector<PaperRecord>& records, std::size_t max_authors,
                                          IngestNotes* notes) {
  if (records.empty()) throw Error("no paper records");
  UndirectedBuilder b;
  std::size_t dropped = 0;
  for (const auto& p : records) {
    if (p.authors.empty()) throw Error("paper " + p.id + " lists no authors");
    std::vector<std::string> authors = p.authors;
    dedupe_keep_order(authors);
    if (authors.size() >= max_authors) {
      ++dropped;
      continue;
    }
    std::vector<NodeId> members;
    for (const auto& a : authors) members.push_back(b.node(a));
    b.add(members);
  }
  if (notes) {
    notes->records = records.size();
    notes->dropped_records = dropped;
    if (dropped > 0)
      notes->messages.push_back("dropped " + std::to_string(dropped) + " papers with " + std::to_string(max_authors) +
                                " or more authors");
  }
  if (b.edge_count() == 0) throw Error("every paper was filtered out");
  const auto full = b.build();
  auto kept = largest_component(full);
  note_component(full, kept, notes, "connected");
  return kept;
}

template <typename Edge>
Hypergraph<Edge> largest_component(const Hypergraph<Edge>& h) {
  const auto parts = components(h);
  if (parts.empty()) return h;
  std::size_t best = 0;
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i].size() > parts[best].size()) best = i;
  std::vector<char> keep(h.universe_size(), 0);
  for (NodeId x : parts[best]) keep[x.value] = 1;

  HypergraphBuilder<Edge> b;
  std::vector<NodeId> map(h.universe_size());
  for (NodeId x : h.nodes())
    if (keep[x.value]) map[x.value] = b.node(h.label(x));
  auto translate = [&](const std::vector<NodeId>& v) {
    std::vector<NodeId> out;
    for (NodeId x : v) out.push_back(map[x.value]);
    return out;
  };
  for (const Edge& e : h.edges()) {
    if constexpr (Hypergraph<Edge>::is_directed) {
      if (!keep[e.tail.front().value]) continue;
      b.add(translate(e.tail), translate(e.head), e.weight);
    } else {
      if (!keep[e.members.front().value]) continue;
      b.add(translate(e.members), e.weight);
    }
  }
  if (h.sink() && keep[h.sink()->value]) b.set_sink(map[h.sink()->value]);
  return b.build();
}

namespace {

constexpr std::string_view kMagic = "# hyperricci hypergraph";
constexpr int kFormatVersion = 1;

void write_ids(std::ostream& out, const std::vector<NodeId>& ids) {
  for (NodeId x : ids) out << ' ' << x.value;
}

}  // namespace

template <typename Edge>
void write_native(std::ostream& out, const Hypergraph<Edge>& h) {
  out << kMagic << "\n";
  out << "format " << kFormatVersion << "\n";
  out << "kind " << (Hypergraph<Edge>::is_directed ? "directed" : "undirected") << "\n";
  out << "labels " << h.universe_size() << "\n";
  for (std::size_t i = 0; i < h.universe_size(); ++i) {
    const std::string& label = h.labels().label(NodeId{static_cast<std::uint32_t>(i)});
    if (label.find_first_of("\r\n") != std::string::npos) throw Error("node label spans lines: " + label);
    out << label << "\n";
  }
  out << "nodes " << h.node_count() << "\n";
  for (NodeId x : h.nodes()) out << x.value << "\n";
  if (h.sink()) out << "sink " << h.sink()->value << "\n";
  out << "edges " << h.edge_count() << "\n";
  for (const Edge& e : h.edges()) {
    out << e.id.value << ' ' << format_double(e.weight);
    if constexpr (Hypergraph<Edge>::is_directed) {
      write_ids(out, e.tail);
      out << " >";
      write_ids(out, e.head);
    } else {
      write_ids(out, e.members);
    }
    out << "\n";
  }
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(std::string_view what) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of file, expected " + std::string(what), number_ + 1);
    ++number_;
    return line;
  }

  // "<key> <value>"
  std::string field(std::string_view key) {
    const std::string line = next(key);
    if (line.rfind(std::string(key) + " ", 0) != 0) throw ParseError("expected '" + std::string(key) + "'", number_);
    return line.substr(key.size() + 1);
  }

  std::size_t count(std::string_view key) { return to_index(field(key)); }

  std::size_t to_index(std::string_view text) const {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) throw ParseError("bad integer '" + std::string(text) + "'", number_);
    return value;
  }

  std::size_t line() const { return number_; }
  bool more() { return in_.peek() != std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

template <typename Edge>
Hypergraph<Edge> read_body(LineReader& r, std::shared_ptr<NodeTable> table) {
  const std::size_t node_count = r.count("nodes");
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < node_count; ++i) {
    const std::size_t id = r.to_index(r.next("node id"));
    if (id >= table->size()) throw ParseError("node id out of range", r.line());
    nodes.push_back(NodeId{static_cast<std::uint32_t>(id)});
  }
  std::string line = r.next("edges");
  std::optional<NodeId> sink;
  if (line.rfind("sink ", 0) == 0) {
    sink = NodeId{static_cast<std::uint32_t>(r.to_index(std::string_view(line).substr(5)))};
    line = r.next("edges");
  }
  if (line.rfind("edges ", 0) != 0) throw ParseError("expected 'edges'", r.line());
  const std::size_t edge_count = r.to_index(std::string_view(line).substr(6));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edge_count; ++i) {
    std::istringstream fields(r.next("hyperedge"));
    std::string id_text, weight_text;
    fields >> id_text >> weight_text;
    Edge e;
    e.id = EdgeId{static_cast<std::uint32_t>(r.to_index(id_text))};
    if (!parse_double(weight_text, e.weight)) throw ParseError("bad weight '" + weight_text + "'", r.line());
    std::vector<NodeId>* side;
    if constexpr (Hypergraph<Edge>::is_directed)
      side = &e.tail;
    else
      side = &e.members;
    for (std::string token; fields >> token;) {
      if constexpr (Hypergraph<Edge>::is_directed) {
        if (token == ">") {
          if (side == &e.head) throw ParseError("second '>' in hyperedge", r.line());
          side = &e.head;
          continue;
        }
      }
      side->push_back(NodeId{static_cast<std::uint32_t>(r.to_index(token))});
    }
    edges.push_back(std::move(e));
  }
  if (r.more()) throw ParseError("trailing content after the last hyperedge", r.line() + 1);
  try {
    return Hypergraph<Edge>(std::move(table), std::move(nodes), std::move(edges), sink);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

AnyHypergraph read_native(std::istream& in) {
  LineReader r(in);
  if (r.next("header") != kMagic) throw ParseError("not a hyperricci hypergraph file", 1);
  const std::size_t version = r.count("format");
  if (version != kFormatVersion) throw ParseError("unsupported format version " + std::to_string(version), r.line());
  const std::string kind = r.field("kind");
  if (kind != "directed" && kind != "undirected") throw ParseError("unknown kind '" + kind + "'", r.line());
  const std::size_t label_count = r.count("labels");
  auto table = std::make_shared<NodeTable>();
  for (std::size_t i = 0; i < label_count; ++i) {
    const std::string label = r.next("label");
    if (table->find(label)) throw ParseError("duplicate label '" + label + "'", r.line());
    table->intern(label);
  }
  if (kind == "directed") return read_body<DirectedHyperedge>(r, std::move(table));
  return read_body<UndirectedHyperedge>(r, std::move(table));
}

namespace {

DegreeSummary summarize(const std::vector<std::size_t>& values) {
  DegreeSummary s;
  if (values.empty()) return s;
  std::size_t total = 0;
  s.min = values.front();
  for (std::size_t v : values) {
    total += v;
    s.max = std::max(s.max, v);
    s.min = std::min(s.min, v);
  }
  s.average = static_cast<double>(total) / static_cast<double>(values.size());
  return s;
}

}  // namespace

template <typename Edge>
HypergraphStats first_order_stats(const Hypergraph<Edge>& h) {
  HypergraphStats s;
  s.directed = Hypergraph<Edge>::is_directed;
  s.nodes = h.node_count();
  s.edges = h.edge_count();
  std::vector<std::size_t> in, out;
  for (NodeId x : h.nodes()) {
    in.push_back(h.incoming(x).size());
    out.push_back(h.outgoing(x).size());
  }
  if (s.directed) {
    s.in = summarize(in);
    s.out = summarize(out);
  } else {
    s.degree = summarize(in);
  }
  return s;
}

void write_stats(std::ostream& out, const HypergraphStats& stats, const IngestNotes* notes) {
  auto row = [&](std::string_view name, const auto& value) { out << name << "\t" << value << "\n"; };
  row("kind", stats.directed ? "directed" : "undirected");
  row("nodes", stats.nodes);
  row("hyperedges", stats.edges);
  auto degrees = [&](std::string_view prefix, const DegreeSummary& d) {
    row(std::string(prefix) + "_avg", format_double(d.average));
    row(std::string(prefix) + "_max", d.max);
    row(std::string(prefix) + "_min", d.min);
  };
  if (stats.directed) {
    degrees("in_degree", stats.in);
    degrees("out_degree", stats.out);
  } else {
    degrees("degree", stats.degree);
  }
  if (notes) {
    row("records", notes->records);
    row("records_dropped", notes->dropped_records);
    row("component_nodes_dropped", notes->component_nodes_dropped);
    row("component_edges_dropped", notes->component_edges_dropped);
    for (const auto& m : notes->messages) out << "# " << m << "\n";
  }
}

#define HYPERRICCI_INSTANTIATE(E)                                            \
  template Hypergraph<E> largest_component(const Hypergraph<E>&);           \
  template void write_native(std::ostream&, const Hypergraph<E>&);          \
  template HypergraphStats first_order_stats(const Hypergraph<E>&);

HYPERRICCI_INSTANTIATE(DirectedHyperedge)
HYPERRICCI_INSTANTIATE(UndirectedHyperedge)

#undef HYPERRICCI_INSTANTIATE

}  // namespace hyperricci
