#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hyperricci/core_quality.hpp"
#include "hyperricci/counterexample.hpp"
#include "hyperricci/error.hpp"
#include "hyperricci/format.hpp"
#include "hyperricci/ingest.hpp"
#include "hyperricci/parallel.hpp"
#include "hyperricci/ricci_flow.hpp"
#include "hyperricci/significance.hpp"

namespace fs = std::filesystem;
using namespace hyperricci;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kManifestVersion = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

AnyHypergraph load(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_native(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <typename Edge>
std::string native_text(const Hypergraph<Edge>& h) {
  std::ostringstream out;
  write_native(out, h);
  return out.str();
}

struct Manifest {
  Json doc;

  Manifest(const std::string& command, const std::string& out_dir) {
    doc["format"] = kManifestVersion;
    doc["command"] = command;
    doc["inputs"] = Json::array();
    doc["output_dir"] = out_dir;
    doc["config"] = Json::object();
    doc["outputs"] = Json::array();
  }
  void input(const std::string& path) { doc["inputs"].push_back(path); }
  void output(const std::string& name) { doc["outputs"].push_back(name); }
  Json& config() { return doc["config"]; }
  void write(const fs::path& dir) const { write_file(dir / "manifest.json", doc.dump(2) + "\n"); }
};

// Doubles go into manifests as exact decimal strings so a rerun parses the
// same bits back.
std::string exact(double x) { return format_double(x); }

fs::path prepare(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

struct FlowFlags {
  std::size_t eta = 40;
  std::size_t tau = 2;
  double delta = 8.0;
  std::size_t kappa = 2;
  std::optional<double> epsilon;
  double alpha = Laziness::kDefault;
  std::uint64_t seed = 0;
};

FlowConfig to_config(const FlowFlags& f, unsigned threads) {
  FlowConfig c;
  c.iterations = f.eta;
  c.surgery_period = f.tau;
  c.surgery_percent = f.delta;
  c.max_cores = f.kappa;
  c.epsilon = f.epsilon;
  c.alpha = Laziness(f.alpha);
  c.seed = f.seed;
  c.threads = threads;
  c.validate();
  return c;
}

// ---- ingest

struct IngestArgs {
  std::string input;
  std::string kind = "native";
  std::string out_dir;
  std::size_t max_authors = kMaxAuthors;
  bool reverse_reversible = false;
};

int cmd_ingest(const IngestArgs& a) {
  IngestNotes notes;
  std::string text, stats;
  auto emit = [&](const auto& h) {
    text = native_text(h);
    std::ostringstream out;
    write_stats(out, first_order_stats(h), &notes);
    stats = out.str();
  };
  ReactionOptions options;
  options.reverse_reversible = a.reverse_reversible;
  if (a.kind == "native") {
    std::visit(emit, load(a.input));
  } else if (a.kind == "reactions") {
    auto in = open_input(a.input);
    emit(reactions_to_hypergraph(parse_reactions(in), options, &notes));
  } else if (a.kind == "bigg") {
    auto in = open_input(a.input);
    emit(reactions_to_hypergraph(parse_bigg_model(in), options, &notes));
  } else if (a.kind == "coauthors") {
    auto in = open_input(a.input);
    emit(papers_to_hypergraph(parse_coauthors(in), a.max_authors, &notes));
  } else {
    throw Error("unknown input kind " + a.kind);
  }
  const auto dir = prepare(a.out_dir);
  write_file(dir / "hypergraph.hgr", text);
  write_file(dir / "stats.tsv", stats);
  Manifest m("ingest", a.out_dir);
  m.input(a.input);
  m.config()["kind"] = a.kind;
  m.config()["max_authors"] = a.max_authors;
  m.config()["reverse_reversible"] = a.reverse_reversible;
  m.output("hypergraph.hgr");
  m.output("stats.tsv");
  m.write(dir);
  std::cout << stats;
  return 0;
}

// ---- flow

struct FlowArgs {
  std::string input;
  std::string out_dir;
  FlowFlags flags;
};

int cmd_flow(const FlowArgs& a, unsigned threads) {
  const auto config = to_config(a.flags, threads);
  const auto h = load(a.input);
  const auto dir = prepare(a.out_dir);
  const FlowTrace trace = std::visit(
      [&](const auto& g) {
        auto result = run_flow(g, config);
        write_file(dir / "final.hgr", native_text(result.final));
        return result.trace;
      },
      h);
  std::ostringstream out;
  write_trace(out, trace);
  write_file(dir / "trace.tsv", out.str());

  Manifest m("flow", a.out_dir);
  m.input(a.input);
  auto& c = m.config();
  c["eta"] = config.iterations;
  c["tau"] = config.surgery_period;
  c["delta"] = exact(config.surgery_percent);
  c["kappa"] = config.max_cores;
  c["epsilon"] = exact(trace.epsilon);
  c["alpha"] = exact(config.alpha.value());
  c["seed"] = config.seed;
  m.output("final.hgr");
  m.output("trace.tsv");
  m.write(dir);

  std::cout << "eta_first\t" << (trace.first_converged ? std::to_string(*trace.first_converged) : "none") << '\n';
  std::cout << "iterations\t" << trace.iterations.size() << '\n';
  if (trace.stopped_early) std::cout << "# every hyperedge was removed before the last iteration\n";
  return 0;
}

// ---- cores

struct CoresArgs {
  std::string final_path;
  std::string original_path;
  std::string out_dir;
  std::size_t kappa = 2;
  std::vector<double> band{SizeBand{}.low, SizeBand{}.high};
};

template <typename Edge>
void require_same_universe(const Hypergraph<Edge>& a, const Hypergraph<Edge>& b) {
  const auto& x = a.labels();
  const auto& y = b.labels();
  bool same = x.size() == y.size();
  for (std::size_t i = 0; same && i < x.size(); ++i) {
    const NodeId id{static_cast<std::uint32_t>(i)};
    same = x.label(id) == y.label(id);
  }
  if (!same) throw Error("final and original hypergraphs do not share a node universe");
  for (NodeId v : a.nodes())
    if (!b.contains(v)) throw Error("final hypergraph has a node missing from the original: " + a.label(v));
}

void write_report(const fs::path& dir, const QualityReport& report, const NodeTable& labels) {
  write_file(dir / "cores.json", report_json(report, labels));
  std::ostringstream table;
  write_report_table(table, report);
  write_file(dir / "cores.txt", table.str());
  std::cout << table.str();
}

int cmd_cores(const CoresArgs& a, unsigned threads) {
  if (a.kappa < 1) throw Error("core count must be at least 1");
  const SizeBand band{a.band.at(0), a.band.at(1)};
  band.validate();
  const auto final_h = load(a.final_path);
  const auto original = load(a.original_path);
  if (final_h.index() != original.index()) throw Error("final and original hypergraphs differ in kind");
  const auto dir = prepare(a.out_dir);
  std::visit(
      [&](const auto& f) {
        using H = std::decay_t<decltype(f)>;
        const auto& o = std::get<H>(original);
        require_same_universe(f, o);
        const auto report = assess_cores(o, extract_cores(f, o, a.kappa, band), threads);
        write_report(dir, report, o.labels());
      },
      final_h);
  Manifest m("cores", a.out_dir);
  m.input(a.final_path);
  m.input(a.original_path);
  m.config()["kappa"] = a.kappa;
  m.config()["size_band"] = {exact(band.low), exact(band.high)};
  m.output("cores.json");
  m.output("cores.txt");
  m.write(dir);
  return 0;
}

// ---- pvalue

struct PvalueArgs {
  std::string report_path;
  std::string hypergraph_path;
  std::string out_dir;
  std::size_t count = kBaselineCount;
  std::uint64_t seed = 0;
};

int cmd_pvalue(const PvalueArgs& a, unsigned threads) {
  if (a.count < 2) throw Error("at least two baselines are needed");
  const auto text = read_file(a.report_path);
  const auto h = load(a.hypergraph_path);
  const auto dir = prepare(a.out_dir);
  std::visit(
      [&](const auto& g) {
        auto report = parse_report_json(text, g.labels());
        if (report.directed != std::decay_t<decltype(g)>::is_directed)
          throw Error("report and hypergraph differ in kind");
        attach_p_values(report, g, a.count, a.seed, threads);
        write_report(dir, report, g.labels());
      },
      h);
  Manifest m("pvalue", a.out_dir);
  m.input(a.report_path);
  m.input(a.hypergraph_path);
  m.config()["count"] = a.count;
  m.config()["seed"] = a.seed;
  m.output("cores.json");
  m.output("cores.txt");
  m.write(dir);
  return 0;
}

// ---- counterexample

struct TheoremArgs {
  std::size_t q = 40;
  std::size_t k = 3;
  double s = 1.0;
  std::string out_dir;
};

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

int cmd_counterexample(const TheoremArgs& a, unsigned threads) {
  if (!(a.s > 0.0)) throw Error("step size must be positive");
  const auto r = verify_negativity(a.q, a.k, a.s, threads);
  const auto gn = build_Gn(a.q, a.k);
  const auto [mu, mv] = gn.graph.edge(r.min_edge);
  const std::string min_name = gn.graph.name(mu) + "-" + gn.graph.name(mv);

  std::ostringstream out;
  out << std::setprecision(10);
  out << "q\t" << r.q << "\nk\t" << r.k << "\ns\t" << r.s_step << "\nnodes\t" << r.nodes << "\nedges\t" << r.edges
      << '\n';
  out << "C(f)\t" << r.curvature_f << '\n';
  out << "sum_C\t" << r.curvature_sum << '\n';
  out << "(s/m)*sum_C\t" << r.scaled_sum << '\n';
  out << "w1(f)\t" << r.weight_f << '\n';
  out << "w1(f) literal t=0 form\t" << 1.0 - r.curvature_f + r.s_step << '\n';
  out << "min_edge\t" << min_name << '\t' << r.min_weight << '\n';
  out << "negative_f\t" << (r.f_negative ? "yes" : "no") << '\n';
  out << "negative_any\t" << (r.negative ? "yes" : "no") << '\n';
  out << "check C(f) >= 1-3/(q+3)\t" << verdict(r.f_bound_holds) << '\n';
  out << "check sandwich (all edges)\t" << verdict(r.sandwich_holds) << '\n';
  out << "check leaf EMD >= 35/24\t" << verdict(r.leaf_bound_holds) << '\n';
  out << "class\tcount\tmin_C\tmax_C\tmax_TVD\tsandwich\n";
  for (const auto& c : r.classes)
    out << to_string(c.edge_class) << '\t' << c.count << '\t' << c.min_curvature << '\t' << c.max_curvature << '\t'
        << c.max_tvd << '\t' << verdict(c.sandwich_holds) << '\n';
  std::cout << out.str();

  if (!a.out_dir.empty()) {
    const auto dir = prepare(a.out_dir);
    write_file(dir / "counterexample.tsv", out.str());
    Manifest m("counterexample", a.out_dir);
    m.config()["q"] = a.q;
    m.config()["k"] = a.k;
    m.config()["s"] = exact(a.s);
    m.output("counterexample.tsv");
    m.write(dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci-flow core detection for directed and undirected hypergraphs"};
  app.require_subcommand(1);
  unsigned threads = default_thread_count();
  app.add_option("--threads", threads, "worker threads (default: HYPERRICCI_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "convert an input file to the native format and print statistics");
  ingest_cmd->add_option("input", ingest.input)->required();
  ingest_cmd->add_option("--kind", ingest.kind)
      ->check(CLI::IsMember({"native", "reactions", "bigg", "coauthors"}))
      ->capture_default_str();
  ingest_cmd->add_option("-o,--out", ingest.out_dir)->required();
  ingest_cmd->add_option("--max-authors", ingest.max_authors, "drop papers with this many authors or more")
      ->capture_default_str();
  ingest_cmd->add_flag("--reverse-reversible", ingest.reverse_reversible, "also add the reverse of reversible reactions");

  FlowArgs flow;
  auto* flow_cmd = app.add_subcommand("flow", "run the Ricci flow with surgery");
  flow_cmd->add_option("input", flow.input)->required();
  flow_cmd->add_option("-o,--out", flow.out_dir)->required();
  flow_cmd->add_option("--eta", flow.flags.eta, "iterations")->capture_default_str();
  flow_cmd->add_option("--tau", flow.flags.tau, "surgery period")->capture_default_str();
  flow_cmd->add_option("--delta", flow.flags.delta, "percent of heaviest hyperedges cut by surgery")
      ->capture_default_str();
  flow_cmd->add_option("--kappa", flow.flags.kappa, "maximum number of cores")->capture_default_str();
  flow_cmd->add_option("--epsilon", flow.flags.epsilon, "convergence threshold");
  flow_cmd->add_option("--alpha", flow.flags.alpha, "laziness of undirected walks")->capture_default_str();
  flow_cmd->add_option("--seed", flow.flags.seed)->capture_default_str();

  CoresArgs cores;
  auto* cores_cmd = app.add_subcommand("cores", "extract cores from a flow result and score them");
  cores_cmd->add_option("final", cores.final_path)->required();
  cores_cmd->add_option("original", cores.original_path)->required();
  cores_cmd->add_option("-o,--out", cores.out_dir)->required();
  cores_cmd->add_option("--kappa", cores.kappa)->capture_default_str();
  cores_cmd->add_option("--size-band", cores.band, "lo,hi as fractions of the node count")
      ->delimiter(',')
      ->expected(2);

  PvalueArgs pvalue;
  auto* pvalue_cmd = app.add_subcommand("pvalue", "test each core against random baselines");
  pvalue_cmd->add_option("report", pvalue.report_path)->required();
  pvalue_cmd->add_option("hypergraph", pvalue.hypergraph_path)->required();
  pvalue_cmd->add_option("-o,--out", pvalue.out_dir)->required();
  pvalue_cmd->add_option("--count", pvalue.count, "baselines per core")->capture_default_str();
  pvalue_cmd->add_option("--seed", pvalue.seed)->capture_default_str();

  TheoremArgs theorem;
  auto* theorem_cmd = app.add_subcommand("counterexample", "normalized flow counterexample on G(q,k)");
  theorem_cmd->add_option("--q", theorem.q)->capture_default_str();
  theorem_cmd->add_option("--k", theorem.k)->capture_default_str();
  theorem_cmd->add_option("--s", theorem.s, "step size")->capture_default_str();
  theorem_cmd->add_option("-o,--out", theorem.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*flow_cmd) return cmd_flow(flow, threads);
    if (*cores_cmd) return cmd_cores(cores, threads);
    if (*pvalue_cmd) return cmd_pvalue(pvalue, threads);
    if (*theorem_cmd) return cmd_counterexample(theorem, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
