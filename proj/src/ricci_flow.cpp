#include "hyperricci/ricci_flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hyperricci/error.hpp"
#include "hyperricci/format.hpp"

namespace hyperricci {

void FlowConfig::validate() const {
  if (iterations < 1) throw Error("iteration count must be at least 1");
  if (surgery_period < 1) throw Error("surgery period must be at least 1");
  if (!(surgery_percent > 0.0 && surgery_percent < 100.0)) throw Error("surgery percent must lie in (0, 100)");
  if (max_cores < 1) throw Error("core count must be at least 1");
  if (epsilon && !(*epsilon > 0.0)) throw Error("convergence threshold must be positive");
}

StepResult flow_step(const WeightMap& weights, const CurvatureMap& curvature) {
  StepResult out;
  for (const auto& [id, w] : weights) {
    const auto it = curvature.find(id);
    if (it == curvature.end()) throw Error("no curvature for hyperedge " + std::to_string(id.value));
    const double ric = it->second;
    const double next = w - w * ric;
    // weights only move against the sign of the curvature
    if ((ric > 0.0 && next > w) || (ric < 0.0 && next < w) || next < -kPruneTolerance)
      throw Error("flow update moved hyperedge " + std::to_string(id.value) + " the wrong way");
    if (next <= kPruneTolerance)
      out.pruned.push_back(id);
    else
      out.weights.emplace_hint(out.weights.end(), id, next);
  }
  return out;
}

WeightMap sigmoid_renormalize(const WeightMap& weights) {
  WeightMap out;
  for (const auto& [id, w] : weights) out.emplace_hint(out.end(), id, sigmoid(w));
  return out;
}

std::size_t surgery_count(std::size_t edges, double percent) {
  if (edges == 0) return 0;
  const double raw = std::ceil(percent * static_cast<double>(edges) / 100.0);
  return std::min(edges, static_cast<std::size_t>(std::max(1.0, raw)));
}

std::vector<EdgeId> surgery(const WeightMap& weights, double percent) {
  std::vector<std::pair<double, EdgeId>> ranked;
  ranked.reserve(weights.size());
  for (const auto& [id, w] : weights) ranked.emplace_back(w, id);
  const std::size_t count = surgery_count(ranked.size(), percent);
  std::partial_sort(ranked.begin(), ranked.begin() + count, ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<EdgeId> removed;
  for (std::size_t i = 0; i < count; ++i) removed.push_back(ranked[i].second);
  std::sort(removed.begin(), removed.end());
  return removed;
}

Convergence convergence_metrics(const WeightMap& previous, const WeightMap& next) {
  std::vector<double> diffs;
  auto p = previous.begin();
  for (const auto& [id, w] : next) {
    while (p != previous.end() && p->first < id) ++p;
    if (p != previous.end() && p->first == id) diffs.push_back(std::abs(w - p->second));
  }
  if (diffs.empty()) throw Error("no hyperedge is common to both weight maps");
  const double n = static_cast<double>(diffs.size());
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= n;
  double spread = 0.0;
  for (double d : diffs) spread += (mean - d) * (mean - d);
  return {mean, std::sqrt(spread / n)};
}

namespace {

CurvatureMap curvatures(const DirectedHypergraph& h, const FlowConfig& config) {
  return all_curvatures(h, config.threads);
}

CurvatureMap curvatures(const UndirectedHypergraph& h, const FlowConfig& config) {
  return all_curvatures(h, config.alpha, config.threads);
}

}  // namespace

template <typename Edge>
FlowResult<Edge> run_flow(const Hypergraph<Edge>& h, const FlowConfig& config) {
  config.validate();
  if (!is_connected(h)) throw Error("flow input must be connected");
  for (const Edge& e : h.edges())
    if (!(e.weight > 0.0)) throw Error("flow input has a non-positive weight on hyperedge " + std::to_string(e.id.value));

  FlowTrace trace;
  trace.epsilon = config.epsilon_for(Hypergraph<Edge>::is_directed);
  Hypergraph<Edge> current = h;
  WeightMap weights = h.weights();

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    IterationRecord record;
    record.iteration = t;
    if (weights.empty()) {
      trace.stopped_early = true;
      break;
    }
    StepResult step = flow_step(weights, curvatures(current, config));
    WeightMap next = sigmoid_renormalize(step.weights);
    record.pruned = std::move(step.pruned);
    if (t % config.surgery_period == 0 && !next.empty()) {
      record.surgery = surgery(next, config.surgery_percent);
      for (EdgeId id : record.surgery) next.erase(id);
    }

    std::size_t common = 0;
    for (const auto& [id, w] : next) common += weights.count(id);
    record.common_edges = common;
    if (common > 0) {
      record.convergence = convergence_metrics(weights, next);
      if (!trace.first_converged && record.convergence->average <= trace.epsilon) trace.first_converged = t;
    }
    record.live_edges = next.size();
    trace.iterations.push_back(std::move(record));

    current = current.with_weights(next);
    weights = std::move(next);
  }
  return {std::move(current), std::move(trace)};
}

template FlowResult<DirectedHyperedge> run_flow(const DirectedHypergraph&, const FlowConfig&);
template FlowResult<UndirectedHyperedge> run_flow(const UndirectedHypergraph&, const FlowConfig&);

namespace {

void write_ids(std::ostream& out, const std::vector<EdgeId>& ids) {
  if (ids.empty()) {
    out << '-';
    return;
  }
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i].value;
}

}  // namespace

void write_trace(std::ostream& out, const FlowTrace& trace) {
  out << "# epsilon\t" << format_double(trace.epsilon) << '\n';
  out << "# first_converged\t" << (trace.first_converged ? std::to_string(*trace.first_converged) : "none") << '\n';
  out << "# stopped_early\t" << (trace.stopped_early ? "yes" : "no") << '\n';
  out << "iteration\tdelta_ave\tdelta_std\tcommon\tlive\tpruned\tsurgery\n";
  for (const auto& r : trace.iterations) {
    out << r.iteration << '\t';
    if (r.convergence)
      out << format_double(r.convergence->average) << '\t' << format_double(r.convergence->deviation);
    else
      out << "NA\tNA";
    out << '\t' << r.common_edges << '\t' << r.live_edges << '\t';
    write_ids(out, r.pruned);
    out << '\t';
    write_ids(out, r.surgery);
    out << '\n';
  }
}

}  // namespace hyperricci
