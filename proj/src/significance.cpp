#include "hyperricci/significance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "hyperricci/error.hpp"
#include "hyperricci/parallel.hpp"

namespace hyperricci {

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error("degrees of freedom must be positive");
  if (std::isnan(t)) throw Error("t statistic is NaN");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  // P(T <= -|t|) = I_{df/(df+t^2)}(df/2, 1/2) / 2
  const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
  return t < 0 ? tail : 1.0 - tail;
}

TTest one_sample_t_test(std::span<const double> samples, double hypothesis) {
  if (samples.size() < 2) throw Error("a t-test needs at least two samples");
  TTest r;
  r.n = samples.size();
  const double n = static_cast<double>(r.n);
  r.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double squares = 0.0;
  for (double x : samples) squares += (x - r.mean) * (x - r.mean);
  r.sd = std::sqrt(squares / (n - 1.0));
  if (r.sd == 0.0) {
    r.t = r.mean == hypothesis ? 0.0 : std::copysign(INFINITY, r.mean - hypothesis);
    r.p = r.mean == hypothesis ? 1.0 : 0.0;
    return r;
  }
  r.t = (r.mean - hypothesis) / (r.sd / std::sqrt(n));
  const double df = n - 1.0;
  r.p = boost::math::ibeta(df / 2.0, 0.5, df / (df + r.t * r.t));
  return r;
}

template <typename Edge>
std::vector<std::vector<NodeId>> sample_subsets(const Hypergraph<Edge>& h, std::size_t size, std::size_t count,
                                                std::uint64_t seed, std::uint64_t stream) {
  if (size == 0 || size >= h.node_count()) throw Error("baseline size must lie strictly between 0 and |V|");
  std::vector<std::vector<NodeId>> out;
  out.reserve(count);
  std::vector<NodeId> pool(h.nodes().begin(), h.nodes().end());
  for (std::size_t i = 0; i < count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    // partial Fisher-Yates over a fresh copy of the node list
    std::vector<NodeId> order = pool;
    for (std::size_t k = 0; k < size; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
      std::swap(order[k], order[pick(rng)]);
    }
    order.resize(size);
    std::sort(order.begin(), order.end());
    out.push_back(std::move(order));
  }
  return out;
}

template <typename Edge>
std::vector<BaselineSample> sample_baselines(const Hypergraph<Edge>& h, std::size_t size, std::size_t count,
                                             std::uint64_t seed, unsigned threads, std::uint64_t stream) {
  auto subsets = sample_subsets(h, size, count, seed, stream);
  std::vector<BaselineSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i].index = i;
    out[i].nodes = std::move(subsets[i]);
    out[i].metrics = evaluate_lenient(h, out[i].nodes, out[i].nodes);
  });
  return out;
}

std::vector<MetricTest> core_p_values(const CoreMetrics& core, std::span<const BaselineSample> baselines) {
  std::vector<MetricTest> out;
  for (const auto& metric : core.values) {
    std::vector<double> samples;
    std::size_t skipped = 0;
    for (const auto& b : baselines) {
      const auto it = std::find_if(b.metrics.values.begin(), b.metrics.values.end(),
                                   [&](const Metric& m) { return m.name == metric.name; });
      if (it == b.metrics.values.end())
        ++skipped;
      else
        samples.push_back(it->value);
    }
    if (samples.size() < 2) continue;
    out.push_back(MetricTest{metric.name, one_sample_t_test(samples, metric.value), skipped});
  }
  return out;
}

template <typename Edge>
void attach_p_values(QualityReport& report, const Hypergraph<Edge>& h, std::size_t count, std::uint64_t seed,
                     unsigned threads) {
  for (std::size_t c = 0; c < report.cores.size(); ++c) {
    auto& core = report.cores[c];
    const auto baselines = sample_baselines(h, core.nodes.size(), count, seed, threads, c);
    core.p_values.clear();
    for (const auto& test : core_p_values(core.metrics, baselines)) core.p_values[test.name] = test.test.p;
    core.verdict = validity_check(core);
  }
}

#define HYPERRICCI_INSTANTIATE(E)                                                                                \
  template std::vector<std::vector<NodeId>> sample_subsets(const Hypergraph<E>&, std::size_t, std::size_t,       \
                                                           std::uint64_t, std::uint64_t);                        \
  template std::vector<BaselineSample> sample_baselines(const Hypergraph<E>&, std::size_t, std::size_t,          \
                                                        std::uint64_t, unsigned, std::uint64_t);                 \
  template void attach_p_values(QualityReport&, const Hypergraph<E>&, std::size_t, std::uint64_t, unsigned);

HYPERRICCI_INSTANTIATE(DirectedHyperedge)
HYPERRICCI_INSTANTIATE(UndirectedHyperedge)

#undef HYPERRICCI_INSTANTIATE

}  // namespace hyperricci
