#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperricci/core_quality.hpp"
#include "hyperricci/hypergraph.hpp"

namespace hyperricci {

inline constexpr std::size_t kBaselineCount = 100;

/// Student t distribution function with `df` degrees of freedom, through the
/// regularized incomplete beta function.
double student_t_cdf(double t, double df);

struct TTest {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample deviation, n - 1 denominator
  double t = 0.0;
  double p = 1.0;   // two-sided
  std::size_t df() const { return n - 1; }
};

/// Two-sided one-sample test of `samples` against `hypothesis`. With zero
/// spread, p is 1 when the mean equals the hypothesis and 0 otherwise.
TTest one_sample_t_test(std::span<const double> samples, double hypothesis);

struct BaselineSample {
  std::size_t index = 0;
  std::vector<NodeId> nodes;  // sorted
  CoreMetrics metrics;        // undefined cohesion metrics are absent
};

/// `count` independent uniform draws of `size` distinct nodes. Subset `i`
/// depends only on (seed, stream, i).
template <typename Edge>
std::vector<std::vector<NodeId>> sample_subsets(const Hypergraph<Edge>& h, std::size_t size, std::size_t count,
                                                std::uint64_t seed, std::uint64_t stream = 0);

/// Each subset is scored as the only core.
template <typename Edge>
std::vector<BaselineSample> sample_baselines(const Hypergraph<Edge>& h, std::size_t size,
                                             std::size_t count = kBaselineCount, std::uint64_t seed = 0,
                                             unsigned threads = 1, std::uint64_t stream = 0);

struct MetricTest {
  std::string name;
  TTest test;
  std::size_t skipped = 0;  // baselines where the metric was undefined
};

/// One test per metric of `core`; metrics defined on fewer than two
/// baselines get no test.
std::vector<MetricTest> core_p_values(const CoreMetrics& core, std::span<const BaselineSample> baselines);

/// Draws baselines for every core (stream = core index), attaches p-values
/// and refreshes the verdicts.
template <typename Edge>
void attach_p_values(QualityReport& report, const Hypergraph<Edge>& h, std::size_t count = kBaselineCount,
                     std::uint64_t seed = 0, unsigned threads = 1);

}  // namespace hyperricci
