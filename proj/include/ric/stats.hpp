#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "ric/graph.hpp"
#include "ric/random.hpp"
#include "ric/rigidity.hpp"

namespace ric {

/// sup_x |ECDF_a(x) - ECDF_b(x)|.
inline double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "KS needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double stddev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct KsReport {
  double statistic = 0.0;
  double bootstrap_mean = 0.0;
  double bootstrap_se = 0.0;  // standard deviation across replicates
  std::size_t reps = 0;
};

inline constexpr std::size_t kMinBootstrapReps = 100;

template <class T>
std::vector<T> resample(std::span<const T> v, Rng& rng) {
  std::vector<T> out(v.size());
  for (auto& x : out) x = v[uniform_index(rng, v.size())];
  return out;
}

/// Point KS plus mean and spread of KS over `reps` with-replacement resamples.
inline KsReport bootstrap_ks(std::span<const double> a, std::span<const double> b, std::size_t reps, Rng& rng) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "KS needs two non-empty samples");
  if (reps < kMinBootstrapReps) throw Error(Errc::InvalidConfig, "bootstrap needs at least 100 replicates");
  KsReport r;
  r.statistic = ks_statistic(a, b);
  r.reps = reps;
  std::vector<double> stats(reps);
  for (auto& s : stats) {
    const auto ra = resample(a, rng);
    const auto rb = resample(b, rng);
    s = ks_statistic(ra, rb);
  }
  r.bootstrap_mean = mean_of(stats);
  r.bootstrap_se = stddev_of(stats);
  return r;
}

inline bool is_valid_laman(const Graph& g) { return g.node_count() >= 2 && is_laman(g); }

struct ValidityRate {
  double percent = 0.0;
  double bootstrap_sd = 0.0;  // percentage points
};

inline ValidityRate validity_rate(std::span<const Graph> graphs, std::size_t reps, Rng& rng) {
  if (graphs.empty()) throw Error(Errc::EmptySample, "validity needs a non-empty sample");
  std::vector<double> valid(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) valid[i] = is_valid_laman(graphs[i]) ? 100.0 : 0.0;
  ValidityRate r;
  r.percent = mean_of(valid);
  std::vector<double> reps_pct(reps);
  for (auto& s : reps_pct) {
    const auto rv = resample<double>(valid, rng);
    s = mean_of(rv);
  }
  r.bootstrap_sd = stddev_of(reps_pct);
  return r;
}

/// G(n, m) with m = 2n - 3: the Laman edge count holds by construction, so
/// any failure comes from an over-dense subgraph.
inline Graph er_graph(std::size_t n, Rng& rng) {
  if (n < 3) throw Error(Errc::InvalidConfig, "E-R baseline needs n >= 3");
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const std::size_t m = 2 * n - 3;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + uniform_index(rng, pairs.size() - i);
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(m);
  std::sort(pairs.begin(), pairs.end());
  return Graph::from_edge_list(n, pairs);
}

inline std::vector<Graph> er_baseline(std::span<const std::size_t> n_values, Rng& rng) {
  std::vector<Graph> out;
  out.reserve(n_values.size());
  for (std::size_t n : n_values) out.push_back(er_graph(n, rng));
  return out;
}

}  // namespace ric
