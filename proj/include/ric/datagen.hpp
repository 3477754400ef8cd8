#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ric/graph_io.hpp"
#include "ric/moves.hpp"
#include "ric/parallel.hpp"
#include "ric/random.hpp"

namespace ric {

struct DatagenConfig {
  std::size_t count = 1000;
  double n_mean = 30.0;
  double n_std = 5.0;
  double p_low = 0.0;   // type-I probability range, low decomposability
  double p_high = 0.1;
  std::size_t n_floor = 3;
  std::optional<std::size_t> n_cap;

  void validate() const {
    if (!(0.0 <= p_low && p_low <= p_high && p_high <= 1.0))
      throw Error(Errc::InvalidConfig, "need 0 <= p_low <= p_high <= 1");
    if (n_floor < 3) throw Error(Errc::InvalidConfig, "n_floor must be >= 3");
    if (n_cap && *n_cap < n_floor) throw Error(Errc::InvalidConfig, "n_cap below n_floor");
    if (!(n_std >= 0.0)) throw Error(Errc::InvalidConfig, "n_std must be >= 0");
  }

  static DatagenConfig low_decomposability() { return {}; }
  static DatagenConfig high_decomposability() {
    DatagenConfig c;
    c.p_low = 0.9;
    c.p_high = 1.0;
    return c;
  }
};

struct GeneratedLaman {
  Graph graph;
  std::vector<Move> moves;  // replaying these from K3 reproduces graph
};

/// Henneberg construction from K3: each of the n-3 steps is a uniformly
/// random type-I move with probability p, else a uniformly random type-II
/// move. A Bernoulli draw of 1 selects type I.
inline GeneratedLaman generate_laman(std::size_t n, double p, Rng& rng) {
  if (n < 3) throw Error(Errc::InvalidConfig, "generate_laman needs n >= 3");
  GeneratedLaman out{complete_graph(3), {}};
  out.moves.reserve(n - 3);
  std::bernoulli_distribution type_one(p);
  for (std::size_t i = 4; i <= n; ++i) {
    const std::vector<NodeId> nodes = out.graph.nodes();
    Move m;
    if (type_one(rng)) {
      // Uniform unordered pair.
      const std::size_t a = uniform_index(rng, nodes.size());
      std::size_t b = uniform_index(rng, nodes.size() - 1);
      if (b >= a) ++b;
      m = InsertI{nodes[a], nodes[b], std::nullopt};
    } else {
      // Uniform (edge, third node) pair.
      const std::vector<Edge> edges = out.graph.edges();
      const Edge e = edges[uniform_index(rng, edges.size())];
      std::size_t k = uniform_index(rng, nodes.size() - 2);
      NodeId w = 0;
      for (NodeId x : nodes) {
        if (e.touches(x)) continue;
        if (k-- == 0) {
          w = x;
          break;
        }
      }
      m = InsertII{e, w, std::nullopt};
    }
    out.graph = ric::apply(out.graph, m).graph;
    out.moves.push_back(std::move(m));
  }
  return out;
}

struct DatasetItem {
  std::size_t n = 0;
  double p = 0.0;
  GeneratedLaman generated;
};

/// Item i uses its own stream derived from (seed, i), so the dataset is
/// identical for any number of jobs.
inline std::vector<DatasetItem> generate_dataset(const DatagenConfig& cfg, std::uint64_t seed, std::size_t jobs = 1) {
  cfg.validate();
  std::vector<DatasetItem> items(cfg.count);
  parallel_for(cfg.count, jobs, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0xDA7A, i});
    std::normal_distribution<double> size_dist(cfg.n_mean, cfg.n_std);
    double raw = cfg.n_std > 0.0 ? std::round(size_dist(rng)) : std::round(cfg.n_mean);
    raw = std::max(raw, static_cast<double>(cfg.n_floor));
    if (cfg.n_cap) raw = std::min(raw, static_cast<double>(*cfg.n_cap));
    const auto n = static_cast<std::size_t>(raw);
    const double p = uniform_real(rng, cfg.p_low, cfg.p_high);
    items[i] = DatasetItem{n, p, generate_laman(n, p, rng)};
  });
  return items;
}

inline void write_dataset(std::ostream& out, const std::vector<DatasetItem>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) write_graph_line(out, items[i].generated.graph, "g" + std::to_string(i));
}

}  // namespace ric
