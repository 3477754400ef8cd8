#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <vector>

#include "ric/ric.hpp"

namespace ric::test {

inline Graph k3() { return complete_graph(3); }
inline Graph k4() { return complete_graph(4); }
inline Graph p3() { return Graph::from_edge_list(3, {{0, 1}, {1, 2}}); }
// Two triangles sharing edge (1,2); the same graph as K4 minus (0,3).
inline Graph fan4() { return Graph::from_edge_list(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}); }

/// Relabels node i of g to perm[i] (g must have nodes 0..n-1).
inline Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  Graph out;
  for (NodeId v : g.nodes()) out.add_node(perm[v]);
  for (const Edge& e : g.edges()) out.add_edge(perm[e.u], perm[e.v]);
  return out;
}

inline std::vector<NodeId> random_permutation(std::size_t n, Rng& rng, NodeId offset = 0) {
  std::vector<NodeId> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<NodeId>(i) + offset;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Direct subgraph-count check of (2,3)-sparsity over every subset of >= 2 nodes.
inline bool brute_force_sparse(const Graph& g) {
  const auto c = CompactGraph(g);
  const std::size_t n = c.size();
  for (std::uint32_t s = 1; s < (1U << n); ++s) {
    const int k = std::popcount(s);
    if (k < 2) continue;
    int m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1U)
        for (int j : c.adj[i])
          if (static_cast<std::size_t>(j) > i && (s >> j & 1U)) ++m;
    if (m > 2 * k - 3) return false;
  }
  return true;
}

/// Counts subsets of size >= min_size whose induced subgraph passes the
/// brute-force Laman oracle.
inline std::size_t brute_force_dod_count(const Graph& g, std::size_t min_size = 3) {
  const std::vector<NodeId> ids = g.nodes();
  std::size_t count = 0;
  for (std::uint32_t s = 1; s < (1U << ids.size()); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) < min_size) continue;
    std::set<NodeId> keep;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (s >> i & 1U) keep.insert(ids[i]);
    if (brute_force_is_laman(induced_subgraph(g, keep))) ++count;
  }
  return count;
}

/// Laman graph on n nodes from Henneberg steps with a random type mix.
inline Graph random_laman(std::size_t n, Rng& rng) {
  return generate_laman(n, uniform_real(rng, 0.0, 1.0), rng).graph;
}

/// Uniform random graph with exactly m edges on n nodes.
inline Graph random_gnm(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(std::min(m, pairs.size()));
  return Graph::from_edge_list(n, pairs);
}

inline Errc error_code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::InvalidConfig;
}

}  // namespace ric::test
