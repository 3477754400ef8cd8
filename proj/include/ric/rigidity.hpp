#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "ric/graph.hpp"

namespace ric {

/// (2,3)-pebble game over nodes 0..n-1.
///
/// Each node starts with two pebbles. An edge is independent when four
/// pebbles can be collected on its endpoints; accepting it spends one pebble
/// and orients the edge away from the endpoint that paid. Pebbles are moved
/// by DFS along current orientations, reversing the path that reaches a free
/// pebble. Neighbors are explored in ascending index order.
class PebbleGame {
 public:
  explicit PebbleGame(std::size_t n) : pebbles_(n, 2), out_(n), mark_(n, 0), parent_(n, -1) {}

  [[nodiscard]] std::size_t size() const noexcept { return pebbles_.size(); }
  [[nodiscard]] std::size_t accepted_edges() const noexcept { return accepted_; }
  [[nodiscard]] int pebbles(int v) const { return pebbles_[v]; }

  [[nodiscard]] std::size_t free_pebbles() const noexcept {
    std::size_t total = 0;
    for (int p : pebbles_) total += static_cast<std::size_t>(p);
    return total;
  }

  /// pebbles + accepted edges == 2n, and no node holds more than two.
  [[nodiscard]] bool conserved() const noexcept {
    for (int p : pebbles_)
      if (p < 0 || p > 2) return false;
    return free_pebbles() + accepted_ == 2 * pebbles_.size();
  }

  /// True when (u, v) is independent of the accepted edges. Pebbles may be
  /// rearranged while searching; the accepted edge set is unchanged.
  bool is_independent(int u, int v) {
    assert(u != v);
    while (pebbles_[u] < 2)
      if (!gather(u, v)) return false;
    while (pebbles_[v] < 2)
      if (!gather(v, u)) return false;
    return true;
  }

  /// Accepts (u, v) if independent. Returns whether it was accepted.
  bool add_edge(int u, int v) {
    if (!is_independent(u, v)) return false;
    --pebbles_[u];
    insert_sorted(out_[u], v);
    ++accepted_;
    assert(conserved());
    return true;
  }

 private:
  static void insert_sorted(std::vector<int>& list, int x) {
    list.insert(std::lower_bound(list.begin(), list.end(), x), x);
  }
  static void erase_sorted(std::vector<int>& list, int x) {
    list.erase(std::lower_bound(list.begin(), list.end(), x));
  }

  // Moves one pebble onto `target` without taking any from `pinned`.
  // The search may pass through `pinned`; reversing a path through a node
  // leaves its pebble count unchanged.
  bool gather(int target, int pinned) {
    ++epoch_;
    std::vector<int>& stack = stack_;
    stack.clear();
    stack.push_back(target);
    mark_[target] = epoch_;
    parent_[target] = -1;
    int found = -1;
    while (!stack.empty() && found < 0) {
      const int x = stack.back();
      stack.pop_back();
      // Push in reverse so the smallest neighbor is explored first.
      const auto& nbrs = out_[x];
      for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
        const int y = *it;
        if (mark_[y] == epoch_) continue;
        mark_[y] = epoch_;
        parent_[y] = x;
        if (y != pinned && pebbles_[y] > 0) {
          found = y;
          break;
        }
        stack.push_back(y);
      }
    }
    if (found < 0) return false;
    // Reverse the path target -> ... -> found.
    --pebbles_[found];
    for (int y = found; parent_[y] >= 0; y = parent_[y]) {
      const int x = parent_[y];
      erase_sorted(out_[x], y);
      insert_sorted(out_[y], x);
    }
    ++pebbles_[target];
    return true;
  }

  std::vector<int> pebbles_;
  std::vector<std::vector<int>> out_;
  std::vector<std::uint32_t> mark_;
  std::vector<int> parent_;
  std::vector<int> stack_;
  std::uint32_t epoch_ = 0;
  std::size_t accepted_ = 0;
};

namespace detail {

/// Pebble game loaded with every edge of `c`. Returns false in `all_accepted`
/// when some edge was dependent.
inline PebbleGame load_pebble_game(const CompactGraph& c, bool& all_accepted) {
  PebbleGame game(c.size());
  all_accepted = true;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int j : c.adj[i])
      if (static_cast<int>(i) < j && !game.add_edge(static_cast<int>(i), j)) all_accepted = false;
  return game;
}

}  // namespace detail

/// Every induced subgraph on k >= 2 nodes has at most 2k-3 edges.
inline bool is_sparse(const Graph& g) {
  if (g.edge_count() > 0 && g.edge_count() > 2 * g.node_count() - 3) return false;
  bool ok = false;
  detail::load_pebble_game(CompactGraph(g), ok);
  return ok;
}

/// Laman: exactly 2n-3 edges and (2,3)-sparse.
inline bool is_laman(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(Errc::TooSmall, "Laman check needs at least 2 nodes, got " + std::to_string(n));
  if (g.edge_count() != 2 * n - 3) return false;
  return is_sparse(g);
}

/// Whether g + (u, v) stays (2,3)-sparse. g itself must be sparse.
inline bool can_add_edge(const Graph& g, NodeId u, NodeId v) {
  if (u == v) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(u));
  if (!g.has_node(u)) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(u));
  if (!g.has_node(v)) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(v));
  if (g.has_edge(u, v))
    throw Error(Errc::EdgeExists, "edge (" + std::to_string(u) + "," + std::to_string(v) + ") exists");
  const CompactGraph c(g);
  bool ok = false;
  PebbleGame game = detail::load_pebble_game(c, ok);
  if (!ok) throw Error(Errc::NotSparse, "graph is not (2,3)-sparse");
  return game.is_independent(c.index_of(u), c.index_of(v));
}

inline constexpr std::size_t kBruteForceMaxNodes = 16;

/// Direct check of both Laman conditions over every node subset. Exponential;
/// independent of the pebble game and used as its oracle.
inline bool brute_force_is_laman(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kBruteForceMaxNodes)
    throw Error(Errc::TooLarge, "brute force limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  if (n < 2) throw Error(Errc::TooSmall, "Laman check needs at least 2 nodes, got " + std::to_string(n));
  if (g.edge_count() != 2 * n - 3) return false;
  const CompactGraph c(g);
  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (int j : c.adj[i]) nbr_mask[i] |= 1U << j;
  const std::uint32_t full = (1U << n) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int k = std::popcount(s);
    if (k < 2) continue;
    int twice_edges = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (s & (1U << i)) twice_edges += std::popcount(nbr_mask[i] & s);
    if (twice_edges / 2 > 2 * k - 3) return false;
  }
  return true;
}

struct DodResult {
  std::size_t g = 0;  // well-constrained induced subgraphs counted
  std::size_t n = 0;
  double dod = 0.0;
};

inline constexpr std::size_t kDodMinSubgraphSize = 3;
inline constexpr std::size_t kDodMaxNodes = 16;
inline constexpr const char* kDodConvention = "all node-induced Laman subgraphs with >= 3 nodes";

/// Degree of decomposability g/n: g counts node subsets S with
/// |S| >= min_size whose induced subgraph is Laman. Subset edge counts and
/// sparsity are filled in by a DP over subsets in increasing order: S is
/// sparse iff it satisfies the count bound and every S - {v} is sparse.
inline DodResult count_well_constrained_subgraphs(const Graph& g, std::size_t min_size = kDodMinSubgraphSize,
                                                  std::size_t max_n = kDodMaxNodes) {
  const std::size_t n = g.node_count();
  if (n > max_n || n > 24)
    throw Error(Errc::TooLarge, "DoD limited to " + std::to_string(max_n) + " nodes, got " + std::to_string(n));
  DodResult res;
  res.n = n;
  if (n == 0) return res;
  const CompactGraph c(g);
  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (int j : c.adj[i]) nbr_mask[i] |= 1U << j;
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::uint16_t> edges(subsets, 0);
  std::vector<std::uint8_t> sparse(subsets, 1);
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const int low = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    edges[s] = static_cast<std::uint16_t>(edges[rest] + std::popcount(nbr_mask[low] & rest));
    const int k = std::popcount(s);
    if (k < 2) continue;
    bool ok = static_cast<int>(edges[s]) <= 2 * k - 3;
    for (std::uint32_t bits = s; ok && bits != 0; bits &= bits - 1) {
      const std::uint32_t sub = s & ~(bits & (~bits + 1));
      if (std::popcount(sub) >= 2 && !sparse[sub]) ok = false;
    }
    sparse[s] = ok ? 1 : 0;
    if (ok && static_cast<std::size_t>(k) >= min_size && static_cast<int>(edges[s]) == 2 * k - 3) ++res.g;
  }
  res.dod = static_cast<double>(res.g) / static_cast<double>(n);
  return res;
}

}  // namespace ric
