#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ric/error.hpp"

namespace ric {

using NodeId = std::uint32_t;

/// Undirected edge, always stored with the smaller endpoint first.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  [[nodiscard]] bool touches(NodeId x) const noexcept { return u == x || v == x; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with stable, not necessarily contiguous node ids.
/// Iteration over nodes and edges is always in ascending order.
class Graph {
 public:
  Graph() = default;

  /// Nodes 0..n-1 plus the given edges. Duplicates are rejected, not merged.
  static Graph from_edge_list(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_node(static_cast<NodeId>(i));
    for (const auto& [a, b] : edges) {
      if (a == b) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(a));
      if (a >= n || b >= n)
        throw Error(Errc::EndpointOutOfRange,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) + ") with n=" + std::to_string(n));
      if (g.has_edge(a, b))
        throw Error(Errc::DuplicateEdge, "duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
      g.add_edge(a, b);
    }
    return g;
  }

  static Graph from_edge_list(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
    return from_edge_list(n, std::span<const std::pair<NodeId, NodeId>>(edges.begin(), edges.size()));
  }

  [[nodiscard]] std::size_t node_count() const noexcept { return adj_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
  [[nodiscard]] bool empty() const noexcept { return adj_.empty(); }

  [[nodiscard]] bool has_node(NodeId v) const { return adj_.contains(v); }
  [[nodiscard]] bool has_edge(NodeId a, NodeId b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.contains(b);
  }

  [[nodiscard]] const std::set<NodeId>& neighbors(NodeId v) const { return find(v)->second; }
  [[nodiscard]] std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  [[nodiscard]] std::vector<NodeId> nodes() const {
    std::vector<NodeId> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
  }

  [[nodiscard]] std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (const auto& [v, nbrs] : adj_)
      for (NodeId w : nbrs)
        if (v < w) out.emplace_back(v, w);
    return out;
  }

  /// max(node id) + 1, or 0 for the empty graph.
  [[nodiscard]] NodeId next_free_id() const noexcept { return adj_.empty() ? 0 : adj_.rbegin()->first + 1; }

  void add_node(NodeId v) {
    if (!adj_.try_emplace(v).second) throw Error(Errc::IllegalMove, "node " + std::to_string(v) + " already exists");
  }

  void add_edge(NodeId a, NodeId b) {
    if (a == b) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(a));
    auto& na = find_mut(a);
    auto& nb = find_mut(b);
    if (!na.insert(b).second)
      throw Error(Errc::EdgeExists, "edge (" + std::to_string(a) + "," + std::to_string(b) + ") exists");
    nb.insert(a);
    ++edge_count_;
  }

  void remove_edge(NodeId a, NodeId b) {
    auto& na = find_mut(a);
    auto& nb = find_mut(b);
    if (na.erase(b) == 0)
      throw Error(Errc::IllegalMove, "missing edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    nb.erase(a);
    --edge_count_;
  }

  /// Removes v and returns its incident edges in ascending order.
  std::vector<Edge> remove_node(NodeId v) {
    auto it = find(v);
    std::vector<Edge> removed;
    for (NodeId w : it->second) {
      adj_.find(w)->second.erase(v);
      removed.emplace_back(v, w);
    }
    edge_count_ -= removed.size();
    adj_.erase(it);
    std::sort(removed.begin(), removed.end());
    return removed;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  using AdjMap = std::map<NodeId, std::set<NodeId>>;

  [[nodiscard]] AdjMap::const_iterator find(NodeId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(v));
    return it;
  }
  std::set<NodeId>& find_mut(NodeId v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(v));
    return it->second;
  }

  AdjMap adj_;
  std::size_t edge_count_ = 0;
};

/// Dense 0..n-1 relabeling of a Graph, in ascending id order. Algorithms that
/// want arrays (pebble game, message passing, subset enumeration) work on this.
struct CompactGraph {
  std::vector<NodeId> ids;
  std::vector<std::vector<int>> adj;  // sorted neighbor indices

  explicit CompactGraph(const Graph& g) {
    ids = g.nodes();
    index_.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) index_.emplace(ids[i], static_cast<int>(i));
    adj.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (NodeId w : g.neighbors(ids[i])) adj[i].push_back(index_.at(w));
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return ids.size(); }
  [[nodiscard]] int index_of(NodeId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(v));
    return it->second;
  }

 private:
  std::unordered_map<NodeId, int> index_;
};

inline Graph induced_subgraph(const Graph& g, const std::set<NodeId>& keep) {
  Graph out;
  for (NodeId v : keep) {
    if (!g.has_node(v)) throw Error(Errc::UnknownNode, "unknown node " + std::to_string(v));
    out.add_node(v);
  }
  for (NodeId v : keep)
    for (NodeId w : g.neighbors(v))
      if (v < w && keep.contains(w)) out.add_edge(v, w);
  return out;
}

/// Relabels nodes to 0..n-1 preserving their relative order.
inline Graph compacted(const Graph& g) {
  const CompactGraph c(g);
  Graph out;
  for (std::size_t i = 0; i < c.size(); ++i) out.add_node(static_cast<NodeId>(i));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int j : c.adj[i])
      if (static_cast<int>(i) < j) out.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
  return out;
}

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return Graph::from_edge_list(n, e);
}

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman style fingerprint.
//
// Colors start as node degrees. Each round replaces a color by
// mix(color, sorted neighbor colors). The digest folds the sorted final color
// multiset together with n and m. mix() is the splitmix64 finalizer applied to
// a running 64-bit accumulator. Equal digests are necessary, not sufficient,
// for isomorphism.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kEmptyGraphFingerprint = 0x9E3779B97F4A7C15ULL;
inline constexpr std::size_t kDefaultWlRounds = 3;

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33U;
  x *= 0xFF51AFD7ED558CCDULL;
  x ^= x >> 33U;
  x *= 0xC4CEB9FE1A85EC53ULL;
  x ^= x >> 33U;
  return x;
}

constexpr std::uint64_t combine(std::uint64_t acc, std::uint64_t value) noexcept {
  return mix64(acc ^ (value + 0x9E3779B97F4A7C15ULL + (acc << 6U) + (acc >> 2U)));
}

}  // namespace detail

inline std::uint64_t wl_fingerprint(const Graph& g, std::size_t rounds = kDefaultWlRounds) {
  if (g.empty()) return kEmptyGraphFingerprint;
  const CompactGraph c(g);
  std::vector<std::uint64_t> color(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) color[i] = detail::mix64(c.adj[i].size() + 1);
  std::vector<std::uint64_t> next(c.size());
  std::vector<std::uint64_t> scratch;
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      scratch.clear();
      for (int j : c.adj[i]) scratch.push_back(color[j]);
      std::sort(scratch.begin(), scratch.end());
      std::uint64_t acc = detail::combine(r + 1, color[i]);
      for (std::uint64_t s : scratch) acc = detail::combine(acc, s);
      next[i] = acc;
    }
    color.swap(next);
  }
  std::sort(color.begin(), color.end());
  std::uint64_t acc = detail::combine(g.node_count(), g.edge_count());
  for (std::uint64_t col : color) acc = detail::combine(acc, col);
  return acc;
}

}  // namespace ric
