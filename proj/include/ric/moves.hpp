#pragma once

#include <array>
#include <iterator>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ric/graph.hpp"
#include "ric/rigidity.hpp"

namespace ric {

// The four Henneberg moves. Node ids refer to the pre-move graph. Insertions
// create a node whose id is max+1 unless `reuse_id` is set, which is how
// inverses restore a deleted node verbatim.

/// New node joined to u and v.
struct InsertI {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<NodeId> reuse_id;
};

/// Edge (u, v) is removed; new node joined to u, v and w.
struct InsertII {
  Edge edge;
  NodeId w = 0;
  std::optional<NodeId> reuse_id;
};

/// Removes a degree-2 node.
struct DeleteI {
  NodeId v = 0;
};

/// Removes a degree-3 node and adds new_edge between two of its neighbors.
struct DeleteII {
  NodeId v = 0;
  Edge new_edge;
};

using Move = std::variant<InsertI, InsertII, DeleteI, DeleteII>;

enum class MoveType { InsertI = 0, InsertII = 1, DeleteI = 2, DeleteII = 3 };
inline constexpr std::size_t kMoveTypeCount = 4;

inline MoveType move_type(const Move& m) noexcept { return static_cast<MoveType>(m.index()); }
inline bool is_insertion(const Move& m) noexcept { return m.index() <= 1; }

/// Equality of the action itself, ignoring any id-reuse request.
inline bool same_action(const Move& a, const Move& b) {
  if (a.index() != b.index()) return false;
  switch (move_type(a)) {
    case MoveType::InsertI: {
      const auto& x = std::get<InsertI>(a);
      const auto& y = std::get<InsertI>(b);
      return Edge(x.u, x.v) == Edge(y.u, y.v);
    }
    case MoveType::InsertII: {
      const auto& x = std::get<InsertII>(a);
      const auto& y = std::get<InsertII>(b);
      return x.edge == y.edge && x.w == y.w;
    }
    case MoveType::DeleteI: return std::get<DeleteI>(a).v == std::get<DeleteI>(b).v;
    case MoveType::DeleteII: {
      const auto& x = std::get<DeleteII>(a);
      const auto& y = std::get<DeleteII>(b);
      return x.v == y.v && x.new_edge == y.new_edge;
    }
  }
  return false;
}

struct MoveReceipt {
  Move applied;
  std::optional<NodeId> created_node;
  std::vector<Edge> removed_edges;
};

struct AppliedMove {
  Graph graph;
  MoveReceipt receipt;
};

namespace detail {

[[noreturn]] inline void illegal(const std::string& why) { throw Error(Errc::IllegalMove, why); }

inline std::string id(NodeId v) { return std::to_string(v); }

inline NodeId creation_id(const Graph& g, const std::optional<NodeId>& reuse) {
  if (!reuse) return g.next_free_id();
  if (g.has_node(*reuse)) illegal("reuse id " + id(*reuse) + " already present");
  return *reuse;
}

/// Neighbors of a degree-3 node in ascending order.
inline std::array<NodeId, 3> three_neighbors(const Graph& g, NodeId v) {
  const auto& nb = g.neighbors(v);
  auto it = nb.begin();
  std::array<NodeId, 3> out{};
  for (auto& x : out) x = *it++;
  return out;
}

}  // namespace detail

/// Applies m, validating its legality. Closure: a Laman input gives a Laman
/// output. Call it qualified (ric::apply): Move is a std::variant, so ADL
/// also finds std::apply.
inline AppliedMove apply(const Graph& g, const Move& m) {
  AppliedMove out{g, MoveReceipt{m, std::nullopt, {}}};
  Graph& h = out.graph;
  MoveReceipt& r = out.receipt;
  using detail::id;
  using detail::illegal;
  switch (move_type(m)) {
    case MoveType::InsertI: {
      const auto& mv = std::get<InsertI>(m);
      if (mv.u == mv.v) illegal("InsertI endpoints coincide");
      if (!g.has_node(mv.u) || !g.has_node(mv.v)) illegal("InsertI endpoint missing");
      const NodeId x = detail::creation_id(g, mv.reuse_id);
      h.add_node(x);
      h.add_edge(x, mv.u);
      h.add_edge(x, mv.v);
      r.created_node = x;
      break;
    }
    case MoveType::InsertII: {
      const auto& mv = std::get<InsertII>(m);
      if (!g.has_node(mv.edge.u) || !g.has_node(mv.edge.v) || !g.has_edge(mv.edge.u, mv.edge.v))
        illegal("InsertII missing edge (" + id(mv.edge.u) + "," + id(mv.edge.v) + ")");
      if (!g.has_node(mv.w) || mv.edge.touches(mv.w)) illegal("InsertII third node invalid");
      const NodeId x = detail::creation_id(g, mv.reuse_id);
      h.remove_edge(mv.edge.u, mv.edge.v);
      h.add_node(x);
      h.add_edge(x, mv.edge.u);
      h.add_edge(x, mv.edge.v);
      h.add_edge(x, mv.w);
      r.created_node = x;
      r.removed_edges.push_back(mv.edge);
      break;
    }
    case MoveType::DeleteI: {
      const auto& mv = std::get<DeleteI>(m);
      if (!g.has_node(mv.v)) illegal("DeleteI target " + id(mv.v) + " missing");
      if (g.degree(mv.v) != 2) illegal("DeleteI degree mismatch at " + id(mv.v));
      r.removed_edges = h.remove_node(mv.v);
      break;
    }
    case MoveType::DeleteII: {
      const auto& mv = std::get<DeleteII>(m);
      if (!g.has_node(mv.v)) illegal("DeleteII target " + id(mv.v) + " missing");
      if (g.degree(mv.v) != 3) illegal("DeleteII degree mismatch at " + id(mv.v));
      const Edge e = mv.new_edge;
      if (e.u == e.v || !g.has_edge(mv.v, e.u) || !g.has_edge(mv.v, e.v))
        illegal("DeleteII replacement edge must join two neighbors of " + id(mv.v));
      if (g.has_edge(e.u, e.v)) illegal("DeleteII replacement edge already present");
      r.removed_edges = h.remove_node(mv.v);
      if (!can_add_edge(h, e.u, e.v)) illegal("DeleteII replacement edge violates sparsity");
      h.add_edge(e.u, e.v);
      break;
    }
  }
  return out;
}

/// The move that undoes `m` on the post-move graph, restoring exact ids.
inline Move inverse(const Move& m, const MoveReceipt& r) {
  if (!same_action(m, r.applied)) throw Error(Errc::ReceiptMismatch, "receipt belongs to a different move");
  auto mismatch = [] { return Error(Errc::ReceiptMismatch, "receipt is incomplete for this move"); };
  switch (move_type(m)) {
    case MoveType::InsertI:
      if (!r.created_node) throw mismatch();
      return DeleteI{*r.created_node};
    case MoveType::InsertII:
      if (!r.created_node) throw mismatch();
      return DeleteII{*r.created_node, std::get<InsertII>(m).edge};
    case MoveType::DeleteI: {
      const NodeId v = std::get<DeleteI>(m).v;
      if (r.removed_edges.size() != 2) throw mismatch();
      auto other = [v](const Edge& e) { return e.u == v ? e.v : e.u; };
      return InsertI{other(r.removed_edges[0]), other(r.removed_edges[1]), v};
    }
    case MoveType::DeleteII: {
      const auto& mv = std::get<DeleteII>(m);
      if (r.removed_edges.size() != 3) throw mismatch();
      for (const Edge& e : r.removed_edges) {
        const NodeId w = e.u == mv.v ? e.v : e.u;
        if (!mv.new_edge.touches(w)) return InsertII{mv.new_edge, w, mv.v};
      }
      throw mismatch();
    }
  }
  throw mismatch();
}

struct SizeBounds {
  std::size_t size_min = 3;
  std::size_t size_max = 100;
};

namespace detail {

/// Legal moves grouped by type, without the Laman precondition check.
/// Order within a group: InsertI by node pair, InsertII by (edge, w),
/// DeleteI by node, DeleteII by (node, neighbor pair).
inline std::array<std::vector<Move>, kMoveTypeCount> legal_moves_by_type(const Graph& g, SizeBounds bounds) {
  std::array<std::vector<Move>, kMoveTypeCount> out;
  const std::size_t n = g.node_count();
  const std::vector<NodeId> nodes = g.nodes();
  if (n < bounds.size_max) {
    auto& ins1 = out[static_cast<std::size_t>(MoveType::InsertI)];
    ins1.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) ins1.emplace_back(InsertI{nodes[i], nodes[j], std::nullopt});
    auto& ins2 = out[static_cast<std::size_t>(MoveType::InsertII)];
    ins2.reserve(g.edge_count() * (n >= 2 ? n - 2 : 0));
    for (const Edge& e : g.edges())
      for (NodeId w : nodes)
        if (!e.touches(w)) ins2.emplace_back(InsertII{e, w, std::nullopt});
  }
  if (n > bounds.size_min) {
    auto& del1 = out[static_cast<std::size_t>(MoveType::DeleteI)];
    auto& del2 = out[static_cast<std::size_t>(MoveType::DeleteII)];
    for (NodeId v : nodes) {
      const std::size_t d = g.degree(v);
      if (d == 2) {
        del1.emplace_back(DeleteI{v});
      } else if (d == 3) {
        const auto nb = three_neighbors(g, v);
        Graph rest = g;
        rest.remove_node(v);
        const CompactGraph c(rest);
        bool ok = false;
        PebbleGame game = load_pebble_game(c, ok);
        constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
        for (const auto& [a, b] : pairs) {
          if (rest.has_edge(nb[a], nb[b])) continue;
          if (ok && game.is_independent(c.index_of(nb[a]), c.index_of(nb[b])))
            del2.emplace_back(DeleteII{v, Edge(nb[a], nb[b])});
        }
      }
    }
  }
  return out;
}

inline std::vector<Move> legal_moves_flat(const Graph& g, SizeBounds bounds) {
  auto groups = legal_moves_by_type(g, bounds);
  std::vector<Move> all;
  std::size_t total = 0;
  for (const auto& grp : groups) total += grp.size();
  all.reserve(total);
  for (auto& grp : groups) std::move(grp.begin(), grp.end(), std::back_inserter(all));
  return all;
}

}  // namespace detail

/// Ind(g): every legal move under the size masks (insertions masked at
/// size_max, deletions at size_min), in the fixed type order I, II, DI, DII.
inline std::vector<Move> enumerate_legal(const Graph& g, std::size_t size_min, std::size_t size_max) {
  if (g.node_count() < 2 || !is_laman(g)) throw Error(Errc::NotLaman, "enumerate_legal needs a Laman graph");
  return detail::legal_moves_flat(g, SizeBounds{size_min, size_max});
}

// JSON form used in chain traces: {"type": "I"|"II"|"DI"|"DII", ...}.

inline const char* move_type_tag(MoveType t) {
  switch (t) {
    case MoveType::InsertI: return "I";
    case MoveType::InsertII: return "II";
    case MoveType::DeleteI: return "DI";
    case MoveType::DeleteII: return "DII";
  }
  return "?";
}

inline nlohmann::ordered_json move_to_json(const Move& m) {
  nlohmann::ordered_json j;
  j["type"] = move_type_tag(move_type(m));
  std::visit(
      [&j](const auto& mv) {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, InsertI>) {
          j["u"] = mv.u;
          j["v"] = mv.v;
          if (mv.reuse_id) j["reuse_id"] = *mv.reuse_id;
        } else if constexpr (std::is_same_v<T, InsertII>) {
          j["edge"] = {mv.edge.u, mv.edge.v};
          j["w"] = mv.w;
          if (mv.reuse_id) j["reuse_id"] = *mv.reuse_id;
        } else if constexpr (std::is_same_v<T, DeleteI>) {
          j["v"] = mv.v;
        } else {
          j["v"] = mv.v;
          j["edge"] = {mv.new_edge.u, mv.new_edge.v};
        }
      },
      m);
  return j;
}

inline Move move_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    auto reuse = [&j]() -> std::optional<NodeId> {
      if (!j.contains("reuse_id")) return std::nullopt;
      return j["reuse_id"].get<NodeId>();
    };
    auto edge = [&j]() { return Edge(j.at("edge").at(0).get<NodeId>(), j.at("edge").at(1).get<NodeId>()); };
    if (type == "I") return InsertI{j.at("u").get<NodeId>(), j.at("v").get<NodeId>(), reuse()};
    if (type == "II") return InsertII{edge(), j.at("w").get<NodeId>(), reuse()};
    if (type == "DI") return DeleteI{j.at("v").get<NodeId>()};
    if (type == "DII") return DeleteII{j.at("v").get<NodeId>(), edge()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad move: ") + e.what());
  }
  throw Error(Errc::ParseError, "unknown move type");
}

}  // namespace ric
