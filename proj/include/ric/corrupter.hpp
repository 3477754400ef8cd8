#pragma once

#include <random>
#include <vector>

#include "ric/graph_io.hpp"
#include "ric/moves.hpp"
#include "ric/random.hpp"

namespace ric {

struct CorruptionConfig {
  double mean_steps = 5.0;
  std::size_t size_min = 3;
  std::size_t size_max = 100;

  void validate() const {
    if (!(mean_steps >= 1.0)) throw Error(Errc::InvalidConfig, "mean_steps must be >= 1");
    if (size_min < 3) throw Error(Errc::InvalidConfig, "size_min must be >= 3");
    if (size_max <= size_min) throw Error(Errc::InvalidConfig, "size_max must exceed size_min");
  }

  [[nodiscard]] SizeBounds bounds() const noexcept { return {size_min, size_max}; }
};

struct CorruptionStep {
  Move move;
  MoveReceipt receipt;
};

/// start --moves[0]--> states[0] --moves[1]--> states[1] ...
struct CorruptionTrace {
  Graph start;
  std::vector<CorruptionStep> steps;
  std::vector<Graph> states;

  [[nodiscard]] const Graph& final_state() const { return states.empty() ? start : states.back(); }
};

/// k >= 1, geometric with success probability 1/mean_steps (so E[k] = mean_steps).
inline std::size_t sample_length(Rng& rng, double mean_steps) {
  if (!(mean_steps >= 1.0)) throw Error(Errc::InvalidConfig, "mean_steps must be >= 1");
  if (mean_steps == 1.0) return 1;
  std::geometric_distribution<std::size_t> failures(1.0 / mean_steps);
  return 1 + failures(rng);
}

/// One corruption sub-step: a uniform choice among the move types that have
/// at least one legal move, then a uniform legal move of that type.
inline Move sample_corruption_move(const Graph& x, SizeBounds bounds, Rng& rng) {
  auto groups = detail::legal_moves_by_type(x, bounds);
  std::array<std::size_t, kMoveTypeCount> available{};
  std::size_t count = 0;
  for (std::size_t t = 0; t < kMoveTypeCount; ++t)
    if (!groups[t].empty()) available[count++] = t;
  if (count == 0) throw Error(Errc::NoLegalMoves, "no legal move under the size bounds");
  auto& group = groups[available[uniform_index(rng, count)]];
  return std::move(group[uniform_index(rng, group.size())]);
}

inline CorruptionTrace corrupt(const Graph& x, const CorruptionConfig& cfg, Rng& rng) {
  cfg.validate();
  if (x.node_count() < cfg.size_min) throw Error(Errc::InvalidConfig, "input smaller than size_min");
  if (!is_laman(x)) throw Error(Errc::NotLaman, "corrupt needs a Laman graph");
  CorruptionTrace trace;
  trace.start = x;
  const std::size_t k = sample_length(rng, cfg.mean_steps);
  trace.steps.reserve(k);
  trace.states.reserve(k);
  const Graph* current = &trace.start;
  for (std::size_t i = 0; i < k; ++i) {
    Move m = sample_corruption_move(*current, cfg.bounds(), rng);
    AppliedMove next = ric::apply(*current, m);
    trace.steps.push_back({std::move(m), std::move(next.receipt)});
    trace.states.push_back(std::move(next.graph));
    current = &trace.states.back();
  }
  return trace;
}

inline nlohmann::ordered_json trace_to_json(const CorruptionTrace& t) {
  // States keep their raw ids here so move fields can be read against them.
  auto raw_graph = [](const Graph& g) {
    nlohmann::ordered_json j;
    j["nodes"] = g.nodes();
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    return j;
  };
  nlohmann::ordered_json j;
  j["start"] = raw_graph(t.start);
  j["k"] = t.steps.size();
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    nlohmann::ordered_json s;
    s["move"] = move_to_json(t.steps[i].move);
    if (t.steps[i].receipt.created_node) s["created_node"] = *t.steps[i].receipt.created_node;
    s["state"] = raw_graph(t.states[i]);
    s["laman"] = is_laman(t.states[i]);
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

}  // namespace ric
