#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "ric/corrupter.hpp"
#include "ric/model.hpp"
#include "ric/parallel.hpp"

namespace ric {

/// One supervised example: at `state`, the model should pick `target`
/// (nullopt means stop).
struct ReconstructionTarget {
  const Graph* state = nullptr;
  std::optional<Move> target;
};

/// Reverse-sequence targets of a trace: the inverse of each corruption step at
/// the state it produced, then stop at the original graph.
inline std::vector<ReconstructionTarget> reconstruction_targets(const CorruptionTrace& trace) {
  std::vector<ReconstructionTarget> out;
  out.reserve(trace.steps.size() + 1);
  for (std::size_t i = trace.steps.size(); i-- > 0;)
    out.push_back({&trace.states[i], inverse(trace.steps[i].move, trace.steps[i].receipt)});
  out.push_back({&trace.start, std::nullopt});
  return out;
}

/// -log p(target | state). When `grad` is given, adds weight * gradient.
inline double state_nll(const Graph& state, const std::optional<Move>& target, const ModelParams& p,
                        SizeBounds bounds, ModelParams* grad = nullptr, double weight = 1.0) {
  ScoredState s = score_state(state, p, detail::legal_moves_flat(state, bounds));
  const auto idx = s.dist.find(target);
  if (!idx) throw Error(Errc::TargetNotInLegalSet, "reverse move is not in the legal set");
  const double mx = *std::max_element(s.dist.logits.begin(), s.dist.logits.end());
  double total = 0.0;
  for (double l : s.dist.logits) total += std::exp(l - mx);
  const double nll = -(s.dist.logits[*idx] - mx - std::log(total));
  if (grad != nullptr) {
    std::vector<double> d(s.dist.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = weight * s.dist.probabilities[k];
    d[*idx] -= weight;
    score_backward(s, p, d, *grad);
  }
  return nll;
}

/// Negative log-likelihood of the reversed corruption sequence followed by stop.
inline double loss(const ModelParams& p, const CorruptionTrace& trace, SizeBounds bounds,
                   ModelParams* grad = nullptr, double weight = 1.0) {
  double total = 0.0;
  for (const auto& t : reconstruction_targets(trace)) total += state_nll(*t.state, t.target, p, bounds, grad, weight);
  return total;
}

struct LossAndGrad {
  double mean_loss = 0.0;
  ModelParams grad;
};

/// Mean loss over the batch and its analytic gradient. Per-item gradients are
/// summed in item order, so the result is identical for any `jobs`.
inline LossAndGrad loss_and_grad(const ModelParams& p, std::span<const CorruptionTrace> batch, SizeBounds bounds,
                                 std::size_t jobs = 1) {
  if (!p.all_finite()) throw Error(Errc::NonFinite, "parameters are not finite");
  LossAndGrad out{0.0, ModelParams::zeros(p.hyper)};
  if (batch.empty()) return out;
  const double w = 1.0 / static_cast<double>(batch.size());
  if (jobs <= 1) {
    ModelParams item = ModelParams::zeros(p.hyper);
    for (const auto& trace : batch) {
      item.set_zero();
      out.mean_loss += w * loss(p, trace, bounds, &item, w);
      out.grad.add_scaled(item, 1.0);
    }
  } else {
    std::vector<ModelParams> items(batch.size());
    std::vector<double> losses(batch.size());
    parallel_for(batch.size(), jobs, [&](std::size_t i) {
      items[i] = ModelParams::zeros(p.hyper);
      losses[i] = loss(p, batch[i], bounds, &items[i], w);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      out.mean_loss += w * losses[i];
      out.grad.add_scaled(items[i], 1.0);
    }
  }
  if (!std::isfinite(out.mean_loss) || !out.grad.all_finite())
    throw Error(Errc::NonFinite, "loss or gradient is not finite");
  return out;
}

inline ModelParams grad(const ModelParams& p, std::span<const CorruptionTrace> batch, SizeBounds bounds,
                        std::size_t jobs = 1) {
  return loss_and_grad(p, batch, bounds, jobs).grad;
}

struct ReconstructionResult {
  Graph graph;
  std::vector<Move> moves;
};

inline constexpr std::size_t kDefaultMaxReconstructionSteps = 30;

inline std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  // Rounding left the tail uncovered; fall back to the last positive entry.
  for (std::size_t k = probs.size(); k-- > 0;)
    if (probs[k] > 0.0) return k;
  return 0;
}

/// Samples moves from the model, applying each, until stop. At most
/// max_steps moves are applied; if stop has not been drawn by then the call
/// fails with MaxStepsExceeded.
inline ReconstructionResult sample_reconstruction(const Graph& corrupted, const ModelParams& p, Rng& rng,
                                                  SizeBounds bounds,
                                                  std::size_t max_steps = kDefaultMaxReconstructionSteps) {
  if (corrupted.node_count() < 2 || !is_laman(corrupted))
    throw Error(Errc::NotLaman, "sample_reconstruction needs a Laman graph");
  ReconstructionResult out{corrupted, {}};
  for (std::size_t step = 0;; ++step) {
    ScoredState s = score_state(out.graph, p, detail::legal_moves_flat(out.graph, bounds));
    const std::size_t k = sample_categorical(s.dist.probabilities, rng);
    if (ActionDistribution::is_stop(s.dist.actions[k])) return out;
    if (step == max_steps) throw Error(Errc::MaxStepsExceeded, "no stop within " + std::to_string(max_steps) + " moves");
    const Move& m = *s.dist.actions[k];
    out.graph = ric::apply(out.graph, m).graph;
    out.moves.push_back(m);
  }
}

/// Index of the most probable action; ties go to the lowest index.
inline std::size_t argmax_action(const ActionDistribution& d) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d.logits[k] > d.logits[best]) best = k;
  return best;
}

}  // namespace ric
