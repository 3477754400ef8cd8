#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <vector>

#include "ric/reconstructor.hpp"

namespace ric {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 256;
  double base_lr = 2e-3;              // at reference_batch; scaled linearly with batch_size
  std::size_t reference_batch = 128;
  std::size_t warmup_epochs = 5;      // linear ramp from 0
  std::vector<std::size_t> decay_epochs{12, 24, 36};  // divide by 10 after each
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Hyper hyper;
  CorruptionConfig corruption;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const {
    if (epochs == 0 || batch_size == 0 || reference_batch == 0) throw Error(Errc::InvalidConfig, "counts must be positive");
    if (!(base_lr > 0.0)) throw Error(Errc::InvalidConfig, "base_lr must be positive");
    if (warmup_epochs > epochs) throw Error(Errc::InvalidConfig, "warm-up longer than training");
    corruption.validate();
  }

  [[nodiscard]] double peak_lr() const {
    return base_lr * static_cast<double>(batch_size) / static_cast<double>(reference_batch);
  }
};

/// Step size at a given (0-based) epoch and step within it.
inline double scheduled_lr(const TrainConfig& cfg, std::size_t epoch, std::size_t step, std::size_t steps_per_epoch) {
  double lr = cfg.peak_lr();
  const std::size_t warmup_steps = cfg.warmup_epochs * steps_per_epoch;
  const std::size_t global = epoch * steps_per_epoch + step;
  if (global < warmup_steps) lr *= static_cast<double>(global + 1) / static_cast<double>(warmup_steps);
  for (std::size_t d : cfg.decay_epochs)
    if (epoch >= d) lr /= 10.0;
  return lr;
}

/// Adamax: m <- b1 m + (1-b1) g; u <- max(b2 u, |g|); x -= lr/(1-b1^t) m/(u+eps).
class Adamax {
 public:
  Adamax(const ModelParams& shape, double beta1, double beta2, double eps)
      : m_(ModelParams::zeros(shape.hyper)), u_(ModelParams::zeros(shape.hyper)), beta1_(beta1), beta2_(beta2),
        eps_(eps) {}

  void step(ModelParams& params, const ModelParams& grad, double lr) {
    ++t_;
    const double scale = lr / (1.0 - std::pow(beta1_, static_cast<double>(t_)));
    std::vector<Mat*> ps, ms, us;
    std::vector<const Mat*> gs;
    params.for_each([&](const std::string&, Mat& x) { ps.push_back(&x); });
    m_.for_each([&](const std::string&, Mat& x) { ms.push_back(&x); });
    u_.for_each([&](const std::string&, Mat& x) { us.push_back(&x); });
    grad.for_each([&](const std::string&, const Mat& x) { gs.push_back(&x); });
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Mat& m = *ms[i];
      Mat& u = *us[i];
      const Mat& g = *gs[i];
      m = beta1_ * m + (1.0 - beta1_) * g;
      u = (beta2_ * u).cwiseMax(g.cwiseAbs());
      ps[i]->array() -= scale * m.array() / (u.array() + eps_);
    }
  }

 private:
  ModelParams m_, u_;
  double beta1_, beta2_, eps_;
  std::size_t t_ = 0;
};

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;  // mean per-trace loss over the epoch
  double step_size = 0.0;  // at the last step of the epoch
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
};

inline void write_train_log_csv(std::ostream& out, const std::vector<EpochLog>& log) {
  out << "epoch,loss,step_size\n";
  for (const auto& e : log) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", e.epoch, e.loss, e.step_size);
    out << buf;
  }
}

/// Maximum-likelihood training on freshly corrupted data each epoch.
/// Corruption of item i in epoch e uses stream (seed, e, i); minibatch order
/// uses stream (seed, e); initial weights use stream (seed). The run is a
/// pure function of (dataset, cfg).
inline TrainResult train(const std::vector<Graph>& dataset, const TrainConfig& cfg,
                         const std::function<void(const EpochLog&)>& on_epoch = {}) {
  cfg.validate();
  if (dataset.empty()) throw Error(Errc::InvalidConfig, "training set is empty");
  Rng init_rng = derive_rng(cfg.seed, {0x1417});
  TrainResult result{ModelParams::init(cfg.hyper, init_rng), {}};
  Adamax opt(result.params, cfg.beta1, cfg.beta2, cfg.eps);
  const std::size_t steps_per_epoch = (dataset.size() + cfg.batch_size - 1) / cfg.batch_size;
  std::vector<std::size_t> order(dataset.size());
  std::vector<CorruptionTrace> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = derive_rng(cfg.seed, {0x5487, epoch});
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    double lr = 0.0;
    for (std::size_t step = 0; step < steps_per_epoch; ++step) {
      const std::size_t begin = step * cfg.batch_size;
      const std::size_t end = std::min(dataset.size(), begin + cfg.batch_size);
      batch.assign(end - begin, CorruptionTrace{});
      parallel_for(end - begin, cfg.jobs, [&](std::size_t j) {
        const std::size_t item = order[begin + j];
        Rng rng = derive_rng(cfg.seed, {0xC0DE, epoch, item});
        batch[j] = corrupt(dataset[item], cfg.corruption, rng);
      });
      LossAndGrad lg;
      try {
        lg = loss_and_grad(result.params, batch, cfg.corruption.bounds(), cfg.jobs);
      } catch (const Error& e) {
        if (e.code() != Errc::NonFinite) throw;
        throw Error(Errc::NonFinite, "epoch " + std::to_string(epoch) + " batch " + std::to_string(step) + ": " +
                                         e.what());
      }
      lr = scheduled_lr(cfg, epoch, step, steps_per_epoch);
      opt.step(result.params, lg.grad, lr);
      epoch_loss += lg.mean_loss * static_cast<double>(end - begin);
    }
    EpochLog entry{epoch + 1, epoch_loss / static_cast<double>(dataset.size()), lr};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

}  // namespace ric
