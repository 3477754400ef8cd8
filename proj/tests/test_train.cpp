#include <sstream>

#include "support.hpp"

namespace ric {
namespace {

using test::error_code_of;

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.epochs = 6;
  cfg.batch_size = 16;
  cfg.base_lr = 8e-3;
  cfg.warmup_epochs = 1;
  cfg.decay_epochs = {4};
  cfg.hyper.hidden = 8;
  cfg.hyper.rounds = 2;
  cfg.corruption.mean_steps = 3.0;
  cfg.corruption.size_max = 12;
  cfg.seed = 5;
  return cfg;
}

std::vector<Graph> tiny_dataset(std::size_t count) {
  DatagenConfig dc = DatagenConfig::low_decomposability();
  dc.count = count;
  dc.n_mean = 7;
  dc.n_std = 1;
  dc.n_cap = 10;
  std::vector<Graph> out;
  for (auto& it : generate_dataset(dc, 3)) out.push_back(std::move(it.generated.graph));
  return out;
}

TEST(Schedule, ScalesWithBatch) {
  TrainConfig cfg;
  cfg.batch_size = 256;
  EXPECT_DOUBLE_EQ(cfg.peak_lr(), 4e-3);
  cfg.batch_size = 64;
  EXPECT_DOUBLE_EQ(cfg.peak_lr(), 1e-3);
}

TEST(Schedule, WarmupAndDecay) {
  TrainConfig cfg;
  cfg.batch_size = 128;  // peak = base = 2e-3
  const std::size_t spe = 10;
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 0, 0, spe), 2e-3 / 50);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 2, 4, spe), 2e-3 * 25 / 50);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 4, 9, spe), 2e-3);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 5, 0, spe), 2e-3);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 11, 9, spe), 2e-3);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 12, 0, spe), 2e-4);
  EXPECT_DOUBLE_EQ(scheduled_lr(cfg, 24, 0, spe), 2e-5);
  EXPECT_NEAR(scheduled_lr(cfg, 36, 0, spe), 2e-6, 1e-20);
}

TEST(Adamax, HandComputedSteps) {
  Hyper hp;
  hp.hidden = 2;
  hp.rounds = 1;
  ModelParams x = ModelParams::zeros(hp);
  ModelParams g = ModelParams::zeros(hp);
  g.embed_w(0, 0) = 0.5;
  g.embed_w(1, 0) = -2.0;
  Adamax opt(x, 0.9, 0.999, 1e-8);
  opt.step(x, g, 0.1);
  // m = 0.1 g, u = |g|, bias correction 1/(1 - 0.9): the step is lr * sign(g).
  EXPECT_NEAR(x.embed_w(0, 0), -0.1, 1e-8);
  EXPECT_NEAR(x.embed_w(1, 0), 0.1, 1e-8);
  EXPECT_EQ(x.embed_w(0, 1), 0.0);
  opt.step(x, g, 0.1);
  // m = 0.19 g, u = |g| still, correction 1/0.19: another lr * sign(g).
  EXPECT_NEAR(x.embed_w(0, 0), -0.2, 1e-8);
  EXPECT_NEAR(x.embed_w(1, 0), 0.2, 1e-8);
  ModelParams g2 = ModelParams::zeros(hp);
  g2.embed_w(0, 0) = 1.0;
  opt.step(x, g2, 0.1);
  // m = 0.171 * 0.5 + 0.1 = 0.1855, u = max(0.999 * 0.5, 1) = 1, correction 1/0.271.
  EXPECT_NEAR(x.embed_w(0, 0), -0.2 - 0.1 * 0.1855 / 0.271, 1e-8);
}

TEST(Train, DeterministicForSeedAndJobs) {
  const auto data = tiny_dataset(40);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 2;
  const TrainResult a = train(data, cfg);
  const TrainResult b = train(data, cfg);
  cfg.jobs = 3;
  const TrainResult c = train(data, cfg);
  EXPECT_EQ(params_to_json(a.params).dump(), params_to_json(b.params).dump());
  EXPECT_EQ(params_to_json(a.params).dump(), params_to_json(c.params).dump());
  cfg.seed = 6;
  const TrainResult d = train(data, cfg);
  EXPECT_NE(params_to_json(a.params).dump(), params_to_json(d.params).dump());
}

TEST(Train, SmoothedLossDecreases) {
  // Smoothed loss is the running mean of the per-epoch losses.
  const auto data = tiny_dataset(300);
  std::vector<double> seen;
  const TrainResult r = train(data, tiny_config(), [&](const EpochLog& e) { seen.push_back(e.loss); });
  ASSERT_EQ(r.log.size(), 6U);
  ASSERT_EQ(seen.size(), 6U);
  double sum = r.log[0].loss;
  double prev = sum;
  for (std::size_t i = 1; i < r.log.size(); ++i) {
    sum += r.log[i].loss;
    const double smoothed = sum / static_cast<double>(i + 1);
    EXPECT_LT(smoothed, prev) << "epoch " << i + 1;
    prev = smoothed;
  }
  EXPECT_LT(r.log.back().loss, r.log.front().loss);
  EXPECT_TRUE(r.params.all_finite());
}

TEST(Train, LogColumns) {
  const auto data = tiny_dataset(20);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 2;
  cfg.decay_epochs = {1};
  const TrainResult r = train(data, cfg);
  ASSERT_EQ(r.log.size(), 2U);
  EXPECT_EQ(r.log[0].epoch, 1U);
  EXPECT_DOUBLE_EQ(r.log[0].step_size, cfg.peak_lr());
  EXPECT_DOUBLE_EQ(r.log[1].step_size, cfg.peak_lr() / 10);
  std::ostringstream out;
  write_train_log_csv(out, r.log);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,loss,step_size");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "1,");
}

TEST(Train, Validation) {
  const auto data = tiny_dataset(5);
  TrainConfig cfg = tiny_config();
  cfg.warmup_epochs = 10;
  EXPECT_EQ(error_code_of([&] { train(data, cfg); }), Errc::InvalidConfig);
  cfg = tiny_config();
  cfg.base_lr = 0;
  EXPECT_EQ(error_code_of([&] { train(data, cfg); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code_of([&] { train({}, tiny_config()); }), Errc::InvalidConfig);
}

}  // namespace
}  // namespace ric
