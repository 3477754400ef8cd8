#include <cmath>

#include "support.hpp"

namespace ric {
namespace {

using test::error_code_of;

TEST(SampleLength, MeanOneIsAlwaysOne) {
  Rng rng = derive_rng(31);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_length(rng, 1.0), 1U);
}

TEST(SampleLength, GeometricLaw) {
  Rng rng = derive_rng(32);
  constexpr int kDraws = 1000000;
  double sum = 0.0;
  std::array<int, 4> head{};
  for (int i = 0; i < kDraws; ++i) {
    const std::size_t k = sample_length(rng, 5.0);
    ASSERT_GE(k, 1U);
    sum += static_cast<double>(k);
    if (k <= 3) ++head[k];
  }
  EXPECT_NEAR(sum / kDraws, 5.0, 0.1);
  EXPECT_NEAR(static_cast<double>(head[1]) / kDraws, 0.2, 0.01);
  // P(k >= j) = 0.8^(j-1), so P(k = 2) = 0.16 and P(k = 3) = 0.128.
  EXPECT_NEAR(static_cast<double>(head[2]) / kDraws, 0.16, 0.01);
  EXPECT_NEAR(static_cast<double>(head[3]) / kDraws, 0.128, 0.01);
}

TEST(SampleLength, RejectsMeanBelowOne) {
  Rng rng = derive_rng(33);
  EXPECT_EQ(error_code_of([&] { sample_length(rng, 0.5); }), Errc::InvalidConfig);
}

TEST(Corrupt, TriangleFirstStepIsHalfInsertI) {
  Rng rng = derive_rng(34);
  CorruptionConfig cfg;
  cfg.mean_steps = 1.0;
  int type_one = 0, type_two = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const Move m = sample_corruption_move(test::k3(), cfg.bounds(), rng);
    if (std::holds_alternative<InsertI>(m)) ++type_one;
    else if (std::holds_alternative<InsertII>(m)) ++type_two;
    else ADD_FAILURE() << "deletion sampled from K3 at size_min 3";
  }
  EXPECT_EQ(type_one + type_two, kDraws);
  EXPECT_NEAR(static_cast<double>(type_one) / kDraws, 0.5, 0.01);
}

TEST(Corrupt, UniformWithinType) {
  // fan4 has 6 InsertI, 10 InsertII, 2 DeleteI and 2 DeleteII moves; each
  // move's probability is 1/4 * 1/|type|.
  Rng rng = derive_rng(35);
  const Graph g = test::fan4();
  const auto moves = enumerate_legal(g, 3, 100);
  std::vector<int> hits(moves.size(), 0);
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const Move m = sample_corruption_move(g, SizeBounds{3, 100}, rng);
    for (std::size_t k = 0; k < moves.size(); ++k)
      if (same_action(m, moves[k])) ++hits[k];
  }
  const std::array<double, 4> sizes{6, 10, 2, 2};
  for (std::size_t k = 0; k < moves.size(); ++k) {
    const double expected = 0.25 / sizes[moves[k].index()];
    EXPECT_NEAR(static_cast<double>(hits[k]) / kDraws, expected, 0.006) << k;
  }
}

TEST(Corrupt, NoLegalMoves) {
  Rng rng = derive_rng(36);
  EXPECT_EQ(error_code_of([&] { sample_corruption_move(test::k3(), SizeBounds{3, 3}, rng); }), Errc::NoLegalMoves);
}

TEST(Corrupt, TraceInvariants) {
  Rng rng = derive_rng(37);
  CorruptionConfig cfg;
  cfg.size_max = 20;
  for (int i = 0; i < 300; ++i) {
    const Graph x = test::random_laman(3 + uniform_index(rng, 15), rng);
    const CorruptionTrace t = corrupt(x, cfg, rng);
    ASSERT_GE(t.steps.size(), 1U);
    ASSERT_EQ(t.steps.size(), t.states.size());
    EXPECT_EQ(t.start, x);
    Graph cur = x;
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
      cur = ric::apply(cur, t.steps[s].move).graph;
      ASSERT_EQ(cur, t.states[s]);
      ASSERT_TRUE(is_laman(cur));
      ASSERT_GE(cur.node_count(), cfg.size_min);
      ASSERT_LE(cur.node_count(), cfg.size_max);
    }
    EXPECT_EQ(t.final_state(), t.states.back());
  }
}

TEST(Corrupt, MeanTraceLength) {
  Rng rng = derive_rng(38);
  CorruptionConfig cfg;
  double total = 0.0;
  constexpr int kTraces = 100000;
  const Graph x = test::fan4();
  for (int i = 0; i < kTraces; ++i) total += static_cast<double>(corrupt(x, cfg, rng).steps.size());
  EXPECT_NEAR(total / kTraces, 5.0, 0.1);
}

TEST(Corrupt, Preconditions) {
  Rng rng = derive_rng(39);
  CorruptionConfig cfg;
  EXPECT_EQ(error_code_of([&] { corrupt(test::k4(), cfg, rng); }), Errc::NotLaman);
  EXPECT_EQ(error_code_of([&] { corrupt(Graph::from_edge_list(2, {{0, 1}}), cfg, rng); }), Errc::InvalidConfig);
  cfg.mean_steps = 0.0;
  EXPECT_EQ(error_code_of([&] { corrupt(test::k3(), cfg, rng); }), Errc::InvalidConfig);
}

TEST(Corrupt, DeterministicPerStream) {
  CorruptionConfig cfg;
  Rng a = derive_rng(40, {1, 2});
  Rng b = derive_rng(40, {1, 2});
  const auto ta = trace_to_json(corrupt(test::fan4(), cfg, a)).dump();
  const auto tb = trace_to_json(corrupt(test::fan4(), cfg, b)).dump();
  EXPECT_EQ(ta, tb);
}

TEST(Corrupt, JsonShape) {
  Rng rng = derive_rng(41);
  CorruptionConfig cfg;
  const CorruptionTrace t = corrupt(test::k3(), cfg, rng);
  const auto j = trace_to_json(t);
  EXPECT_EQ(j["k"].get<std::size_t>(), t.steps.size());
  ASSERT_EQ(j["steps"].size(), t.steps.size());
  for (const auto& s : j["steps"]) EXPECT_TRUE(s["laman"].get<bool>());
  EXPECT_EQ(j["start"]["nodes"].size(), 3U);
}

}  // namespace
}  // namespace ric
