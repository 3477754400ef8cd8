#include "support.hpp"

namespace ric {
namespace {

using test::error_code_of;

Graph k4_plus_pendant() {
  Graph g = complete_graph(4);
  g.add_node(4);
  g.add_edge(3, 4);
  return g;
}

// Two triangles {0,1,2} and {0,3,4} sharing node 0.
Graph bowtie() { return Graph::from_edge_list(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}}); }

TEST(IsLaman, Examples) {
  EXPECT_TRUE(is_laman(test::k3()));
  EXPECT_FALSE(is_laman(test::k4()));
  const Graph g = k4_plus_pendant();
  ASSERT_EQ(g.edge_count(), 7U);
  EXPECT_FALSE(is_laman(g));
  EXPECT_TRUE(is_laman(Graph::from_edge_list(2, {{0, 1}})));
  EXPECT_TRUE(is_laman(test::fan4()));
}

TEST(IsLaman, TooSmall) {
  EXPECT_EQ(error_code_of([] { is_laman(Graph::from_edge_list(1, {})); }), Errc::TooSmall);
  EXPECT_EQ(error_code_of([] { is_laman(Graph{}); }), Errc::TooSmall);
}

TEST(CanAddEdge, Examples) {
  EXPECT_TRUE(can_add_edge(test::p3(), 0, 2));
  Graph g = complete_graph(4);
  g.remove_edge(0, 1);
  EXPECT_FALSE(can_add_edge(g, 0, 1));
}

TEST(CanAddEdge, BowtieAgreesWithBruteForce) {
  const Graph g = bowtie();
  for (NodeId a : {1U, 2U})
    for (NodeId b : {3U, 4U}) {
      Graph h = g;
      h.add_edge(a, b);
      EXPECT_EQ(can_add_edge(g, a, b), test::brute_force_sparse(h)) << a << "," << b;
      // Second bridge added on top of an accepted first one.
      for (NodeId c : {1U, 2U})
        for (NodeId d : {3U, 4U}) {
          if (h.has_edge(c, d)) continue;
          Graph h2 = h;
          h2.add_edge(c, d);
          EXPECT_EQ(can_add_edge(h, c, d), test::brute_force_sparse(h2));
        }
    }
}

TEST(CanAddEdge, Errors) {
  EXPECT_EQ(error_code_of([] { can_add_edge(test::p3(), 1, 1); }), Errc::SelfLoop);
  EXPECT_EQ(error_code_of([] { can_add_edge(test::p3(), 0, 9); }), Errc::UnknownNode);
  EXPECT_EQ(error_code_of([] { can_add_edge(test::p3(), 0, 1); }), Errc::EdgeExists);
  Graph k4_pendant = k4_plus_pendant();
  EXPECT_EQ(error_code_of([&] { can_add_edge(k4_pendant, 0, 4); }), Errc::NotSparse);
}

TEST(CanAddEdge, RandomAgreesWithBruteForce) {
  Rng rng = derive_rng(11);
  int checked = 0;
  while (checked < 2000) {
    const std::size_t n = 3 + uniform_index(rng, 7);
    const Graph g = test::random_gnm(n, uniform_index(rng, 2 * n - 3), rng);
    if (!test::brute_force_sparse(g)) continue;
    const NodeId u = static_cast<NodeId>(uniform_index(rng, n));
    const NodeId v = static_cast<NodeId>(uniform_index(rng, n));
    if (u == v || g.has_edge(u, v)) continue;
    Graph h = g;
    h.add_edge(u, v);
    ASSERT_EQ(can_add_edge(g, u, v), test::brute_force_sparse(h));
    ++checked;
  }
}

TEST(CanAddEdge, CompletesNearLamanGraphs) {
  Rng rng = derive_rng(12);
  for (int i = 0; i < 300; ++i) {
    Graph g = test::random_laman(3 + uniform_index(rng, 12), rng);
    const auto edges = g.edges();
    const Edge e = edges[uniform_index(rng, edges.size())];
    g.remove_edge(e.u, e.v);
    for (NodeId a : g.nodes())
      for (NodeId b : g.nodes()) {
        if (a >= b || g.has_edge(a, b)) continue;
        if (!can_add_edge(g, a, b)) continue;
        Graph h = g;
        h.add_edge(a, b);
        ASSERT_TRUE(is_laman(h));
      }
  }
}

TEST(BruteForce, Examples) {
  EXPECT_TRUE(brute_force_is_laman(test::k3()));
  EXPECT_FALSE(brute_force_is_laman(test::k4()));
  EXPECT_EQ(error_code_of([] { brute_force_is_laman(complete_graph(17)); }), Errc::TooLarge);
  EXPECT_EQ(error_code_of([] { brute_force_is_laman(Graph::from_edge_list(1, {})); }), Errc::TooSmall);
}

// Every edge subset of size 2n-3 on n nodes.
void exhaustive_agreement(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const std::size_t m = 2 * n - 3;
  std::vector<bool> pick(pairs.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  std::size_t total = 0, laman = 0;
  do {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pick[i]) e.push_back(pairs[i]);
    const Graph g = Graph::from_edge_list(n, e);
    const bool fast = is_laman(g);
    ASSERT_EQ(fast, brute_force_is_laman(g)) << "n=" << n;
    ++total;
    laman += fast ? 1 : 0;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  EXPECT_GT(laman, 0U);
  // Up to four nodes every (2n-3)-edge graph is Laman; from five on some are not.
  if (n <= 4) EXPECT_EQ(total, laman);
  else EXPECT_GT(total, laman);
}

TEST(IsLaman, ExhaustiveAgreementUpToSix) {
  for (std::size_t n = 2; n <= 6; ++n) exhaustive_agreement(n);
}

TEST(IsLaman, RandomAgreementUpToNine) {
  Rng rng = derive_rng(13);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 2 + uniform_index(rng, 8);
    // Mix exact-count graphs with near-count ones.
    const std::size_t m = 2 * n - 3 + (uniform_index(rng, 4) == 0 ? 1 : 0);
    const Graph g = test::random_gnm(n, m, rng);
    ASSERT_EQ(is_laman(g), brute_force_is_laman(g));
  }
}

TEST(IsLaman, LabeledCountOnFourNodes) {
  // K4 minus one edge, six ways: every 5-edge graph on 4 nodes is Laman.
  exhaustive_agreement(4);
  int count = 0;
  for (NodeId a = 0; a < 4; ++a)
    for (NodeId b = a + 1; b < 4; ++b) {
      Graph g = complete_graph(4);
      g.remove_edge(a, b);
      count += is_laman(g) ? 1 : 0;
    }
  EXPECT_EQ(count, 6);
}

TEST(IsLaman, MinimalRigidity) {
  Rng rng = derive_rng(14);
  for (int i = 0; i < 200; ++i) {
    const Graph g = test::random_laman(3 + uniform_index(rng, 15), rng);
    for (const Edge& e : g.edges()) {
      Graph h = g;
      h.remove_edge(e.u, e.v);
      EXPECT_FALSE(is_laman(h));
      EXPECT_TRUE(is_sparse(h));
    }
  }
}

TEST(PebbleGame, ConservationAfterEveryEdge) {
  Rng rng = derive_rng(15);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 3 + uniform_index(rng, 12);
    const Graph g = test::random_gnm(n, 2 * n, rng);
    PebbleGame game(n);
    for (const Edge& e : g.edges()) {
      game.add_edge(static_cast<int>(e.u), static_cast<int>(e.v));
      ASSERT_TRUE(game.conserved());
      for (std::size_t v = 0; v < n; ++v) ASSERT_LE(game.pebbles(static_cast<int>(v)), 2);
    }
    EXPECT_LE(game.accepted_edges(), 2 * n - 3);
    EXPECT_GE(game.free_pebbles(), 3U);
  }
}

TEST(PebbleGame, IndependenceQueryLeavesEdgesUnchanged) {
  PebbleGame game(4);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}) game.add_edge(a, b);
  EXPECT_EQ(game.accepted_edges(), 5U);
  EXPECT_FALSE(game.is_independent(0, 3));
  EXPECT_EQ(game.accepted_edges(), 5U);
  EXPECT_EQ(game.free_pebbles(), 3U);
}

TEST(Dod, Examples) {
  const DodResult k3 = count_well_constrained_subgraphs(test::k3());
  EXPECT_EQ(k3.g, 1U);
  EXPECT_EQ(k3.n, 3U);
  EXPECT_DOUBLE_EQ(k3.dod, 1.0 / 3.0);
  const DodResult fan = count_well_constrained_subgraphs(test::fan4());
  EXPECT_EQ(fan.g, 3U);
  EXPECT_EQ(fan.dod, 0.75);
  Graph k4m = complete_graph(4);
  k4m.remove_edge(2, 3);
  const DodResult d = count_well_constrained_subgraphs(k4m);
  EXPECT_EQ(d.g, 3U);
  EXPECT_EQ(d.dod, 0.75);
}

TEST(Dod, TwoNodeConventionWouldCountEdges) {
  // With size-2 subsets allowed, every edge counts on top of the >= 3 tally.
  const Graph g = test::fan4();
  EXPECT_EQ(count_well_constrained_subgraphs(g, 2).g, 3U + g.edge_count());
}

TEST(Dod, TooLarge) {
  EXPECT_EQ(error_code_of([] { count_well_constrained_subgraphs(complete_graph(17)); }), Errc::TooLarge);
  EXPECT_EQ(error_code_of([] { count_well_constrained_subgraphs(test::k4(), 3, 3); }), Errc::TooLarge);
}

TEST(Dod, AgreesWithBruteForceOracle) {
  Rng rng = derive_rng(16);
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 3 + uniform_index(rng, 8);
    const Graph g = uniform_index(rng, 2) == 0 ? test::random_laman(n, rng) : test::random_gnm(n, 2 * n - 3, rng);
    const DodResult r = count_well_constrained_subgraphs(g);
    ASSERT_EQ(r.g, test::brute_force_dod_count(g));
    EXPECT_EQ(r.dod, static_cast<double>(r.g) / static_cast<double>(n));
  }
}

TEST(Dod, LamanGraphCountsItself) {
  Rng rng = derive_rng(17);
  for (int i = 0; i < 100; ++i) {
    const Graph g = test::random_laman(3 + uniform_index(rng, 10), rng);
    EXPECT_GE(count_well_constrained_subgraphs(g).g, 1U);
  }
}

}  // namespace
}  // namespace ric
