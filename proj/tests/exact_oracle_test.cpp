#include <gtest/gtest.h>

#include "mdgs/exact_oracle.hpp"
#include "mdgs/generators.hpp"
#include "test_support.hpp"

using namespace mdgs;
using mdgs::testing::triangle;

TEST(EnumerateOptimal, Examples) {
  const WeightedGraph empty({5.0, -1.0}, {});
  const auto e = enumerate_optimal(empty);
  EXPECT_DOUBLE_EQ(e.value, 4.0);
  ASSERT_EQ(e.optimal.size(), 1u);
  EXPECT_TRUE(e.optimal[0].dimers().empty());

  const auto t = enumerate_optimal(triangle());
  EXPECT_DOUBLE_EQ(t.value, 5.0);
  ASSERT_EQ(t.optimal.size(), 1u);
  EXPECT_EQ(t.optimal[0].dimers(), std::vector<EdgeId>{0});

  const auto p = enumerate_optimal(mdgs::testing::path3());
  EXPECT_DOUBLE_EQ(p.value, 3.0);
  EXPECT_EQ(p.optimal[0].dimers(), std::vector<EdgeId>{0});
}

TEST(EnumerateOptimal, ReportsAllTiedOptima) {
  const WeightedGraph g({0.0, 0.0, 0.0, 0.0}, {{0, 1, 1.0}, {2, 3, 1.0}, {1, 2, 2.0}});
  const auto e = enumerate_optimal(g);
  EXPECT_DOUBLE_EQ(e.value, 2.0);
  EXPECT_EQ(e.optimal.size(), 2u);
}

TEST(EnumerateOptimal, SizeLimit) {
  std::vector<Edge> edges;
  for (VertexId i = 0; i < 25; ++i) edges.push_back({i, i + 1, 1.0});
  const WeightedGraph g(std::vector<double>(26, 0.0), edges);
  try {
    (void)enumerate_optimal(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
}

TEST(Components, Examples) {
  const WeightedGraph three({0.0, 0.0, 0.0}, {});
  const auto c3 = components(three);
  ASSERT_EQ(c3.size(), 3u);
  for (const auto& c : c3) EXPECT_EQ(c.cycle_rank, 0u);
  const auto tri = components(triangle());
  ASSERT_EQ(tri.size(), 1u);
  EXPECT_EQ(tri[0].cycle_rank, 1u);
  const auto path = components(mdgs::testing::path3());
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0].cycle_rank, 0u);
}

TEST(SparseExact, Examples) {
  EXPECT_DOUBLE_EQ(solve_sparse_exact(triangle()).value, 5.0);
  const WeightedGraph two({0.0, 0.0, 0.0, 0.0}, {{0, 1, 1.0}, {2, 3, 2.0}});
  const auto r = solve_sparse_exact(two);
  EXPECT_DOUBLE_EQ(r.value, 3.0);
  EXPECT_EQ(r.config.dimers(), (std::vector<EdgeId>{0, 1}));
  EXPECT_EQ(r.component_values.size(), 2u);
}

TEST(SparseExact, TreesMatchDynamicProgram) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto t = mdgs::testing::random_tree(1 + rng.below(40), EdgeWeightDist::exponential(1.0),
                                              VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0), rng);
    EXPECT_NEAR(solve_sparse_exact(t).value, opt_value_dp(t), 1e-9);
  }
}

TEST(SparseExact, MatchesEnumerationOnSmallGraphs) {
  Rng rng(22);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 4 + rng.below(10);
    const auto g = mdgs::testing::random_gnp(n, 2.5 / static_cast<double>(n), EdgeWeightDist::exponential(1.0),
                                             VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0), rng);
    if (g.edge_count() > 24) continue;
    const auto brute = enumerate_optimal(g);
    const auto exact = solve_sparse_exact(g, 24);
    ASSERT_NEAR(exact.value, brute.value, 1e-9) << "instance " << i;
    EXPECT_NEAR(md_total_weight(g, exact.config), exact.value, 1e-9);
    ASSERT_EQ(brute.optimal.size(), 1u);
    EXPECT_EQ(exact.config, brute.optimal[0]);
    double sum = 0.0;
    for (double v : exact.component_values) sum += v;
    EXPECT_NEAR(sum, exact.value, 1e-9);
    ++compared;
  }
  EXPECT_GT(compared, 250);
}

TEST(SparseExact, BranchesCoverAllCycleEdgeAssignments) {
  const auto comps = components(triangle());
  const auto branches = sparse_exact_branches(triangle(), comps[0]);
  ASSERT_EQ(branches.size(), 2u);
  double best = -1.0;
  for (const auto& b : branches)
    if (b.feasible) best = std::max(best, b.value);
  EXPECT_DOUBLE_EQ(best, 5.0);
}

TEST(SparseExact, CycleRankLimit) {
  // K_5 has cycle rank 6.
  std::vector<Edge> edges;
  for (VertexId u = 0; u < 5; ++u)
    for (VertexId v = u + 1; v < 5; ++v) edges.push_back({u, v, 1.0 + u + v});
  const WeightedGraph k5(std::vector<double>(5, 0.0), edges);
  try {
    (void)solve_sparse_exact(k5, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cycle_rank_exceeded);
  }
  EXPECT_NEAR(solve_sparse_exact(k5, 6).value, enumerate_optimal(k5).value, 1e-12);
}
