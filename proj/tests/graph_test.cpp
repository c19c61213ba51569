#include <gtest/gtest.h>

#include <sstream>

#include "mdgs/graph.hpp"
#include "test_support.hpp"

using namespace mdgs;
using mdgs::testing::path3;
using mdgs::testing::triangle;

TEST(WeightedGraph, IncidenceMatchesEdgeList) {
  const auto g = triangle();
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  for (VertexId v = 0; v < 3; ++v) {
    EXPECT_EQ(g.degree(v), 2u);
    for (const auto& inc : g.incident(v)) EXPECT_EQ(g.edge(inc.edge).other(v), inc.neighbor);
  }
}

TEST(WeightedGraph, RejectsInvalidInput) {
  EXPECT_THROW(WeightedGraph({0.0, 0.0}, {{0, 0, 1.0}}), Error);
  EXPECT_THROW(WeightedGraph({0.0, 0.0}, {{0, 2, 1.0}}), Error);
  EXPECT_THROW(WeightedGraph({0.0, 0.0}, {{0, 1, INFINITY}}), Error);
  EXPECT_THROW(WeightedGraph({NAN}, {}), Error);
}

TEST(WeightedGraph, ParallelEdgesAreCounted) {
  const WeightedGraph g({0.0, 0.0}, {{0, 1, 1.0}, {1, 0, 2.0}});
  EXPECT_EQ(g.parallel_edge_count(), 1u);
  EXPECT_FALSE(is_forest(g));
}

TEST(WeightedGraph, VertexRangeCheck) {
  const auto g = path3();
  try {
    g.check_vertex(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::vertex_out_of_range);
  }
}

TEST(MonomerDimerConfig, RejectsOverlappingDimers) {
  const auto g = path3();
  try {
    MonomerDimerConfig(g, {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_config);
  }
  const MonomerDimerConfig c(g, {0});
  EXPECT_TRUE(c.is_dimer(0));
  EXPECT_FALSE(c.is_dimer(1));
  EXPECT_EQ(c.monomers(), std::vector<VertexId>{2});
  EXPECT_EQ(*c.dimer_at(1), 0u);
  EXPECT_FALSE(c.dimer_at(2).has_value());
}

TEST(MdTotalWeight, Examples) {
  const WeightedGraph single({5.0}, {});
  EXPECT_DOUBLE_EQ(md_total_weight(single, MonomerDimerConfig(single, {})), 5.0);
  const WeightedGraph edge({0.0, 0.0}, {{0, 1, 1.0}});
  EXPECT_DOUBLE_EQ(md_total_weight(edge, MonomerDimerConfig(edge, {0})), 1.0);
  const auto p = path3();
  EXPECT_DOUBLE_EQ(md_total_weight(p, MonomerDimerConfig(p, {0})), 3.0);
  EXPECT_DOUBLE_EQ(md_total_weight(p, MonomerDimerConfig(p, {1})), 2.0);
  EXPECT_DOUBLE_EQ(md_total_weight(p, MonomerDimerConfig(p, {})), 0.0);
  const WeightedGraph heavy({10.0, 10.0}, {{0, 1, 1.0}});
  EXPECT_DOUBLE_EQ(md_total_weight(heavy, MonomerDimerConfig(heavy, {})), 20.0);
  EXPECT_DOUBLE_EQ(md_total_weight(heavy, MonomerDimerConfig(heavy, {0})), 1.0);
}

TEST(GraphDistance, Examples) {
  const auto p = path3();
  EXPECT_EQ(graph_distance(p, 1, 1), 0u);
  EXPECT_EQ(graph_distance(p, 0, 2), 2u);
  const WeightedGraph two({0.0, 0.0}, {});
  EXPECT_FALSE(graph_distance(two, 0, 1).has_value());
  const auto d = bfs_distances(p, 0, 1);
  EXPECT_EQ(d[1], 1u);
  EXPECT_FALSE(d[2].has_value());
}

TEST(BfsBall, RadiusZeroIsTheRoot) {
  const auto g = triangle();
  const auto b = bfs_ball(g, 1, 0);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_TRUE(b.edges.empty());
  EXPECT_TRUE(b.tree);
  EXPECT_EQ(b.boundary, std::vector<VertexId>{0});
  EXPECT_EQ(b.exterior_degree[0], 2u);
}

TEST(BfsBall, PathRadiusOne) {
  const auto g = path3();
  const auto b = bfs_ball(g, 0, 1);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.host_vertex[1], 1u);
  ASSERT_EQ(b.edges.size(), 1u);
  EXPECT_EQ(b.edges[0].host, 0u);
  ASSERT_EQ(b.boundary.size(), 1u);
  EXPECT_EQ(b.host_vertex[b.boundary[0]], 1u);
  EXPECT_EQ(b.exterior_degree[b.boundary[0]], 1u);
  EXPECT_TRUE(is_tree(b));
  EXPECT_EQ(b.parent[1], 0u);
}

TEST(BfsBall, TriangleIsNotATree) {
  const auto b = bfs_ball(triangle(), 2, 2);
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b.edges.size(), 3u);
  EXPECT_FALSE(is_tree(b));
  // Two depth-1 vertices joined by an edge already close a cycle at radius 1.
  EXPECT_FALSE(bfs_ball(triangle(), 0, 1).tree);
}

TEST(BfsBall, AsGraphKeepsWeightsAndOrder) {
  Rng rng(7);
  const auto g = mdgs::testing::random_tree(30, EdgeWeightDist::exponential(1.0),
                                            VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0), rng);
  for (std::size_t H = 0; H < 5; ++H) {
    const auto b = bfs_ball(g, 3, H);
    const auto bg = b.as_graph(g);
    ASSERT_EQ(bg.edge_count(), b.edges.size());
    for (EdgeId e = 0; e < bg.edge_count(); ++e) {
      EXPECT_EQ(bg.edge(e).w, g.edge(b.edges[e].host).w);
      const auto& he = g.edge(b.edges[e].host);
      EXPECT_EQ(b.host_vertex[bg.edge(e).u], he.u);
      EXPECT_EQ(b.host_vertex[bg.edge(e).v], he.v);
    }
    for (VertexId v = 0; v < bg.vertex_count(); ++v) {
      EXPECT_EQ(bg.x(v), g.x(b.host_vertex[v]));
      EXPECT_LE(b.depth[v], H);
      EXPECT_EQ(*b.local(b.host_vertex[v]), v);
    }
  }
}

TEST(IsTree, Examples) {
  EXPECT_TRUE(is_tree(path3()));
  EXPECT_FALSE(is_tree(triangle()));
  EXPECT_TRUE(is_tree(WeightedGraph({0.0}, {})));
  EXPECT_FALSE(is_tree(WeightedGraph({0.0, 0.0}, {})));
  EXPECT_TRUE(is_forest(WeightedGraph({0.0, 0.0}, {})));
}

TEST(EdgeCsv, Format) {
  std::ostringstream os;
  write_edge_csv(os, path3());
  EXPECT_EQ(os.str(), "edge,u,v,w\n0,0,1,3\n1,1,2,2\n");
}
