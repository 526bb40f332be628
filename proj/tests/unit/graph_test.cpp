#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "rrw/error.hpp"
#include "rrw/graph.hpp"

using namespace rrw;

namespace {

std::set<std::int64_t> ids(const std::vector<VertexId>& vs) {
  std::set<std::int64_t> s;
  for (auto v : vs) s.insert(v.value);
  return s;
}

}  // namespace

TEST(Graph, PathMiddleVertex) {
  auto g = GraphModel::path(3);
  EXPECT_EQ(ids(g.neighbors(VertexId{1})), (std::set<std::int64_t>{0, 2}));
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(Graph, LatticeOriginHasFourNeighbors) {
  auto g = GraphModel::lattice(2);
  auto nb = g.neighbors(g.root());
  ASSERT_EQ(nb.size(), 4u);
  std::set<std::vector<std::int64_t>> coords;
  for (auto v : nb) coords.insert(g.lattice_coords(v));
  EXPECT_EQ(coords, (std::set<std::vector<std::int64_t>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
}

TEST(Graph, StarCentreAndLeaf) {
  auto g = GraphModel::star(5);
  EXPECT_EQ(g.neighbors(VertexId{0}).size(), 5u);
  EXPECT_EQ(ids(g.neighbors(VertexId{3})), (std::set<std::int64_t>{0}));
  EXPECT_EQ(g.num_vertices(), 6u);
}

TEST(Graph, Distances) {
  auto z = GraphModel::lattice(1);
  EXPECT_EQ(z.distance(z.root()), 0);
  EXPECT_EQ(z.distance(z.lattice_point({-3})), 3);
  auto c = GraphModel::cycle(6);
  EXPECT_EQ(c.distance(VertexId{3}), 3);
  EXPECT_EQ(c.distance(VertexId{5}), 1);
}

TEST(Graph, Bipartite) {
  auto c4 = GraphModel::cycle(4);
  auto b = is_bipartite(c4);
  ASSERT_TRUE(b.bipartite);
  EXPECT_EQ(ids(b.side1), (std::set<std::int64_t>{0, 2}));
  EXPECT_EQ(ids(b.side2), (std::set<std::int64_t>{1, 3}));
  EXPECT_FALSE(is_bipartite(GraphModel::cycle(3)).bipartite);
  auto box = GraphModel::parse("box:2:2");
  auto bb = is_bipartite(box);
  ASSERT_TRUE(bb.bipartite);
  std::set<std::int64_t> s1 = ids(bb.side1);
  for (auto e : box.edges()) EXPECT_NE(s1.count(e.a.value) > 0, s1.count(e.b.value) > 0);
  EXPECT_TRUE(is_bipartite(GraphModel::lattice(3)).by_rule);
}

TEST(Graph, TriangleFree) {
  EXPECT_FALSE(is_triangle_free(GraphModel::complete(4)));
  EXPECT_TRUE(is_triangle_free(GraphModel::cycle(5)));
  EXPECT_TRUE(is_triangle_free(GraphModel::star(7)));
  EXPECT_FALSE(is_triangle_free(GraphModel::parse("triangle")));
}

TEST(Graph, Truncate) {
  auto seg = truncate(GraphModel::lattice(1), 2);
  EXPECT_EQ(seg.num_vertices(), 5u);
  EXPECT_EQ(seg.num_edges(), 4u);
  auto t = truncate(GraphModel::regular_tree(2), 1);
  EXPECT_EQ(t.num_vertices(), 3u);
  EXPECT_EQ(t.neighbors(t.root()).size(), 2u);
  auto k5 = truncate(GraphModel::complete(5), 1);
  EXPECT_EQ(k5.num_vertices(), 5u);
  EXPECT_EQ(k5.num_edges(), 10u);
}

TEST(Graph, TruncationsAreNested) {
  auto z2 = GraphModel::lattice(2);
  for (int n = 1; n < 5; ++n) {
    auto a = ids(truncate(z2, n).vertices());
    auto b = ids(truncate(z2, n + 1).vertices());
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST(Graph, NeighborsSymmetricAndBounded) {
  for (const char* spec : {"lattice:2", "tree:3", "cycle:7", "complete:4", "star:3", "segment:9"}) {
    auto g = GraphModel::parse(spec);
    std::vector<VertexId> frontier{g.root()};
    std::set<VertexId> seen{g.root()};
    for (int depth = 0; depth < 3; ++depth) {
      std::vector<VertexId> next;
      for (auto v : frontier) {
        auto nb = g.neighbors(v);
        EXPECT_LE(static_cast<int>(nb.size()), g.degree_bound()) << spec;
        for (auto u : nb) {
          auto back = g.neighbors(u);
          EXPECT_NE(std::find(back.begin(), back.end(), v), back.end()) << spec;
          if (seen.insert(u).second) next.push_back(u);
        }
      }
      frontier = next;
    }
  }
}

TEST(Graph, NeighborsAreDeterministic) {
  auto g = GraphModel::lattice(3);
  auto v = g.lattice_point({1, -2, 0});
  EXPECT_EQ(g.neighbors(v), g.neighbors(v));
}

TEST(Graph, ParseAndEdgeLists) {
  EXPECT_EQ(GraphModel::parse("triangle").num_edges(), 3u);
  EXPECT_EQ(GraphModel::parse("segment:11").num_vertices(), 11u);
  EXPECT_THROW(GraphModel::parse("segment:4"), Error);
  EXPECT_THROW(GraphModel::parse("nonsense"), Error);

  std::istringstream in("# square\n0 1\n1 2\n2 3\n3 0\n");
  auto g = load_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_TRUE(is_bipartite(g).bipartite);

  std::istringstream disconnected("0 1\n2 3\n");
  EXPECT_THROW(load_edge_list(disconnected), Error);
}

TEST(Graph, WithRoot) {
  auto g = GraphModel::path(3).with_root(VertexId{1});
  EXPECT_EQ(g.root().value, 1);
  EXPECT_EQ(g.distance(VertexId{0}), 1);
  EXPECT_EQ(g.distance(VertexId{2}), 1);
}
