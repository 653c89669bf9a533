#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "treecover/generators.hpp"
#include "treecover/oracle.hpp"
#include "treecover/shortest_paths.hpp"
#include "treecover/tree_cover.hpp"
#include "treecover/tree_oracle.hpp"

using namespace treecover;

namespace {

double walk_weight(const WeightedGraph& g, const std::vector<Vertex>& path) {
  double w = 0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const auto e = g.find_edge(path[k], path[k + 1]);
    REQUIRE(e);
    w += g.edge(*e).w;
  }
  return w;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("tree oracle on a path equals path sums") {
    const WeightedGraph g = make_path(20, 7);
    std::vector<EdgeId> edges(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) edges[e] = e;
    const TreeOracle t(g, edges, 0);
    const auto d = testing::floyd_warshall(g);
    for (Vertex u = 0; u < 20; ++u) {
      CHECK(t.lca(u, u) == u);
      for (Vertex v = 0; v < 20; ++v) {
        CHECK(t.distance(u, v) == doctest::Approx(d[u][v]).epsilon(1e-12));
        CHECK(t.lca(u, v) == std::min(u, v));
      }
    }
  }

  TEST_CASE("tree oracle distances match a walk over the tree for seeded pairs") {
    const WeightedGraph g = make_random_geometric(90, 2, 0, 12);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    std::mt19937_64 rng(2024);
    for (const SpanningTree& tree : cover.trees) {
      const TreeOracle t(g, tree.edges, tree.root);
      for (Vertex u = 0; u < 90; ++u) CHECK(t.lca(u, u) == u);
      for (int k = 0; k < 100; ++k) {
        const Vertex u = static_cast<Vertex>(rng() % 90);
        const Vertex v = static_cast<Vertex>(rng() % 90);
        const auto dist = testing::tree_walk(g, tree.edges, u);
        CHECK(t.distance(u, v) == doctest::Approx(dist[v]).epsilon(1e-12));
        const auto path = t.path(u, v);
        CHECK(path.front() == u);
        CHECK(path.back() == v);
        CHECK(walk_weight(g, path) == doctest::Approx(dist[v]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("a tree input gives exact distances") {
    const WeightedGraph g = make_path(15, 3);
    const OracleIndex oracle = build_oracle(g, span_tree_cover(g, CoverConfig{}));
    const auto d = testing::floyd_warshall(g);
    for (Vertex u = 0; u < 15; ++u) {
      for (Vertex v = 0; v < 15; ++v) {
        CHECK(query_distance(oracle, u, v).estimate == doctest::Approx(d[u][v]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("estimates never undercut the graph distance and paths match estimates") {
    const WeightedGraph g = make_random_geometric(128, 2, 0, 31);
    const OracleIndex oracle = build_oracle(g, span_tree_cover(g, CoverConfig{}));
    const auto d = testing::floyd_warshall(g);
    for (Vertex u = 0; u < 128; ++u) {
      for (Vertex v = 0; v < 128; ++v) {
        const DistanceEstimate est = query_distance(oracle, u, v);
        CHECK(est.estimate >= d[u][v] - kTolerance);
        if ((u * 7 + v) % 11 != 0) continue;
        const PathAnswer ans = query_path(oracle, u, v);
        CHECK(ans.path.front() == u);
        CHECK(ans.path.back() == v);
        CHECK(ans.distance.tree == est.tree);
        CHECK(walk_weight(g, ans.path) == doctest::Approx(est.estimate).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("adjacent vertices whose edge is in the chosen tree get that edge") {
    const WeightedGraph g = make_grid(5);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    const OracleIndex oracle = build_oracle(g, cover);
    int seen = 0;
    for (const Edge& e : g.edges()) {
      const PathAnswer ans = query_path(oracle, e.u, e.v);
      const auto& tree = cover.trees[ans.distance.tree].edges;
      if (std::binary_search(tree.begin(), tree.end(), *g.find_edge(e.u, e.v))) {
        CHECK(ans.path == std::vector<Vertex>{e.u, e.v});
        ++seen;
      }
    }
    CHECK(seen > 0);
  }

  TEST_CASE("8x8 grid: largest estimate ratio equals the cover stretch") {
    const WeightedGraph g = make_grid(8);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    const OracleIndex oracle = build_oracle(g, cover);
    const DistanceMatrix d = apsp(g);
    double worst = 1.0;
    for (Vertex u = 0; u < 64; ++u) {
      for (Vertex v = u + 1; v < 64; ++v) {
        worst = std::max(worst, query_distance(oracle, u, v).estimate / d(u, v));
      }
    }
    CHECK(std::abs(worst - cover_stretch(g, cover).max) <= 1e-9);
  }

  TEST_CASE("query cost counts one evaluation per tree") {
    const WeightedGraph g = make_grid(4);
    const OracleIndex oracle = build_oracle(g, span_tree_cover(g, CoverConfig{}));
    oracle.trees_scanned = 0;
    query_distance(oracle, 0, 15);
    CHECK(oracle.trees_scanned == oracle.trees.size());
    CHECK(query_distance(oracle, 3, 3).estimate == 0);
  }
}
