#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "test_support.hpp"
#include "treecover/generators.hpp"
#include "treecover/graph.hpp"
#include "treecover/graph_algorithms.hpp"
#include "treecover/shortest_paths.hpp"

using namespace treecover;

namespace {

GraphErrorKind load_error(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const GraphError& e) {
    return e.kind();
  }
  FAIL("expected a graph error for: " << text);
  return GraphErrorKind::kEmpty;
}

WeightedGraph triangle() { return parse_graph("3 3\n0 1 1\n1 2 1\n0 2 1.9\n"); }

}  // namespace

TEST_SUITE("graph_core") {
  TEST_CASE("load reads a path and its total weight") {
    const WeightedGraph g = parse_graph("3 2\n0 1 1.0\n1 2 2.0");
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.total_weight() == 3.0);
  }

  TEST_CASE("load rejects each invalid input with its own error") {
    CHECK(load_error("2 1\n0 1 -1") == GraphErrorKind::kNonpositiveWeight);
    CHECK(load_error("2 1\n0 1 0") == GraphErrorKind::kNonpositiveWeight);
    CHECK(load_error("4 2\n0 1 1\n2 3 1") == GraphErrorKind::kDisconnected);
    CHECK(load_error("2 2\n0 1 1\n1 0 2") == GraphErrorKind::kDuplicateEdge);
    CHECK(load_error("2 1\n0 x 1") == GraphErrorKind::kMalformed);
    CHECK(load_error("2 1\n0 2 1") == GraphErrorKind::kVertexOutOfRange);
    CHECK(load_error("2 1\n1 1 1") == GraphErrorKind::kSelfLoop);
    CHECK(load_error("3 2\n0 1 1") == GraphErrorKind::kMalformed);
  }

  TEST_CASE("comments are skipped and the writer is canonical") {
    const WeightedGraph g = parse_graph("# a comment\n3 2\n2 1 0.5\n# more\n1 0 0.25\n");
    CHECK(format_graph(g) == "3 2\n0 1 0.25\n1 2 0.5\n");
    CHECK(format_graph(parse_graph(format_graph(g))) == format_graph(g));
  }

  TEST_CASE("dijkstra on small graphs") {
    const ShortestPathTree p = dijkstra(parse_graph("3 2\n0 1 1\n1 2 2\n"), 0);
    CHECK(p.dist == std::vector<double>{0, 1, 3});
    CHECK(dijkstra(triangle(), 0).dist[2] == 1.9);

    const WeightedGraph cycle = parse_graph("4 4\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n");
    const std::vector<Vertex> keep = {0, 1, 2};
    const ShortestPathTree r = dijkstra(cycle, 0, std::span<const Vertex>(keep));
    CHECK(r.dist[2] == 2);
    CHECK(r.dist[3] == kInfinity);
    CHECK_THROWS(dijkstra(cycle, 7));
  }

  TEST_CASE("dijkstra ties go to the smaller predecessor") {
    // Both 1 and 2 reach 3 at distance 2.
    const WeightedGraph g = parse_graph("4 4\n0 1 1\n0 2 1\n1 3 1\n2 3 1\n");
    CHECK(dijkstra(g, 0).parent[3] == 1);
  }

  TEST_CASE("dijkstra restricted to V equals the unrestricted run") {
    const WeightedGraph g = make_random_geometric(40, 2, 0, 7);
    std::vector<Vertex> all(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) all[v] = v;
    for (Vertex s = 0; s < g.num_vertices(); s += 7) {
      CHECK(dijkstra(g, s).dist == dijkstra(g, s, std::span<const Vertex>(all)).dist);
    }
  }

  TEST_CASE("apsp agrees with Floyd-Warshall") {
    CHECK(apsp(parse_graph("4 3\n0 1 1\n1 2 1\n2 3 1\n"))(0, 3) == 3);
    CHECK(apsp(WeightedGraph(1, {})).size() == 1);
    const DistanceMatrix grid = apsp(make_grid(5));
    CHECK(grid(0, 24) == 8);

    const WeightedGraph g = make_random_geometric(30, 2, 0, 3);
    const DistanceMatrix d = apsp(g);
    const auto ref = testing::floyd_warshall(g);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        CHECK(d(u, v) == doctest::Approx(ref[u][v]).epsilon(1e-12));
        CHECK(d(u, v) == d(v, u));
      }
    }
  }

  TEST_CASE("apsp honours the vertex cap") {
    setenv("TREECOVER_APSP_CAP", "10", 1);
    CHECK(apsp_cap() == 10);
    CHECK_THROWS(apsp(make_grid(4)));
    unsetenv("TREECOVER_APSP_CAP");
    CHECK(apsp_cap() == 2000);
  }

  TEST_CASE("mst weight") {
    CHECK(mst_weight(parse_graph("3 2\n0 1 1\n1 2 2\n")) == 3.0);
    CHECK(mst_weight(triangle()) == 2.0);
    CHECK(mst_weight(make_grid(4)) == 15.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const WeightedGraph g = make_random_geometric(7, 2, 0.8, seed);
      if (g.num_edges() > 20) continue;
      CHECK(mst_weight(g) == doctest::Approx(testing::brute_force_mst(g)).epsilon(1e-12));
    }
  }

  TEST_CASE("greedy spanner") {
    const WeightedGraph path = make_path(10, 3);
    CHECK(format_graph(greedy_spanner(path, 0.5)) == format_graph(path));
    CHECK(greedy_spanner(triangle(), 0.1).num_edges() == 2);
    CHECK(!greedy_spanner(triangle(), 0.1).find_edge(0, 2));
    CHECK(greedy_spanner(triangle(), 0.05).num_edges() == 3);

    for (double eps : {0.1, 0.25, 0.5}) {
      const WeightedGraph g = make_random_geometric(50, 2, 0, 11);
      const WeightedGraph h = greedy_spanner(g, eps);
      const auto dh = testing::floyd_warshall(h);
      for (const Edge& e : g.edges()) CHECK(dh[e.u][e.v] <= (1 + eps) * e.w + kTolerance);
      for (const Edge& e : h.edges()) CHECK(g.find_edge(e.u, e.v));
    }
  }

  TEST_CASE("greedy net") {
    const WeightedGraph p = parse_graph("3 2\n0 1 1\n1 2 1\n");
    const std::vector<Vertex> all = {0, 1, 2};
    CHECK(greedy_net(p, all, {}, 1.0) == std::vector<Vertex>{0, 2});
    CHECK(greedy_net(p, all, {}, 5.0) == std::vector<Vertex>{0});
    const std::vector<Vertex> base = {1};
    CHECK(greedy_net(p, all, base, 1.0) == std::vector<Vertex>{1});

    const WeightedGraph g = make_grid(6);
    std::vector<Vertex> vs(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) vs[v] = v;
    const double t = 2.5;
    const auto net = greedy_net(g, vs, {}, t);
    const auto d = testing::floyd_warshall(g);
    for (Vertex a : net) {
      for (Vertex b : net) {
        if (a != b) CHECK(d[a][b] > t);
      }
    }
    for (Vertex v : vs) {
      double nearest = kInfinity;
      for (Vertex a : net) nearest = std::min(nearest, d[v][a]);
      CHECK(nearest <= t);
    }
  }

  TEST_CASE("generators") {
    const WeightedGraph grid = make_grid(3);
    CHECK(grid.num_vertices() == 9);
    CHECK(grid.num_edges() == 12);
    CHECK(grid.total_weight() == 12);

    const WeightedGraph star = make_star_exponential(4);
    CHECK(star.num_edges() == 3);
    for (Vertex leaf = 1; leaf <= 3; ++leaf) {
      CHECK(star.edge(*star.find_edge(0, leaf)).w == std::ldexp(1.0, leaf - 1));
    }
    const WeightedGraph star5 = make_star_exponential(5);
    CHECK(star5.edge(*star5.find_edge(0, 4)).w == 8);

    const WeightedGraph line = make_uniform_line(8);
    CHECK(line.num_edges() == 7);
    CHECK(line.total_weight() == 7);
    CHECK(line.find_edge(3, 4));

    CHECK(format_graph(generate(GraphKind::kRandomGeometric, {64, 2, 0}, 5)) ==
          format_graph(generate(GraphKind::kRandomGeometric, {64, 2, 0}, 5)));
    CHECK(format_graph(generate(GraphKind::kPath, {16, 2, 0}, 1)) !=
          format_graph(generate(GraphKind::kPath, {16, 2, 0}, 2)));
    const WeightedGraph geo = make_random_geometric(64, 2, 0, 9);
    for (const Edge& e : geo.edges()) {
      const double scaled = e.w * 1024;
      CHECK(scaled == std::floor(scaled));
    }
    CHECK_THROWS(generate(GraphKind::kGrid, {0, 2, 0}, 1));
    CHECK(parse_graph_kind("star_exponential") == GraphKind::kStarExponential);
    CHECK_THROWS(parse_graph_kind("hypercube"));
  }

  TEST_CASE("scaling multiplies every weight") {
    const WeightedGraph g = make_path(6, 4);
    const WeightedGraph s = g.scaled(1.0 / g.min_weight());
    CHECK(s.min_weight() == 1.0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) CHECK(s.edge(e).u == g.edge(e).u);
  }
}
