#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"
#include "treecover/cover_io.hpp"
#include "treecover/generators.hpp"
#include "treecover/graph_algorithms.hpp"
#include "treecover/hpf.hpp"
#include "treecover/tree_cover.hpp"

using namespace treecover;

namespace {

// A family holding one hand-made hierarchy and one copy without pairs.
HPFamily single_copy(const Hierarchy& h, double mu = 6, double eps = 0.25) {
  HPFamily hpf;
  hpf.params.mu = mu;
  hpf.hierarchies = {h};
  hpf.copies = {HierarchyCopy{0, 0, std::vector<std::optional<SubclusterPair>>(h.num_clusters())}};
  hpf.ell = 1;
  hpf.epsilon = eps;
  return hpf;
}

std::vector<EdgeId> all_edges(const WeightedGraph& g) {
  std::vector<EdgeId> e(g.num_edges());
  for (EdgeId k = 0; k < g.num_edges(); ++k) e[k] = k;
  return e;
}

double best_tree_distance(const WeightedGraph& g, const TreeCover& cover, Vertex u, Vertex v) {
  double best = kInfinity;
  for (const SpanningTree& t : cover.trees) best = std::min(best, testing::tree_walk(g, t.edges, u)[v]);
  return best;
}

}  // namespace

TEST_SUITE("treecover") {
  TEST_CASE("path preserving tree on a single vertex") {
    const WeightedGraph g(1, {});
    const HPFamily hpf = single_copy(Hierarchy::from_labels(g, {{0}}));
    const SpanningTree t = path_preserving_tree(g, hpf, 0, hpf.hierarchies[0].root(), {0});
    CHECK(t.vertices == std::vector<Vertex>{0});
    CHECK(t.edges.empty());
  }

  TEST_CASE("path preserving tree on a path is the path") {
    const WeightedGraph g = make_uniform_line(4);
    const HPFamily hpf = single_copy(Hierarchy::from_labels(g, {{0, 0, 0, 0}}));
    const SpanningTree t = path_preserving_tree(g, hpf, 0, hpf.hierarchies[0].root(), {0});
    CHECK(t.edges == all_edges(g));
    CHECK(t.root == 0);
  }

  TEST_CASE("every recursion node returns a spanning tree of its cluster and path") {
    const WeightedGraph g = make_grid(6);
    CoverConfig config;
    const CoverBuild build = build_tree_cover(g, config);
    for (std::size_t copy = 0; copy < build.hpf.copies.size(); ++copy) {
      const Hierarchy& h = build.hpf.hierarchies[build.hpf.copies[copy].hierarchy];
      int nodes = 0;
      NodeCheckSummary checks;
      const NodeObserver observer = [&](ClusterId c, const std::vector<Vertex>& pi,
                                        const SpanningTree& result) {
        ++nodes;
        std::vector<Vertex> expected = h.cluster(c).members;
        expected.insert(expected.end(), pi.begin(), pi.end());
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        CHECK(result.vertices == expected);
        CHECK(result.edges.size() + 1 == result.vertices.size());
        const auto dist = testing::tree_walk(g, result.edges, expected.front());
        for (Vertex v : expected) CHECK(dist[v] < kInfinity);
        for (std::size_t k = 0; k + 1 < pi.size(); ++k) {
          const EdgeId e = *g.find_edge(pi[k], pi[k + 1]);
          CHECK(std::binary_search(result.edges.begin(), result.edges.end(), e));
        }
      };
      const SpanningTree t = path_preserving_tree(g, build.hpf, copy, h.root(), {}, &checks, observer);
      CHECK(nodes == static_cast<int>(h.num_clusters()));
      CHECK(checks.failures == 0);
      CHECK(checks.max_diameter_ratio > 0);
      CHECK(checks.max_same_cluster_ratio <= 21 + 1e-9);
      CHECK(t.vertices.size() == 36);
    }
  }

  TEST_CASE("a tree input gives back the tree in every cover tree") {
    const WeightedGraph g = make_path(12, 5);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    REQUIRE(!cover.trees.empty());
    for (const SpanningTree& t : cover.trees) CHECK(t.edges == all_edges(g));
    CHECK(cover_stretch(g, cover).max == 1.0);
  }

  TEST_CASE("tree count is ell times the number of copies") {
    const WeightedGraph g = make_grid(5);
    for (double eps : {0.25, 0.1, 0.02}) {
      CoverConfig config;
      config.epsilon = eps;
      const CoverBuild build = build_tree_cover(g, config);
      CHECK(build.cover.ell == offset_levels(6, eps));
      CHECK(build.cover.trees.size() ==
            static_cast<std::size_t>(build.cover.ell) * build.hpf.copies.size());
    }
  }

  TEST_CASE("8x8 grid: every pair meets its additive bound in some tree") {
    const WeightedGraph g = make_grid(8);
    CoverConfig config;
    const TreeCover cover = span_tree_cover(g, config);
    const auto d = testing::floyd_warshall(g);
    CHECK(cover.pairs.unresolved.empty());
    CHECK(cover.pairs.preserved.size() == 64 * 63 / 2);
    for (const PreservedPair& p : cover.pairs.preserved) {
      CHECK(p.distance == d[p.u][p.v]);
      const double dt = best_tree_distance(g, cover, p.u, p.v);
      CHECK(dt <= (1 + 44 * p.rho_eff * config.epsilon) * p.distance + kTolerance);
      CHECK(dt >= p.distance - kTolerance);
    }
    const PairBoundReport bounds = verify_pair_bounds(g, cover);
    CHECK(bounds.violations.empty());
    CHECK(bounds.checked == cover.pairs.preserved.size());
    CHECK(bounds.max_excess_ratio <= 44);
  }

  TEST_CASE("cover stretch matches a direct computation") {
    const WeightedGraph g = make_random_geometric(40, 2, 0, 2);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    const StretchReport report = cover_stretch(g, cover);
    const auto d = testing::floyd_warshall(g);
    double worst = 1.0;
    for (const PairStretch& p : report.pairs) {
      CHECK(p.stretch >= 1 - 1e-9);
      CHECK(p.distance == doctest::Approx(d[p.u][p.v]).epsilon(1e-12));
      const double dt = best_tree_distance(g, cover, p.u, p.v);
      CHECK(p.tree_distance == doctest::Approx(dt).epsilon(1e-12));
      worst = std::max(worst, dt / d[p.u][p.v]);
    }
    CHECK(report.pairs.size() == 40 * 39 / 2);
    CHECK(report.max == doctest::Approx(worst).epsilon(1e-12));
  }

  TEST_CASE("light cover lightness") {
    const WeightedGraph path = make_path(20, 3);
    const LightCover pl = light_tree_cover(path, CoverConfig{});
    CHECK(pl.individual_lightness == 1.0);

    const LightCover line = light_tree_cover(make_uniform_line(64), CoverConfig{});
    CHECK(line.individual_lightness == 1.0);

    const WeightedGraph g = make_random_geometric(60, 2, 0, 8);
    const LightCover lc = light_tree_cover(g, CoverConfig{});
    CHECK(lc.mst == mst_weight(g));
    CHECK(lc.spanner_lightness == doctest::Approx(lc.spanner.total_weight() / lc.mst));
    for (const SpanningTree& t : lc.cover.trees) {
      CHECK(tree_weight(g, t) <= lc.spanner.total_weight() + kTolerance);
      for (EdgeId e : t.edges) CHECK(lc.spanner.find_edge(g.edge(e).u, g.edge(e).v));
    }
    CHECK(lc.individual_lightness <= lc.spanner_lightness + kTolerance);
    CHECK(verify_spanning(g, lc.cover).ok);
  }

  TEST_CASE("verify_spanning accepts produced covers and rejects mutations") {
    const WeightedGraph g = make_grid(4);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    CHECK(verify_spanning(g, cover).ok);

    CoverFile file = make_cover_file(g, cover, CoverVariant::kSpanner, "all", 42);
    file.trees[0].edges[0] = {0, 15};
    std::vector<std::string> problems;
    const TreeCover mutated = cover_from_file(g, file, problems);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("0-15") != std::string::npos);
    CHECK(!verify_spanning(g, mutated).ok);

    TreeCover cyclic = cover;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!std::binary_search(cyclic.trees[0].edges.begin(), cyclic.trees[0].edges.end(), e)) {
        cyclic.trees[0].edges.push_back(e);
        break;
      }
    }
    const SpanningReport r = verify_spanning(g, cyclic);
    CHECK(!r.ok);
    CHECK(!r.problems.empty());
  }

  TEST_CASE("no tree underestimates a distance") {
    const WeightedGraph g = make_random_geometric(48, 2, 0, 13);
    const TreeCover cover = span_tree_cover(g, CoverConfig{});
    const LowerBoundReport r = verify_lower_bound(g, cover);
    CHECK(r.violations.empty());
    CHECK(r.checked == cover.trees.size() * 48 * 47 / 2);
  }

  TEST_CASE("covers are deterministic") {
    const WeightedGraph g = make_random_geometric(40, 2, 0, 21);
    const TreeCover a = span_tree_cover(g, CoverConfig{});
    const TreeCover b = span_tree_cover(g, CoverConfig{});
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t k = 0; k < a.trees.size(); ++k) CHECK(a.trees[k].edges == b.trees[k].edges);
  }

  TEST_CASE("demanded pairs restrict the preserved set") {
    const WeightedGraph g = make_grid(5);
    CoverConfig config;
    config.demanded_pairs = {{0, 24}, {3, 17}};
    const TreeCover cover = span_tree_cover(g, config);
    CHECK(cover.pairs.preserved.size() == 2);
    CHECK(verify_pair_bounds(g, cover).violations.empty());
  }

  TEST_CASE("epsilon outside (0,1) is rejected") {
    CoverConfig config;
    config.epsilon = 1.5;
    CHECK_THROWS(span_tree_cover(make_grid(3), config));
  }
}
