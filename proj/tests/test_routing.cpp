#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "test_support.hpp"
#include "treecover/generators.hpp"
#include "treecover/graph_algorithms.hpp"
#include "treecover/routing.hpp"
#include "treecover/tree_cover.hpp"

using namespace treecover;

namespace {

SpanningTree whole_tree(const WeightedGraph& g, Vertex root) {
  SpanningTree t;
  for (Vertex v = 0; v < g.num_vertices(); ++v) t.vertices.push_back(v);
  for (EdgeId e = 0; e < g.num_edges(); ++e) t.edges.push_back(e);
  t.root = root;
  return t;
}

WeightedGraph star_with_weights(int leaves) {
  std::vector<Edge> edges;
  for (int k = 1; k <= leaves; ++k) edges.push_back({0, k, static_cast<double>(k)});
  return WeightedGraph(leaves + 1, edges);
}

// Largest count of incident weights inside some window [w, 2w].
int recount_alpha(const WeightedGraph& g) {
  int best = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::vector<double> w;
    for (const Arc& a : g.neighbors(v)) w.push_back(a.w);
    for (double lo : w) {
      int count = 0;
      for (double x : w) count += (x >= lo && x <= 2 * lo) ? 1 : 0;
      best = std::max(best, count);
    }
  }
  return best;
}

// Parent pointers of a tree by walking from the root.
std::vector<Vertex> tree_parents(const WeightedGraph& g, const SpanningTree& t) {
  std::vector<std::vector<Vertex>> adj(g.num_vertices());
  for (EdgeId e : t.edges) {
    adj[g.edge(e).u].push_back(g.edge(e).v);
    adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  std::vector<Vertex> parent(g.num_vertices(), kNoVertex);
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<Vertex> todo = {t.root};
  seen[t.root] = 1;
  while (!todo.empty()) {
    const Vertex x = todo.back();
    todo.pop_back();
    for (Vertex y : adj[x]) {
      if (seen[y]) continue;
      seen[y] = 1;
      parent[y] = x;
      todo.push_back(y);
    }
  }
  return parent;
}

void check_trace(const WeightedGraph& g, const PortAssignment& ports, const RouteTrace& trace,
                 Vertex s, Vertex t) {
  REQUIRE(trace.terminated);
  CHECK(trace.error.empty());
  CHECK(trace.vertices.front() == s);
  CHECK(trace.vertices.back() == t);
  CHECK(trace.ports.size() + 1 == trace.vertices.size());
  CHECK(trace.hops == static_cast<int>(trace.ports.size()));
  double weight = 0;
  for (std::size_t k = 0; k + 1 < trace.vertices.size(); ++k) {
    const auto e = g.find_edge(trace.vertices[k], trace.vertices[k + 1]);
    REQUIRE(e);
    weight += g.edge(*e).w;
    CHECK(ports.port(trace.vertices[k], trace.vertices[k + 1]) == trace.ports[k]);
  }
  CHECK(trace.weight == doctest::Approx(weight).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("field widths") {
    CHECK(field_bits(1) == 1);
    CHECK(field_bits(2) == 2);
    CHECK(field_bits(3) == 4);
    CHECK(field_bits(64) == 12);
    CHECK(field_bits(100) == 14);
  }

  TEST_CASE("ports on a single edge") {
    const WeightedGraph g = parse_graph("2 1\n0 1 1\n");
    const PortAssignment ports = assign_ports(g, 3);
    CHECK(ports.bits() == field_bits(2));
    CHECK(ports.port(0, 1) < (Port{1} << ports.bits()));
    CHECK(ports.port(1, 0) < (Port{1} << ports.bits()));
    CHECK(ports.neighbor(0, ports.port(0, 1)) == 1);
    CHECK_THROWS(ports.port(0, 0));
  }

  TEST_CASE("ports are distinct per vertex, in range and deterministic") {
    const WeightedGraph g = make_random_geometric(80, 2, 0, 5);
    const PortAssignment a = assign_ports(g, 11);
    const PortAssignment b = assign_ports(g, 11);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      std::set<Port> seen;
      for (const Arc& arc : g.neighbors(u)) {
        const Port p = a.port(u, arc.to);
        CHECK(p < (Port{1} << a.bits()));
        CHECK(seen.insert(p).second);
        CHECK(a.neighbor(u, p) == arc.to);
        CHECK(b.port(u, arc.to) == p);
      }
    }
  }

  TEST_CASE("alpha and beta") {
    CHECK(measure_alpha(make_uniform_line(10)) == 2);
    const WeightedGraph star = greedy_spanner(make_star_exponential(8), 0.2);
    CHECK(measure_alpha(star) == recount_alpha(star));
    const WeightedGraph rg = greedy_spanner(make_random_geometric(60, 2, 0, 3), 0.25);
    CHECK(measure_alpha(rg) == recount_alpha(rg));
    CHECK(routing_beta(3, 0.25) == 2 * 2 * 3);
    CHECK(routing_beta(2, 0.1) == 2 * 4 * 2);
    CHECK(routing_beta(5, 0.9) == 2 * 1 * 5);
  }

  TEST_CASE("routing decisions for the basic cases") {
    RoutingTable table;
    table.own = {3, 7};
    table.parent_port = 99;
    table.parent = Interval{2, 9};
    table.children = {{{4, 5}, 7}, {{6, 7}, 8}};

    const RoutingDecision self = routing_decision(table, 3, std::nullopt);
    CHECK(self.done);
    CHECK(self.rule == RoutingCase::k0);

    const RoutingDecision up = routing_decision(table, 11, std::nullopt);
    CHECK(!up.done);
    CHECK(up.port == 99);
    CHECK(!up.header);
    CHECK(up.rule == RoutingCase::k2a);

    const RoutingDecision down = routing_decision(table, 5, std::nullopt);
    CHECK(down.port == 7);
    CHECK(!down.header);
    CHECK(down.rule == RoutingCase::k1a);
  }

  TEST_CASE("path rooted at an end stores one child and routes exactly") {
    const WeightedGraph g = make_path(16, 4);
    const PortAssignment ports = assign_ports(g, 1);
    const TreeRoutingState state = build_tree_routing(g, whole_tree(g, 0), g, ports, 0.25);
    for (Vertex v = 0; v < 16; ++v) {
      CHECK(state.table[v].children.size() == (v == 15 ? 0u : 1u));
      CHECK(state.table_fields(v) <= 8);
      CHECK(state.label[v] == v);
    }
    for (Vertex s = 0; s < 16; ++s) {
      for (Vertex t = 0; t < 16; ++t) {
        const RouteTrace r = simulate_route(g, ports, state, 0.25, s, t);
        check_trace(g, ports, r, s, t);
        CHECK(r.weight == r.tree_distance);
        if (s == t) CHECK(r.hops == 0);
      }
    }
  }

  TEST_CASE("DFS intervals, child order and the descendant test") {
    const WeightedGraph g = make_random_geometric(70, 2, 0, 17);
    const LightCover light = light_tree_cover(g, CoverConfig{});
    const PortAssignment ports = assign_ports(g, 2);
    for (const SpanningTree& tree : light.cover.trees) {
      const TreeRoutingState st = build_tree_routing(g, tree, light.spanner, ports, 0.25);
      const std::vector<Vertex> parent = tree_parents(g, tree);
      CHECK(st.label[tree.root] == 0);
      for (Vertex x = 0; x < 70; ++x) {
        const Interval own = st.table[x].own;
        CHECK(own.lo == st.label[x]);
        int next = own.lo + 1;
        double last = 0;
        for (Vertex c : st.children[x]) {
          CHECK(parent[c] == x);
          const double w = g.edge(*g.find_edge(x, c)).w;
          CHECK(w >= last);
          last = w;
          CHECK(st.table[c].own.lo == next);
          next = st.table[c].own.hi + 1;
        }
        CHECK(next == own.hi + 1);
        for (Vertex y = 0; y < 70; ++y) {
          bool ancestor = false;
          for (Vertex z = y; z != kNoVertex; z = parent[z]) ancestor = ancestor || z == x;
          CHECK(own.contains(st.label[y]) == ancestor);
        }
      }
    }
  }

  TEST_CASE("wide star: Item 2 keeps the beta lightest children") {
    const int alpha = 1;
    const int beta = routing_beta(alpha, 0.25);
    const WeightedGraph g = star_with_weights(2 * beta + 3);
    const PortAssignment ports = assign_ports(g, 9);
    const TreeRoutingState st = build_tree_routing(g, whole_tree(g, 0), g, ports, 0.25, alpha);
    CHECK(st.beta == beta);
    const auto& kids = st.table[0].children;
    REQUIRE(kids.size() == static_cast<std::size_t>(beta));
    for (int k = 0; k < beta; ++k) {
      const Vertex leaf = k + 1;
      CHECK(kids[k].port == ports.port(0, leaf));
      CHECK(kids[k].interval == st.table[leaf].own);
    }
    for (Vertex leaf = 1; leaf <= 2 * beta + 3; ++leaf) {
      CHECK(st.table[leaf].siblings.size() <= static_cast<std::size_t>(beta));
    }
  }

  TEST_CASE("wide star beyond beta children routes within 1+eps with the measured alpha") {
    const WeightedGraph g = make_star_exponential(20);
    const PortAssignment ports = assign_ports(g, 4);
    const TreeRoutingState st = build_tree_routing(g, whole_tree(g, 0), g, ports, 0.25);
    CHECK(st.alpha == recount_alpha(g));
    REQUIRE(g.degree(0) > st.beta);
    for (Vertex s = 0; s < g.num_vertices(); ++s) {
      for (Vertex t = 0; t < g.num_vertices(); ++t) {
        const RouteTrace r = simulate_route(g, ports, st, 0.25, s, t);
        check_trace(g, ports, r, s, t);
        CHECK(r.weight <= 1.25 * r.tree_distance + kTolerance);
        CHECK(r.within_bound);
        CHECK(r.max_header_bits <= static_cast<std::size_t>(field_bits(g.num_vertices())));
      }
    }
  }

  TEST_CASE("routes on light cover trees stay within 1+eps of the tree distance") {
    for (std::uint64_t seed : {1, 2}) {
      const WeightedGraph g = make_random_geometric(60, 2, 0, seed);
      const LightCover light = light_tree_cover(g, CoverConfig{});
      const RoutingScheme scheme = build_routing_scheme(g, light, seed);
      for (const TreeRoutingState& st : scheme.trees) {
        const auto dist = testing::tree_walk(g, light.cover.trees[&st - scheme.trees.data()].edges, 0);
        for (Vertex t = 0; t < 60; ++t) {
          const RouteTrace r = simulate_route(g, scheme.ports, st, scheme.epsilon, 0, t);
          check_trace(g, scheme.ports, r, 0, t);
          CHECK(r.tree_distance == doctest::Approx(dist[t]).epsilon(1e-12));
          CHECK(r.weight <= (1 + scheme.epsilon) * dist[t] + kTolerance);
        }
      }
    }
  }

  TEST_CASE("a chain of single clusters compresses to one node with one apex") {
    const WeightedGraph g(1, {});
    HPFamily hpf;
    hpf.hierarchies = {Hierarchy::from_labels(g, {{0}, {0}, {0}})};
    hpf.copies = {HierarchyCopy{0, 0, std::vector<std::optional<SubclusterPair>>(4)}};
    hpf.ell = 1;
    CHECK(subhierarchy_levels(3, 1) == std::vector<int>{3, 2, 1, 0});
    CHECK(subhierarchy_levels(5, 2) == std::vector<int>{5, 3, 1, 0});
    const CompressedSubhierarchy sub = compress_subhierarchy(hpf, 0, 3);
    CHECK(sub.nodes.size() == 1);
    CHECK(sub.nodes[0].leaves == 1);
  }

  TEST_CASE("selection labels agree with the brute force on small graphs") {
    for (const WeightedGraph& g :
         {make_grid(5), make_random_geometric(48, 2, 0, 6), make_uniform_line(20)}) {
      const int n = g.num_vertices();
      const LightCover light = light_tree_cover(g, CoverConfig{});
      const SelectionScheme sel = build_selection_labels(light.hpf, light.cover);
      for (Vertex x = 0; x < n; ++x) {
        std::size_t bits = 0;
        for (std::size_t k = 0; k < sel.labels[x].parts.size(); ++k) {
          const SubhierarchyLabel& part = sel.labels[x].parts[k];
          const int leaves = sel.subhierarchies[k].nodes[0].leaves;
          CHECK(part.apices.size() <= static_cast<std::size_t>(std::floor(std::log2(leaves))) + 1);
          for (const ApexRecord& a : part.apices) {
            CHECK(a.l1 >= 0);
            CHECK(a.l1 < (1 << sel.name_bits));
            for (int name : {a.l2, a.l3a, a.l3b}) {
              CHECK(name >= -1);
              CHECK(name < (1 << sel.name_bits));
            }
            CHECK(a.interval.contains(part.leaf));
          }
          bits += sel.field_bits + part.apices.size() * (2 * sel.field_bits + 4 * sel.name_bits);
        }
        CHECK(sel.label_bits(x) == bits);
        for (Vertex y = 0; y < n; ++y) {
          if (x == y) continue;
          CHECK(select_tree(sel.labels[x], sel.labels[y]) ==
                select_tree_brute_force(light.hpf, light.cover, x, y));
        }
      }
      CHECK_THROWS(select_tree(sel.labels[0], sel.labels[0]));
    }
  }

  TEST_CASE("8x8 grid: the selected tree meets the pair bound") {
    const WeightedGraph g = make_grid(8);
    const LightCover light = light_tree_cover(g, CoverConfig{});
    const RoutingScheme scheme = build_routing_scheme(g, light, 5);
    const auto d = testing::floyd_warshall(g);
    std::map<std::pair<Vertex, Vertex>, double> rho;
    for (const PreservedPair& p : light.cover.pairs.preserved) rho[{p.u, p.v}] = p.rho_eff;
    for (Vertex x = 0; x < 64; ++x) {
      for (Vertex y = x + 1; y < 64; ++y) {
        const auto k = select_tree(scheme.selection.labels[x], scheme.selection.labels[y]);
        REQUIRE(k);
        const std::size_t tree = scheme.selection.subhierarchies[*k].tree;
        const double dt = testing::tree_walk(g, light.cover.trees[tree].edges, x)[y];
        CHECK(dt <= (1 + 44 * rho.at({x, y}) * 0.25) * d[x][y] + kTolerance);
      }
    }
  }

  TEST_CASE("end to end routes") {
    const WeightedGraph path = make_path(12, 2);
    const LightCover pl = light_tree_cover(path, CoverConfig{});
    const RoutingScheme ps = build_routing_scheme(path, pl, 1);
    const EndToEndRoute same = route_end_to_end(path, ps, 4, 4);
    CHECK(same.trace.terminated);
    CHECK(same.trace.weight == 0);
    const auto dp = testing::floyd_warshall(path);
    for (Vertex s = 0; s < 12; ++s) {
      for (Vertex t = 0; t < 12; ++t) {
        const EndToEndRoute r = route_end_to_end(path, ps, s, t);
        REQUIRE(r.selected);
        CHECK(r.trace.weight == doctest::Approx(dp[s][t]).epsilon(1e-12));
      }
    }

    const WeightedGraph g = make_grid(6);
    const LightCover light = light_tree_cover(g, CoverConfig{});
    const RoutingScheme scheme = build_routing_scheme(g, light, 3);
    for (Vertex s = 0; s < 36; ++s) {
      for (Vertex t = 0; t < 36; ++t) {
        const EndToEndRoute r = route_end_to_end(g, scheme, s, t);
        REQUIRE(r.selected);
        check_trace(g, scheme.ports, r.trace, s, t);
        CHECK(r.trace.within_bound);
      }
    }
    const SchemeSizes sizes = measure_sizes(scheme, 36);
    CHECK(sizes.header_bits == static_cast<std::size_t>(std::ceil(2 * std::log2(36))));
    CHECK(sizes.label_bits_max > 0);
    CHECK(sizes.table_bits_max > 0);
  }
}
