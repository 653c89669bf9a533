#ifndef TREECOVER_TESTS_TEST_SUPPORT_HPP_
#define TREECOVER_TESTS_TEST_SUPPORT_HPP_

// Independent reference computations for the unit tests. None of these
// reuse library search code.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover::testing {

inline std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g) {
  const int n = g.num_vertices();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const Edge& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.w);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.w);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

// Floyd-Warshall restricted to the subgraph induced by `members`.
inline std::vector<std::vector<double>> induced_distances(const WeightedGraph& g,
                                                          const std::vector<Vertex>& members) {
  std::vector<Edge> edges;
  std::vector<int> local(g.num_vertices(), -1);
  for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = static_cast<int>(k);
  const int n = static_cast<int>(members.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const Edge& e : g.edges()) {
    if (local[e.u] < 0 || local[e.v] < 0) continue;
    d[local[e.u]][local[e.v]] = std::min(d[local[e.u]][local[e.v]], e.w);
    d[local[e.v]][local[e.u]] = std::min(d[local[e.v]][local[e.u]], e.w);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

// Distances from `source` in the tree given by edge ids, by plain
// recursion-free walk over an adjacency list.
inline std::vector<double> tree_walk(const WeightedGraph& g, std::span<const EdgeId> edges,
                                     Vertex source) {
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
  for (EdgeId e : edges) {
    adj[g.edge(e).u].push_back({g.edge(e).v, g.edge(e).w});
    adj[g.edge(e).v].push_back({g.edge(e).u, g.edge(e).w});
  }
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<Vertex> todo = {source};
  dist[source] = 0;
  while (!todo.empty()) {
    const Vertex x = todo.back();
    todo.pop_back();
    for (auto [y, w] : adj[x]) {
      if (dist[y] != std::numeric_limits<double>::infinity()) continue;
      dist[y] = dist[x] + w;
      todo.push_back(y);
    }
  }
  return dist;
}

// Minimum spanning tree weight by trying every (n-1)-subset of edges.
inline double brute_force_mst(const WeightedGraph& g) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    if (__builtin_popcount(mask) != n - 1) continue;
    std::vector<int> comp(n);
    for (int v = 0; v < n; ++v) comp[v] = v;
    double w = 0;
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask & (1U << e))) continue;
      const int a = comp[g.edge(e).u];
      const int b = comp[g.edge(e).v];
      if (a == b) {
        acyclic = false;
        break;
      }
      for (int& c : comp) {
        if (c == b) c = a;
      }
      w += g.edge(e).w;
    }
    if (acyclic) best = std::min(best, w);
  }
  return best;
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("treecover_test_" + name)).string();
}

}  // namespace treecover::testing

#endif  // TREECOVER_TESTS_TEST_SUPPORT_HPP_
