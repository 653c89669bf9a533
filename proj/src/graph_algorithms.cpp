#include "treecover/graph_algorithms.hpp"

#include <algorithm>
#include <numeric>

#include "treecover/shortest_paths.hpp"

namespace treecover {

UnionFind::UnionFind(int n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

namespace {

std::vector<EdgeId> edges_by_weight(const WeightedGraph& g) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](EdgeId a, EdgeId b) { return g.edge(a).w < g.edge(b).w; });
  return order;
}

}  // namespace

double mst_weight(const WeightedGraph& g) {
  UnionFind uf(g.num_vertices());
  double total = 0.0;
  for (EdgeId e : edges_by_weight(g)) {
    const Edge& edge = g.edge(e);
    if (uf.unite(edge.u, edge.v)) total += edge.w;
  }
  return total;
}

WeightedGraph greedy_spanner(const WeightedGraph& g, double eps) {
  PathSearch search(g);
  search.restrict_to({});
  std::vector<char> target(g.num_vertices(), 0);
  std::vector<char> keep(g.num_edges(), 0);
  for (EdgeId e : edges_by_weight(g)) {
    const Edge& edge = g.edge(e);
    const double budget = (1.0 + eps) * edge.w;
    target[edge.v] = 1;
    search.run_from(edge.u, budget, &target);
    target[edge.v] = 0;
    if (search.dist(edge.v) > budget + kTolerance) {
      keep[e] = 1;
      search.allow_edge(e);
    }
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (keep[e]) edges.push_back(g.edge(e));
  }
  return WeightedGraph(g.num_vertices(), std::move(edges));
}

std::vector<Vertex> greedy_net(const WeightedGraph& g, std::span<const Vertex> candidates,
                               std::span<const Vertex> base, double t) {
  PathSearch search(g);
  std::vector<char> covered(g.num_vertices(), 0);
  std::vector<char> member(g.num_vertices(), 0);
  std::vector<Vertex> result;
  auto add = [&](Vertex p) {
    member[p] = 1;
    result.push_back(p);
    search.run_from(p, t);
    for (Vertex v : search.settled()) covered[v] = 1;
  };
  for (Vertex p : base) {
    if (!member[p]) add(p);
  }
  std::vector<Vertex> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end());
  for (Vertex c : order) {
    if (!covered[c] && !member[c]) add(c);
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool is_spanning_tree(const WeightedGraph& g, std::span<const Vertex> vertices,
                      std::span<const EdgeId> edges) {
  if (vertices.empty()) return false;
  if (edges.size() + 1 != vertices.size()) return false;
  std::vector<int> local(g.num_vertices(), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (local[vertices[k]] != -1) return false;
    local[vertices[k]] = static_cast<int>(k);
  }
  UnionFind uf(static_cast<int>(vertices.size()));
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.num_edges()) return false;
    const Edge& edge = g.edge(e);
    if (local[edge.u] < 0 || local[edge.v] < 0) return false;
    if (!uf.unite(local[edge.u], local[edge.v])) return false;
  }
  return uf.components() == 1;
}

}  // namespace treecover
