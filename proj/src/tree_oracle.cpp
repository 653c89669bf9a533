#include "treecover/tree_oracle.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace treecover {

TreeOracle::TreeOracle(const WeightedGraph& g, std::span<const EdgeId> edges, Vertex root)
    : root_(root) {
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
  for (EdgeId e : edges) {
    const Edge& edge = g.edge(e);
    adj[edge.u].push_back({edge.v, edge.w});
    adj[edge.v].push_back({edge.u, edge.w});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  parent_.assign(n, kNoVertex);
  depth_.assign(n, -1);
  wdepth_.assign(n, 0.0);
  first_.assign(n, -1);
  euler_.reserve(2 * n);

  std::vector<Vertex> stack = {root};
  depth_[root] = 0;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (auto [y, w] : adj[x]) {
      if (depth_[y] != -1) continue;
      parent_[y] = x;
      depth_[y] = depth_[x] + 1;
      wdepth_[y] = wdepth_[x] + w;
      stack.push_back(y);
    }
  }
  std::vector<std::vector<Vertex>> children(n);
  for (Vertex v = 0; v < n; ++v) {
    if (parent_[v] != kNoVertex) children[parent_[v]].push_back(v);
  }
  std::vector<std::pair<Vertex, std::size_t>> walk = {{root, 0}};
  first_[root] = 0;
  euler_.push_back(root);
  while (!walk.empty()) {
    auto& [x, next] = walk.back();
    if (next < children[x].size()) {
      const Vertex y = children[x][next++];
      first_[y] = static_cast<int>(euler_.size());
      euler_.push_back(y);
      walk.push_back({y, 0});
    } else {
      walk.pop_back();
      if (!walk.empty()) euler_.push_back(walk.back().first);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (first_[v] < 0) {
      throw std::invalid_argument("tree does not reach vertex " + std::to_string(v));
    }
  }

  const int m = static_cast<int>(euler_.size());
  table_.push_back(std::vector<int>(m));
  for (int k = 0; k < m; ++k) table_[0][k] = k;
  for (int j = 1; (1 << j) <= m; ++j) {
    const auto& prev = table_[j - 1];
    std::vector<int> row(m - (1 << j) + 1);
    for (int k = 0; k + (1 << j) <= m; ++k) {
      const int a = prev[k];
      const int b = prev[k + (1 << (j - 1))];
      row[k] = depth_[euler_[a]] <= depth_[euler_[b]] ? a : b;
    }
    table_.push_back(std::move(row));
  }
}

Vertex TreeOracle::lca(Vertex u, Vertex v) const {
  int a = first_[u];
  int b = first_[v];
  if (a > b) std::swap(a, b);
  const int j = std::bit_width(static_cast<unsigned>(b - a + 1)) - 1;
  const int x = table_[j][a];
  const int y = table_[j][b - (1 << j) + 1];
  return depth_[euler_[x]] <= depth_[euler_[y]] ? euler_[x] : euler_[y];
}

double TreeOracle::distance(Vertex u, Vertex v) const {
  if (u == v) return 0.0;
  const Vertex l = lca(u, v);
  return (wdepth_[u] - wdepth_[l]) + (wdepth_[v] - wdepth_[l]);
}

std::vector<Vertex> TreeOracle::path(Vertex u, Vertex v) const {
  const Vertex l = lca(u, v);
  std::vector<Vertex> up;
  for (Vertex x = u; x != l; x = parent_[x]) up.push_back(x);
  up.push_back(l);
  std::vector<Vertex> down;
  for (Vertex x = v; x != l; x = parent_[x]) down.push_back(x);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

}  // namespace treecover
