#ifndef TREECOVER_TREE_ORACLE_HPP_
#define TREECOVER_TREE_ORACLE_HPP_

#include <span>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

// Exact distances in a spanning tree: Euler tour plus a sparse table for
// range-minimum LCA queries.
class TreeOracle {
 public:
  TreeOracle() = default;
  TreeOracle(const WeightedGraph& g, std::span<const EdgeId> edges, Vertex root);

  Vertex root() const { return root_; }
  Vertex lca(Vertex u, Vertex v) const;
  double distance(Vertex u, Vertex v) const;
  double wdepth(Vertex v) const { return wdepth_[v]; }
  int depth(Vertex v) const { return depth_[v]; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  // Vertices from u to v along the tree.
  std::vector<Vertex> path(Vertex u, Vertex v) const;

 private:
  Vertex root_ = kNoVertex;
  std::vector<Vertex> parent_;
  std::vector<int> depth_;
  std::vector<double> wdepth_;
  std::vector<Vertex> euler_;
  std::vector<int> first_;
  std::vector<std::vector<int>> table_;  // indices into euler_ of min depth
};

}  // namespace treecover

#endif  // TREECOVER_TREE_ORACLE_HPP_
