#ifndef TREECOVER_GRAPH_ALGORITHMS_HPP_
#define TREECOVER_GRAPH_ALGORITHMS_HPP_

#include <span>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int components_;
};

// Kruskal with ties broken by edge id.
double mst_weight(const WeightedGraph& g);

// Greedy (1+eps)-spanner: edges in (weight, id) order, an edge is kept
// unless the spanner built so far already connects its endpoints within
// (1+eps) times its weight.
WeightedGraph greedy_spanner(const WeightedGraph& g, double eps);

// base ∪ candidates added greedily in increasing id order; a candidate
// joins iff its distance to every current member exceeds t.
std::vector<Vertex> greedy_net(const WeightedGraph& g, std::span<const Vertex> candidates,
                               std::span<const Vertex> base, double t);

// True iff the edge ids form a spanning tree of the vertex set.
bool is_spanning_tree(const WeightedGraph& g, std::span<const Vertex> vertices,
                      std::span<const EdgeId> edges);

}  // namespace treecover

#endif  // TREECOVER_GRAPH_ALGORITHMS_HPP_
