#include "treecover/oracle.hpp"

namespace treecover {

OracleIndex build_oracle(const WeightedGraph& g, const TreeCover& cover) {
  OracleIndex index;
  index.config = cover.config;
  index.trees.reserve(cover.trees.size());
  for (const SpanningTree& t : cover.trees) index.trees.emplace_back(g, t.edges, t.root);
  return index;
}

DistanceEstimate query_distance(const OracleIndex& oracle, Vertex u, Vertex v) {
  DistanceEstimate best;
  if (u == v) return best;
  best.estimate = kInfinity;
  for (std::size_t t = 0; t < oracle.trees.size(); ++t) {
    ++oracle.trees_scanned;
    const double d = oracle.trees[t].distance(u, v);
    if (d < best.estimate) {
      best.estimate = d;
      best.tree = static_cast<std::int32_t>(t);
    }
  }
  return best;
}

PathAnswer query_path(const OracleIndex& oracle, Vertex u, Vertex v) {
  PathAnswer answer;
  answer.distance = query_distance(oracle, u, v);
  if (u == v) {
    answer.path = {u};
    return answer;
  }
  answer.path = oracle.trees[answer.distance.tree].path(u, v);
  return answer;
}

}  // namespace treecover
