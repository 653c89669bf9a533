#ifndef TREECOVER_ORACLE_HPP_
#define TREECOVER_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "treecover/graph.hpp"
#include "treecover/tree_cover.hpp"
#include "treecover/tree_oracle.hpp"

namespace treecover {

// Path-reporting distance oracle: the minimum over the cover's trees.
struct OracleIndex {
  std::vector<TreeOracle> trees;
  CoverConfig config;
  // Tree distances evaluated so far, for query-cost accounting.
  mutable std::uint64_t trees_scanned = 0;
};

OracleIndex build_oracle(const WeightedGraph& g, const TreeCover& cover);

struct DistanceEstimate {
  double estimate = 0;
  std::int32_t tree = 0;  // argmin, smallest index on ties
};

DistanceEstimate query_distance(const OracleIndex& oracle, Vertex u, Vertex v);

struct PathAnswer {
  DistanceEstimate distance;
  std::vector<Vertex> path;
};

// The u-v path in the argmin tree; every step is an edge of g.
PathAnswer query_path(const OracleIndex& oracle, Vertex u, Vertex v);

}  // namespace treecover

#endif  // TREECOVER_ORACLE_HPP_
