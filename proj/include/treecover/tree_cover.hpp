#ifndef TREECOVER_TREE_COVER_HPP_
#define TREECOVER_TREE_COVER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treecover/graph.hpp"
#include "treecover/hpf.hpp"
#include "treecover/preservable.hpp"

namespace treecover {

struct TreeProvenance {
  std::int32_t copy = 0;       // index into HPFamily::copies
  std::int32_t hierarchy = 0;  // base hierarchy of that copy
  int offset = 0;              // level j of the whole-graph cluster the build started from
};

struct SpanningTree {
  std::vector<Vertex> vertices;  // sorted
  std::vector<EdgeId> edges;     // sorted graph edge ids
  Vertex root = kNoVertex;
  TreeProvenance provenance;
};

struct CoverConfig {
  double epsilon = 0.25;
  double mu = 6.0;
  double eta = 1.0;
  double rho = 24.0;
  PairMode mode = PairMode::kDemand;
  // Empty means every pair of vertices.
  std::vector<std::pair<Vertex, Vertex>> demanded_pairs;
  // Run the preservable-set checks at every recursion node.
  bool check_nodes = false;
};

// Aggregated results of the per-node preservable checks.
struct NodeCheckSummary {
  std::size_t nodes = 0;
  std::size_t failures = 0;
  double max_same_cluster_ratio = 0;
  double max_pair_excess_ratio = 0;
  double max_diameter_ratio = 0;  // d_H / mu^i, bounded by 10 under theory parameters
  std::size_t diameter_violations = 0;
  std::vector<std::string> problems;  // first few only
  void absorb(const PreservableCheck& check);
};

struct TreeCover {
  std::vector<SpanningTree> trees;
  CoverConfig config;
  int ell = 1;
  PairReport pairs;
  NodeCheckSummary node_checks;
  bool built_on_spanner = false;
};

// Observer invoked for every recursion node (cluster, the path it was
// asked to contain, and the tree it returned).
using NodeObserver = std::function<void(ClusterId, const std::vector<Vertex>& pi,
                                        const SpanningTree& result)>;

// Builds a spanning tree of G[cluster] ∪ pi containing pi. `g` must be
// the graph the hierarchy was built on.
SpanningTree path_preserving_tree(const WeightedGraph& g, const HPFamily& hpf,
                                  std::size_t copy, ClusterId cluster,
                                  const std::vector<Vertex>& pi,
                                  NodeCheckSummary* checks = nullptr,
                                  const NodeObserver& observer = nullptr);

// The pair-preserving family and the trees built from it. The family is
// returned too so that routing can derive its selection labels.
struct CoverBuild {
  HPFamily hpf;
  TreeCover cover;
};

CoverBuild build_tree_cover(const WeightedGraph& g, const CoverConfig& config);
TreeCover span_tree_cover(const WeightedGraph& g, const CoverConfig& config);

struct LightCover {
  WeightedGraph spanner;
  HPFamily hpf;
  TreeCover cover;  // edge ids refer to g
  double mst = 0;
  double spanner_lightness = 0;
  double individual_lightness = 0;  // max over trees of w(T) / w(MST)
  double collective_lightness = 0;  // sum over trees of w(T) / w(MST)
};

LightCover light_tree_cover(const WeightedGraph& g, const CoverConfig& config);

struct PairStretch {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;
  double distance = 0;       // d_G
  double tree_distance = 0;  // min over trees
  std::int32_t tree = -1;    // argmin, smallest index on ties
  double stretch = 0;
};

struct StretchReport {
  double max = 1.0;
  double mean = 1.0;
  std::vector<PairStretch> pairs;
};

// Empty `pairs` means all pairs.
StretchReport cover_stretch(const WeightedGraph& g, const TreeCover& cover,
                            std::span<const std::pair<Vertex, Vertex>> pairs = {});

struct SpanningReport {
  bool ok = true;
  std::vector<std::string> problems;
};

SpanningReport verify_spanning(const WeightedGraph& g, const TreeCover& cover);

// Checks d_T(u, v) <= (1 + 44 * rho_eff * eps) * d_G(u, v) for every
// preserved pair, taking the best tree.
struct PairBoundReport {
  std::size_t checked = 0;
  std::vector<PreservedPair> violations;
  double max_excess_ratio = 0;  // (d_T - d_G) / (eps * rho_eff * d_G), bounded by 44
};

PairBoundReport verify_pair_bounds(const WeightedGraph& g, const TreeCover& cover);

// Pairs (u, v) and trees with d_T(u, v) < d_G(u, v) - tolerance. All pairs.
struct LowerBoundReport {
  std::size_t checked = 0;
  std::vector<std::pair<Vertex, Vertex>> violations;
};

LowerBoundReport verify_lower_bound(const WeightedGraph& g, const TreeCover& cover);

double tree_weight(const WeightedGraph& g, const SpanningTree& tree);
int max_tree_degree(const WeightedGraph& g, const TreeCover& cover);

// All unordered pairs u < v.
std::vector<std::pair<Vertex, Vertex>> all_pairs(int n);

}  // namespace treecover

#endif  // TREECOVER_TREE_COVER_HPP_
