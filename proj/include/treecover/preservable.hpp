#ifndef TREECOVER_PRESERVABLE_HPP_
#define TREECOVER_PRESERVABLE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treecover/graph.hpp"
#include "treecover/hpf.hpp"
#include "treecover/shortest_paths.hpp"

namespace treecover {

// One recursion node: cluster C of a hierarchy, the path π it must
// contain, and the subcluster pair assigned to C (if any).
struct PreservableInput {
  const WeightedGraph* g = nullptr;
  const Hierarchy* hierarchy = nullptr;
  ClusterId cluster = kNoCluster;
  int ell = 1;
  std::vector<Vertex> highway;  // π, nonempty, shortest in G[C] ∪ π
  std::optional<std::pair<ClusterId, ClusterId>> pair;
  double epsilon = 0.25;
  double mu = 6.0;

  int level() const { return hierarchy->cluster(cluster).level; }
  int sub_level() const { return std::max(level() - ell, 0); }
  double scale() const { return scale_at(mu, level()); }
};

enum class PairRouting { kNoPair, kDisjoint, kIntersecting };

struct GlueRecord {
  Vertex start = kNoVertex;   // the representative whose path was glued
  std::int32_t path = -1;     // path touching the start's cluster afterwards
};

struct PreservableSet {
  std::vector<ClusterId> clustering;        // subclusters of C, sorted
  std::vector<std::vector<Vertex>> paths;   // paths[0] is π
  std::vector<std::int32_t> touching_path;  // per clustering entry
  std::vector<EdgeId> inter_cluster;        // the edge set I
  std::vector<Vertex> vertices;             // V(G[C] ∪ π), sorted
  PairRouting pair_routing = PairRouting::kNoPair;
  std::vector<GlueRecord> glued;

  const std::vector<Vertex>& path_of(std::size_t clustering_index) const {
    return paths[touching_path[clustering_index]];
  }
};

PreservableSet build_preservable_set(const PreservableInput& in, PathSearch& search);

enum class SketchEdgeKind { kPath, kFake, kInterCluster };

struct SketchEdge {
  Vertex a = kNoVertex;
  Vertex b = kNoVertex;
  double w = 0;
  SketchEdgeKind kind = SketchEdgeKind::kPath;
};

// Path edges, one fake edge of weight 10·eps·mu^i from each cluster
// vertex off its path to the nearest path vertex inside the cluster, and
// the edges of I.
class SketchGraph {
 public:
  SketchGraph(std::vector<Vertex> vertices, std::vector<SketchEdge> edges, double fake_weight);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<SketchEdge>& edges() const { return edges_; }
  double fake_weight() const { return fake_weight_; }
  bool is_tree() const;
  // Distances along the sketch from `sources`, indexed like vertices().
  // Only meaningful when is_tree() holds.
  std::vector<double> distances_from(std::span<const Vertex> sources) const;
  std::size_t index_of(Vertex v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<SketchEdge> edges_;
  double fake_weight_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

SketchGraph build_sketch_graph(const PreservableInput& in, const PreservableSet& set,
                               PathSearch& search);

struct PreservableCheck {
  bool one_touch = true;
  bool disjoint = true;
  bool sketch_tree = true;
  bool fake_weights = true;
  bool same_cluster = true;   // d_H <= 21·eps·mu^i inside a subcluster
  bool pair_bound = true;     // d_H <= d_{G[C]} + 44·eps·mu^i across the pair
  bool diameter = true;       // d_H <= 10·mu^i over the cluster
  bool glue_monotone = true;  // d_H(u, π) <= d_H(r, π) + 10·eps·mu^i
  double same_cluster_ratio = 0;  // max d_H / (eps·mu^i) inside subclusters
  double pair_excess_ratio = 0;   // max (d_H - d_{G[C]}) / (eps·mu^i)
  double diameter_ratio = 0;      // max d_H / mu^i
  std::vector<std::string> problems;

  // The unconditional properties; the diameter bound depends on the
  // parameter couplings and is reported separately.
  bool ok() const {
    return one_touch && disjoint && sketch_tree && fake_weights && same_cluster && pair_bound &&
           glue_monotone;
  }
};

PreservableCheck verify_preservable_lemma(const PreservableInput& in, const PreservableSet& set,
                                          const SketchGraph& sketch, PathSearch& search);

}  // namespace treecover

#endif  // TREECOVER_PRESERVABLE_HPP_
