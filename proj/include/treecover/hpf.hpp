#ifndef TREECOVER_HPF_HPP_
#define TREECOVER_HPF_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

using ClusterId = std::int32_t;
inline constexpr ClusterId kNoCluster = -1;

// mu^i computed by repeated multiplication so that integer bases give
// exact powers.
double scale_at(double mu, int level);

// Smallest l >= 1 with mu^l >= 1/epsilon.
int offset_levels(double mu, double epsilon);

struct NetHierarchy {
  double mu = 0;
  double eta = 0;
  // levels[0] = V; levels[i] is a greedy Delta_i-net of levels[i-1] with
  // Delta_i = mu^i / (6 eta). The last level is a single point.
  std::vector<std::vector<Vertex>> levels;

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
  double delta(int i) const;
};

NetHierarchy build_net_hierarchy(const WeightedGraph& g, double mu, double eta);

struct SubnetFamily {
  double mu = 0;
  int sigma = 0;         // number of subnets
  int subsets_used = 0;  // subsets that received at least one leftover point
  // seeds[j][i] and subnets[j][i] for j < sigma, i <= top level.
  std::vector<std::vector<std::vector<Vertex>>> seeds;
  std::vector<std::vector<std::vector<Vertex>>> subnets;

  const std::vector<Vertex>& subnet(int j, int i) const;
};

// Largest |B(p, mu^i/3) ∩ N_i| over levels i and points p of N_i.
int measure_sigma(const WeightedGraph& g, const NetHierarchy& nets);

SubnetFamily build_subnet_family(const WeightedGraph& g, const NetHierarchy& nets);

// Partition of V into connected clusters.
struct ClusterPartition {
  std::vector<std::int32_t> cluster_of;
  std::vector<std::vector<Vertex>> members;
  std::vector<double> diameter;  // strong diameter (or an upper bound)
};

struct AggregationResult {
  std::vector<Vertex> portal_of;     // per input cluster
  std::vector<double> radius_bound;  // bound on the portal's eccentricity in its preimage
  std::vector<Vertex> extra_portals; // portals opened because of the radius cap
};

// Maps every cluster to a portal by growing a Dijkstra forest over the
// cluster adjacency graph. Seeds are the clusters containing portals;
// reaching cluster B over a connecting edge of weight w costs
// w + diameter(B). Ties go to the smaller portal id. A cluster is never
// attached if that would push the radius bound past `radius_cap`; such
// clusters open a new portal at their smallest vertex instead.
AggregationResult cluster_aggregation(const WeightedGraph& g, const ClusterPartition& clusters,
                                      std::span<const Vertex> portals,
                                      double radius_cap = kInfinity);

// max over v of d_{G[preimage]}(v, portal(v)) - d_G(v, portals).
double aggregation_distortion(const WeightedGraph& g, const ClusterPartition& clusters,
                              const AggregationResult& result, std::span<const Vertex> portals);

struct Cluster {
  ClusterId id = kNoCluster;
  int level = 0;
  std::vector<Vertex> members;  // sorted
  Vertex portal = kNoVertex;
  Vertex representative = kNoVertex;  // smallest member
  ClusterId parent = kNoCluster;
  std::vector<ClusterId> children;
  double diameter = 0;  // strong diameter
};

// A laminar family of partitions, level 0 being singletons. Levels above
// the top are treated as the top level.
class Hierarchy {
 public:
  Hierarchy() = default;
  explicit Hierarchy(int n);

  // Appends a level. Each group must be a union of clusters of the
  // current top level and induce a connected subgraph.
  void add_level(const WeightedGraph& g, std::vector<std::vector<Vertex>> groups,
                 const std::vector<Vertex>& portals);

  // Convenience for tests: one label vector per level >= 1.
  static Hierarchy from_labels(const WeightedGraph& g,
                               const std::vector<std::vector<int>>& labels);

  int num_vertices() const { return n_; }
  int top_level() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t num_clusters() const { return clusters_.size(); }
  const Cluster& cluster(ClusterId c) const { return clusters_[c]; }
  const std::vector<ClusterId>& level(int i) const { return levels_[i]; }
  ClusterId cluster_at(int level, Vertex v) const;
  ClusterId root() const;
  std::vector<ClusterId> descendants_at(ClusterId c, int level) const;
  ClusterPartition partition(int level) const;

 private:
  int n_ = 0;
  std::vector<Cluster> clusters_;
  std::vector<std::vector<ClusterId>> levels_;
  std::vector<std::vector<ClusterId>> cluster_of_;
};

struct HpfParameters {
  double mu = 6.0;
  double eta = 1.0;
  double rho = 24.0;
  int trivial_top_levels = 1;
};

struct SubclusterPair {
  ClusterId first = kNoCluster;
  ClusterId second = kNoCluster;
  double separation = 0;  // d_G(first, second)
  double rho_eff = 0;     // mu^i / separation
};

// One materialized copy of a hierarchy with its pair assignment.
struct HierarchyCopy {
  std::int32_t hierarchy = 0;
  std::int32_t copy = 0;
  std::vector<std::optional<SubclusterPair>> pair_of;  // per cluster
};

struct HPFamily {
  HpfParameters params;
  NetHierarchy nets;
  SubnetFamily subnets;
  std::vector<Hierarchy> hierarchies;
  std::vector<std::size_t> extra_portals;  // per hierarchy
  std::vector<HierarchyCopy> copies;       // filled by make_pair_preserving
  int ell = 1;
  double epsilon = 0;
  double weight_scale = 1.0;  // the construction graph is g scaled by this
};

// Builds one hierarchy per subnet. Level-i clusters have strong
// diameter at most mu^i; levels are added until the partition is
// trivial, then extended so that the top `trivial_top_levels` levels
// are all {V}.
HPFamily build_hpf(const WeightedGraph& g, const HpfParameters& params);

enum class PairMode { kDemand, kExhaustive, kTheory };

PairMode parse_pair_mode(const std::string& name);
const char* to_string(PairMode mode);

// Where a demanded pair (u, v) is preserved.
struct PreservedPair {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;
  std::int32_t copy = -1;  // index into HPFamily::copies
  ClusterId cluster = kNoCluster;
  int level = 0;
  double distance = 0;  // d_G(u, v) = d_{G[C]}(u, v)
  double rho_eff = 0;   // mu^level / distance
};

struct PairReport {
  std::vector<PreservedPair> preserved;
  std::vector<std::pair<Vertex, Vertex>> unresolved;
  std::size_t assignments = 0;
};

// Assigns subcluster pairs so that each demanded pair (u, v) has a
// cluster C in some copy with u, v in distinct subclusters l levels
// below and d_{G[C]}(u, v) = d_G(u, v). Levels are scanned bottom-up and
// hierarchies in index order; the first hit wins. In exhaustive mode
// every separated subcluster pair of every cluster is assigned.
PairReport make_pair_preserving(HPFamily& hpf, const WeightedGraph& g, double epsilon,
                                PairMode mode,
                                std::span<const std::pair<Vertex, Vertex>> demanded);

struct PaddingReport {
  std::size_t checked = 0;
  std::vector<std::pair<Vertex, int>> failures;  // (v, level)
};

// For each v and level i >= 1 checks that B(v, mu^i / rho) lies inside
// the level-i cluster of v in at least one hierarchy.
PaddingReport verify_padding(const WeightedGraph& g, const HPFamily& hpf, double rho,
                             std::span<const Vertex> sample = {});

struct HpfCheckReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Strong diameter <= mu^i per cluster and exact refinement between levels.
HpfCheckReport verify_hpf_structure(const WeightedGraph& g, const HPFamily& hpf);

}  // namespace treecover

#endif  // TREECOVER_HPF_HPP_
