#ifndef TREECOVER_SHORTEST_PATHS_HPP_
#define TREECOVER_SHORTEST_PATHS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

struct ShortestPathTree {
  Vertex source = kNoVertex;
  std::vector<double> dist;    // kInfinity when unreachable
  std::vector<Vertex> parent;  // kNoVertex for the source and unreachable vertices
};

// Row-major n x n matrix of exact distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}
  int size() const { return n_; }
  double operator()(Vertex u, Vertex v) const { return d_[index(u, v)]; }
  double& at(Vertex u, Vertex v) { return d_[index(u, v)]; }

 private:
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * n_ + v;
  }
  int n_ = 0;
  std::vector<double> d_;
};

// Reusable Dijkstra workspace. Arrays are reset lazily with stamps, so a
// search costs time proportional to the part of the graph it touches.
//
// A search runs over a view of the graph: either the whole graph, or the
// subgraph induced by a vertex set plus any explicitly allowed edges
// (used for G[C] and G[C] ∪ π).
class PathSearch {
 public:
  explicit PathSearch(const WeightedGraph& g);

  const WeightedGraph& graph() const { return *g_; }

  void use_whole_graph();
  // Starts a new view: the subgraph induced by `vertices`.
  void restrict_to(std::span<const Vertex> vertices);
  // Adds the edges of a vertex path to the current view.
  void allow_path(std::span<const Vertex> path);
  void allow_edge(EdgeId e);
  bool in_view(Vertex v) const;
  bool edge_allowed(EdgeId e) const;

  // Multi-source Dijkstra. Vertices farther than `radius` are not
  // settled. If `stop` is given, the search ends once a vertex with
  // stop[v] != 0 is settled; that vertex is returned.
  std::optional<Vertex> run(std::span<const Vertex> sources, double radius = kInfinity,
                            const std::vector<char>* stop = nullptr);
  std::optional<Vertex> run_from(Vertex source, double radius = kInfinity,
                                 const std::vector<char>* stop = nullptr);

  bool reached(Vertex v) const { return dist_stamp_[v] == search_stamp_; }
  double dist(Vertex v) const { return reached(v) ? dist_[v] : kInfinity; }
  Vertex parent(Vertex v) const { return reached(v) ? parent_[v] : kNoVertex; }
  // The source a vertex was reached from (ties go to the smaller source).
  Vertex origin(Vertex v) const { return reached(v) ? origin_[v] : kNoVertex; }
  EdgeId parent_edge(Vertex v) const { return reached(v) ? parent_edge_[v] : -1; }
  // Vertices settled by the last run, in settling order.
  const std::vector<Vertex>& settled() const { return settled_; }
  // Path from the origin of `v` to `v`; empty if v was not reached.
  std::vector<Vertex> path_to(Vertex v) const;

 private:
  void touch(Vertex v);

  const WeightedGraph* g_;
  bool whole_ = true;
  std::uint32_t view_stamp_ = 1;
  std::vector<std::uint32_t> member_;
  std::vector<std::uint32_t> extra_edge_;
  std::vector<std::uint32_t> extra_vertex_;

  std::uint32_t search_stamp_ = 0;
  std::vector<std::uint32_t> dist_stamp_;
  std::vector<double> dist_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> origin_;
  std::vector<EdgeId> parent_edge_;
  std::vector<char> done_;
  std::vector<Vertex> settled_;
};

// Exact single-source distances, optionally within the subgraph induced
// by `restriction`.
ShortestPathTree dijkstra(const WeightedGraph& g, Vertex source,
                          std::optional<std::span<const Vertex>> restriction = std::nullopt);

// Vertex cap for all-pairs computations. Reads TREECOVER_APSP_CAP from
// the environment, default 2000.
int apsp_cap();
DistanceMatrix apsp(const WeightedGraph& g);

// Weight of a vertex path whose consecutive pairs are graph edges.
double path_weight(const WeightedGraph& g, std::span<const Vertex> path);

}  // namespace treecover

#endif  // TREECOVER_SHORTEST_PATHS_HPP_
