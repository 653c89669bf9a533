#include "treecover/shortest_paths.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace treecover {

PathSearch::PathSearch(const WeightedGraph& g)
    : g_(&g),
      member_(g.num_vertices(), 0),
      extra_edge_(g.num_edges(), 0),
      extra_vertex_(g.num_vertices(), 0),
      dist_stamp_(g.num_vertices(), 0),
      dist_(g.num_vertices(), kInfinity),
      parent_(g.num_vertices(), kNoVertex),
      origin_(g.num_vertices(), kNoVertex),
      parent_edge_(g.num_vertices(), -1),
      done_(g.num_vertices(), 0) {}

void PathSearch::use_whole_graph() { whole_ = true; }

void PathSearch::restrict_to(std::span<const Vertex> vertices) {
  whole_ = false;
  ++view_stamp_;
  for (Vertex v : vertices) member_[v] = view_stamp_;
}

void PathSearch::allow_edge(EdgeId e) {
  extra_edge_[e] = view_stamp_;
  const Edge& edge = g_->edge(e);
  extra_vertex_[edge.u] = view_stamp_;
  extra_vertex_[edge.v] = view_stamp_;
}

void PathSearch::allow_path(std::span<const Vertex> path) {
  if (path.size() == 1) extra_vertex_[path[0]] = view_stamp_;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    auto e = g_->find_edge(path[k], path[k + 1]);
    if (!e) {
      throw std::logic_error("path step " + std::to_string(path[k]) + "-" +
                             std::to_string(path[k + 1]) + " is not a graph edge");
    }
    allow_edge(*e);
  }
}

bool PathSearch::in_view(Vertex v) const {
  return whole_ || member_[v] == view_stamp_ || extra_vertex_[v] == view_stamp_;
}

bool PathSearch::edge_allowed(EdgeId e) const {
  if (whole_) return true;
  if (extra_edge_[e] == view_stamp_) return true;
  const Edge& edge = g_->edge(e);
  return member_[edge.u] == view_stamp_ && member_[edge.v] == view_stamp_;
}

void PathSearch::touch(Vertex v) {
  if (dist_stamp_[v] != search_stamp_) {
    dist_stamp_[v] = search_stamp_;
    dist_[v] = kInfinity;
    parent_[v] = kNoVertex;
    origin_[v] = kNoVertex;
    parent_edge_[v] = -1;
    done_[v] = 0;
  }
}

std::optional<Vertex> PathSearch::run(std::span<const Vertex> sources, double radius,
                                      const std::vector<char>* stop) {
  ++search_stamp_;
  settled_.clear();
  using Entry = std::pair<double, Vertex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (Vertex s : sources) {
    if (s < 0 || s >= g_->num_vertices()) {
      throw std::out_of_range("source " + std::to_string(s) + " out of range");
    }
    touch(s);
    if (dist_[s] == 0.0) continue;  // duplicate source
    dist_[s] = 0.0;
    origin_[s] = s;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (done_[x] || d > dist_[x]) continue;
    done_[x] = 1;
    settled_.push_back(x);
    if (stop && (*stop)[x]) return x;
    for (const Arc& a : g_->neighbors(x)) {
      if (!edge_allowed(a.edge)) continue;
      const double nd = d + a.w;
      if (nd > radius + kTolerance) continue;
      const Vertex y = a.to;
      touch(y);
      if (done_[y]) continue;
      bool improve = false;
      bool push = false;
      if (nd < dist_[y] - kTolerance) {
        improve = true;
      } else if (nd <= dist_[y] + kTolerance) {
        const Vertex ox = origin_[x];
        if (ox != origin_[y]) {
          improve = ox < origin_[y];
        } else if (x != parent_[y]) {
          improve = x < parent_[y];
        } else {
          improve = a.edge < parent_edge_[y];
        }
      }
      if (improve) {
        if (nd < dist_[y]) {
          dist_[y] = nd;
          push = true;
        }
        parent_[y] = x;
        origin_[y] = origin_[x];
        parent_edge_[y] = a.edge;
        if (push) heap.push({dist_[y], y});
      }
    }
  }
  return std::nullopt;
}

std::optional<Vertex> PathSearch::run_from(Vertex source, double radius,
                                           const std::vector<char>* stop) {
  return run(std::span<const Vertex>(&source, 1), radius, stop);
}

std::vector<Vertex> PathSearch::path_to(Vertex v) const {
  std::vector<Vertex> path;
  if (!reached(v) || dist_[v] == kInfinity) return path;
  for (Vertex x = v; x != kNoVertex; x = parent_[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree dijkstra(const WeightedGraph& g, Vertex source,
                          std::optional<std::span<const Vertex>> restriction) {
  if (source < 0 || source >= g.num_vertices()) {
    throw std::out_of_range("source " + std::to_string(source) + " out of range");
  }
  PathSearch search(g);
  if (restriction) {
    search.restrict_to(*restriction);
    if (!search.in_view(source)) {
      throw std::invalid_argument("source outside the restriction");
    }
  }
  search.run_from(source);
  ShortestPathTree tree;
  tree.source = source;
  tree.dist.assign(g.num_vertices(), kInfinity);
  tree.parent.assign(g.num_vertices(), kNoVertex);
  for (Vertex v : search.settled()) {
    tree.dist[v] = search.dist(v);
    tree.parent[v] = search.parent(v);
  }
  return tree;
}

int apsp_cap() {
  if (const char* env = std::getenv("TREECOVER_APSP_CAP")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return 2000;
}

DistanceMatrix apsp(const WeightedGraph& g) {
  const int n = g.num_vertices();
  if (n > apsp_cap()) {
    throw std::length_error("apsp: " + std::to_string(n) + " vertices exceeds cap " +
                            std::to_string(apsp_cap()));
  }
  DistanceMatrix d(n);
  PathSearch search(g);
  for (Vertex s = 0; s < n; ++s) {
    search.run_from(s);
    for (Vertex v = 0; v < n; ++v) d.at(s, v) = search.dist(v);
  }
  // Make the matrix exactly symmetric; the two directions can differ in
  // the last bit because sums are accumulated in different orders.
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const double m = std::min(d(u, v), d(v, u));
      d.at(u, v) = m;
      d.at(v, u) = m;
    }
  }
  return d;
}

double path_weight(const WeightedGraph& g, std::span<const Vertex> path) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    auto e = g.find_edge(path[k], path[k + 1]);
    if (!e) {
      throw std::invalid_argument("path step " + std::to_string(path[k]) + "-" +
                                  std::to_string(path[k + 1]) + " is not a graph edge");
    }
    total += g.edge(*e).w;
  }
  return total;
}

}  // namespace treecover
