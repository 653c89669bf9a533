#include "treecover/preservable.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treecover/graph_algorithms.hpp"

namespace treecover {

namespace {

class Builder {
 public:
  Builder(const PreservableInput& in, PathSearch& search)
      : in_(in), g_(*in.g), h_(*in.hierarchy), search_(search) {}

  PreservableSet run() {
    const Cluster& c = h_.cluster(in_.cluster);
    set_.clustering = h_.descendants_at(in_.cluster, in_.sub_level());
    for (std::size_t k = 0; k < set_.clustering.size(); ++k) {
      local_.emplace(set_.clustering[k], static_cast<std::int32_t>(k));
    }
    set_.touching_path.assign(set_.clustering.size(), -1);
    if (in_.highway.empty()) throw std::invalid_argument("preservable set needs a nonempty path");
    add_path(in_.highway);
    if (in_.pair) step_one();
    step_two();
    for (std::size_t k = 0; k < set_.clustering.size(); ++k) {
      if (set_.touching_path[k] < 0) {
        throw std::logic_error("cluster " + std::to_string(set_.clustering[k]) +
                               " left untouched under cluster " + std::to_string(in_.cluster));
      }
    }
    set_.vertices = c.members;
    set_.vertices.insert(set_.vertices.end(), in_.highway.begin(), in_.highway.end());
    std::sort(set_.vertices.begin(), set_.vertices.end());
    set_.vertices.erase(std::unique(set_.vertices.begin(), set_.vertices.end()),
                        set_.vertices.end());
    return std::move(set_);
  }

 private:
  // Index of v's subcluster, or -1 when v lies outside C.
  std::int32_t sub(Vertex v) const {
    if (h_.cluster_at(in_.level(), v) != in_.cluster) return -1;
    return local_.at(h_.cluster_at(in_.sub_level(), v));
  }

  bool touched(Vertex v) const {
    const std::int32_t k = sub(v);
    return k >= 0 && set_.touching_path[k] >= 0;
  }

  void add_path(std::vector<Vertex> path) {
    const auto index = static_cast<std::int32_t>(set_.paths.size());
    for (Vertex v : path) {
      const std::int32_t k = sub(v);
      if (k < 0) continue;
      if (set_.touching_path[k] < 0) {
        set_.touching_path[k] = index;
      } else if (set_.touching_path[k] != index) {
        throw std::logic_error("cluster " + std::to_string(set_.clustering[k]) +
                               " touched by two paths");
      }
    }
    set_.paths.push_back(std::move(path));
  }

  void add_edge(Vertex a, Vertex b) {
    auto e = g_.find_edge(a, b);
    if (!e) throw std::logic_error("inter-cluster pair is not a graph edge");
    if (std::find(set_.inter_cluster.begin(), set_.inter_cluster.end(), *e) ==
        set_.inter_cluster.end()) {
      set_.inter_cluster.push_back(*e);
    }
  }

  // Shortest path inside G[C] ∪ π from `from` to the nearest π vertex.
  std::vector<Vertex> path_to_highway(Vertex from) {
    std::vector<char>& stop = stop_mask();
    for (Vertex v : in_.highway) stop[v] = 1;
    search_.restrict_to(h_.cluster(in_.cluster).members);
    search_.allow_path(in_.highway);
    auto end = search_.run_from(from, kInfinity, &stop);
    for (Vertex v : in_.highway) stop[v] = 0;
    if (!end) throw std::logic_error("path does not reach the highway");
    return search_.path_to(*end);
  }

  std::vector<Vertex> path_within(std::span<const Vertex> members, Vertex from, Vertex to) {
    std::vector<char>& stop = stop_mask();
    stop[to] = 1;
    search_.restrict_to(members);
    auto end = search_.run_from(from, kInfinity, &stop);
    stop[to] = 0;
    if (!end) throw std::logic_error("cluster is not connected");
    return search_.path_to(to);
  }

  std::vector<char>& stop_mask() {
    if (stop_.empty()) stop_.assign(g_.num_vertices(), 0);
    return stop_;
  }

  void step_one() {
    const Cluster& c1 = h_.cluster(in_.pair->first);
    const Cluster& c2 = h_.cluster(in_.pair->second);
    const std::vector<Vertex> pxy =
        path_within(h_.cluster(in_.cluster).members, c1.representative, c2.representative);
    std::vector<char> on_pxy(set_.clustering.size(), 0);
    for (Vertex v : pxy) on_pxy[sub(v)] = 1;
    bool meets = false;
    for (Vertex v : pxy) meets = meets || touched(v);

    if (!meets) {
      set_.pair_routing = PairRouting::kDisjoint;
      const std::vector<Vertex> p = path_to_highway(c1.representative);
      std::size_t j2 = 0;
      while (j2 < p.size() && !touched(p[j2])) ++j2;
      if (j2 == p.size()) throw std::logic_error("highway path misses the touched clusters");
      std::size_t j1 = j2;
      while (j1 > 0 && !(sub(p[j1 - 1]) >= 0 && on_pxy[sub(p[j1 - 1])])) --j1;
      if (j1 == 0) throw std::logic_error("highway path leaves the pair path's clusters");
      --j1;  // p[j1] is the last vertex before j2 inside a cluster of pxy
      add_path(pxy);
      if (j1 + 1 < j2) {
        add_path(std::vector<Vertex>(p.begin() + j1 + 1, p.begin() + j2));
        add_edge(p[j2 - 1], p[j2]);
      }
      add_edge(p[j1], p[j1 + 1]);
      return;
    }

    set_.pair_routing = PairRouting::kIntersecting;
    std::size_t j3 = 0;
    while (!touched(pxy[j3])) ++j3;
    std::vector<char> blocked(set_.clustering.size(), 0);
    for (std::size_t k = 0; k < set_.clustering.size(); ++k) {
      blocked[k] = set_.touching_path[k] >= 0;
    }
    for (std::size_t k = 0; k < j3; ++k) blocked[sub(pxy[k])] = 1;
    std::size_t j4 = pxy.size() - 1;
    while (!blocked[sub(pxy[j4])]) --j4;
    if (j3 > 0) {
      add_path(std::vector<Vertex>(pxy.begin(), pxy.begin() + j3));
      add_edge(pxy[j3 - 1], pxy[j3]);
    }
    if (j4 + 1 < pxy.size()) {
      add_path(std::vector<Vertex>(pxy.begin() + j4 + 1, pxy.end()));
      add_edge(pxy[j4], pxy[j4 + 1]);
    }
  }

  void glue(const std::vector<Vertex>& q) {
    std::size_t j = 0;
    while (j < q.size() && !touched(q[j])) ++j;
    if (j == q.size()) throw std::logic_error("glued path touches no earlier path");
    if (j > 0) {
      add_path(std::vector<Vertex>(q.begin(), q.begin() + j));
      add_edge(q[j - 1], q[j]);
      set_.glued.push_back({q[0], static_cast<std::int32_t>(set_.paths.size() - 1)});
    }
  }

  void step_two() {
    glue(path_to_highway(h_.cluster(in_.cluster).representative));
    for (int level = in_.level() - 1; level >= in_.sub_level(); --level) {
      for (ClusterId d : h_.descendants_at(in_.cluster, level)) {
        const Cluster& child = h_.cluster(d);
        const Cluster& parent = h_.cluster(child.parent);
        glue(path_within(parent.members, child.representative, parent.representative));
      }
    }
  }

  const PreservableInput& in_;
  const WeightedGraph& g_;
  const Hierarchy& h_;
  PathSearch& search_;
  PreservableSet set_;
  std::map<ClusterId, std::int32_t> local_;
  std::vector<char> stop_;
};

}  // namespace

PreservableSet build_preservable_set(const PreservableInput& in, PathSearch& search) {
  return Builder(in, search).run();
}

SketchGraph::SketchGraph(std::vector<Vertex> vertices, std::vector<SketchEdge> edges,
                         double fake_weight)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), fake_weight_(fake_weight) {
  adj_.resize(vertices_.size());
  for (const SketchEdge& e : edges_) {
    const std::size_t a = index_of(e.a);
    const std::size_t b = index_of(e.b);
    adj_[a].push_back({b, e.w});
    adj_[b].push_back({a, e.w});
  }
}

std::size_t SketchGraph::index_of(Vertex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) {
    throw std::out_of_range("vertex " + std::to_string(v) + " not in sketch");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool SketchGraph::is_tree() const {
  if (edges_.size() + 1 != vertices_.size()) return false;
  UnionFind uf(static_cast<int>(vertices_.size()));
  for (const SketchEdge& e : edges_) {
    if (!uf.unite(static_cast<int>(index_of(e.a)), static_cast<int>(index_of(e.b)))) {
      return false;
    }
  }
  return uf.components() == 1;
}

std::vector<double> SketchGraph::distances_from(std::span<const Vertex> sources) const {
  std::vector<double> dist(vertices_.size(), kInfinity);
  std::vector<std::size_t> stack;
  for (Vertex s : sources) {
    const std::size_t k = index_of(s);
    if (dist[k] != 0.0) {
      dist[k] = 0.0;
      stack.push_back(k);
    }
  }
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (auto [y, w] : adj_[x]) {
      if (dist[y] == kInfinity) {
        dist[y] = dist[x] + w;
        stack.push_back(y);
      }
    }
  }
  return dist;
}

SketchGraph build_sketch_graph(const PreservableInput& in, const PreservableSet& set,
                               PathSearch& search) {
  const WeightedGraph& g = *in.g;
  const Hierarchy& h = *in.hierarchy;
  const double fake = 10.0 * in.epsilon * in.scale();
  std::vector<SketchEdge> edges;
  for (const auto& path : set.paths) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const EdgeId e = *g.find_edge(path[k], path[k + 1]);
      edges.push_back({path[k], path[k + 1], g.edge(e).w, SketchEdgeKind::kPath});
    }
  }
  std::vector<char> on_path(g.num_vertices(), 0);
  for (std::size_t k = 0; k < set.clustering.size(); ++k) {
    const Cluster& d = h.cluster(set.clustering[k]);
    const auto& path = set.path_of(k);
    std::vector<Vertex> anchors;
    for (Vertex v : path) {
      if (h.cluster_at(d.level, v) == d.id) anchors.push_back(v);
    }
    for (Vertex v : anchors) on_path[v] = 1;
    search.restrict_to(d.members);
    search.allow_path(path);
    search.run(anchors);
    for (Vertex v : d.members) {
      if (on_path[v]) continue;
      const Vertex anchor = search.origin(v);
      if (anchor == kNoVertex) throw std::logic_error("subcluster vertex cannot reach its path");
      edges.push_back({v, anchor, fake, SketchEdgeKind::kFake});
    }
    for (Vertex v : anchors) on_path[v] = 0;
  }
  for (EdgeId e : set.inter_cluster) {
    edges.push_back({g.edge(e).u, g.edge(e).v, g.edge(e).w, SketchEdgeKind::kInterCluster});
  }
  return SketchGraph(set.vertices, std::move(edges), fake);
}

namespace {

// Largest tree distance between two vertices of `subset`.
double subset_diameter(const SketchGraph& sketch, std::span<const Vertex> subset) {
  if (subset.size() <= 1) return 0.0;
  auto farthest = [&](Vertex from) {
    const auto dist = sketch.distances_from(std::span<const Vertex>(&from, 1));
    Vertex best = from;
    double best_d = 0.0;
    for (Vertex v : subset) {
      const double d = dist[sketch.index_of(v)];
      if (d > best_d) {
        best_d = d;
        best = v;
      }
    }
    return std::pair{best, best_d};
  };
  const Vertex a = farthest(subset[0]).first;
  return farthest(a).second;
}

}  // namespace

PreservableCheck verify_preservable_lemma(const PreservableInput& in, const PreservableSet& set,
                                          const SketchGraph& sketch, PathSearch& search) {
  PreservableCheck check;
  const Hierarchy& h = *in.hierarchy;
  const double eps_scale = in.epsilon * in.scale();
  auto problem = [&](bool& flag, const std::string& what) {
    flag = false;
    check.problems.push_back("cluster " + std::to_string(in.cluster) + ": " + what);
  };

  // Exactly-one-touch and vertex-disjointness, recounted from scratch.
  std::vector<int> owner(in.g->num_vertices(), -1);
  std::vector<std::vector<int>> touching(set.clustering.size());
  std::map<ClusterId, std::size_t> local;
  for (std::size_t k = 0; k < set.clustering.size(); ++k) local[set.clustering[k]] = k;
  for (std::size_t p = 0; p < set.paths.size(); ++p) {
    for (Vertex v : set.paths[p]) {
      if (owner[v] != -1 && owner[v] != static_cast<int>(p)) {
        problem(check.disjoint, "vertex " + std::to_string(v) + " on two paths");
      }
      owner[v] = static_cast<int>(p);
      if (h.cluster_at(in.level(), v) != in.cluster) continue;
      auto& t = touching[local.at(h.cluster_at(in.sub_level(), v))];
      if (std::find(t.begin(), t.end(), static_cast<int>(p)) == t.end()) {
        t.push_back(static_cast<int>(p));
      }
    }
  }
  for (std::size_t k = 0; k < touching.size(); ++k) {
    if (touching[k].size() != 1) {
      problem(check.one_touch, "subcluster " + std::to_string(set.clustering[k]) +
                                   " touched by " + std::to_string(touching[k].size()) +
                                   " paths");
    }
  }

  if (!sketch.is_tree()) {
    problem(check.sketch_tree, "sketch graph is not a tree");
    return check;
  }
  for (const SketchEdge& e : sketch.edges()) {
    if (e.kind == SketchEdgeKind::kFake && e.w != 10.0 * eps_scale) {
      problem(check.fake_weights, "fake edge weight " + format_double(e.w));
    }
  }

  for (ClusterId d : set.clustering) {
    const double diam = subset_diameter(sketch, h.cluster(d).members);
    check.same_cluster_ratio = std::max(check.same_cluster_ratio, diam / eps_scale);
    if (diam > 21.0 * eps_scale + kTolerance) {
      problem(check.same_cluster, "subcluster " + std::to_string(d) + " sketch diameter " +
                                      format_double(diam));
    }
  }

  const Cluster& c = h.cluster(in.cluster);
  const double diam = subset_diameter(sketch, c.members);
  check.diameter_ratio = diam / in.scale();
  check.diameter = diam <= 10.0 * in.scale() + kTolerance;

  if (in.pair) {
    const Cluster& c1 = h.cluster(in.pair->first);
    const Cluster& c2 = h.cluster(in.pair->second);
    search.restrict_to(c.members);
    for (Vertex x : c1.members) {
      search.run_from(x);
      const auto dh = sketch.distances_from(std::span<const Vertex>(&x, 1));
      for (Vertex y : c2.members) {
        const double excess = dh[sketch.index_of(y)] - search.dist(y);
        check.pair_excess_ratio = std::max(check.pair_excess_ratio, excess / eps_scale);
        if (excess > 44.0 * eps_scale + kTolerance) {
          problem(check.pair_bound, "pair distance " + std::to_string(x) + "-" +
                                        std::to_string(y) + " exceeds the 44 bound");
        }
      }
    }
  }

  const auto to_highway = sketch.distances_from(in.highway);
  for (const GlueRecord& glue : set.glued) {
    const double limit = to_highway[sketch.index_of(glue.start)] + 10.0 * eps_scale;
    for (std::size_t k = 0; k < set.clustering.size(); ++k) {
      if (set.touching_path[k] != glue.path) continue;
      for (Vertex u : h.cluster(set.clustering[k]).members) {
        if (to_highway[sketch.index_of(u)] > limit + kTolerance) {
          problem(check.glue_monotone, "glued vertex " + std::to_string(u) + " too far from π");
        }
      }
    }
  }
  return check;
}

}  // namespace treecover
