#include "treecover/tree_cover.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treecover/graph_algorithms.hpp"
#include "treecover/shortest_paths.hpp"
#include "treecover/tree_oracle.hpp"

namespace treecover {

namespace {

constexpr std::size_t kMaxRecordedProblems = 20;

class TreeBuilder {
 public:
  TreeBuilder(const WeightedGraph& g, const HPFamily& hpf, std::size_t copy,
              NodeCheckSummary* checks, const NodeObserver& observer)
      : g_(g),
        hpf_(hpf),
        copy_(hpf.copies.at(copy)),
        h_(hpf.hierarchies.at(copy_.hierarchy)),
        checks_(checks),
        observer_(observer),
        search_(g) {}

  SpanningTree build(ClusterId cluster, std::vector<Vertex> pi) {
    const Cluster& c = h_.cluster(cluster);
    if (pi.empty()) pi = {c.representative};
    SpanningTree out;
    if (c.members.size() == 1) {
      out.vertices = pi;
      std::sort(out.vertices.begin(), out.vertices.end());
      out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()),
                         out.vertices.end());
      out.edges = path_edges(pi);
      std::sort(out.edges.begin(), out.edges.end());
    } else {
      PreservableInput in;
      in.g = &g_;
      in.hierarchy = &h_;
      in.cluster = cluster;
      in.ell = hpf_.ell;
      in.highway = pi;
      if (const auto& pair = copy_.pair_of[cluster]) in.pair = std::pair{pair->first, pair->second};
      in.epsilon = hpf_.epsilon;
      in.mu = hpf_.params.mu;
      const PreservableSet set = build_preservable_set(in, search_);
      if (checks_) {
        const SketchGraph sketch = build_sketch_graph(in, set, search_);
        checks_->absorb(verify_preservable_lemma(in, set, sketch, search_));
      }
      out.edges = set.inter_cluster;
      for (std::size_t k = 0; k < set.clustering.size(); ++k) {
        const SpanningTree sub = build(set.clustering[k], set.path_of(k));
        out.edges.insert(out.edges.end(), sub.edges.begin(), sub.edges.end());
      }
      std::sort(out.edges.begin(), out.edges.end());
      out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
      out.vertices = set.vertices;
    }
    if (!is_spanning_tree(g_, out.vertices, out.edges)) {
      throw std::logic_error("recursion output for cluster " + std::to_string(cluster) +
                             " at level " + std::to_string(c.level) + " is not a spanning tree");
    }
    out.root = pi.front();
    if (observer_) observer_(cluster, pi, out);
    return out;
  }

 private:
  std::vector<EdgeId> path_edges(const std::vector<Vertex>& path) const {
    std::vector<EdgeId> edges;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      auto e = g_.find_edge(path[k], path[k + 1]);
      if (!e) throw std::logic_error("path step is not a graph edge");
      edges.push_back(*e);
    }
    return edges;
  }

  const WeightedGraph& g_;
  const HPFamily& hpf_;
  const HierarchyCopy& copy_;
  const Hierarchy& h_;
  NodeCheckSummary* checks_;
  const NodeObserver& observer_;
  PathSearch search_;
};

}  // namespace

void NodeCheckSummary::absorb(const PreservableCheck& check) {
  ++nodes;
  if (!check.ok()) ++failures;
  if (!check.diameter) ++diameter_violations;
  max_same_cluster_ratio = std::max(max_same_cluster_ratio, check.same_cluster_ratio);
  max_pair_excess_ratio = std::max(max_pair_excess_ratio, check.pair_excess_ratio);
  max_diameter_ratio = std::max(max_diameter_ratio, check.diameter_ratio);
  for (const auto& p : check.problems) {
    if (problems.size() < kMaxRecordedProblems) problems.push_back(p);
  }
}

SpanningTree path_preserving_tree(const WeightedGraph& g, const HPFamily& hpf, std::size_t copy,
                                  ClusterId cluster, const std::vector<Vertex>& pi,
                                  NodeCheckSummary* checks, const NodeObserver& observer) {
  TreeBuilder builder(g, hpf, copy, checks, observer);
  return builder.build(cluster, pi);
}

std::vector<std::pair<Vertex, Vertex>> all_pairs(int n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  return pairs;
}

CoverBuild build_tree_cover(const WeightedGraph& g, const CoverConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  const double scale = g.num_edges() > 0 ? 1.0 / g.min_weight() : 1.0;
  const WeightedGraph gs = g.scaled(scale);
  const int ell = offset_levels(config.mu, config.epsilon);

  HpfParameters params;
  params.mu = config.mu;
  params.eta = config.eta;
  params.rho = config.rho;
  params.trivial_top_levels = ell;

  CoverBuild out;
  out.hpf = build_hpf(gs, params);
  out.hpf.weight_scale = scale;
  const auto demanded =
      config.demanded_pairs.empty() ? all_pairs(g.num_vertices()) : config.demanded_pairs;
  out.cover.pairs = make_pair_preserving(out.hpf, gs, config.epsilon, config.mode, demanded);
  for (PreservedPair& p : out.cover.pairs.preserved) p.distance /= scale;
  out.cover.config = config;
  out.cover.ell = ell;

  for (std::size_t ci = 0; ci < out.hpf.copies.size(); ++ci) {
    const Hierarchy& h = out.hpf.hierarchies[out.hpf.copies[ci].hierarchy];
    const int top = h.top_level();
    for (int j = std::max(top - ell + 1, 0); j <= top; ++j) {
      if (h.level(j).size() != 1) throw std::logic_error("top levels are not trivial");
      SpanningTree tree = path_preserving_tree(
          gs, out.hpf, ci, h.level(j)[0], {},
          config.check_nodes ? &out.cover.node_checks : nullptr);
      tree.provenance = {static_cast<std::int32_t>(ci), out.hpf.copies[ci].hierarchy, j};
      out.cover.trees.push_back(std::move(tree));
    }
  }
  return out;
}

TreeCover span_tree_cover(const WeightedGraph& g, const CoverConfig& config) {
  return build_tree_cover(g, config).cover;
}

double tree_weight(const WeightedGraph& g, const SpanningTree& tree) {
  double total = 0.0;
  for (EdgeId e : tree.edges) total += g.edge(e).w;
  return total;
}

LightCover light_tree_cover(const WeightedGraph& g, const CoverConfig& config) {
  LightCover out;
  out.spanner = greedy_spanner(g, config.epsilon);
  CoverBuild built = build_tree_cover(out.spanner, config);
  out.hpf = std::move(built.hpf);
  out.cover = std::move(built.cover);
  out.cover.built_on_spanner = true;
  for (SpanningTree& tree : out.cover.trees) {
    for (EdgeId& e : tree.edges) {
      const Edge& edge = out.spanner.edge(e);
      e = *g.find_edge(edge.u, edge.v);
    }
    std::sort(tree.edges.begin(), tree.edges.end());
  }
  out.mst = mst_weight(g);
  out.spanner_lightness = out.spanner.total_weight() / out.mst;
  for (const SpanningTree& tree : out.cover.trees) {
    const double lightness = tree_weight(g, tree) / out.mst;
    out.individual_lightness = std::max(out.individual_lightness, lightness);
    out.collective_lightness += lightness;
  }
  return out;
}

StretchReport cover_stretch(const WeightedGraph& g, const TreeCover& cover,
                            std::span<const std::pair<Vertex, Vertex>> pairs) {
  std::vector<std::pair<Vertex, Vertex>> owned;
  if (pairs.empty()) {
    owned = all_pairs(g.num_vertices());
    pairs = owned;
  }
  std::vector<TreeOracle> oracles;
  oracles.reserve(cover.trees.size());
  for (const SpanningTree& t : cover.trees) oracles.emplace_back(g, t.edges, t.root);

  std::map<Vertex, std::vector<std::size_t>> by_source;
  for (std::size_t k = 0; k < pairs.size(); ++k) by_source[pairs[k].first].push_back(k);

  StretchReport report;
  report.pairs.resize(pairs.size());
  PathSearch search(g);
  double sum = 0.0;
  for (const auto& [u, indices] : by_source) {
    search.run_from(u);
    for (std::size_t k : indices) {
      const Vertex v = pairs[k].second;
      if (u == v) throw std::invalid_argument("stretch pairs need u != v");
      PairStretch& ps = report.pairs[k];
      ps.u = u;
      ps.v = v;
      ps.distance = search.dist(v);
      ps.tree_distance = kInfinity;
      for (std::size_t t = 0; t < oracles.size(); ++t) {
        const double d = oracles[t].distance(u, v);
        if (d < ps.tree_distance) {
          ps.tree_distance = d;
          ps.tree = static_cast<std::int32_t>(t);
        }
      }
      ps.stretch = ps.tree_distance / ps.distance;
      report.max = std::max(report.max, ps.stretch);
      sum += ps.stretch;
    }
  }
  if (!pairs.empty()) report.mean = sum / static_cast<double>(pairs.size());
  return report;
}

SpanningReport verify_spanning(const WeightedGraph& g, const TreeCover& cover) {
  SpanningReport report;
  const int n = g.num_vertices();
  for (std::size_t t = 0; t < cover.trees.size(); ++t) {
    const SpanningTree& tree = cover.trees[t];
    const std::string tag = "tree " + std::to_string(t) + ": ";
    auto problem = [&](const std::string& what) {
      report.ok = false;
      report.problems.push_back(tag + what);
    };
    if (static_cast<int>(tree.vertices.size()) != n) problem("does not span every vertex");
    if (static_cast<int>(tree.edges.size()) != n - 1) {
      problem("has " + std::to_string(tree.edges.size()) + " edges, expected " +
              std::to_string(n - 1));
    }
    UnionFind uf(n);
    bool valid = true;
    for (EdgeId e : tree.edges) {
      if (e < 0 || e >= g.num_edges()) {
        problem("edge id " + std::to_string(e) + " is not a graph edge");
        valid = false;
        continue;
      }
      if (!uf.unite(g.edge(e).u, g.edge(e).v)) {
        problem("edge " + std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v) +
                " closes a cycle");
      }
    }
    if (valid && uf.components() != 1) problem("is not connected");
  }
  return report;
}

PairBoundReport verify_pair_bounds(const WeightedGraph& g, const TreeCover& cover) {
  PairBoundReport report;
  const auto& preserved = cover.pairs.preserved;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(preserved.size());
  for (const PreservedPair& p : preserved) pairs.push_back({p.u, p.v});
  const StretchReport stretch = cover_stretch(g, cover, pairs);
  const double eps = cover.config.epsilon;
  for (std::size_t k = 0; k < preserved.size(); ++k) {
    const PreservedPair& p = preserved[k];
    const PairStretch& s = stretch.pairs[k];
    ++report.checked;
    const double slack = eps * p.rho_eff * s.distance;
    report.max_excess_ratio = std::max(report.max_excess_ratio, (s.tree_distance - s.distance) / slack);
    if (s.tree_distance > s.distance + 44.0 * slack + kTolerance) report.violations.push_back(p);
  }
  return report;
}

LowerBoundReport verify_lower_bound(const WeightedGraph& g, const TreeCover& cover) {
  LowerBoundReport report;
  const int n = g.num_vertices();
  std::vector<TreeOracle> oracles;
  for (const SpanningTree& t : cover.trees) oracles.emplace_back(g, t.edges, t.root);
  PathSearch search(g);
  for (Vertex u = 0; u < n; ++u) {
    search.run_from(u);
    for (Vertex v = u + 1; v < n; ++v) {
      for (const TreeOracle& o : oracles) {
        ++report.checked;
        if (o.distance(u, v) < search.dist(v) - kTolerance) {
          report.violations.push_back({u, v});
          break;
        }
      }
    }
  }
  return report;
}

int max_tree_degree(const WeightedGraph& g, const TreeCover& cover) {
  int best = 0;
  for (const SpanningTree& tree : cover.trees) {
    std::vector<int> degree(g.num_vertices(), 0);
    for (EdgeId e : tree.edges) {
      best = std::max(best, ++degree[g.edge(e).u]);
      best = std::max(best, ++degree[g.edge(e).v]);
    }
  }
  return best;
}

}  // namespace treecover
