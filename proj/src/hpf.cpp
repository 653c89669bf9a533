#include "treecover/hpf.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "treecover/shortest_paths.hpp"

namespace treecover {

namespace {

// Above this size a cluster's diameter is bounded by twice the
// eccentricity of its representative instead of computed exactly.
constexpr std::size_t kExactDiameterLimit = 1024;

double eccentricity(PathSearch& search, std::span<const Vertex> members, Vertex source) {
  search.restrict_to(members);
  search.run_from(source);
  if (search.settled().size() != members.size()) return kInfinity;
  double ecc = 0.0;
  for (Vertex v : search.settled()) ecc = std::max(ecc, search.dist(v));
  return ecc;
}

double strong_diameter(PathSearch& search, std::span<const Vertex> members) {
  if (members.size() <= 1) return 0.0;
  if (members.size() > kExactDiameterLimit) return 2.0 * eccentricity(search, members, members[0]);
  double diam = 0.0;
  for (Vertex s : members) {
    diam = std::max(diam, eccentricity(search, members, s));
    if (diam == kInfinity) break;
  }
  return diam;
}

}  // namespace

Hierarchy::Hierarchy(int n) : n_(n) {
  levels_.emplace_back();
  cluster_of_.emplace_back(n);
  for (Vertex v = 0; v < n; ++v) {
    Cluster c;
    c.id = static_cast<ClusterId>(clusters_.size());
    c.level = 0;
    c.members = {v};
    c.portal = v;
    c.representative = v;
    levels_[0].push_back(c.id);
    cluster_of_[0][v] = c.id;
    clusters_.push_back(std::move(c));
  }
}

void Hierarchy::add_level(const WeightedGraph& g, std::vector<std::vector<Vertex>> groups,
                          const std::vector<Vertex>& portals) {
  if (groups.size() != portals.size()) throw std::invalid_argument("one portal per group");
  const int level = top_level() + 1;
  std::vector<std::size_t> order(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::sort(groups[k].begin(), groups[k].end());
    if (groups[k].empty()) throw std::invalid_argument("empty cluster");
    order[k] = k;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return groups[a][0] < groups[b][0]; });

  PathSearch search(g);
  std::vector<ClusterId> of(n_, kNoCluster);
  std::vector<ClusterId> ids;
  for (std::size_t k : order) {
    Cluster c;
    c.id = static_cast<ClusterId>(clusters_.size());
    c.level = level;
    c.members = std::move(groups[k]);
    c.portal = portals[k];
    c.representative = c.members[0];
    for (Vertex v : c.members) {
      if (of[v] != kNoCluster) {
        throw std::invalid_argument("vertex " + std::to_string(v) + " in two clusters");
      }
      of[v] = c.id;
      const ClusterId child = cluster_of_[level - 1][v];
      if (clusters_[child].parent == kNoCluster) {
        clusters_[child].parent = c.id;
        c.children.push_back(child);
      } else if (clusters_[child].parent != c.id) {
        throw std::invalid_argument("level " + std::to_string(level) +
                                    " does not refine into level " + std::to_string(level - 1));
      }
    }
    std::sort(c.children.begin(), c.children.end());
    if (c.children.size() == 1) {
      c.diameter = clusters_[c.children[0]].diameter;
    } else {
      c.diameter = strong_diameter(search, c.members);
    }
    if (c.diameter == kInfinity) {
      throw std::invalid_argument("cluster at level " + std::to_string(level) + " with vertex " +
                                  std::to_string(c.representative) + " is not connected");
    }
    ids.push_back(c.id);
    clusters_.push_back(std::move(c));
  }
  for (Vertex v = 0; v < n_; ++v) {
    if (of[v] == kNoCluster) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " missing from level " +
                                  std::to_string(level));
    }
  }
  levels_.push_back(std::move(ids));
  cluster_of_.push_back(std::move(of));
}

Hierarchy Hierarchy::from_labels(const WeightedGraph& g,
                                 const std::vector<std::vector<int>>& labels) {
  Hierarchy h(g.num_vertices());
  for (const auto& level : labels) {
    std::map<int, std::vector<Vertex>> groups;
    for (Vertex v = 0; v < g.num_vertices(); ++v) groups[level.at(v)].push_back(v);
    std::vector<std::vector<Vertex>> members;
    std::vector<Vertex> portals;
    for (auto& [label, vs] : groups) {
      portals.push_back(vs[0]);
      members.push_back(std::move(vs));
    }
    h.add_level(g, std::move(members), portals);
  }
  return h;
}

ClusterId Hierarchy::cluster_at(int level, Vertex v) const {
  return cluster_of_[std::min(level, top_level())][v];
}

ClusterId Hierarchy::root() const {
  const auto& top = levels_.back();
  if (top.size() != 1) throw std::logic_error("hierarchy top level is not a single cluster");
  return top[0];
}

std::vector<ClusterId> Hierarchy::descendants_at(ClusterId c, int level) const {
  std::vector<ClusterId> frontier = {c};
  for (int l = clusters_[c].level; l > level; --l) {
    std::vector<ClusterId> next;
    for (ClusterId x : frontier) {
      const auto& ch = clusters_[x].children;
      next.insert(next.end(), ch.begin(), ch.end());
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

ClusterPartition Hierarchy::partition(int level) const {
  ClusterPartition p;
  p.cluster_of.assign(n_, -1);
  for (ClusterId c : levels_[level]) {
    const std::int32_t local = static_cast<std::int32_t>(p.members.size());
    for (Vertex v : clusters_[c].members) p.cluster_of[v] = local;
    p.members.push_back(clusters_[c].members);
    p.diameter.push_back(clusters_[c].diameter);
  }
  return p;
}

AggregationResult cluster_aggregation(const WeightedGraph& g, const ClusterPartition& clusters,
                                      std::span<const Vertex> portals, double radius_cap) {
  const std::size_t k = clusters.members.size();
  AggregationResult result;
  result.portal_of.assign(k, kNoVertex);
  result.radius_bound.assign(k, kInfinity);

  // Cheapest connecting edge between adjacent clusters.
  std::vector<std::map<std::int32_t, double>> arcs(k);
  for (const Edge& e : g.edges()) {
    const std::int32_t a = clusters.cluster_of[e.u];
    const std::int32_t b = clusters.cluster_of[e.v];
    if (a == b) continue;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      auto [it, fresh] = arcs[x].emplace(y, e.w);
      if (!fresh) it->second = std::min(it->second, e.w);
    }
  }

  PathSearch search(g);
  using Entry = std::tuple<double, Vertex, std::int32_t>;  // (radius, portal, cluster)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  auto seed = [&](Vertex p) {
    const std::int32_t c = clusters.cluster_of[p];
    heap.push({eccentricity(search, clusters.members[c], p), p, c});
  };
  std::vector<Vertex> sorted_portals(portals.begin(), portals.end());
  std::sort(sorted_portals.begin(), sorted_portals.end());
  for (Vertex p : sorted_portals) seed(p);

  std::size_t assigned = 0;
  std::size_t next_unassigned = 0;
  while (assigned < k) {
    if (heap.empty()) {
      while (result.portal_of[next_unassigned] != kNoVertex) ++next_unassigned;
      const Vertex p = clusters.members[next_unassigned][0];
      result.extra_portals.push_back(p);
      seed(p);
    }
    while (!heap.empty()) {
      auto [r, p, c] = heap.top();
      heap.pop();
      if (result.portal_of[c] != kNoVertex) continue;
      result.portal_of[c] = p;
      result.radius_bound[c] = r;
      ++assigned;
      for (const auto& [b, w] : arcs[c]) {
        if (result.portal_of[b] != kNoVertex) continue;
        const double nr = r + w + clusters.diameter[b];
        if (nr <= radius_cap + kTolerance) heap.push({nr, p, b});
      }
    }
  }
  return result;
}

double aggregation_distortion(const WeightedGraph& g, const ClusterPartition& clusters,
                              const AggregationResult& result, std::span<const Vertex> portals) {
  PathSearch search(g);
  search.run(portals);
  std::vector<double> to_portals(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) to_portals[v] = search.dist(v);

  std::map<Vertex, std::vector<Vertex>> preimage;
  for (std::size_t c = 0; c < clusters.members.size(); ++c) {
    auto& bucket = preimage[result.portal_of[c]];
    bucket.insert(bucket.end(), clusters.members[c].begin(), clusters.members[c].end());
  }
  double worst = 0.0;
  for (auto& [p, members] : preimage) {
    search.restrict_to(members);
    search.run_from(p);
    for (Vertex v : members) worst = std::max(worst, search.dist(v) - to_portals[v]);
  }
  return worst;
}

namespace {

Hierarchy build_hierarchy(const WeightedGraph& g, const SubnetFamily& subnets, int j, double mu,
                          int trivial_top_levels, std::size_t& extra_portals) {
  Hierarchy h(g.num_vertices());
  for (int i = 1; h.level(i - 1).size() > 1; ++i) {
    if (i > 256) throw std::logic_error("hierarchy does not reach a single cluster");
    const ClusterPartition below = h.partition(i - 1);
    const auto& portals = subnets.subnet(j, i);
    const AggregationResult agg =
        cluster_aggregation(g, below, portals, scale_at(mu, i) / 2.0);
    extra_portals += agg.extra_portals.size();
    std::map<Vertex, std::vector<Vertex>> groups;
    for (std::size_t c = 0; c < below.members.size(); ++c) {
      auto& bucket = groups[agg.portal_of[c]];
      bucket.insert(bucket.end(), below.members[c].begin(), below.members[c].end());
    }
    std::vector<std::vector<Vertex>> members;
    std::vector<Vertex> group_portals;
    for (auto& [p, vs] : groups) {
      group_portals.push_back(p);
      members.push_back(std::move(vs));
    }
    h.add_level(g, std::move(members), group_portals);
  }
  int trivial = 1;
  for (int i = h.top_level(); i > 0 && h.level(i - 1).size() == 1; --i) ++trivial;
  for (; trivial < trivial_top_levels; ++trivial) {
    const Cluster& top = h.cluster(h.root());
    h.add_level(g, {top.members}, {top.portal});
  }
  return h;
}

}  // namespace

HPFamily build_hpf(const WeightedGraph& g, const HpfParameters& params) {
  if (!(params.mu >= 2.0)) throw std::invalid_argument("mu must be at least 2");
  if (!(params.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  HPFamily hpf;
  hpf.params = params;
  hpf.nets = build_net_hierarchy(g, params.mu, params.eta);
  hpf.subnets = build_subnet_family(g, hpf.nets);
  for (int j = 0; j < hpf.subnets.sigma; ++j) {
    std::size_t extra = 0;
    hpf.hierarchies.push_back(build_hierarchy(g, hpf.subnets, j, params.mu,
                                              std::max(1, params.trivial_top_levels), extra));
    hpf.extra_portals.push_back(extra);
  }
  const HpfCheckReport check = verify_hpf_structure(g, hpf);
  if (!check.ok) throw std::logic_error("hierarchy invariant violated: " + check.problems[0]);
  return hpf;
}

PairMode parse_pair_mode(const std::string& name) {
  if (name == "demand") return PairMode::kDemand;
  if (name == "exhaustive") return PairMode::kExhaustive;
  if (name == "theory") return PairMode::kTheory;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

const char* to_string(PairMode mode) {
  switch (mode) {
    case PairMode::kDemand:
      return "demand";
    case PairMode::kExhaustive:
      return "exhaustive";
    case PairMode::kTheory:
      return "theory";
  }
  return "unknown";
}

PaddingReport verify_padding(const WeightedGraph& g, const HPFamily& hpf, double rho,
                             std::span<const Vertex> sample) {
  PaddingReport report;
  std::vector<Vertex> vertices(sample.begin(), sample.end());
  if (vertices.empty()) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) vertices.push_back(v);
  }
  int top = 0;
  for (const Hierarchy& h : hpf.hierarchies) top = std::max(top, h.top_level());
  PathSearch search(g);
  for (Vertex v : vertices) {
    for (int i = 1; i <= top; ++i) {
      search.run_from(v, scale_at(hpf.params.mu, i) / rho);
      const auto& ball = search.settled();
      bool padded = false;
      for (const Hierarchy& h : hpf.hierarchies) {
        const ClusterId c = h.cluster_at(i, v);
        padded = std::all_of(ball.begin(), ball.end(),
                             [&](Vertex x) { return h.cluster_at(i, x) == c; });
        if (padded) break;
      }
      ++report.checked;
      if (!padded) report.failures.push_back({v, i});
    }
  }
  return report;
}

HpfCheckReport verify_hpf_structure(const WeightedGraph& g, const HPFamily& hpf) {
  HpfCheckReport report;
  auto problem = [&](const std::string& what) {
    report.ok = false;
    report.problems.push_back(what);
  };
  const int n = g.num_vertices();
  PathSearch search(g);
  for (std::size_t hi = 0; hi < hpf.hierarchies.size(); ++hi) {
    const Hierarchy& h = hpf.hierarchies[hi];
    const std::string tag = "hierarchy " + std::to_string(hi);
    if (h.level(h.top_level()).size() != 1) problem(tag + ": top level is not {V}");
    for (int i = 0; i <= h.top_level(); ++i) {
      std::vector<int> seen(n, 0);
      const double bound = scale_at(hpf.params.mu, i);
      for (ClusterId c : h.level(i)) {
        const Cluster& cl = h.cluster(c);
        for (Vertex v : cl.members) {
          ++seen[v];
          if (h.cluster_at(i, v) != c) problem(tag + ": membership index disagrees");
          if (i > 0 && h.cluster(h.cluster_at(i - 1, v)).parent != c) {
            problem(tag + ": level " + std::to_string(i) + " is not a coarsening");
          }
        }
        if (cl.diameter > bound + kTolerance) {
          problem(tag + ": cluster " + std::to_string(c) + " at level " + std::to_string(i) +
                  " has strong diameter " + format_double(cl.diameter) + " > " +
                  format_double(bound));
        }
        if (cl.members.size() > 1 && cl.members.size() <= kExactDiameterLimit &&
            cl.children.size() == 1) {
          continue;  // same vertex set as its child, already checked
        }
        if (cl.members.size() > 1 &&
            eccentricity(search, cl.members, cl.representative) > bound + kTolerance) {
          problem(tag + ": representative eccentricity exceeds mu^i in cluster " +
                  std::to_string(c));
        }
      }
      for (Vertex v = 0; v < n; ++v) {
        if (seen[v] != 1) problem(tag + ": level " + std::to_string(i) + " is not a partition");
      }
    }
  }
  return report;
}

}  // namespace treecover
