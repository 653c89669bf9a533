#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "treecover/hpf.hpp"
#include "treecover/shortest_paths.hpp"

namespace treecover {

namespace {

// Per hierarchy: cluster -> ordered list of distinct subcluster pairs.
using PairLists = std::map<ClusterId, std::vector<std::pair<ClusterId, ClusterId>>>;

struct Hit {
  std::int32_t hierarchy;
  ClusterId cluster;
  int level;
  std::size_t slot;  // position in the cluster's pair list
};

double cluster_distance(PathSearch& search, const Cluster& a, const Cluster& b) {
  search.use_whole_graph();
  search.run(a.members);
  double best = kInfinity;
  for (Vertex v : b.members) best = std::min(best, search.dist(v));
  return best;
}

std::pair<ClusterId, ClusterId> ordered(ClusterId a, ClusterId b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

// Scans levels bottom-up and hierarchies in index order for a cluster
// holding u and v in distinct subclusters with d_{G[C]}(u,v) = d_G(u,v).
// `accept` decides whether the subcluster pair can be used and returns
// its slot.
void search_pairs(const WeightedGraph& g, const HPFamily& hpf,
                  std::span<const std::pair<Vertex, Vertex>> demanded,
                  const std::function<std::optional<std::size_t>(std::int32_t, ClusterId,
                                                                 ClusterId, ClusterId)>& accept,
                  const std::function<void(Vertex, Vertex, double, const Hit&)>& on_hit,
                  std::vector<std::pair<Vertex, Vertex>>& unresolved) {
  std::map<Vertex, std::vector<Vertex>> by_source;
  for (auto [u, v] : demanded) {
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    by_source[u].push_back(v);
  }
  int top = 0;
  for (const Hierarchy& h : hpf.hierarchies) top = std::max(top, h.top_level());

  PathSearch whole(g);
  PathSearch inside(g);
  for (auto& [u, targets] : by_source) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    whole.run_from(u);
    std::vector<Vertex> pending = targets;
    for (int i = 1; i <= top && !pending.empty(); ++i) {
      for (std::size_t hi = 0; hi < hpf.hierarchies.size() && !pending.empty(); ++hi) {
        const Hierarchy& h = hpf.hierarchies[hi];
        if (i > h.top_level()) continue;
        const ClusterId c = h.cluster_at(i, u);
        const int sub = std::max(i - hpf.ell, 0);
        const ClusterId cu = h.cluster_at(sub, u);
        bool searched = false;
        std::vector<Vertex> still;
        for (Vertex v : pending) {
          bool hit = false;
          if (h.cluster_at(i, v) == c && h.cluster_at(sub, v) != cu) {
            if (!searched) {
              inside.restrict_to(h.cluster(c).members);
              inside.run_from(u);
              searched = true;
            }
            const double dg = whole.dist(v);
            if (inside.dist(v) <= dg + kTolerance) {
              const ClusterId cv = h.cluster_at(sub, v);
              if (auto slot = accept(static_cast<std::int32_t>(hi), c, cu, cv)) {
                on_hit(u, v, dg, Hit{static_cast<std::int32_t>(hi), c, i, *slot});
                hit = true;
              }
            }
          }
          if (!hit) still.push_back(v);
        }
        pending = std::move(still);
      }
    }
    for (Vertex v : pending) unresolved.push_back({u, v});
  }
}

}  // namespace

PairReport make_pair_preserving(HPFamily& hpf, const WeightedGraph& g, double epsilon,
                                PairMode mode,
                                std::span<const std::pair<Vertex, Vertex>> demanded) {
  const double mu = hpf.params.mu;
  hpf.epsilon = epsilon;
  hpf.ell = offset_levels(mu, epsilon);
  if (mode == PairMode::kTheory) {
    if (hpf.params.rho < 24.0) throw std::invalid_argument("theory mode needs rho >= 24");
    if (hpf.params.eta < 5.0) throw std::invalid_argument("theory mode needs eta >= 5");
  }
  if (mode == PairMode::kExhaustive && g.num_vertices() > 64) {
    throw std::invalid_argument("exhaustive mode is limited to n <= 64");
  }
  const std::size_t num_h = hpf.hierarchies.size();
  std::vector<PairLists> lists(num_h);
  std::vector<std::map<std::tuple<ClusterId, ClusterId, ClusterId>, std::size_t>> slots(num_h);
  PathSearch search(g);

  auto register_pair = [&](std::int32_t hi, ClusterId c, ClusterId a, ClusterId b) {
    const auto key = std::tuple{c, ordered(a, b).first, ordered(a, b).second};
    auto it = slots[hi].find(key);
    if (it != slots[hi].end()) return it->second;
    auto& list = lists[hi][c];
    list.push_back(ordered(a, b));
    slots[hi].emplace(key, list.size() - 1);
    return list.size() - 1;
  };

  if (mode == PairMode::kExhaustive) {
    // All pairs of subclusters separated by more than mu^i / (4 mu rho).
    for (std::size_t hi = 0; hi < num_h; ++hi) {
      const Hierarchy& h = hpf.hierarchies[hi];
      for (int i = 1; i <= h.top_level(); ++i) {
        const double threshold = scale_at(mu, i) / (4.0 * mu * hpf.params.rho);
        for (ClusterId c : h.level(i)) {
          const auto subs = h.descendants_at(c, std::max(i - hpf.ell, 0));
          for (std::size_t x = 0; x < subs.size(); ++x) {
            for (std::size_t y = x + 1; y < subs.size(); ++y) {
              const double d = cluster_distance(search, h.cluster(subs[x]), h.cluster(subs[y]));
              if (d > threshold + kTolerance) {
                register_pair(static_cast<std::int32_t>(hi), c, subs[x], subs[y]);
              }
            }
          }
        }
      }
    }
  }

  struct RawHit {
    Vertex u, v;
    double distance;
    Hit hit;
  };
  std::vector<RawHit> hits;
  PairReport report;
  auto accept = [&](std::int32_t hi, ClusterId c, ClusterId a,
                    ClusterId b) -> std::optional<std::size_t> {
    if (mode != PairMode::kExhaustive) return register_pair(hi, c, a, b);
    auto it = slots[hi].find(std::tuple{c, ordered(a, b).first, ordered(a, b).second});
    if (it == slots[hi].end()) return std::nullopt;
    return it->second;
  };
  search_pairs(
      g, hpf, demanded, accept,
      [&](Vertex u, Vertex v, double d, const Hit& hit) { hits.push_back({u, v, d, hit}); },
      report.unresolved);

  // Materialize copies: copy t of hierarchy h takes every cluster's t-th pair.
  hpf.copies.clear();
  std::vector<std::int32_t> first_copy(num_h, -1);
  for (std::size_t hi = 0; hi < num_h; ++hi) {
    std::size_t count = 0;
    for (const auto& [c, list] : lists[hi]) count = std::max(count, list.size());
    if (count == 0) continue;
    first_copy[hi] = static_cast<std::int32_t>(hpf.copies.size());
    const Hierarchy& h = hpf.hierarchies[hi];
    for (std::size_t t = 0; t < count; ++t) {
      HierarchyCopy copy;
      copy.hierarchy = static_cast<std::int32_t>(hi);
      copy.copy = static_cast<std::int32_t>(t);
      copy.pair_of.assign(h.num_clusters(), std::nullopt);
      for (const auto& [c, list] : lists[hi]) {
        if (t >= list.size()) continue;
        SubclusterPair pair;
        pair.first = list[t].first;
        pair.second = list[t].second;
        pair.separation = cluster_distance(search, h.cluster(pair.first), h.cluster(pair.second));
        pair.rho_eff = scale_at(mu, h.cluster(c).level) / pair.separation;
        copy.pair_of[c] = pair;
        ++report.assignments;
      }
      hpf.copies.push_back(std::move(copy));
    }
  }
  if (hpf.copies.empty()) {
    HierarchyCopy copy;
    copy.pair_of.assign(hpf.hierarchies[0].num_clusters(), std::nullopt);
    hpf.copies.push_back(std::move(copy));
  }

  for (const RawHit& r : hits) {
    PreservedPair p;
    p.u = r.u;
    p.v = r.v;
    p.copy = first_copy[r.hit.hierarchy] + static_cast<std::int32_t>(r.hit.slot);
    p.cluster = r.hit.cluster;
    p.level = r.hit.level;
    p.distance = r.distance;
    p.rho_eff = scale_at(mu, r.hit.level) / r.distance;
    report.preserved.push_back(p);
  }
  return report;
}

}  // namespace treecover
