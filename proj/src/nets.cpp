#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treecover/graph_algorithms.hpp"
#include "treecover/hpf.hpp"
#include "treecover/shortest_paths.hpp"

namespace treecover {

namespace {

// Runaway guard for the level loops; mu >= 2 and integral-ish weights
// never come close.
constexpr int kMaxLevels = 256;

std::vector<Vertex> all_vertices(int n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

double scale_at(double mu, int level) {
  double s = 1.0;
  for (int k = 0; k < level; ++k) s *= mu;
  return s;
}

int offset_levels(double mu, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  if (!(mu >= 2.0)) throw std::invalid_argument("mu must be at least 2");
  const double target = 1.0 / epsilon;
  int ell = 1;
  while (scale_at(mu, ell) < target * (1.0 - 1e-12)) ++ell;
  return ell;
}

double NetHierarchy::delta(int i) const { return scale_at(mu, i) / (6.0 * eta); }

NetHierarchy build_net_hierarchy(const WeightedGraph& g, double mu, double eta) {
  NetHierarchy nets;
  nets.mu = mu;
  nets.eta = eta;
  nets.levels.push_back(all_vertices(g.num_vertices()));
  while (nets.levels.back().size() > 1) {
    const int i = static_cast<int>(nets.levels.size());
    if (i > kMaxLevels) throw std::logic_error("net hierarchy does not terminate");
    nets.levels.push_back(greedy_net(g, nets.levels.back(), {}, nets.delta(i)));
  }
  return nets;
}

const std::vector<Vertex>& SubnetFamily::subnet(int j, int i) const {
  const auto& levels = subnets[j];
  return levels[std::min<std::size_t>(i, levels.size() - 1)];
}

int measure_sigma(const WeightedGraph& g, const NetHierarchy& nets) {
  PathSearch search(g);
  std::vector<char> in_net(g.num_vertices(), 0);
  int sigma = 1;
  for (int i = 0; i <= nets.top_level(); ++i) {
    const auto& level = nets.levels[i];
    for (Vertex p : level) in_net[p] = 1;
    const double radius = scale_at(nets.mu, i) / 3.0;
    for (Vertex p : level) {
      search.run_from(p, radius);
      int count = 0;
      for (Vertex v : search.settled()) count += in_net[v];
      sigma = std::max(sigma, count);
    }
    for (Vertex p : level) in_net[p] = 0;
  }
  return sigma;
}

SubnetFamily build_subnet_family(const WeightedGraph& g, const NetHierarchy& nets) {
  const int n = g.num_vertices();
  const int top = nets.top_level();
  SubnetFamily family;
  family.mu = nets.mu;
  family.sigma = measure_sigma(g, nets);
  const int sigma = family.sigma;
  family.seeds.assign(sigma, std::vector<std::vector<Vertex>>(top + 1));

  // Top-down: only the first subset is seeded with the top net point, so
  // the seed sets stay disjoint across subsets.
  family.seeds[0][top] = nets.levels[top];
  PathSearch search(g);
  std::vector<char> placed(n, 0);
  std::vector<char> covered(n, 0);
  for (int i = top - 1; i >= 0; --i) {
    const double packing = scale_at(nets.mu, i) / 3.0;
    std::fill(placed.begin(), placed.end(), 0);
    for (int j = 0; j < sigma; ++j) {
      family.seeds[j][i] = family.seeds[j][i + 1];
      for (Vertex p : family.seeds[j][i]) placed[p] = 1;
    }
    std::vector<Vertex> leftovers;
    for (Vertex p : nets.levels[i]) {
      if (!placed[p]) leftovers.push_back(p);
    }
    std::size_t remaining = leftovers.size();
    for (int j = 0; j < sigma && remaining > 0; ++j) {
      auto& seed = family.seeds[j][i];
      std::vector<Vertex> touched;
      auto cover_from = [&](Vertex p) {
        search.run_from(p, packing);
        for (Vertex v : search.settled()) {
          if (!covered[v]) {
            covered[v] = 1;
            touched.push_back(v);
          }
        }
      };
      for (Vertex p : seed) cover_from(p);
      bool used = false;
      for (Vertex q : leftovers) {
        if (placed[q] || covered[q]) continue;
        placed[q] = 1;
        --remaining;
        seed.push_back(q);
        used = true;
        cover_from(q);
      }
      for (Vertex v : touched) covered[v] = 0;
      std::sort(seed.begin(), seed.end());
      if (used) family.subsets_used = std::max(family.subsets_used, j + 1);
    }
    if (remaining > 0) {
      throw std::logic_error("subnet family: " + std::to_string(remaining) +
                             " leftover points at level " + std::to_string(i) +
                             " do not fit in " + std::to_string(sigma) + " subsets");
    }
  }

  // Bottom-up: complete each seed set into a mu^i/3-net of the subnet
  // one level down. Past the top net level only the first subset keeps
  // its seed; all subsets continue until they are single points.
  family.subnets.assign(sigma, {});
  for (int j = 0; j < sigma; ++j) family.subnets[j].push_back(all_vertices(n));
  for (int i = 1;; ++i) {
    if (i > kMaxLevels) throw std::logic_error("subnet family does not terminate");
    bool all_single = true;
    for (int j = 0; j < sigma; ++j) {
      const std::vector<Vertex> empty;
      const std::vector<Vertex>& seed =
          i <= top ? family.seeds[j][i] : (j == 0 ? family.seeds[0][top] : empty);
      family.subnets[j].push_back(
          greedy_net(g, family.subnets[j][i - 1], seed, scale_at(nets.mu, i) / 3.0));
      all_single = all_single && family.subnets[j][i].size() == 1;
    }
    if (i >= top && all_single) break;
  }
  return family;
}

}  // namespace treecover
