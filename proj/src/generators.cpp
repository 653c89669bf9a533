#include "treecover/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "treecover/graph_algorithms.hpp"

namespace treecover {

namespace {

constexpr double kQuantum = 1.0 / 1024.0;
constexpr double kGeometricScale = 64.0;
constexpr int kGeometricAttempts = 100;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "path") return GraphKind::kPath;
  if (name == "grid") return GraphKind::kGrid;
  if (name == "random_geometric") return GraphKind::kRandomGeometric;
  if (name == "star_exponential") return GraphKind::kStarExponential;
  if (name == "uniform_line") return GraphKind::kUniformLine;
  throw std::invalid_argument("unknown graph kind '" + name + "'");
}

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kPath:
      return "path";
    case GraphKind::kGrid:
      return "grid";
    case GraphKind::kRandomGeometric:
      return "random_geometric";
    case GraphKind::kStarExponential:
      return "star_exponential";
    case GraphKind::kUniformLine:
      return "uniform_line";
  }
  return "unknown";
}

double unit_draw(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

WeightedGraph make_path(int n, std::uint64_t seed) {
  require(n >= 1, "path needs n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) {
    const double w = 1.0 + static_cast<double>(rng() % 3073) * kQuantum;
    edges.push_back({v, v + 1, w});
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph make_uniform_line(int n) {
  require(n >= 1, "uniform_line needs n >= 1");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph make_grid(int k) {
  require(k >= 1, "grid needs k >= 1");
  std::vector<Edge> edges;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const Vertex v = r * k + c;
      if (c + 1 < k) edges.push_back({v, v + 1, 1.0});
      if (r + 1 < k) edges.push_back({v, v + k, 1.0});
    }
  }
  return WeightedGraph(k * k, std::move(edges));
}

WeightedGraph make_star_exponential(int n) {
  require(n >= 2, "star_exponential needs n >= 2");
  require(n <= 1000, "star_exponential weights overflow beyond n = 1000");
  std::vector<Edge> edges;
  for (Vertex leaf = 1; leaf < n; ++leaf) {
    edges.push_back({0, leaf, std::ldexp(1.0, leaf - 1)});
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph make_random_geometric(int n, int dim, double radius, std::uint64_t seed) {
  require(n >= 1, "random_geometric needs n >= 1");
  require(dim >= 1, "random_geometric needs dim >= 1");
  if (radius <= 0.0) {
    radius = 1.2 * std::pow(std::log(std::max(n, 2)) / n, 1.0 / dim);
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kGeometricAttempts; ++attempt) {
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points) {
      for (double& x : p) x = unit_draw(rng());
    }
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        double sq = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double diff = points[u][d] - points[v][d];
          sq += diff * diff;
        }
        const double dist = std::sqrt(sq);
        if (dist > radius) continue;
        const double w = std::max(1.0, std::ceil(dist * kGeometricScale / kQuantum)) * kQuantum;
        edges.push_back({u, v, w});
      }
    }
    UnionFind uf(n);
    for (const Edge& e : edges) uf.unite(e.u, e.v);
    if (uf.components() == 1) return WeightedGraph(n, std::move(edges));
  }
  throw std::invalid_argument("random_geometric: no connected sample within " +
                              std::to_string(kGeometricAttempts) + " attempts");
}

WeightedGraph generate(GraphKind kind, const GeneratorParams& params, std::uint64_t seed) {
  switch (kind) {
    case GraphKind::kPath:
      return make_path(params.size, seed);
    case GraphKind::kGrid:
      return make_grid(params.size);
    case GraphKind::kRandomGeometric:
      return make_random_geometric(params.size, params.dim, params.radius, seed);
    case GraphKind::kStarExponential:
      return make_star_exponential(params.size);
    case GraphKind::kUniformLine:
      return make_uniform_line(params.size);
  }
  throw std::invalid_argument("unknown graph kind");
}

}  // namespace treecover
