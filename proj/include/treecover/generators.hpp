#ifndef TREECOVER_GENERATORS_HPP_
#define TREECOVER_GENERATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

enum class GraphKind { kPath, kGrid, kRandomGeometric, kStarExponential, kUniformLine };

GraphKind parse_graph_kind(const std::string& name);
const char* to_string(GraphKind kind);

struct GeneratorParams {
  int size = 0;        // n, or the side length k for grids
  int dim = 2;         // random_geometric only
  double radius = 0;   // random_geometric only; 0 picks a default
};

// Weights from the random generators are multiples of 1/1024, so sums
// along paths are exact in double precision.
WeightedGraph generate(GraphKind kind, const GeneratorParams& params, std::uint64_t seed);

WeightedGraph make_path(int n, std::uint64_t seed);
WeightedGraph make_grid(int k);
WeightedGraph make_random_geometric(int n, int dim, double radius, std::uint64_t seed);
WeightedGraph make_star_exponential(int n);
WeightedGraph make_uniform_line(int n);

// Uniform double in [0, 1) from one 64-bit draw; identical on every
// platform, unlike std::uniform_real_distribution.
double unit_draw(std::uint64_t bits);

}  // namespace treecover

#endif  // TREECOVER_GENERATORS_HPP_
