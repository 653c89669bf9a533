#ifndef TREECOVER_COVER_IO_HPP_
#define TREECOVER_COVER_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treecover/graph.hpp"
#include "treecover/hpf.hpp"
#include "treecover/tree_cover.hpp"

namespace treecover {

inline constexpr int kCoverSchemaVersion = 1;
inline constexpr int kStatsSchemaVersion = 1;

enum class CoverVariant { kLight, kSpanner };

CoverVariant parse_cover_variant(const std::string& name);
const char* to_string(CoverVariant v);

struct CoverFileTree {
  Vertex root = kNoVertex;
  TreeProvenance provenance;
  std::vector<std::pair<Vertex, Vertex>> edges;  // u < v, sorted
};

// Everything needed to rebuild a cover deterministically, plus its trees.
struct CoverFile {
  CoverVariant variant = CoverVariant::kLight;
  CoverConfig config;  // demanded_pairs empty means all pairs
  std::string pair_source = "all";
  std::uint64_t seed = 42;
  int ell = 1;
  int num_vertices = 0;
  int num_edges = 0;
  std::vector<CoverFileTree> trees;
};

CoverFile make_cover_file(const WeightedGraph& g, const TreeCover& cover, CoverVariant variant,
                          const std::string& pair_source, std::uint64_t seed);

std::string write_cover(const CoverFile& file);
// Throws std::invalid_argument on malformed input.
CoverFile parse_cover(std::string_view text);
CoverFile load_cover_file(const std::string& path);

// Converts endpoint pairs to edge ids of g. Pairs that are not edges of
// g are dropped and reported in `problems`.
TreeCover cover_from_file(const WeightedGraph& g, const CoverFile& file,
                          std::vector<std::string>& problems);

// Per hierarchy its cluster records; per copy its assigned pairs.
std::string write_hpf(const HPFamily& hpf);

}  // namespace treecover

#endif  // TREECOVER_COVER_IO_HPP_
