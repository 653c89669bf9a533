#ifndef TREECOVER_CLI_HPP_
#define TREECOVER_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treecover/graph.hpp"

namespace treecover {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitUsage = 2;

// Default sample size when the graph is too large for all pairs.
inline constexpr std::size_t kDefaultSampleSize = 10000;
inline constexpr int kAllPairsLimit = 512;

// Lines "u v"; blank lines and lines starting with '#' are skipped.
// Throws std::invalid_argument naming the first malformed line.
std::vector<std::pair<Vertex, Vertex>> parse_pairs(std::string_view text, int n);

// "all", "auto" (all for n <= 512, else a sample), "sample:K" (every edge
// plus random pairs up to K in total) or a path to a pairs file.
// Returns the pairs with u < v, sorted and deduplicated.
std::vector<std::pair<Vertex, Vertex>> resolve_pairs(const WeightedGraph& g,
                                                     const std::string& source,
                                                     std::uint64_t seed);

// Runs the command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treecover

#endif  // TREECOVER_CLI_HPP_
