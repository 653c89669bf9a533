#ifndef TREECOVER_GRAPH_HPP_
#define TREECOVER_GRAPH_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treecover {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

// Absolute slack used whenever two sums of weights are compared.
inline constexpr double kTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr Vertex kNoVertex = -1;

struct Edge {
  Vertex u;
  Vertex v;
  double w;
};

struct Arc {
  Vertex to;
  double w;
  EdgeId edge;
};

enum class GraphErrorKind {
  kMalformed,
  kVertexOutOfRange,
  kSelfLoop,
  kNonpositiveWeight,
  kDuplicateEdge,
  kDisconnected,
  kEmpty,
};

const char* to_string(GraphErrorKind kind);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  GraphErrorKind kind() const { return kind_; }

 private:
  GraphErrorKind kind_;
};

// Undirected, connected, positively weighted graph on vertices 0..n-1.
// Edges are stored with u < v; edge ids are positions in edges().
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Arc> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;
  double total_weight() const;
  double min_weight() const;

  // Same topology, every weight multiplied by `factor`.
  WeightedGraph scaled(double factor) const;

 private:
  static std::uint64_t key(Vertex u, Vertex v);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
};

// Edge-list text format: "n m", then m lines "u v w". Lines starting
// with '#' are ignored.
WeightedGraph parse_graph(std::string_view text);
WeightedGraph load_graph(std::istream& in);
WeightedGraph load_graph_file(const std::string& path);

// Canonical form: edges sorted by (u, v) with u < v, weights printed
// with round-trip precision.
void write_graph(std::ostream& out, const WeightedGraph& g);
std::string format_graph(const WeightedGraph& g);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace treecover

#endif  // TREECOVER_GRAPH_HPP_
