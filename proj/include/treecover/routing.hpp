#ifndef TREECOVER_ROUTING_HPP_
#define TREECOVER_ROUTING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treecover/graph.hpp"
#include "treecover/hpf.hpp"
#include "treecover/tree_cover.hpp"
#include "treecover/tree_oracle.hpp"

namespace treecover {

using Port = std::uint64_t;

// Bits per serialized integer: ceil(2 log2 n), at least 1.
int field_bits(int n);

// Fixed-port model: every directed edge u -> v gets a port at u, drawn at
// random before any scheme is built.
class PortAssignment {
 public:
  PortAssignment() = default;
  PortAssignment(const WeightedGraph& g, std::uint64_t seed);

  int bits() const { return bits_; }
  Port port(Vertex u, Vertex v) const;
  // kNoVertex when u has no such port.
  Vertex neighbor(Vertex u, Port p) const;
  const std::vector<std::pair<Port, Vertex>>& ports_at(Vertex u) const { return by_port_[u]; }

 private:
  int n_ = 0;
  int bits_ = 1;
  std::vector<std::vector<std::pair<Port, Vertex>>> by_port_;  // sorted by port
  std::unordered_map<std::uint64_t, Port> port_of_;
};

PortAssignment assign_ports(const WeightedGraph& g, std::uint64_t seed);

// Largest number of edges at one vertex whose weights fit in a window
// [l, 2l], found by sliding over the sorted incident weights.
int measure_alpha(const WeightedGraph& spanner);

int routing_beta(int alpha, double epsilon);

struct Interval {
  int lo = 0;
  int hi = -1;
  bool contains(int t) const { return lo <= t && t <= hi; }
  bool operator==(const Interval&) const = default;
};

struct PortedInterval {
  Interval interval;
  Port port = 0;
};

struct RoutingTable {
  Interval own;                         // Item 1
  std::optional<Port> parent_port;      // Item 1, absent at the root
  std::vector<PortedInterval> children;  // Item 2: first beta children
  std::optional<Interval> parent;       // Item 3
  std::vector<PortedInterval> siblings;  // Item 4: next beta siblings, parent's ports
};

struct TreeRoutingState {
  Vertex root = kNoVertex;
  int alpha = 0;
  int beta = 0;
  int field_bits = 1;
  std::vector<int> label;              // DFS timestamp per vertex
  std::vector<Vertex> vertex_at;       // inverse of label
  std::vector<std::vector<Vertex>> children;  // in DFS order
  std::vector<RoutingTable> table;
  TreeOracle oracle;

  // Integers stored in a table, each field_bits wide.
  std::size_t table_fields(Vertex v) const;
  std::size_t table_bits(Vertex v) const { return table_fields(v) * field_bits; }
};

// DFS from tree.root taking the lightest edge first (ties by child id).
// Throws std::invalid_argument if a tree edge is not a spanner edge.
TreeRoutingState build_tree_routing(const WeightedGraph& g, const SpanningTree& tree,
                                    const WeightedGraph& spanner, const PortAssignment& ports,
                                    double epsilon, int alpha);
TreeRoutingState build_tree_routing(const WeightedGraph& g, const SpanningTree& tree,
                                    const WeightedGraph& spanner, const PortAssignment& ports,
                                    double epsilon);

enum class RoutingCase { k0, k1a, k1b, k1c, k2a, k2b, k2c, kError };
const char* to_string(RoutingCase c);

struct RoutingDecision {
  bool done = false;
  Port port = 0;
  std::optional<Port> header;
  RoutingCase rule = RoutingCase::k0;
};

RoutingDecision routing_decision(const RoutingTable& table, int dest_label,
                                 const std::optional<Port>& header);

struct RouteTrace {
  std::vector<Vertex> vertices;
  std::vector<Port> ports;
  double weight = 0;
  int hops = 0;
  bool terminated = false;
  double tree_distance = 0;
  bool within_bound = true;  // weight <= (1+eps) d_T + tolerance
  std::size_t max_header_bits = 0;
  std::string error;
};

RouteTrace simulate_route(const WeightedGraph& g, const PortAssignment& ports,
                          const TreeRoutingState& state, double epsilon, Vertex s, Vertex t);

// Tree selection over compressed subhierarchies.

struct ApexRecord {
  Interval interval;  // DFS interval of the apex in the compressed tree
  int level = 0;      // hierarchy level of the apex cluster
  int l1 = -1;        // child containing the leaf
  int l2 = -1;        // heavy child, -1 if none
  int l3a = -1;       // assigned pair, -1 if none
  int l3b = -1;
};

struct SubhierarchyLabel {
  int leaf = 0;  // DFS timestamp of the leaf
  std::vector<ApexRecord> apices;
};

struct SelectionLabel {
  std::vector<SubhierarchyLabel> parts;  // one per subhierarchy, in tree order
};

struct CompressedNode {
  ClusterId top = kNoCluster;     // topmost cluster of the contracted chain
  ClusterId bottom = kNoCluster;  // cluster whose children are the node's children
  int parent = -1;
  std::vector<int> children;  // ordered by cluster id of the child
  int leaves = 0;
  int heavy = -1;  // index into children, -1 if none
  int pair_a = -1, pair_b = -1;  // indices into children
  Interval interval;
};

struct CompressedSubhierarchy {
  std::size_t tree = 0;
  std::int32_t copy = 0;
  int offset = 0;
  std::vector<CompressedNode> nodes;  // nodes[0] is the root
  std::vector<int> leaf_of;           // per vertex
};

// Levels j, j-l, j-2l, ... and finally 0.
std::vector<int> subhierarchy_levels(int offset, int ell);

CompressedSubhierarchy compress_subhierarchy(const HPFamily& hpf, std::size_t copy, int offset);

struct SelectionScheme {
  std::vector<CompressedSubhierarchy> subhierarchies;
  std::vector<SelectionLabel> labels;
  int field_bits = 1;
  int name_bits = 1;
  std::size_t record_bits() const { return 2 * field_bits + 4 * static_cast<std::size_t>(name_bits); }
  std::size_t label_bits(Vertex v) const;
};

// Trees of `cover` must come from `hpf` (one per copy and offset).
SelectionScheme build_selection_labels(const HPFamily& hpf, const TreeCover& cover);

// Index of the first subhierarchy whose lca assignment holds x and y.
std::optional<std::size_t> select_tree(const SelectionLabel& x, const SelectionLabel& y);

// Same question answered on the uncompressed cluster tree.
std::optional<std::size_t> select_tree_brute_force(const HPFamily& hpf, const TreeCover& cover,
                                                   Vertex x, Vertex y);

struct RoutingScheme {
  PortAssignment ports;
  int alpha = 0;
  int beta = 0;
  double epsilon = 0;
  std::vector<TreeRoutingState> trees;
  SelectionScheme selection;
};

RoutingScheme build_routing_scheme(const WeightedGraph& g, const LightCover& light,
                                   std::uint64_t seed);

struct EndToEndRoute {
  bool selected = false;
  std::size_t tree = 0;
  RouteTrace trace;
};

EndToEndRoute route_end_to_end(const WeightedGraph& g, const RoutingScheme& scheme, Vertex s,
                               Vertex t);

struct SchemeSizes {
  std::size_t label_bits_max = 0;
  std::size_t table_bits_max = 0;
  std::size_t header_bits = 0;
  std::size_t selection_bits_max = 0;
  std::size_t max_apices = 0;
};

SchemeSizes measure_sizes(const RoutingScheme& scheme, int n);

}  // namespace treecover

#endif  // TREECOVER_ROUTING_HPP_
