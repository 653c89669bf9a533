#include "treecover/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace treecover {

const char* to_string(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::kMalformed:
      return "malformed";
    case GraphErrorKind::kVertexOutOfRange:
      return "vertex out of range";
    case GraphErrorKind::kSelfLoop:
      return "self loop";
    case GraphErrorKind::kNonpositiveWeight:
      return "nonpositive weight";
    case GraphErrorKind::kDuplicateEdge:
      return "duplicate edge";
    case GraphErrorKind::kDisconnected:
      return "disconnected";
    case GraphErrorKind::kEmpty:
      return "empty graph";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(GraphErrorKind kind, const std::string& detail) {
  throw GraphError(kind, std::string(to_string(kind)) + ": " + detail);
}

}  // namespace

std::uint64_t WeightedGraph::key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) fail(GraphErrorKind::kEmpty, "graph needs at least one vertex");
  adjacency_.assign(n_, {});
  index_.reserve(edges_.size() * 2);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      fail(GraphErrorKind::kVertexOutOfRange,
           "edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    if (e.u == e.v) fail(GraphErrorKind::kSelfLoop, "vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      fail(GraphErrorKind::kNonpositiveWeight,
           "edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    const EdgeId id = static_cast<EdgeId>(i);
    if (!index_.emplace(key(e.u, e.v), id).second) {
      fail(GraphErrorKind::kDuplicateEdge,
           "edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    adjacency_[e.u].push_back({e.v, e.w, id});
    adjacency_[e.v].push_back({e.u, e.w, id});
  }

  std::vector<char> seen(n_, 0);
  std::vector<Vertex> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (const Arc& a : adjacency_[x]) {
      if (!seen[a.to]) {
        seen[a.to] = 1;
        ++reached;
        stack.push_back(a.to);
      }
    }
  }
  if (reached != n_) {
    fail(GraphErrorKind::kDisconnected,
         std::to_string(reached) + " of " + std::to_string(n_) + " vertices reachable");
  }
}

std::optional<EdgeId> WeightedGraph::find_edge(Vertex u, Vertex v) const {
  auto it = index_.find(key(u, v));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.w;
  return total;
}

double WeightedGraph::min_weight() const {
  double best = kInfinity;
  for (const Edge& e : edges_) best = std::min(best, e.w);
  return best;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  std::vector<Edge> edges = edges_;
  for (Edge& e : edges) e.w *= factor;
  return WeightedGraph(n_, std::move(edges));
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, int line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(GraphErrorKind::kMalformed,
         "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

WeightedGraph parse_graph(std::string_view text) {
  int line_no = 0;
  bool have_header = false;
  long long n = 0;
  long long m = 0;
  std::vector<Edge> edges;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (tokens.size() != 2) {
        fail(GraphErrorKind::kMalformed, "line " + std::to_string(line_no) + ": expected 'n m'");
      }
      n = parse_number<long long>(tokens[0], line_no);
      m = parse_number<long long>(tokens[1], line_no);
      if (n < 0 || m < 0 || n > std::numeric_limits<Vertex>::max()) {
        fail(GraphErrorKind::kMalformed, "line " + std::to_string(line_no) + ": bad header");
      }
      have_header = true;
    } else {
      if (tokens.size() != 3) {
        fail(GraphErrorKind::kMalformed, "line " + std::to_string(line_no) + ": expected 'u v w'");
      }
      if (static_cast<long long>(edges.size()) == m) {
        fail(GraphErrorKind::kMalformed,
             "line " + std::to_string(line_no) + ": more edges than declared");
      }
      const long long u = parse_number<long long>(tokens[0], line_no);
      const long long v = parse_number<long long>(tokens[1], line_no);
      const double w = parse_number<double>(tokens[2], line_no);
      if (u < 0 || v < 0 || u >= n || v >= n) {
        fail(GraphErrorKind::kVertexOutOfRange,
             "line " + std::to_string(line_no) + ": vertex id outside 0.." +
                 std::to_string(n - 1));
      }
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
    }
    if (end == text.size()) break;
  }
  if (!have_header) fail(GraphErrorKind::kMalformed, "missing 'n m' header");
  if (static_cast<long long>(edges.size()) != m) {
    fail(GraphErrorKind::kMalformed, "declared " + std::to_string(m) + " edges, found " +
                                         std::to_string(edges.size()));
  }
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph load_graph(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_graph(in);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    const Edge& x = g.edge(a);
    const Edge& y = g.edge(b);
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (EdgeId e : order) {
    const Edge& edge = g.edge(e);
    out << edge.u << ' ' << edge.v << ' ' << format_double(edge.w) << '\n';
  }
}

std::string format_graph(const WeightedGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

}  // namespace treecover
