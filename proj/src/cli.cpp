#include "treecover/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "treecover/cover_io.hpp"
#include "treecover/generators.hpp"
#include "treecover/graph_algorithms.hpp"
#include "treecover/oracle.hpp"
#include "treecover/routing.hpp"
#include "treecover/shortest_paths.hpp"
#include "treecover/tree_cover.hpp"

namespace treecover {

using nlohmann::json;

namespace {

// Raised for bad flags or configurations; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
  } else {
    write_file(path, text);
  }
}

WeightedGraph load_graph_or_throw(const std::string& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const GraphError& e) {
    throw UsageError(std::string("bad graph file: ") + e.what());
  }
}

struct CoverOptions {
  std::string graph;
  std::string variant = "light";
  double epsilon = 0.25;
  double mu = 6.0;
  double eta = 1.0;
  double rho = 24.0;
  std::string mode = "demand";
  std::string pairs = "auto";
  std::uint64_t seed = 42;
  std::string out;
  std::string stats;
  std::string hpf;
  bool check_nodes = false;
};

CoverConfig validated_config(double epsilon, double mu, double eta, double rho,
                             const std::string& mode) {
  CoverConfig config;
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("--epsilon must be in (0,1)");
  if (!(mu >= 2.0)) throw UsageError("--mu must be at least 2");
  if (!(eta > 0.0)) throw UsageError("--eta must be positive");
  if (!(rho > 0.0)) throw UsageError("--rho must be positive");
  config.epsilon = epsilon;
  config.mu = mu;
  config.eta = eta;
  config.rho = rho;
  try {
    config.mode = parse_pair_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (config.mode == PairMode::kTheory && (rho < 24.0 || eta < 5.0)) {
    throw UsageError("theory mode needs --rho >= 24 and --eta >= 5");
  }
  return config;
}

// Rebuilds the cover a file describes. Light covers also return the
// spanner and the family.
struct Rebuilt {
  LightCover light;  // spanner and mst unused for the spanner variant
  bool is_light = true;
};

Rebuilt rebuild(const WeightedGraph& g, const CoverFile& file, bool check_nodes) {
  CoverConfig config = file.config;
  config.check_nodes = check_nodes;
  Rebuilt r;
  r.is_light = file.variant == CoverVariant::kLight;
  if (r.is_light) {
    r.light = light_tree_cover(g, config);
  } else {
    CoverBuild b = build_tree_cover(g, config);
    r.light.hpf = std::move(b.hpf);
    r.light.cover = std::move(b.cover);
  }
  return r;
}

json node_check_json(const NodeCheckSummary& s) {
  return {{"nodes", s.nodes},
          {"failures", s.failures},
          {"max_same_cluster_ratio", s.max_same_cluster_ratio},
          {"max_pair_excess_ratio", s.max_pair_excess_ratio},
          {"max_diameter_ratio", s.max_diameter_ratio},
          {"diameter_violations", s.diameter_violations},
          {"problems", s.problems}};
}

int cmd_generate(const std::string& kind, int size, int dim, double radius, std::uint64_t seed,
                 const std::string& out_path, std::ostream& out) {
  GeneratorParams params;
  params.size = size;
  params.dim = dim;
  params.radius = radius;
  GraphKind k;
  try {
    k = parse_graph_kind(kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  WeightedGraph g = [&] {
    try {
      return generate(k, params, seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  emit(out_path, format_graph(g), out);
  return kExitOk;
}

int cmd_cover(const CoverOptions& o, std::ostream& out, std::ostream& err) {
  CoverConfig config = validated_config(o.epsilon, o.mu, o.eta, o.rho, o.mode);
  CoverVariant variant;
  try {
    variant = parse_cover_variant(o.variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const WeightedGraph g = load_graph_or_throw(o.graph);
  const int n = g.num_vertices();
  const bool all = o.pairs == "all" || (o.pairs == "auto" && n <= kAllPairsLimit);
  if (!all) config.demanded_pairs = resolve_pairs(g, o.pairs, o.seed);
  config.check_nodes = o.check_nodes;

  LightCover built;
  if (variant == CoverVariant::kLight) {
    built = light_tree_cover(g, config);
  } else {
    CoverBuild b = build_tree_cover(g, config);
    built.hpf = std::move(b.hpf);
    built.cover = std::move(b.cover);
    built.mst = mst_weight(g);
  }
  const TreeCover& cover = built.cover;
  const std::string source = all ? "all" : o.pairs;
  CoverFile file = make_cover_file(g, cover, variant, source, o.seed);
  emit(o.out, write_cover(file), out);
  if (!o.hpf.empty()) write_file(o.hpf, write_hpf(built.hpf));

  const SpanningReport spanning = verify_spanning(g, cover);
  const PairBoundReport bounds = verify_pair_bounds(g, cover);
  std::vector<std::pair<Vertex, Vertex>> demanded = config.demanded_pairs;
  if (demanded.empty()) demanded = all_pairs(n);
  const StretchReport stretch = cover_stretch(g, cover, demanded);
  double individual = 0;
  double collective = 0;
  for (const SpanningTree& t : cover.trees) {
    const double l = tree_weight(g, t) / built.mst;
    individual = std::max(individual, l);
    collective += l;
  }
  const bool nodes_ok = cover.node_checks.failures == 0;
  const bool ok = spanning.ok && bounds.violations.empty() && cover.pairs.unresolved.empty() &&
                  nodes_ok;
  if (!o.stats.empty()) {
    json stats = {{"schema", kStatsSchemaVersion},
                  {"command", "cover"},
                  {"variant", to_string(variant)},
                  {"num_vertices", n},
                  {"num_edges", g.num_edges()},
                  {"num_trees", cover.trees.size()},
                  {"ell", cover.ell},
                  {"num_hierarchies", built.hpf.hierarchies.size()},
                  {"num_copies", built.hpf.copies.size()},
                  {"demanded_pairs", demanded.size()},
                  {"preserved_pairs", cover.pairs.preserved.size()},
                  {"unresolved_pairs", cover.pairs.unresolved.size()},
                  {"max_stretch", stretch.max},
                  {"mean_stretch", stretch.mean},
                  {"max_pair_excess_ratio", bounds.max_excess_ratio},
                  {"pair_bound_violations", bounds.violations.size()},
                  {"spanning_ok", spanning.ok},
                  {"mst_weight", built.mst},
                  {"individual_lightness", individual},
                  {"collective_lightness", collective},
                  {"max_tree_degree", max_tree_degree(g, cover)}};
    if (variant == CoverVariant::kLight) {
      stats["spanner_edges"] = built.spanner.num_edges();
      stats["spanner_lightness"] = built.spanner_lightness;
    }
    if (o.check_nodes) stats["node_checks"] = node_check_json(cover.node_checks);
    write_file(o.stats, stats.dump(2) + "\n");
  }
  for (const auto& p : spanning.problems) err << "spanning: " << p << "\n";
  for (const auto& p : bounds.violations) {
    err << "pair bound violated for " << p.u << "," << p.v << "\n";
  }
  for (const auto& [u, v] : cover.pairs.unresolved) err << "unresolved pair " << u << "," << v << "\n";
  for (const auto& p : cover.node_checks.problems) err << "node check: " << p << "\n";
  return ok ? kExitOk : kExitVerifyFailure;
}

int cmd_verify(const std::string& graph_path, const std::string& cover_path,
               const std::string& report_path, std::ostream& out) {
  const WeightedGraph g = load_graph_or_throw(graph_path);
  CoverFile file;
  try {
    file = load_cover_file(cover_path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json report = {{"schema", kStatsSchemaVersion}, {"command", "verify"}};
  bool ok = true;
  auto family = [&](const std::string& name, bool pass, const std::vector<std::string>& problems,
                    bool advisory = false) {
    out << (pass ? "PASS " : "FAIL ") << name << (advisory ? " (advisory)" : "") << "\n";
    for (std::size_t k = 0; k < problems.size() && k < 10; ++k) out << "  " << problems[k] << "\n";
    report[name] = {{"pass", pass}, {"advisory", advisory}, {"problems", problems}};
    if (!pass && !advisory) ok = false;
  };

  if (file.num_vertices != g.num_vertices() || file.num_edges != g.num_edges()) {
    family("graph_match", false, {"cover was built for a different graph"});
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
    return kExitVerifyFailure;
  }
  std::vector<std::string> problems;
  const TreeCover cover = cover_from_file(g, file, problems);
  const SpanningReport spanning = verify_spanning(g, cover);
  problems.insert(problems.end(), spanning.problems.begin(), spanning.problems.end());
  family("spanning", problems.empty(), problems);
  if (!problems.empty()) {
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
    return kExitVerifyFailure;
  }

  if (g.num_vertices() <= apsp_cap()) {
    const LowerBoundReport lower = verify_lower_bound(g, cover);
    std::vector<std::string> lp;
    for (auto [u, v] : lower.violations) {
      lp.push_back("tree distance below graph distance for " + std::to_string(u) + "," +
                   std::to_string(v));
    }
    family("lower_bound", lp.empty(), lp);
  }

  const Rebuilt r = rebuild(g, file, true);
  const CoverFile again = make_cover_file(g, r.light.cover, file.variant, file.pair_source, file.seed);
  bool same = again.trees.size() == file.trees.size();
  for (std::size_t k = 0; same && k < file.trees.size(); ++k) {
    same = again.trees[k].edges == file.trees[k].edges && again.trees[k].root == file.trees[k].root;
  }
  family("rebuild_matches", same, same ? std::vector<std::string>{}
                                       : std::vector<std::string>{"trees differ from a rebuild"});

  TreeCover checked = cover;
  checked.pairs = r.light.cover.pairs;
  const PairBoundReport bounds = verify_pair_bounds(g, checked);
  std::vector<std::string> bp;
  for (const PreservedPair& p : bounds.violations) {
    bp.push_back("pair " + std::to_string(p.u) + "," + std::to_string(p.v) + " exceeds its bound");
  }
  for (auto [u, v] : checked.pairs.unresolved) {
    bp.push_back("pair " + std::to_string(u) + "," + std::to_string(v) + " unresolved");
  }
  family("stretch", bp.empty(), bp);
  report["stretch"]["max_excess_ratio"] = bounds.max_excess_ratio;

  const NodeCheckSummary& nodes = r.light.cover.node_checks;
  family("preservable", nodes.failures == 0, nodes.problems);
  report["preservable"]["summary"] = node_check_json(nodes);

  const HPFamily& hpf = r.light.hpf;
  const WeightedGraph base = r.is_light ? r.light.spanner : g;
  const WeightedGraph scaled = base.scaled(hpf.weight_scale);
  const HpfCheckReport structure = verify_hpf_structure(scaled, hpf);
  family("hpf_structure", structure.ok, structure.problems);
  const PaddingReport padding = verify_padding(scaled, hpf, file.config.rho);
  std::vector<std::string> pp;
  for (auto [v, i] : padding.failures) {
    pp.push_back("ball around " + std::to_string(v) + " at level " + std::to_string(i) +
                 " is not padded");
  }
  family("padding", pp.empty(), pp, true);
  report["padding"]["checked"] = padding.checked;

  if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
  return ok ? kExitOk : kExitVerifyFailure;
}

// Fixed-width bit packing for the scheme dump.
class BitWriter {
 public:
  void put(std::uint64_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      if (used_ % 8 == 0) bytes_.push_back(0);
      if ((value >> b) & 1U) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (used_ % 8));
      ++used_;
    }
  }
  std::size_t bits() const { return used_; }
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (std::uint8_t byte : bytes_) {
      s += digits[byte >> 4];
      s += digits[byte & 15];
    }
    return s;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t used_ = 0;
};

json scheme_dump(const RoutingScheme& scheme, int n) {
  const int w = field_bits(n);
  const int k = scheme.selection.name_bits;
  json vertices = json::array();
  for (Vertex v = 0; v < n; ++v) {
    BitWriter label;
    BitWriter table;
    json expanded_tables = json::array();
    for (const TreeRoutingState& t : scheme.trees) {
      label.put(static_cast<std::uint64_t>(t.label[v]), w);
      const RoutingTable& rt = t.table[v];
      table.put(rt.own.lo, w);
      table.put(rt.own.hi, w);
      if (rt.parent_port) table.put(*rt.parent_port, w);
      for (const PortedInterval& c : rt.children) {
        table.put(c.interval.lo, w);
        table.put(c.interval.hi, w);
        table.put(c.port, w);
      }
      if (rt.parent) {
        table.put(rt.parent->lo, w);
        table.put(rt.parent->hi, w);
      }
      for (const PortedInterval& s : rt.siblings) {
        table.put(s.interval.lo, w);
        table.put(s.interval.hi, w);
        table.put(s.port, w);
      }
      json children = json::array();
      for (const PortedInterval& c : rt.children) children.push_back({c.interval.lo, c.interval.hi, c.port});
      json siblings = json::array();
      for (const PortedInterval& s : rt.siblings) siblings.push_back({s.interval.lo, s.interval.hi, s.port});
      json entry = {{"label", t.label[v]}, {"own", {rt.own.lo, rt.own.hi}}, {"children", children},
                    {"siblings", siblings}};
      if (rt.parent_port) entry["parent_port"] = *rt.parent_port;
      if (rt.parent) entry["parent"] = {rt.parent->lo, rt.parent->hi};
      expanded_tables.push_back(entry);
    }
    json expanded_selection = json::array();
    for (const SubhierarchyLabel& part : scheme.selection.labels[v].parts) {
      label.put(static_cast<std::uint64_t>(part.leaf), w);
      json apices = json::array();
      for (const ApexRecord& a : part.apices) {
        label.put(a.interval.lo, w);
        label.put(a.interval.hi, w);
        // Names are stored shifted by one so that "none" is zero.
        label.put(a.l1 + 1, k);
        label.put(a.l2 + 1, k);
        label.put(a.l3a + 1, k);
        label.put(a.l3b + 1, k);
        apices.push_back({{"interval", {a.interval.lo, a.interval.hi}}, {"level", a.level},
                          {"l1", a.l1}, {"l2", a.l2}, {"l3", {a.l3a, a.l3b}}});
      }
      expanded_selection.push_back({{"leaf", part.leaf}, {"apices", apices}});
    }
    vertices.push_back({{"vertex", v},
                        {"label_bits", label.bits()},
                        {"table_bits", table.bits()},
                        {"label", label.hex()},
                        {"table", table.hex()},
                        {"tables", expanded_tables},
                        {"selection", expanded_selection}});
  }
  return {{"schema", kStatsSchemaVersion}, {"field_bits", w}, {"name_bits", k},
          {"alpha", scheme.alpha}, {"beta", scheme.beta}, {"vertices", vertices}};
}

int cmd_route(const std::string& graph_path, const std::string& cover_path,
              const std::string& pairs_source, std::uint64_t seed, const std::string& traces_path,
              const std::string& table_path, const std::string& stats_path,
              const std::string& scheme_path, std::ostream& out, std::ostream& err) {
  const WeightedGraph g = load_graph_or_throw(graph_path);
  CoverFile file;
  try {
    file = load_cover_file(cover_path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (file.num_vertices != g.num_vertices() || file.num_edges != g.num_edges()) {
    throw UsageError("cover was built for a different graph");
  }
  const int n = g.num_vertices();
  if (file.variant != CoverVariant::kLight) {
    err << "note: routing uses the light cover rebuilt from the recorded parameters\n";
    file.variant = CoverVariant::kLight;
  }
  const Rebuilt r = rebuild(g, file, false);
  const RoutingScheme scheme = build_routing_scheme(g, r.light, seed);

  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (pairs_source.empty() || pairs_source == "demanded") {
    pairs = file.config.demanded_pairs.empty() ? all_pairs(n) : file.config.demanded_pairs;
  } else {
    pairs = resolve_pairs(g, pairs_source, seed);
  }
  std::map<std::pair<Vertex, Vertex>, double> rho_eff;
  for (const PreservedPair& p : r.light.cover.pairs.preserved) rho_eff[{p.u, p.v}] = p.rho_eff;

  std::map<Vertex, std::vector<std::size_t>> by_source;
  for (std::size_t k = 0; k < pairs.size(); ++k) by_source[pairs[k].first].push_back(k);
  std::ostringstream traces;
  std::ostringstream table;
  traces << "s,t,hop,vertex,port,cumulative_weight\n";
  table << "s,t,tree,weight,distance,stretch,bound,ok\n";
  const double eps = file.config.epsilon;
  double stretch_max = 1.0;
  double stretch_sum = 0.0;
  std::size_t failures = 0;
  std::size_t selection_failures = 0;
  std::size_t unterminated = 0;
  std::size_t max_hops = 0;
  PathSearch search(g);
  for (const auto& [s, indices] : by_source) {
    search.run_from(s);
    for (std::size_t k : indices) {
      const Vertex t = pairs[k].second;
      const double d = search.dist(t);
      const EndToEndRoute route = route_end_to_end(g, scheme, s, t);
      if (!route.selected) {
        ++selection_failures;
        err << "selection failed for " << s << "," << t << "\n";
        continue;
      }
      const RouteTrace& tr = route.trace;
      if (!tr.terminated) ++unterminated;
      max_hops = std::max<std::size_t>(max_hops, tr.hops);
      double cumulative = 0;
      traces << s << ',' << t << ",0," << s << ",," << format_double(0.0) << "\n";
      for (std::size_t h = 0; h < tr.ports.size(); ++h) {
        const Vertex a = tr.vertices[h];
        const Vertex b = tr.vertices[h + 1];
        cumulative += g.edge(*g.find_edge(a, b)).w;
        traces << s << ',' << t << ',' << h + 1 << ',' << b << ',' << tr.ports[h] << ','
               << format_double(cumulative) << "\n";
      }
      const double stretch = tr.weight / d;
      stretch_max = std::max(stretch_max, stretch);
      stretch_sum += stretch;
      auto it = rho_eff.find({std::min(s, t), std::max(s, t)});
      std::string bound_text;
      bool pair_ok = tr.terminated;
      if (it != rho_eff.end()) {
        const double bound = (1 + eps) * (1 + eps) * (1 + 44.0 * it->second * eps) * d;
        bound_text = format_double(bound);
        pair_ok = pair_ok && tr.weight <= bound + kTolerance;
      }
      if (!pair_ok) ++failures;
      table << s << ',' << t << ',' << route.tree << ',' << format_double(tr.weight) << ','
            << format_double(d) << ',' << format_double(stretch) << ',' << bound_text << ','
            << (pair_ok ? "true" : "false") << "\n";
    }
  }
  if (!traces_path.empty()) write_file(traces_path, traces.str());
  emit(table_path, table.str(), out);
  const SchemeSizes sizes = measure_sizes(scheme, n);
  if (!stats_path.empty()) {
    const std::size_t routed = pairs.size() - selection_failures;
    json stats = {{"schema", kStatsSchemaVersion},
                  {"command", "route"},
                  {"num_vertices", n},
                  {"num_trees", scheme.trees.size()},
                  {"alpha", scheme.alpha},
                  {"beta", scheme.beta},
                  {"label_bits_max", sizes.label_bits_max},
                  {"table_bits_max", sizes.table_bits_max},
                  {"header_bits", sizes.header_bits},
                  {"selection_bits_max", sizes.selection_bits_max},
                  {"max_apices", sizes.max_apices},
                  {"pairs", pairs.size()},
                  {"selection_failures", selection_failures},
                  {"unterminated", unterminated},
                  {"bound_failures", failures},
                  {"max_hops", max_hops},
                  {"stretch_max", stretch_max},
                  {"stretch_mean", routed ? stretch_sum / static_cast<double>(routed) : 1.0}};
    write_file(stats_path, stats.dump(2) + "\n");
  }
  if (!scheme_path.empty()) write_file(scheme_path, scheme_dump(scheme, n).dump() + "\n");
  return failures == 0 && unterminated == 0 ? kExitOk : kExitVerifyFailure;
}

int cmd_oracle(const std::string& graph_path, const std::string& cover_path,
               const std::string& queries_path, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  const WeightedGraph g = load_graph_or_throw(graph_path);
  CoverFile file;
  try {
    file = load_cover_file(cover_path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::string> problems;
  const TreeCover cover = cover_from_file(g, file, problems);
  const SpanningReport spanning = verify_spanning(g, cover);
  if (!problems.empty() || !spanning.ok) {
    for (const auto& p : problems) err << p << "\n";
    for (const auto& p : spanning.problems) err << p << "\n";
    return kExitVerifyFailure;
  }
  std::vector<std::pair<Vertex, Vertex>> queries;
  try {
    queries = parse_pairs(read_file(queries_path), g.num_vertices());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const OracleIndex oracle = build_oracle(g, cover);
  std::ostringstream csv;
  csv << "u,v,estimate,tree,path_len,path\n";
  bool ok = true;
  PathSearch search(g);
  for (auto [u, v] : queries) {
    const PathAnswer a = query_path(oracle, u, v);
    double weight = 0;
    bool edges_ok = true;
    for (std::size_t k = 0; k + 1 < a.path.size(); ++k) {
      auto e = g.find_edge(a.path[k], a.path[k + 1]);
      if (!e) {
        edges_ok = false;
        break;
      }
      weight += g.edge(*e).w;
    }
    search.run_from(u);
    if (!edges_ok || weight != a.distance.estimate || a.distance.estimate < search.dist(v) - kTolerance) {
      err << "inconsistent answer for " << u << "," << v << "\n";
      ok = false;
    }
    csv << u << ',' << v << ',' << format_double(a.distance.estimate) << ',' << a.distance.tree
        << ',' << a.path.size() - 1 << ',';
    for (std::size_t k = 0; k < a.path.size(); ++k) csv << (k ? " " : "") << a.path[k];
    csv << "\n";
  }
  emit(out_path, csv.str(), out);
  return ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

std::vector<std::pair<Vertex, Vertex>> parse_pairs(std::string_view text, int n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::istringstream fields{std::string(line)};
    long long u = 0;
    long long v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0 || u >= n || v >= n) {
      throw std::invalid_argument("malformed pair on line " + std::to_string(line_no) + ": '" +
                                  std::string(line) + "'");
    }
    pairs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return pairs;
}

std::vector<std::pair<Vertex, Vertex>> resolve_pairs(const WeightedGraph& g,
                                                     const std::string& source,
                                                     std::uint64_t seed) {
  const int n = g.num_vertices();
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::size_t sample = 0;
  if (source == "all" || (source == "auto" && n <= kAllPairsLimit)) return all_pairs(n);
  if (source == "auto") {
    sample = kDefaultSampleSize;
  } else if (source.rfind("sample:", 0) == 0) {
    const std::string count = source.substr(7);
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), sample);
    if (ec != std::errc() || ptr != count.data() + count.size()) {
      throw UsageError("bad sample size in '" + source + "'");
    }
  } else {
    for (auto [u, v] : parse_pairs(read_file(source), n)) {
      if (u != v) pairs.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
  }
  const std::size_t total = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (sample >= total) return all_pairs(n);
  std::set<std::pair<Vertex, Vertex>> chosen;
  for (const Edge& e : g.edges()) chosen.insert({e.u, e.v});
  std::mt19937_64 rng(seed);
  while (chosen.size() < sample) {
    const Vertex u = static_cast<Vertex>(rng() % n);
    const Vertex v = static_cast<Vertex>(rng() % n);
    if (u != v) chosen.insert({std::min(u, v), std::max(u, v)});
  }
  return {chosen.begin(), chosen.end()};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spanning tree covers, routing and distance oracles"};
  app.require_subcommand(1);

  std::string gen_kind;
  int gen_size = 0;
  int gen_dim = 2;
  double gen_radius = 0;
  std::uint64_t seed = 42;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Write a generated graph");
  gen->add_option("kind", gen_kind, "path|grid|random_geometric|star_exponential|uniform_line")->required();
  gen->add_option("size", gen_size, "n, or the side length for grids")->required();
  gen->add_option("--dim", gen_dim, "Dimension for random_geometric");
  gen->add_option("--radius", gen_radius, "Connection radius for random_geometric");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output file (default stdout)");

  CoverOptions co;
  auto* cover = app.add_subcommand("cover", "Build a spanning tree cover");
  cover->add_option("--graph", co.graph, "Graph file")->required();
  cover->add_option("--variant", co.variant, "light (on the greedy spanner) or spanner");
  cover->add_option("--epsilon", co.epsilon, "Stretch parameter in (0,1)");
  cover->add_option("--mu", co.mu, "Hierarchy scale base");
  cover->add_option("--eta", co.eta, "Net covering parameter");
  cover->add_option("--rho", co.rho, "Padding parameter");
  cover->add_option("--mode", co.mode, "demand|exhaustive|theory");
  cover->add_option("--pairs", co.pairs, "all|auto|sample:K|<file>");
  cover->add_option("--seed", co.seed, "Seed for pair sampling");
  cover->add_option("--out", co.out, "Cover file (default stdout)");
  cover->add_option("--stats", co.stats, "Stats JSON file");
  cover->add_option("--hpf", co.hpf, "Write the hierarchy family as JSON");
  cover->add_flag("--check-nodes", co.check_nodes, "Check every recursion node");

  std::string graph_path;
  std::string cover_path;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Check a cover file against its graph");
  verify->add_option("--graph", graph_path, "Graph file")->required();
  verify->add_option("--cover", cover_path, "Cover file")->required();
  verify->add_option("--report", report_path, "Report JSON file");

  std::string pairs_source;
  std::string traces_path;
  std::string table_path;
  std::string stats_path;
  std::string scheme_path;
  std::uint64_t route_seed = 42;
  auto* route = app.add_subcommand("route", "Simulate the routing scheme");
  route->add_option("--graph", graph_path, "Graph file")->required();
  route->add_option("--cover", cover_path, "Cover file")->required();
  route->add_option("--pairs", pairs_source, "demanded|all|sample:K|<file>");
  route->add_option("--seed", route_seed, "Port assignment seed");
  route->add_option("--traces", traces_path, "Route traces CSV");
  route->add_option("--out", table_path, "Per-pair stretch CSV (default stdout)");
  route->add_option("--stats", stats_path, "Stats JSON file");
  route->add_option("--scheme", scheme_path, "Scheme dump JSON file");

  std::string queries_path;
  auto* oracle = app.add_subcommand("oracle", "Answer distance queries");
  oracle->add_option("--graph", graph_path, "Graph file")->required();
  oracle->add_option("--cover", cover_path, "Cover file")->required();
  oracle->add_option("--queries", queries_path, "Lines 'u v'")->required();
  oracle->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*gen) return cmd_generate(gen_kind, gen_size, gen_dim, gen_radius, seed, out_path, out);
    if (*cover) return cmd_cover(co, out, err);
    if (*verify) return cmd_verify(graph_path, cover_path, report_path, out);
    if (*route) {
      return cmd_route(graph_path, cover_path, pairs_source, route_seed, traces_path, table_path,
                       stats_path, scheme_path, out, err);
    }
    if (*oracle) return cmd_oracle(graph_path, cover_path, queries_path, out_path, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailure;
  }
  return kExitUsage;
}

}  // namespace treecover
