#include "treecover/cover_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treecover {

using nlohmann::json;

CoverVariant parse_cover_variant(const std::string& name) {
  if (name == "light") return CoverVariant::kLight;
  if (name == "spanner") return CoverVariant::kSpanner;
  throw std::invalid_argument("unknown cover variant '" + name + "'");
}

const char* to_string(CoverVariant v) {
  return v == CoverVariant::kLight ? "light" : "spanner";
}

CoverFile make_cover_file(const WeightedGraph& g, const TreeCover& cover, CoverVariant variant,
                          const std::string& pair_source, std::uint64_t seed) {
  CoverFile file;
  file.variant = variant;
  file.config = cover.config;
  file.config.check_nodes = false;
  file.pair_source = pair_source;
  file.seed = seed;
  file.ell = cover.ell;
  file.num_vertices = g.num_vertices();
  file.num_edges = g.num_edges();
  for (const SpanningTree& t : cover.trees) {
    CoverFileTree ft;
    ft.root = t.root;
    ft.provenance = t.provenance;
    for (EdgeId e : t.edges) ft.edges.push_back({g.edge(e).u, g.edge(e).v});
    std::sort(ft.edges.begin(), ft.edges.end());
    file.trees.push_back(std::move(ft));
  }
  return file;
}

std::string write_cover(const CoverFile& file) {
  json config = {{"epsilon", file.config.epsilon},
                 {"mu", file.config.mu},
                 {"eta", file.config.eta},
                 {"rho", file.config.rho},
                 {"mode", to_string(file.config.mode)},
                 {"pair_source", file.pair_source},
                 {"seed", file.seed}};
  if (!file.config.demanded_pairs.empty()) config["demanded_pairs"] = file.config.demanded_pairs;
  json trees = json::array();
  for (const CoverFileTree& t : file.trees) {
    trees.push_back({{"root", t.root},
                     {"copy", t.provenance.copy},
                     {"hierarchy", t.provenance.hierarchy},
                     {"offset", t.provenance.offset},
                     {"edges", t.edges}});
  }
  json doc = {{"schema", kCoverSchemaVersion},
              {"variant", to_string(file.variant)},
              {"config", config},
              {"ell", file.ell},
              {"num_vertices", file.num_vertices},
              {"num_edges", file.num_edges},
              {"trees", trees}};
  return doc.dump() + "\n";
}

CoverFile parse_cover(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<int>() != kCoverSchemaVersion) {
      throw std::invalid_argument("unsupported cover schema version");
    }
    CoverFile file;
    file.variant = parse_cover_variant(doc.at("variant").get<std::string>());
    const json& c = doc.at("config");
    file.config.epsilon = c.at("epsilon").get<double>();
    file.config.mu = c.at("mu").get<double>();
    file.config.eta = c.at("eta").get<double>();
    file.config.rho = c.at("rho").get<double>();
    file.config.mode = parse_pair_mode(c.at("mode").get<std::string>());
    file.pair_source = c.at("pair_source").get<std::string>();
    file.seed = c.at("seed").get<std::uint64_t>();
    if (c.contains("demanded_pairs")) {
      file.config.demanded_pairs = c.at("demanded_pairs").get<std::vector<std::pair<Vertex, Vertex>>>();
    }
    file.ell = doc.at("ell").get<int>();
    file.num_vertices = doc.at("num_vertices").get<int>();
    file.num_edges = doc.at("num_edges").get<int>();
    for (const json& t : doc.at("trees")) {
      CoverFileTree ft;
      ft.root = t.at("root").get<Vertex>();
      ft.provenance.copy = t.at("copy").get<std::int32_t>();
      ft.provenance.hierarchy = t.at("hierarchy").get<std::int32_t>();
      ft.provenance.offset = t.at("offset").get<int>();
      ft.edges = t.at("edges").get<std::vector<std::pair<Vertex, Vertex>>>();
      file.trees.push_back(std::move(ft));
    }
    return file;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed cover file: ") + e.what());
  }
}

CoverFile load_cover_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cover file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_cover(buffer.str());
}

TreeCover cover_from_file(const WeightedGraph& g, const CoverFile& file,
                          std::vector<std::string>& problems) {
  TreeCover cover;
  cover.config = file.config;
  cover.ell = file.ell;
  cover.built_on_spanner = file.variant == CoverVariant::kLight;
  const int n = g.num_vertices();
  for (std::size_t k = 0; k < file.trees.size(); ++k) {
    const CoverFileTree& ft = file.trees[k];
    SpanningTree t;
    t.root = ft.root;
    t.provenance = ft.provenance;
    std::vector<bool> seen(n, false);
    for (auto [u, v] : ft.edges) {
      auto e = (u >= 0 && u < n && v >= 0 && v < n) ? g.find_edge(u, v) : std::nullopt;
      if (!e) {
        problems.push_back("tree " + std::to_string(k) + ": edge " + std::to_string(u) + "-" +
                           std::to_string(v) + " is not a graph edge");
        continue;
      }
      t.edges.push_back(*e);
      seen[u] = seen[v] = true;
    }
    if (t.root >= 0 && t.root < n) seen[t.root] = true;
    for (Vertex v = 0; v < n; ++v) {
      if (seen[v]) t.vertices.push_back(v);
    }
    std::sort(t.edges.begin(), t.edges.end());
    cover.trees.push_back(std::move(t));
  }
  return cover;
}

std::string write_hpf(const HPFamily& hpf) {
  json hierarchies = json::array();
  for (const Hierarchy& h : hpf.hierarchies) {
    json clusters = json::array();
    for (std::size_t c = 0; c < h.num_clusters(); ++c) {
      const Cluster& cl = h.cluster(static_cast<ClusterId>(c));
      json rec = {{"id", cl.id},
                  {"level", cl.level},
                  {"portal", cl.portal},
                  {"representative", cl.representative},
                  {"members", cl.members},
                  {"children", cl.children},
                  {"diameter", cl.diameter}};
      rec["parent"] = cl.parent == kNoCluster ? json(nullptr) : json(cl.parent);
      clusters.push_back(std::move(rec));
    }
    hierarchies.push_back({{"top_level", h.top_level()}, {"clusters", clusters}});
  }
  // Copies share their hierarchy's clusters and differ only in pairs.
  json copies = json::array();
  for (const HierarchyCopy& hc : hpf.copies) {
    json pairs = json::array();
    for (std::size_t c = 0; c < hc.pair_of.size(); ++c) {
      if (const auto& p = hc.pair_of[c]) {
        pairs.push_back({{"cluster", c},
                         {"pair", {p->first, p->second}},
                         {"separation", p->separation},
                         {"rho_eff", p->rho_eff}});
      }
    }
    copies.push_back({{"hierarchy", hc.hierarchy}, {"copy", hc.copy}, {"pairs", pairs}});
  }
  json doc = {{"schema", kCoverSchemaVersion},
              {"mu", hpf.params.mu},
              {"eta", hpf.params.eta},
              {"rho", hpf.params.rho},
              {"ell", hpf.ell},
              {"epsilon", hpf.epsilon},
              {"weight_scale", hpf.weight_scale},
              {"hierarchies", hierarchies},
              {"copies", copies}};
  return doc.dump() + "\n";
}

}  // namespace treecover
