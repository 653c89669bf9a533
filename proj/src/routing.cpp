#include "treecover/routing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace treecover {

int field_bits(int n) {
  const std::uint64_t square = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  int b = 0;
  while (b < 63 && (std::uint64_t{1} << b) < square) ++b;
  return std::max(b, 1);
}

PortAssignment::PortAssignment(const WeightedGraph& g, std::uint64_t seed)
    : n_(g.num_vertices()), bits_(field_bits(g.num_vertices())), by_port_(g.num_vertices()) {
  std::mt19937_64 rng(seed);
  const Port mask = (Port{1} << bits_) - 1;
  for (Vertex u = 0; u < n_; ++u) {
    auto& list = by_port_[u];
    for (const Arc& arc : g.neighbors(u)) {
      Port p = rng() & mask;
      while (std::any_of(list.begin(), list.end(), [&](const auto& e) { return e.first == p; })) {
        p = rng() & mask;
      }
      list.push_back({p, arc.to});
      port_of_[static_cast<std::uint64_t>(u) * n_ + arc.to] = p;
    }
    std::sort(list.begin(), list.end());
  }
}

Port PortAssignment::port(Vertex u, Vertex v) const {
  auto it = port_of_.find(static_cast<std::uint64_t>(u) * n_ + v);
  if (it == port_of_.end()) {
    throw std::invalid_argument("no port for " + std::to_string(u) + " -> " + std::to_string(v));
  }
  return it->second;
}

Vertex PortAssignment::neighbor(Vertex u, Port p) const {
  const auto& list = by_port_[u];
  auto it = std::lower_bound(list.begin(), list.end(), std::pair<Port, Vertex>{p, kNoVertex});
  if (it == list.end() || it->first != p) return kNoVertex;
  return it->second;
}

PortAssignment assign_ports(const WeightedGraph& g, std::uint64_t seed) {
  return PortAssignment(g, seed);
}

int measure_alpha(const WeightedGraph& spanner) {
  int alpha = 0;
  std::vector<double> weights;
  for (Vertex x = 0; x < spanner.num_vertices(); ++x) {
    weights.clear();
    for (const Arc& arc : spanner.neighbors(x)) weights.push_back(arc.w);
    std::sort(weights.begin(), weights.end());
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < weights.size(); ++lo) {
      hi = std::max(hi, lo);
      while (hi + 1 < weights.size() && weights[hi + 1] <= 2.0 * weights[lo]) ++hi;
      alpha = std::max(alpha, static_cast<int>(hi - lo + 1));
    }
  }
  return alpha;
}

int routing_beta(int alpha, double epsilon) {
  const int halvings = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12)));
  return 2 * halvings * alpha;
}

std::size_t TreeRoutingState::table_fields(Vertex v) const {
  const RoutingTable& t = table[v];
  std::size_t fields = 2 + (t.parent_port ? 1 : 0) + 3 * t.children.size();
  if (t.parent) fields += 2;
  return fields + 3 * t.siblings.size();
}

TreeRoutingState build_tree_routing(const WeightedGraph& g, const SpanningTree& tree,
                                    const WeightedGraph& spanner, const PortAssignment& ports,
                                    double epsilon) {
  return build_tree_routing(g, tree, spanner, ports, epsilon, measure_alpha(spanner));
}

TreeRoutingState build_tree_routing(const WeightedGraph& g, const SpanningTree& tree,
                                    const WeightedGraph& spanner, const PortAssignment& ports,
                                    double epsilon, int alpha) {
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<double, Vertex>>> adj(n);
  for (EdgeId e : tree.edges) {
    const Edge& edge = g.edge(e);
    if (!spanner.find_edge(edge.u, edge.v)) {
      throw std::invalid_argument("tree edge " + std::to_string(edge.u) + "-" +
                                  std::to_string(edge.v) + " is not a spanner edge");
    }
    adj[edge.u].push_back({edge.w, edge.v});
    adj[edge.v].push_back({edge.w, edge.u});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  TreeRoutingState s;
  s.root = tree.root;
  s.alpha = alpha;
  s.beta = routing_beta(alpha, epsilon);
  s.field_bits = field_bits(n);
  s.label.assign(n, -1);
  s.children.assign(n, {});
  s.table.assign(n, {});
  s.oracle = TreeOracle(g, tree.edges, tree.root);

  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<Vertex> stack = {tree.root};
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    s.label[x] = static_cast<int>(s.vertex_at.size());
    s.vertex_at.push_back(x);
    for (auto [w, y] : adj[x]) {
      if (y == parent[x]) continue;
      parent[y] = x;
      s.children[x].push_back(y);
    }
    for (auto it = s.children[x].rbegin(); it != s.children[x].rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(s.vertex_at.size()) != n) {
    throw std::invalid_argument("routing tree does not span the graph");
  }
  std::vector<int> hi(n);
  for (int k = n - 1; k >= 0; --k) {
    const Vertex x = s.vertex_at[k];
    hi[x] = k;
    for (Vertex c : s.children[x]) hi[x] = std::max(hi[x], hi[c]);
  }
  auto interval = [&](Vertex x) { return Interval{s.label[x], hi[x]}; };
  const std::size_t beta = static_cast<std::size_t>(s.beta);
  for (Vertex x = 0; x < n; ++x) {
    RoutingTable& t = s.table[x];
    t.own = interval(x);
    const auto& ch = s.children[x];
    for (std::size_t k = 0; k < std::min(beta, ch.size()); ++k) {
      t.children.push_back({interval(ch[k]), ports.port(x, ch[k])});
    }
    const Vertex p = parent[x];
    if (p == kNoVertex) continue;
    t.parent_port = ports.port(x, p);
    t.parent = interval(p);
    const auto& sib = s.children[p];
    const std::size_t i = std::find(sib.begin(), sib.end(), x) - sib.begin();
    for (std::size_t k = i + 1; k < sib.size() && k <= i + beta; ++k) {
      t.siblings.push_back({interval(sib[k]), ports.port(p, sib[k])});
    }
  }
  return s;
}

const char* to_string(RoutingCase c) {
  switch (c) {
    case RoutingCase::k0:
      return "0";
    case RoutingCase::k1a:
      return "1a";
    case RoutingCase::k1b:
      return "1b";
    case RoutingCase::k1c:
      return "1c";
    case RoutingCase::k2a:
      return "2a";
    case RoutingCase::k2b:
      return "2b";
    case RoutingCase::k2c:
      return "2c";
    case RoutingCase::kError:
      return "error";
  }
  return "error";
}

RoutingDecision routing_decision(const RoutingTable& table, int dest_label,
                                 const std::optional<Port>& header) {
  RoutingDecision d;
  if (dest_label == table.own.lo) {
    d.done = true;
    d.rule = RoutingCase::k0;
    return d;
  }
  if (table.own.contains(dest_label)) {
    for (const PortedInterval& c : table.children) {
      if (c.interval.contains(dest_label)) {
        d.port = c.port;
        d.rule = RoutingCase::k1a;
        return d;
      }
    }
    if (header) {
      d.port = *header;
      d.rule = RoutingCase::k1b;
      return d;
    }
    if (table.children.empty()) {
      d.rule = RoutingCase::kError;
      return d;
    }
    d.port = table.children.front().port;
    d.rule = RoutingCase::k1c;
    return d;
  }
  if (!table.parent_port || !table.parent) {
    d.rule = RoutingCase::kError;
    return d;
  }
  d.port = *table.parent_port;
  if (!table.parent->contains(dest_label)) {
    d.rule = RoutingCase::k2a;
    return d;
  }
  for (const PortedInterval& s : table.siblings) {
    if (s.interval.contains(dest_label)) {
      d.header = s.port;
      d.rule = RoutingCase::k2b;
      return d;
    }
  }
  // The destination lies under a later sibling: step to the next one.
  // Otherwise it is the parent or under an earlier sibling, and the parent
  // resolves it without a header.
  d.rule = RoutingCase::k2c;
  if (dest_label > table.own.hi && !table.siblings.empty()) d.header = table.siblings.front().port;
  return d;
}

RouteTrace simulate_route(const WeightedGraph& g, const PortAssignment& ports,
                          const TreeRoutingState& state, double epsilon, Vertex s, Vertex t) {
  RouteTrace trace;
  trace.vertices.push_back(s);
  trace.tree_distance = state.oracle.distance(s, t);
  const int dest = state.label[t];
  const int cap = 4 * g.num_vertices();
  Vertex cur = s;
  std::optional<Port> header;
  while (true) {
    const RoutingDecision d = routing_decision(state.table[cur], dest, header);
    if (d.done) {
      trace.terminated = true;
      break;
    }
    if (d.rule == RoutingCase::kError) {
      trace.error = "no routing case applies at vertex " + std::to_string(cur);
      break;
    }
    if (trace.hops >= cap) {
      trace.error = "hop cap reached";
      break;
    }
    const Vertex next = ports.neighbor(cur, d.port);
    auto e = next == kNoVertex ? std::nullopt : g.find_edge(cur, next);
    if (!e) {
      trace.error = "port " + std::to_string(d.port) + " unknown at vertex " + std::to_string(cur);
      break;
    }
    trace.weight += g.edge(*e).w;
    trace.ports.push_back(d.port);
    trace.vertices.push_back(next);
    ++trace.hops;
    header = d.header;
    if (header) trace.max_header_bits = static_cast<std::size_t>(ports.bits());
    cur = next;
  }
  trace.within_bound =
      trace.terminated && trace.weight <= (1.0 + epsilon) * trace.tree_distance + kTolerance;
  return trace;
}

std::vector<int> subhierarchy_levels(int offset, int ell) {
  std::vector<int> levels;
  for (int i = offset; i > 0; i -= ell) levels.push_back(i);
  levels.push_back(0);
  return levels;
}

CompressedSubhierarchy compress_subhierarchy(const HPFamily& hpf, std::size_t copy, int offset) {
  const HierarchyCopy& hc = hpf.copies.at(copy);
  const Hierarchy& h = hpf.hierarchies.at(hc.hierarchy);
  if (offset > h.top_level() || h.level(offset).size() != 1) {
    throw std::invalid_argument("offset " + std::to_string(offset) + " is not a trivial level");
  }
  const std::vector<int> levels = subhierarchy_levels(offset, hpf.ell);
  CompressedSubhierarchy sub;
  sub.copy = static_cast<std::int32_t>(copy);
  sub.offset = offset;
  sub.leaf_of.assign(h.num_vertices(), -1);

  // Position of a cluster's level in `levels`.
  auto depth_of = [&](ClusterId c) {
    const int level = h.cluster(c).level;
    return static_cast<std::size_t>(std::find(levels.begin(), levels.end(), level) - levels.begin());
  };
  auto children_of = [&](ClusterId c) {
    const std::size_t k = depth_of(c);
    if (k + 1 >= levels.size()) return std::vector<ClusterId>{};
    return h.descendants_at(c, levels[k + 1]);
  };

  struct Pending {
    ClusterId top;
    int parent;
  };
  std::vector<Pending> stack = {{h.level(offset)[0], -1}};
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    CompressedNode node;
    node.top = p.top;
    node.parent = p.parent;
    ClusterId bottom = p.top;
    std::vector<ClusterId> kids = children_of(bottom);
    while (kids.size() == 1) {
      bottom = kids[0];
      kids = children_of(bottom);
    }
    node.bottom = bottom;
    const int index = static_cast<int>(sub.nodes.size());
    if (p.parent >= 0) sub.nodes[p.parent].children.push_back(index);
    if (kids.empty()) sub.leaf_of[h.cluster(bottom).members.front()] = index;
    sub.nodes.push_back(std::move(node));
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, index});
  }

  // Preorder numbering matches creation order since children were pushed
  // in reverse; intervals, leaf counts and heavy children bottom-up.
  for (int k = static_cast<int>(sub.nodes.size()) - 1; k >= 0; --k) {
    CompressedNode& node = sub.nodes[k];
    node.interval = {k, k};
    node.leaves = node.children.empty() ? 1 : 0;
    for (int c : node.children) {
      node.leaves += sub.nodes[c].leaves;
      node.interval.hi = std::max(node.interval.hi, sub.nodes[c].interval.hi);
    }
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      if (2 * sub.nodes[node.children[c]].leaves > node.leaves) node.heavy = static_cast<int>(c);
    }
    if (const auto& pair = hc.pair_of[node.bottom]) {
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        const ClusterId top = sub.nodes[node.children[c]].top;
        if (top == pair->first) node.pair_a = static_cast<int>(c);
        if (top == pair->second) node.pair_b = static_cast<int>(c);
      }
      if (node.pair_a < 0 || node.pair_b < 0) {
        throw std::logic_error("assigned pair is not a pair of children");
      }
    }
  }
  for (Vertex v = 0; v < h.num_vertices(); ++v) {
    if (sub.leaf_of[v] < 0) throw std::logic_error("vertex missing from compressed tree");
  }
  return sub;
}

std::size_t SelectionScheme::label_bits(Vertex v) const {
  std::size_t bits = 0;
  for (const SubhierarchyLabel& part : labels[v].parts) {
    bits += field_bits + part.apices.size() * record_bits();
  }
  return bits;
}

SelectionScheme build_selection_labels(const HPFamily& hpf, const TreeCover& cover) {
  SelectionScheme scheme;
  const int n = hpf.hierarchies.empty() ? 0 : hpf.hierarchies[0].num_vertices();
  scheme.field_bits = field_bits(n);
  std::size_t max_children = 1;
  for (std::size_t t = 0; t < cover.trees.size(); ++t) {
    const TreeProvenance& prov = cover.trees[t].provenance;
    if (prov.copy < 0 || static_cast<std::size_t>(prov.copy) >= hpf.copies.size()) {
      throw std::invalid_argument("cover tree " + std::to_string(t) + " has no matching copy");
    }
    CompressedSubhierarchy sub = compress_subhierarchy(hpf, prov.copy, prov.offset);
    sub.tree = t;
    for (const CompressedNode& node : sub.nodes) max_children = std::max(max_children, node.children.size());
    scheme.subhierarchies.push_back(std::move(sub));
  }
  int name_bits = 1;
  while ((std::size_t{1} << name_bits) < max_children + 1) ++name_bits;
  scheme.name_bits = name_bits;

  scheme.labels.assign(n, {});
  for (Vertex v = 0; v < n; ++v) {
    for (const CompressedSubhierarchy& sub : scheme.subhierarchies) {
      const Hierarchy& h = hpf.hierarchies[hpf.copies[sub.copy].hierarchy];
      SubhierarchyLabel part;
      int a = sub.leaf_of[v];
      part.leaf = sub.nodes[a].interval.lo;
      for (int p = sub.nodes[a].parent; p >= 0; a = p, p = sub.nodes[p].parent) {
        const CompressedNode& parent = sub.nodes[p];
        const int index = static_cast<int>(
            std::find(parent.children.begin(), parent.children.end(), a) - parent.children.begin());
        if (index == parent.heavy) continue;
        ApexRecord rec;
        rec.interval = parent.interval;
        rec.level = h.cluster(parent.bottom).level;
        rec.l1 = index;
        rec.l2 = parent.heavy;
        rec.l3a = parent.pair_a;
        rec.l3b = parent.pair_b;
        part.apices.push_back(rec);
      }
      scheme.labels[v].parts.push_back(std::move(part));
    }
  }
  return scheme;
}

namespace {

// Deepest apex in `label` whose interval holds both leaves.
const ApexRecord* deepest_common(const SubhierarchyLabel& label, int a, int b) {
  const ApexRecord* best = nullptr;
  for (const ApexRecord& rec : label.apices) {
    if (!rec.interval.contains(a) || !rec.interval.contains(b)) continue;
    if (!best || rec.interval.hi - rec.interval.lo < best->interval.hi - best->interval.lo) {
      best = &rec;
    }
  }
  return best;
}

bool same_pair(int a, int b, int p, int q) {
  return p >= 0 && q >= 0 && ((a == p && b == q) || (a == q && b == p));
}

}  // namespace

std::optional<std::size_t> select_tree(const SelectionLabel& x, const SelectionLabel& y) {
  for (std::size_t k = 0; k < x.parts.size() && k < y.parts.size(); ++k) {
    const SubhierarchyLabel& lx = x.parts[k];
    const SubhierarchyLabel& ly = y.parts[k];
    if (lx.leaf == ly.leaf) throw std::invalid_argument("tree selection needs x != y");
    const ApexRecord* rx = deepest_common(lx, lx.leaf, ly.leaf);
    const ApexRecord* ry = deepest_common(ly, lx.leaf, ly.leaf);
    int cx = -1;
    int cy = -1;
    const ApexRecord* lca = nullptr;
    if (rx && ry && rx->interval == ry->interval) {
      lca = rx;
      cx = rx->l1;
      cy = ry->l1;
    } else if (rx && (!ry || rx->interval.hi - rx->interval.lo < ry->interval.hi - ry->interval.lo)) {
      lca = rx;
      cx = rx->l1;
      cy = rx->l2;
    } else if (ry) {
      lca = ry;
      cx = ry->l2;
      cy = ry->l1;
    }
    if (lca && cx >= 0 && cy >= 0 && same_pair(cx, cy, lca->l3a, lca->l3b)) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> select_tree_brute_force(const HPFamily& hpf, const TreeCover& cover,
                                                   Vertex x, Vertex y) {
  if (x == y) throw std::invalid_argument("tree selection needs x != y");
  for (std::size_t t = 0; t < cover.trees.size(); ++t) {
    const TreeProvenance& prov = cover.trees[t].provenance;
    const HierarchyCopy& hc = hpf.copies.at(prov.copy);
    const Hierarchy& h = hpf.hierarchies.at(hc.hierarchy);
    const std::vector<int> levels = subhierarchy_levels(prov.offset, hpf.ell);
    std::size_t k = levels.size() - 1;
    while (h.cluster_at(levels[k], x) != h.cluster_at(levels[k], y)) --k;
    const ClusterId c = h.cluster_at(levels[k], x);
    const ClusterId cx = h.cluster_at(levels[k + 1], x);
    const ClusterId cy = h.cluster_at(levels[k + 1], y);
    const auto& pair = hc.pair_of[c];
    if (pair && ((pair->first == cx && pair->second == cy) ||
                 (pair->first == cy && pair->second == cx))) {
      return t;
    }
  }
  return std::nullopt;
}

RoutingScheme build_routing_scheme(const WeightedGraph& g, const LightCover& light,
                                   std::uint64_t seed) {
  RoutingScheme scheme;
  scheme.epsilon = light.cover.config.epsilon;
  scheme.ports = assign_ports(g, seed);
  scheme.alpha = measure_alpha(light.spanner);
  scheme.beta = routing_beta(scheme.alpha, scheme.epsilon);
  for (const SpanningTree& tree : light.cover.trees) {
    scheme.trees.push_back(
        build_tree_routing(g, tree, light.spanner, scheme.ports, scheme.epsilon, scheme.alpha));
  }
  scheme.selection = build_selection_labels(light.hpf, light.cover);
  return scheme;
}

EndToEndRoute route_end_to_end(const WeightedGraph& g, const RoutingScheme& scheme, Vertex s,
                               Vertex t) {
  EndToEndRoute out;
  if (s == t) {
    out.selected = true;
    out.trace.vertices = {s};
    out.trace.terminated = true;
    return out;
  }
  const auto k = select_tree(scheme.selection.labels[s], scheme.selection.labels[t]);
  if (!k) {
    out.trace.error = "no subhierarchy satisfies the lca condition";
    out.trace.within_bound = false;
    return out;
  }
  out.selected = true;
  out.tree = scheme.selection.subhierarchies[*k].tree;
  out.trace = simulate_route(g, scheme.ports, scheme.trees[out.tree], scheme.epsilon, s, t);
  return out;
}

SchemeSizes measure_sizes(const RoutingScheme& scheme, int n) {
  SchemeSizes sizes;
  sizes.header_bits = static_cast<std::size_t>(field_bits(n));
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t selection = scheme.selection.label_bits(v);
    sizes.selection_bits_max = std::max(sizes.selection_bits_max, selection);
    sizes.label_bits_max = std::max(
        sizes.label_bits_max, selection + scheme.trees.size() * static_cast<std::size_t>(field_bits(n)));
    std::size_t table = 0;
    for (const TreeRoutingState& tree : scheme.trees) table += tree.table_bits(v);
    sizes.table_bits_max = std::max(sizes.table_bits_max, table);
    for (const SubhierarchyLabel& part : scheme.selection.labels[v].parts) {
      sizes.max_apices = std::max(sizes.max_apices, part.apices.size());
    }
  }
  return sizes;
}

}  // namespace treecover
