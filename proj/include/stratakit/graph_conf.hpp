#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "stratakit/category.hpp"
#include "stratakit/css.hpp"
#include "stratakit/poset.hpp"

namespace stratakit {

struct GraphEdge {
  std::array<std::size_t, 2> ends{};  // 0-end, 1-end
  std::string label;
};

/// Finite graph; loops and multiple edges are allowed.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<GraphEdge> edges;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const { return edges.size(); }
  /// Graph cells are numbered vertices first, then edges.
  std::size_t cell_count() const { return vertices.size() + edges.size(); }
  bool is_vertex(std::size_t cell) const { return cell < vertices.size(); }
  const std::string& cell_label(std::size_t cell) const {
    return is_vertex(cell) ? vertices[cell] : edges[cell - vertices.size()].label;
  }
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(vertices.size(), 0);
    for (const auto& e : edges) {
      ++d[e.ends[0]];
      ++d[e.ends[1]];
    }
    return d;
  }
};

inline Diagnostics validate_graph(const Graph& g) {
  Diagnostics out;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (std::size_t s = 0; s < 2; ++s)
      if (g.edges[e].ends[s] >= g.vertex_count())
        out.push_back("edge " + std::to_string(e) + " end " + std::to_string(s) +
                      " references unknown vertex " + std::to_string(g.edges[e].ends[s]));
  return out;
}

/// Builds a graph with vertices v0.. and edges e0.. from endpoint pairs.
inline Graph make_graph(std::size_t vertices, const std::vector<std::array<std::size_t, 2>>& edges) {
  Graph g;
  for (std::size_t v = 0; v < vertices; ++v) g.vertices.push_back("v" + std::to_string(v));
  for (std::size_t e = 0; e < edges.size(); ++e) g.edges.push_back({edges[e], "e" + std::to_string(e)});
  if (auto d = validate_graph(g); !d.empty()) throw Error("graph: " + d.front());
  return g;
}

/// Vertices as 0-cells, edges as 1-cells; one morphism per edge end.
inline CombinatorialCSS graph_to_css(const Graph& g) {
  if (auto d = validate_graph(g); !d.empty()) throw Error("graph_to_css: " + d.front());
  AcyclicCategory c;
  for (const auto& v : g.vertices) c.add_object(0, v);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::size_t id = c.add_object(1, g.edges[e].label);
    for (std::size_t s = 0; s < 2; ++s)
      c.add_morphism(g.edges[e].ends[s], id, g.edges[e].label + "." + std::to_string(s));
  }
  std::vector<char> closed(c.object_count(), 1);
  return make_css(std::move(c), std::move(closed));
}

/// Each edge replaced by a path of n edges through n - 1 new vertices.
inline Graph subdivide_graph(const Graph& g, std::size_t n) {
  if (n < 1) throw Error("subdivide_graph: n must be at least 1");
  if (auto d = validate_graph(g); !d.empty()) throw Error("subdivide_graph: " + d.front());
  Graph out;
  out.vertices = g.vertices;
  for (const auto& e : g.edges) {
    std::size_t prev = e.ends[0];
    for (std::size_t i = 1; i <= n; ++i) {
      std::size_t next = e.ends[1];
      if (i < n) {
        next = out.vertices.size();
        out.vertices.push_back(e.label + ":" + std::to_string(i));
      }
      out.edges.push_back({{prev, next}, n == 1 ? e.label : e.label + "/" + std::to_string(i)});
      prev = next;
    }
  }
  return out;
}

namespace graphs {

inline Graph edge() { return make_graph(2, {{0, 1}}); }
inline Graph loop() { return make_graph(1, {{0, 0}}); }
/// Three edges from a hub (vertex 0).
inline Graph y() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}}); }
inline Graph complete(std::size_t n) {
  std::vector<std::array<std::size_t, 2>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({i, j});
  return make_graph(n, e);
}
inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::array<std::size_t, 2>> e;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) e.push_back({i, a + j});
  return make_graph(a + b, e);
}
/// Two vertices joined by three edges.
inline Graph theta() { return make_graph(2, {{0, 1}, {0, 1}, {0, 1}}); }

inline std::vector<std::string> names() { return {"edge", "loop", "y", "theta", "k4", "k5", "k33"}; }

inline Graph by_name(const std::string& name) {
  if (name == "edge") return edge();
  if (name == "loop") return loop();
  if (name == "y") return y();
  if (name == "theta") return theta();
  if (name == "k4") return complete(4);
  if (name == "k5") return complete(5);
  if (name == "k33") return complete_bipartite(3, 3);
  throw Error("unknown graph fixture '" + name + "'");
}

}  // namespace graphs

/// A cell of the configuration model: a graph cell per coordinate, and for
/// coordinates on a common edge their position along it (0 = nearest the
/// 0-end). Vertex coordinates have rank 0.
struct ConfCell {
  std::vector<std::size_t> cells;
  std::vector<std::size_t> ranks;

  auto operator<=>(const ConfCell&) const = default;
};

/// Which coordinates a morphism specializes and to which end: -1 keeps the
/// coordinate, 0 or 1 moves an edge coordinate of the target to that end.
using Specialization = std::vector<int>;

struct ConfigurationModel {
  Graph graph;
  std::size_t k = 0;
  CombinatorialCSS css;
  std::vector<ConfCell> cells;                  // object id -> cell
  std::vector<Specialization> specializations;  // morphism id -> specialization
};

inline int conf_cell_dim(const Graph& g, const ConfCell& c) {
  return static_cast<int>(std::count_if(c.cells.begin(), c.cells.end(), [&](std::size_t x) { return !g.is_vertex(x); }));
}

inline std::string conf_cell_label(const Graph& g, const ConfCell& c) {
  std::string out;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    if (i) out += ",";
    out += g.cell_label(c.cells[i]);
    if (!g.is_vertex(c.cells[i])) out += "#" + std::to_string(c.ranks[i]);
  }
  return "(" + out + ")";
}

namespace detail {

inline std::vector<ConfCell> enumerate_conf_cells(const Graph& g, std::size_t k) {
  std::vector<ConfCell> out;
  std::vector<std::size_t> lab(k);
  auto emit_orders = [&]() {
    // Group coordinates by edge; every assignment of distinct ranks within
    // each group is one cell.
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < k; ++i)
      if (!g.is_vertex(lab[i])) groups[lab[i]].push_back(i);
    std::vector<std::vector<std::size_t>> perms;
    for (auto& [e, coords] : groups) perms.push_back(coords);
    ConfCell cell{lab, std::vector<std::size_t>(k, 0)};
    auto rec = [&](auto&& self, std::size_t gi) -> void {
      if (gi == perms.size()) {
        out.push_back(cell);
        return;
      }
      std::vector<std::size_t> order(perms[gi].size());
      std::iota(order.begin(), order.end(), 0);
      do {
        for (std::size_t j = 0; j < order.size(); ++j) cell.ranks[perms[gi][j]] = order[j];
        self(self, gi + 1);
      } while (std::next_permutation(order.begin(), order.end()));
    };
    rec(rec, 0);
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      emit_orders();
      return;
    }
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      if (g.is_vertex(c) && std::find(lab.begin(), lab.begin() + i, c) != lab.begin() + i) continue;
      lab[i] = c;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Applies a specialization to a cell; empty when it is not admissible.
inline std::optional<ConfCell> specialize(const Graph& g, const ConfCell& c, const Specialization& s) {
  std::size_t k = c.cells.size();
  std::map<std::size_t, std::size_t> group_size;
  for (std::size_t i = 0; i < k; ++i)
    if (!g.is_vertex(c.cells[i])) ++group_size[c.cells[i]];
  ConfCell out = c;
  for (std::size_t i = 0; i < k; ++i) {
    if (s[i] < 0) continue;
    if (g.is_vertex(c.cells[i])) return std::nullopt;
    std::size_t n = group_size[c.cells[i]];
    if (s[i] == 0 && c.ranks[i] != 0) return std::nullopt;
    if (s[i] == 1 && c.ranks[i] != n - 1) return std::nullopt;
    out.cells[i] = g.edges[c.cells[i] - g.vertex_count()].ends[static_cast<std::size_t>(s[i])];
    out.ranks[i] = 0;
  }
  std::vector<std::size_t> verts;
  for (std::size_t i = 0; i < k; ++i)
    if (g.is_vertex(out.cells[i])) verts.push_back(out.cells[i]);
  std::sort(verts.begin(), verts.end());
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) return std::nullopt;
  // Re-rank surviving edge coordinates.
  for (std::size_t i = 0; i < k; ++i) {
    if (g.is_vertex(out.cells[i])) continue;
    std::size_t r = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i && out.cells[j] == out.cells[i] && c.ranks[j] < c.ranks[i]) ++r;
    out.ranks[i] = r;
  }
  return out;
}

}  // namespace detail

/// Cellular model of the ordered configuration space of k points in the
/// graph: product cells cut by the order of points sharing an edge, with the
/// diagonal removed. Morphisms are specializations of edge coordinates to
/// edge ends; composition is their union.
inline ConfigurationModel conf_category(const Graph& g, std::size_t k) {
  if (k < 1) throw Error("conf_category: k must be at least 1");
  if (auto d = validate_graph(g); !d.empty()) throw Error("conf_category: " + d.front());
  ConfigurationModel m;
  m.graph = g;
  m.k = k;
  m.cells = detail::enumerate_conf_cells(g, k);
  std::map<ConfCell, std::size_t> index;
  AcyclicCategory c;
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    index[m.cells[i]] = i;
    c.add_object(conf_cell_dim(g, m.cells[i]), conf_cell_label(g, m.cells[i]));
  }
  std::map<std::pair<std::size_t, Specialization>, std::size_t> morphism_of;
  for (std::size_t t = 0; t < m.cells.size(); ++t) {
    const ConfCell& cell = m.cells[t];
    std::vector<std::size_t> edge_coords;
    for (std::size_t i = 0; i < k; ++i)
      if (!g.is_vertex(cell.cells[i])) edge_coords.push_back(i);
    // Every assignment in {-1, 0, 1} over the edge coordinates.
    std::size_t total = 1;
    for (std::size_t i = 0; i < edge_coords.size(); ++i) total *= 3;
    for (std::size_t code = 1; code < total; ++code) {
      Specialization s(k, -1);
      std::size_t rest = code;
      for (std::size_t i : edge_coords) {
        s[i] = static_cast<int>(rest % 3) - 1;
        rest /= 3;
      }
      auto src = detail::specialize(g, cell, s);
      if (!src) continue;
      std::string label;
      for (std::size_t i = 0; i < k; ++i)
        if (s[i] >= 0) label += (label.empty() ? "" : ",") + std::to_string(i) + "->" + std::to_string(s[i]);
      morphism_of[{t, s}] = c.add_morphism(index.at(*src), t, label);
      m.specializations.push_back(s);
    }
  }
  for (std::size_t f = 0; f < c.morphism_count(); ++f)
    for (std::size_t h : c.in_morphisms(c.src(f))) {
      Specialization u = m.specializations[f];
      for (std::size_t i = 0; i < k; ++i)
        if (m.specializations[h][i] >= 0) u[i] = m.specializations[h][i];
      c.set_composite(f, h, morphism_of.at({c.dst(f), u}));
    }
  m.css = make_css(std::move(c));
  return m;
}

/// Coordinate permutation p (coordinate i moves to p[i]) as an automorphism
/// of the configuration model.
inline CategoryAutomorphism permute_coordinates(const ConfigurationModel& m, const std::vector<std::size_t>& p) {
  if (p.size() != m.k) throw Error("permute_coordinates: permutation has the wrong size");
  std::map<ConfCell, std::size_t> index;
  for (std::size_t i = 0; i < m.cells.size(); ++i) index[m.cells[i]] = i;
  const AcyclicCategory& c = m.css.category;
  std::map<std::pair<std::size_t, Specialization>, std::size_t> morphism_of;
  for (std::size_t f = 0; f < c.morphism_count(); ++f) morphism_of[{c.dst(f), m.specializations[f]}] = f;
  CategoryAutomorphism a;
  std::vector<std::size_t> obj(m.cells.size());
  for (std::size_t x = 0; x < m.cells.size(); ++x) {
    ConfCell moved{std::vector<std::size_t>(m.k), std::vector<std::size_t>(m.k)};
    for (std::size_t i = 0; i < m.k; ++i) {
      moved.cells[p[i]] = m.cells[x].cells[i];
      moved.ranks[p[i]] = m.cells[x].ranks[i];
    }
    obj[x] = index.at(moved);
  }
  a.on_objects = obj;
  for (std::size_t f = 0; f < c.morphism_count(); ++f) {
    Specialization s(m.k);
    for (std::size_t i = 0; i < m.k; ++i) s[p[i]] = m.specializations[f][i];
    a.on_morphisms.push_back(morphism_of.at({obj[c.dst(f)], s}));
  }
  return a;
}

/// The symmetric group on the k coordinates, generated by adjacent swaps.
inline GroupActionOnCategory sigma_action(const ConfigurationModel& m) {
  GroupActionOnCategory g;
  for (std::size_t i = 0; i + 1 < m.k; ++i) {
    std::vector<std::size_t> p(m.k);
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[i], p[i + 1]);
    g.generators.push_back(permute_coordinates(m, p));
  }
  return g;
}

/// Model of the unordered configuration space.
inline OrbitCategory unordered_conf(const ConfigurationModel& m) {
  return quotient_by_free_action_with_map(m.css.category, sigma_action(m));
}

/// Findings against the subdivision hypotheses for k points: paths between
/// distinct essential vertices (degree other than 2) and cycles must have
/// at least k + 1 edges.
inline Diagnostics check_abrams_conditions(const Graph& g, std::size_t k) {
  if (auto d = validate_graph(g); !d.empty()) return d;
  Diagnostics out;
  std::size_t n = g.vertex_count();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, edge)
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    adj[g.edges[e].ends[0]].push_back({g.edges[e].ends[1], e});
    if (g.edges[e].ends[0] != g.edges[e].ends[1]) adj[g.edges[e].ends[1]].push_back({g.edges[e].ends[0], e});
  }
  auto deg = g.degrees();
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::size_t girth = inf;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (g.edges[e].ends[0] == g.edges[e].ends[1]) girth = 1;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, inf), via(n, inf);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      std::size_t x = queue.front();
      queue.pop_front();
      for (auto [y, e] : adj[x]) {
        if (x == y) continue;
        if (dist[y] == inf) {
          dist[y] = dist[x] + 1;
          via[y] = e;
          queue.push_back(y);
        } else if (e != via[x]) {
          girth = std::min(girth, dist[x] + dist[y] + 1);
        }
      }
    }
    if (deg[s] == 2) continue;
    for (std::size_t t = s + 1; t < n; ++t)
      if (deg[t] != 2 && dist[t] != inf && dist[t] < k + 1)
        out.push_back("path between essential vertices " + g.vertices[s] + " and " + g.vertices[t] +
                      " has length " + std::to_string(dist[t]) + " < " + std::to_string(k + 1));
  }
  if (girth != inf && girth < k + 1)
    out.push_back("cycle of length " + std::to_string(girth) + " < " + std::to_string(k + 1));
  return out;
}

/// Discretized configuration space: k-tuples of closed graph cells with
/// pairwise disjoint closures, under the product face order, after
/// subdividing every edge `subdivisions` times. The subdivided graph must be
/// simple; whether it satisfies the length hypotheses is left to the caller
/// (see check_abrams_conditions).
struct AbramsComplex {
  Graph graph;  // the subdivided graph
  std::size_t k = 0;
  CombinatorialCSS css;
  std::vector<std::vector<std::size_t>> tuples;  // object id -> graph cells
};

inline AbramsComplex abrams_complex(const Graph& g, std::size_t k, std::size_t subdivisions = 1) {
  if (k < 1) throw Error("abrams_complex: k must be at least 1");
  AbramsComplex out;
  out.graph = subdivide_graph(g, subdivisions);
  out.k = k;
  const Graph& h = out.graph;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto [a, b] = h.edges[e].ends;
    if (a == b) throw Error("abrams_complex: subdivided graph has a loop at " + h.vertices[a]);
    if (!seen.emplace(std::minmax(a, b), e).second)
      throw Error("abrams_complex: subdivided graph has parallel edges between " + h.vertices[a] + " and " +
                  h.vertices[b]);
  }
  auto closure = [&](std::size_t cell) -> std::vector<std::size_t> {
    if (h.is_vertex(cell)) return {cell};
    auto [a, b] = h.edges[cell - h.vertex_count()].ends;
    return {a, b};
  };
  std::vector<std::size_t> cur;
  std::vector<char> used(h.vertex_count(), 0);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == k) {
      out.tuples.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c < h.cell_count(); ++c) {
      auto cl = closure(c);
      if (std::any_of(cl.begin(), cl.end(), [&](std::size_t v) { return used[v]; })) continue;
      for (std::size_t v : cl) used[v] = 1;
      cur.push_back(c);
      self(self);
      cur.pop_back();
      for (std::size_t v : cl) used[v] = 0;
    }
  };
  rec(rec);
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<PosetElement> elems;
  for (std::size_t t = 0; t < out.tuples.size(); ++t) {
    index[out.tuples[t]] = t;
    int dim = 0;
    std::string label;
    for (std::size_t c : out.tuples[t]) {
      dim += h.is_vertex(c) ? 0 : 1;
      label += (label.empty() ? "" : ",") + h.cell_label(c);
    }
    elems.push_back({dim, "(" + label + ")"});
  }
  // Covers: replace one edge coordinate by one of its ends.
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t t = 0; t < out.tuples.size(); ++t)
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t c = out.tuples[t][i];
      if (h.is_vertex(c)) continue;
      for (std::size_t v : closure(c)) {
        auto lower = out.tuples[t];
        lower[i] = v;
        covers.emplace_back(index.at(lower), t);
      }
    }
  out.css = make_css(poset_category(Poset(std::move(elems), std::move(covers))));
  return out;
}

/// Coordinate swaps on an Abrams complex (as a poset category).
inline GroupActionOnCategory abrams_sigma_action(const AbramsComplex& a) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t t = 0; t < a.tuples.size(); ++t) index[a.tuples[t]] = t;
  const AcyclicCategory& c = a.css.category;
  GroupActionOnCategory g;
  for (std::size_t i = 0; i + 1 < a.k; ++i) {
    CategoryAutomorphism aut;
    for (const auto& t : a.tuples) {
      auto s = t;
      std::swap(s[i], s[i + 1]);
      aut.on_objects.push_back(index.at(s));
    }
    for (std::size_t m = 0; m < c.morphism_count(); ++m)
      aut.on_morphisms.push_back(c.hom(aut.on_objects[c.src(m)], aut.on_objects[c.dst(m)]).front());
    g.generators.push_back(std::move(aut));
  }
  return g;
}

}  // namespace stratakit
