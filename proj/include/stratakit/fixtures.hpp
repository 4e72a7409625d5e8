#pragma once

#include <string>
#include <vector>

#include "stratakit/category.hpp"
#include "stratakit/css.hpp"
#include "stratakit/poset.hpp"

namespace stratakit::fixtures {

/// Face poset of the n-simplex (or of its boundary): nonempty subsets of
/// {0..n} ordered by inclusion, graded by size - 1. Subsets are numbered
/// by size, then lexicographically.
inline Poset simplex_face_poset(int n, bool boundary_only = false) {
  if (n < 0) throw Error("simplex: dimension must be non-negative");
  std::size_t v = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 1; size <= v; ++size) {
    if (boundary_only && size == v) break;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (cur.size() == size) {
        subsets.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < v; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
  std::vector<PosetElement> elems;
  for (const auto& s : subsets) {
    std::string label;
    for (std::size_t i : s) label += std::to_string(i);
    elems.push_back({static_cast<int>(s.size()) - 1, label});
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t a = 0; a < subsets.size(); ++a)
    for (std::size_t b = 0; b < subsets.size(); ++b)
      if (subsets[b].size() == subsets[a].size() + 1 &&
          std::includes(subsets[b].begin(), subsets[b].end(), subsets[a].begin(), subsets[a].end()))
        covers.emplace_back(a, b);
  return Poset(std::move(elems), std::move(covers));
}

inline CombinatorialCSS simplex(int n) { return make_css(poset_category(simplex_face_poset(n))); }

inline CombinatorialCSS boundary_simplex(int n) {
  return make_css(poset_category(simplex_face_poset(n, true)));
}

/// One 0-cell and one 1-cell attached by two lifts.
inline CombinatorialCSS circle_minimal() {
  AcyclicCategory c;
  c.add_object(0, "e0");
  c.add_object(1, "e1");
  c.add_morphism(0, 1, "b+1");
  c.add_morphism(0, 1, "b-1");
  return make_css(std::move(c));
}

/// Two vertices joined by two edges.
inline CombinatorialCSS circle_two_cells() {
  AcyclicCategory c;
  c.add_object(0, "v0");
  c.add_object(0, "v1");
  c.add_object(1, "a");
  c.add_object(1, "b");
  c.add_morphism(0, 2, "a0");
  c.add_morphism(1, 2, "a1");
  c.add_morphism(0, 3, "b0");
  c.add_morphism(1, 3, "b1");
  return make_css(std::move(c));
}

inline CombinatorialCSS torus() { return product_css(circle_minimal(), circle_minimal()); }

/// The torus with its 0-cell removed.
inline CombinatorialCSS punctured_torus() { return remove_closed_subcomplex(torus(), {0}); }

/// Y-space: one 0-cell and one stellar 1-cell; only the two lifts landing
/// on the 0-cell survive, so the face category is that of the minimal
/// circle.
inline CombinatorialCSS y_space() {
  CombinatorialCSS x = circle_minimal();
  x.category.set_object_label(0, "y0");
  x.category.set_object_label(1, "y1");
  return x;
}

/// One 0-cell and one 2-cell with a single lift; flagged closed as in the
/// usual picture of S^2 = e0 u e2.
inline CombinatorialCSS sphere_minimal() {
  AcyclicCategory c;
  c.add_object(0, "e0");
  c.add_object(2, "e2");
  c.add_morphism(0, 1, "b");
  CombinatorialCSS x;
  x.category = std::move(c);
  x.closed = {1, 1};
  return x;
}

/// Cubical RP^2: a square with opposite sides identified with a twist,
/// giving two 0-cells, two 1-cells and one 2-cell.
inline CombinatorialCSS cubical_rp2() {
  AcyclicCategory c;
  std::size_t v1 = c.add_object(0, "e0_1");
  std::size_t v2 = c.add_object(0, "e0_2");
  std::size_t a = c.add_object(1, "e1_1");
  std::size_t b = c.add_object(1, "e1_2");
  std::size_t f = c.add_object(2, "e2");
  std::size_t s1 = c.add_morphism(v1, a, "s1"), t1 = c.add_morphism(v2, a, "t1");
  std::size_t s2 = c.add_morphism(v1, b, "s2"), t2 = c.add_morphism(v2, b, "t2");
  std::size_t L = c.add_morphism(a, f, "L"), R = c.add_morphism(a, f, "R");
  std::size_t B = c.add_morphism(b, f, "B"), T = c.add_morphism(b, f, "T");
  std::size_t bl = c.add_morphism(v1, f, "bl"), tr = c.add_morphism(v1, f, "tr");
  std::size_t tl = c.add_morphism(v2, f, "tl"), br = c.add_morphism(v2, f, "br");
  c.set_composite(L, s1, bl);
  c.set_composite(L, t1, tl);
  c.set_composite(R, s1, tr);
  c.set_composite(R, t1, br);
  c.set_composite(B, s2, bl);
  c.set_composite(B, t2, br);
  c.set_composite(T, s2, tr);
  c.set_composite(T, t2, tl);
  return make_css(std::move(c));
}

inline std::vector<std::string> names() {
  return {"simplex-N",       "boundary-simplex-N", "circle-minimal", "circle-2",
          "torus",           "punctured-torus",    "y-space",        "sphere-minimal",
          "cubical-rp2"};
}

/// Fixture by name; "simplex-N" and "boundary-simplex-N" take a dimension.
inline CombinatorialCSS by_name(const std::string& name) {
  auto numbered = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
    std::string tail = name.substr(prefix.size());
    if (!std::all_of(tail.begin(), tail.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      return std::nullopt;
    return std::stoi(tail);
  };
  if (auto n = numbered("simplex-")) return simplex(*n);
  if (auto n = numbered("boundary-simplex-")) return boundary_simplex(*n);
  if (name == "circle-minimal") return circle_minimal();
  if (name == "circle-2") return circle_two_cells();
  if (name == "torus") return torus();
  if (name == "punctured-torus") return punctured_torus();
  if (name == "y-space") return y_space();
  if (name == "sphere-minimal") return sphere_minimal();
  if (name == "cubical-rp2") return cubical_rp2();
  throw Error("unknown fixture '" + name + "'");
}

}  // namespace stratakit::fixtures
