#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "stratakit/category.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/poset.hpp"

namespace stratakit {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

inline void dot_node(std::ostringstream& os, std::size_t id, const std::string& label, std::optional<int> grade) {
  os << "  n" << id << " [label=\"" << dot_escape(label);
  if (grade) os << " (" << *grade << ")";
  os << "\"];\n";
}

}  // namespace detail

/// Hasse diagram, bottom to top.
inline std::string to_dot(const Poset& p) {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t x = 0; x < p.size(); ++x) detail::dot_node(os, x, p.label(x), p.grade(x));
  for (auto [lo, hi] : p.covers()) os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
  return os.str();
}

/// Face category: one edge per indecomposable morphism, so parallel lifts
/// show up as multi-edges.
inline std::string to_dot(const AcyclicCategory& c) {
  std::vector<char> composite(c.morphism_count(), 0);
  for (const auto& [g, f, gf] : c.composition_entries()) composite[gf] = 1;
  std::ostringstream os;
  os << "digraph face_category {\n  rankdir=BT;\n";
  for (std::size_t x = 0; x < c.object_count(); ++x) detail::dot_node(os, x, c.object(x).label, c.grade(x));
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    if (composite[m]) continue;
    os << "  n" << c.src(m) << " -> n" << c.dst(m);
    if (!c.morphism(m).label.empty()) os << " [label=\"" << detail::dot_escape(c.morphism(m).label) << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// OFF surface of a complex of dimension at most 2. Vertices are placed on
/// the moment curve; triangles list their vertices in simplex order.
inline std::string to_off(const DeltaComplex& k) {
  if (k.dimension() > 2) throw Error("to_off: complex has dimension " + std::to_string(k.dimension()) + " > 2");
  std::size_t nv = k.cell_count(0), nt = k.dimension() == 2 ? k.cell_count(2) : 0;
  std::size_t ne = k.dimension() >= 1 ? k.cell_count(1) : 0;
  std::ostringstream os;
  os << "OFF\n" << nv << " " << nt << " " << ne << "\n";
  for (std::size_t v = 0; v < nv; ++v) {
    double t = nv > 1 ? static_cast<double>(v) / static_cast<double>(nv - 1) : 0.0;
    os << t << " " << t * t << " " << t * t * t << "\n";
  }
  for (std::size_t f = 0; f < nt; ++f) {
    auto vs = k.vertices(2, f);
    os << "3 " << vs[0] << " " << vs[1] << " " << vs[2] << "\n";
  }
  return os.str();
}

}  // namespace stratakit
