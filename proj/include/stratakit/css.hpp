#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratakit/category.hpp"
#include "stratakit/common.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/homology.hpp"
#include "stratakit/poset.hpp"

namespace stratakit {

struct AmbientCertificate;

/// Category-only encoding of a totally normal cellular stratified space.
/// Objects are cells with their dimension as grade, morphisms are lifts of
/// characteristic maps, and `closed` records which cells are closed.
struct CombinatorialCSS {
  AcyclicCategory category;
  std::vector<char> closed;
  /// Set when the space was cut out of a larger closed space.
  std::shared_ptr<const AmbientCertificate> ambient;

  std::size_t cell_count() const { return category.object_count(); }
  int dim(std::size_t x) const {
    auto g = category.grade(x);
    if (!g) throw Error("CSS: cell " + std::to_string(x) + " has no dimension");
    return *g;
  }
  bool all_closed() const {
    return std::all_of(closed.begin(), closed.end(), [](char c) { return c != 0; });
  }
  int dimension() const {
    int d = -1;
    for (std::size_t x = 0; x < cell_count(); ++x) d = std::max(d, dim(x));
    return d;
  }
};

struct AmbientCertificate {
  CombinatorialCSS space;
  std::vector<std::size_t> embedding;  // cell of the subspace -> cell of `space`
};

/// Boundary poset of a cell: the non-identity morphisms b into it, with
/// b' <= b iff b' = b o c, graded by the dimension of the source.
struct BoundaryPoset {
  Poset poset;
  std::vector<std::size_t> morphisms;  // poset element -> morphism
};

inline BoundaryPoset boundary_poset(const AcyclicCategory& c, std::size_t lambda) {
  BoundaryPoset out;
  out.morphisms = c.in_morphisms(lambda);
  std::sort(out.morphisms.begin(), out.morphisms.end());
  std::map<std::size_t, std::size_t> index;
  std::vector<PosetElement> elems;
  for (std::size_t i = 0; i < out.morphisms.size(); ++i) {
    std::size_t b = out.morphisms[i];
    index[b] = i;
    elems.push_back({c.grade(c.src(b)), c.morphism(b).label});
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t b : out.morphisms)
    for (std::size_t f : c.in_morphisms(c.src(b))) rel.emplace_back(index.at(c.compose(b, f)), index.at(b));
  out.poset = Poset::from_relation(std::move(elems), rel);
  return out;
}

namespace detail {

inline bool sphere_homology_of(const Poset& p, int d) {
  return has_sphere_homology(order_complex(p), d);
}

}  // namespace detail

/// Necessary conditions for p to be the face poset of a regular CW
/// (d)-sphere: grades run from 0 to d in steps of one along covers, the
/// order complex has the homology of S^d, every element's lower interval
/// has the homology of the matching sphere, and the diamond property holds
/// (including intervals reaching the added top element).
inline bool passes_sphere_test(const Poset& p, int d) {
  if (p.size() == 0) return d == -1;
  if (d < 0) return false;
  for (std::size_t x = 0; x < p.size(); ++x) {
    auto g = p.grade(x);
    if (!g || *g < 0 || *g > d) return false;
    if (p.down_covers(x).empty() && *g != 0) return false;
    for (std::size_t y : p.up_covers(x))
      if (!p.grade(y) || *p.grade(y) != *g + 1) return false;
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    int g = *p.grade(x);
    std::map<std::size_t, std::size_t> between;
    for (std::size_t y : p.up_covers(x))
      for (std::size_t z : p.up_covers(y)) ++between[z];
    for (auto [z, cnt] : between)
      if (cnt != 2) return false;
    if (g == d - 1 && p.up_covers(x).size() != 2) return false;
  }
  if (!detail::sphere_homology_of(p, d)) return false;
  for (std::size_t x = 0; x < p.size(); ++x) {
    int g = *p.grade(x);
    if (g < 2) {
      // Below a grade-1 element there must be exactly two points.
      if (g == 1 && p.down_covers(x).size() != 2) return false;
      continue;
    }
    if (!detail::sphere_homology_of(induced_subposet(p, p.strictly_below(x)), g - 1)) return false;
  }
  return true;
}

/// Closed flags recomputed from the sphere test on every boundary poset.
inline std::vector<char> compute_closed_flags(const AcyclicCategory& c) {
  std::vector<char> flags(c.object_count(), 0);
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    auto g = c.grade(x);
    if (!g) throw Error("CSS: cell " + std::to_string(x) + " has no dimension");
    flags[x] = passes_sphere_test(boundary_poset(c, x).poset, *g - 1) ? 1 : 0;
  }
  return flags;
}

/// Builds a CSS from a graded category; closed flags come from the sphere
/// test unless supplied.
inline CombinatorialCSS make_css(AcyclicCategory c, std::optional<std::vector<char>> closed = {}) {
  detail::require_valid(c, "make_css");
  CombinatorialCSS x;
  if (closed && closed->size() != c.object_count())
    throw Error("make_css: one closed flag per cell is required");
  x.closed = closed ? *closed : compute_closed_flags(c);
  x.category = std::move(c);
  return x;
}

/// Per-cell checks: grading of the boundary poset, strict dimension
/// increase, injectivity of b o - on each boundary poset, agreement of the
/// closed flags with the sphere test, and vanishing top homology of the
/// boundary of non-closed cells.
inline Diagnostics validate_total_normality(const CombinatorialCSS& x) {
  Diagnostics out;
  const AcyclicCategory& c = x.category;
  for (auto& d : validate_category(c)) out.push_back(d);
  if (!out.empty()) return out;
  if (x.closed.size() != c.object_count()) {
    out.push_back("closed flags do not match the number of cells");
    return out;
  }
  auto cell = [&](std::size_t l) {
    return "cell " + std::to_string(l) + (c.object(l).label.empty() ? "" : " (" + c.object(l).label + ")");
  };
  for (std::size_t l = 0; l < c.object_count(); ++l)
    if (!c.grade(l)) {
      out.push_back(cell(l) + " has no dimension");
      return out;
    }
  for (std::size_t l = 0; l < c.object_count(); ++l) {
    int d = *c.grade(l);
    bool ok = true;
    for (std::size_t b : c.in_morphisms(l))
      if (*c.grade(c.src(b)) >= d) {
        out.push_back(cell(l) + ": boundary morphism " + std::to_string(b) +
                      " does not come from a lower-dimensional cell");
        ok = false;
      }
    for (std::size_t b : c.in_morphisms(l)) {
      std::set<std::size_t> images;
      for (std::size_t f : c.in_morphisms(c.src(b)))
        if (!images.insert(c.compose(b, f)).second) {
          out.push_back(cell(l) + ": composition with morphism " + std::to_string(b) +
                        " is not injective");
          ok = false;
          break;
        }
    }
    if (!ok) continue;
    BoundaryPoset bp = boundary_poset(c, l);
    bool sphere = passes_sphere_test(bp.poset, d - 1);
    if (x.closed[l] && !sphere)
      out.push_back(cell(l) + " is flagged closed but its boundary poset fails the sphere test for S^" +
                    std::to_string(d - 1));
    if (!x.closed[l] && sphere)
      out.push_back(cell(l) + " is flagged non-closed but its boundary poset is a sphere");
    if (!x.closed[l] && d >= 1 && bp.poset.size() > 0) {
      ReducedHomology r = reduced_homology(order_complex(bp.poset));
      std::size_t top = static_cast<std::size_t>(d - 1);
      if (top < r.groups.betti.size() && r.groups.betti[top] != 0)
        out.push_back(cell(l) + " is non-closed but its boundary carries a top-dimensional cycle");
    }
  }
  return out;
}

namespace detail {
inline void require_normal(const CombinatorialCSS& x, const char* op) {
  if (auto d = validate_total_normality(x); !d.empty())
    throw Error(std::string(op) + ": invalid CSS: " + d.front());
}
}  // namespace detail

/// Barycentric subdivision: the nondegenerate nerve of the face category.
inline DeltaComplex sd(const CombinatorialCSS& x) {
  detail::require_normal(x, "sd");
  return nondegenerate_nerve(x.category);
}

/// Sd cells labelled by the first (source) and last (target) object of
/// their chain.
struct SalvettiPartition {
  Nerve nerve;
  std::vector<std::vector<std::size_t>> source;  // source[k][cell]
  std::vector<std::vector<std::size_t>> target;

  /// Number of Sd cells, all dimensions, with the given source / target.
  std::vector<std::size_t> source_block_sizes(std::size_t cells) const { return block_sizes(source, cells); }
  std::vector<std::size_t> target_block_sizes(std::size_t cells) const { return block_sizes(target, cells); }

 private:
  static std::vector<std::size_t> block_sizes(const std::vector<std::vector<std::size_t>>& lab,
                                              std::size_t cells) {
    std::vector<std::size_t> out(cells, 0);
    for (const auto& level : lab)
      for (std::size_t o : level) ++out[o];
    return out;
  }
};

inline SalvettiPartition salvetti_partition(const CombinatorialCSS& x) {
  detail::require_normal(x, "salvetti_partition");
  SalvettiPartition p;
  p.nerve = nondegenerate_nerve_with_chains(x.category);
  for (const auto& level : p.nerve.chains) {
    p.source.emplace_back();
    p.target.emplace_back();
    for (const auto& ch : level) {
      p.source.back().push_back(ch.source());
      p.target.back().push_back(ch.target());
    }
  }
  return p;
}

/// Stellar dual: opposite category; the dimension of a cell is the length
/// of the longest chain of non-identity morphisms out of it.
inline CombinatorialCSS dual(const CombinatorialCSS& x) {
  detail::require_normal(x, "dual");
  const AcyclicCategory& c = x.category;
  // Longest chain upwards, processed from maximal elements down.
  std::vector<int> height(c.object_count(), -1);
  auto h = [&](auto&& self, std::size_t v) -> int {
    if (height[v] >= 0) return height[v];
    int best = 0;
    for (std::size_t m : c.out_morphisms(v)) best = std::max(best, 1 + self(self, c.dst(m)));
    return height[v] = best;
  };
  AcyclicCategory op = opposite_category(c);
  for (std::size_t v = 0; v < c.object_count(); ++v) op.set_grade(v, h(h, v));
  return make_css(std::move(op));
}

/// Sal(X) = D(D(X)).
inline CombinatorialCSS salvetti_complex(const CombinatorialCSS& x) { return dual(dual(x)); }

/// Product cells with summed dimensions; closed flags are AND-ed.
inline CombinatorialCSS product_css(const CombinatorialCSS& x, const CombinatorialCSS& y) {
  detail::require_normal(x, "product_css");
  detail::require_normal(y, "product_css");
  CombinatorialCSS p;
  p.category = product_category(x.category, y.category);
  for (std::size_t a = 0; a < x.cell_count(); ++a)
    for (std::size_t b = 0; b < y.cell_count(); ++b)
      p.closed.push_back(x.closed[a] && y.closed[b]);
  return p;
}

/// Removes a down-closed set of cells. The result remembers the closed
/// ambient space it was cut from.
inline CombinatorialCSS remove_closed_subcomplex(const CombinatorialCSS& x,
                                                 const std::vector<std::size_t>& cells) {
  detail::require_normal(x, "remove_closed_subcomplex");
  const AcyclicCategory& c = x.category;
  std::vector<char> removed(c.object_count(), 0);
  for (std::size_t r : cells) {
    if (r >= c.object_count()) throw Error("remove_closed_subcomplex: unknown cell " + std::to_string(r));
    removed[r] = 1;
  }
  for (std::size_t r : cells)
    for (std::size_t m : c.in_morphisms(r))
      if (!removed[c.src(m)])
        throw Error("remove_closed_subcomplex: removal set is not closed: cover (" +
                    std::to_string(c.src(m)) + "," + std::to_string(r) + ") leaves cell " +
                    std::to_string(c.src(m)) + " behind");
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < c.object_count(); ++v)
    if (!removed[v]) keep.push_back(v);
  Subcategory sub = full_subcategory(c, keep);
  CombinatorialCSS out;
  out.category = std::move(sub.category);
  for (std::size_t v : keep) {
    bool lost = false;
    for (std::size_t m : c.in_morphisms(v)) lost = lost || removed[c.src(m)];
    out.closed.push_back(x.closed[v] && !lost);
  }
  auto cert = std::make_shared<AmbientCertificate>();
  if (x.ambient) {
    cert->space = x.ambient->space;
    for (std::size_t v : keep) cert->embedding.push_back(x.ambient->embedding[v]);
  } else {
    cert->space = x;
    cert->embedding = keep;
  }
  out.ambient = std::move(cert);
  return out;
}

/// Smallest closed-cell CSS containing x: the down-closure of x inside its
/// ambient space.
inline CombinatorialCSS cellular_closure(const CombinatorialCSS& x) {
  if (x.all_closed()) return x;
  if (!x.ambient)
    throw Error("cellular_closure: non-closed cells and no closure certificate available");
  const CombinatorialCSS& amb = x.ambient->space;
  const AcyclicCategory& c = amb.category;
  std::vector<char> in(c.object_count(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t v : x.ambient->embedding) {
    in[v] = 1;
    stack.push_back(v);
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t m : c.in_morphisms(v))
      if (!in[c.src(m)]) {
        in[c.src(m)] = 1;
        stack.push_back(c.src(m));
      }
  }
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < c.object_count(); ++v)
    if (in[v]) {
      if (!amb.closed[v])
        throw Error("cellular_closure: ambient cell " + std::to_string(v) + " is not closed");
      keep.push_back(v);
    }
  Subcategory sub = full_subcategory(c, keep);
  CombinatorialCSS out;
  out.category = std::move(sub.category);
  out.closed.assign(keep.size(), 1);
  return out;
}

/// Cellular subdivision through the Grothendieck construction: F assigns
/// to each cell a graded poset of interior pieces (grades at most the cell
/// dimension) and to each lift a poset map.
inline CombinatorialCSS subdivide(const CombinatorialCSS& x, const PosetDiagram& f) {
  detail::require_normal(x, "subdivide");
  const AcyclicCategory& c = x.category;
  if (f.fibers.size() != c.object_count()) throw Error("subdivide: one poset per cell is required");
  for (std::size_t v = 0; v < c.object_count(); ++v) {
    if (f.fibers[v].size() == 0) throw Error("subdivide: cell " + std::to_string(v) + " has no pieces");
    for (std::size_t a = 0; a < f.fibers[v].size(); ++a) {
      auto g = f.fibers[v].grade(a);
      if (!g || *g > x.dim(v) || *g < 0)
        throw Error("subdivide: piece " + std::to_string(a) + " of cell " + std::to_string(v) +
                    " has an invalid grade");
    }
    if (!f.fibers[v].graded()) throw Error("subdivide: fiber posets must be graded");
  }
  AcyclicCategory g = grothendieck(c, f);
  for (std::size_t m = 0; m < g.morphism_count(); ++m)
    if (*g.grade(g.src(m)) >= *g.grade(g.dst(m)))
      throw Error("subdivide: morphism " + std::to_string(m) + " of the subdivision does not raise dimension");
  return make_css(std::move(g));
}

/// Sum over cells of (-1)^dim.
inline long long cell_euler_characteristic(const CombinatorialCSS& x) {
  long long chi = 0;
  for (std::size_t v = 0; v < x.cell_count(); ++v) chi += x.dim(v) % 2 == 0 ? 1 : -1;
  return chi;
}

}  // namespace stratakit
