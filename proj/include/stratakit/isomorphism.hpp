#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "stratakit/category.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/poset.hpp"

namespace stratakit {

namespace detail {

/// Colour refinement on a directed graph with initial colours; returns the
/// stable colouring with colours renumbered canonically.
inline std::vector<std::size_t> refine_colours(std::vector<std::size_t> colour,
                                               const std::vector<std::vector<std::size_t>>& up,
                                               const std::vector<std::vector<std::size_t>>& down) {
  std::size_t n = colour.size();
  std::size_t classes = 0;
  for (;;) {
    std::vector<std::vector<std::size_t>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> u, d;
      for (std::size_t w : up[v]) u.push_back(colour[w]);
      for (std::size_t w : down[v]) d.push_back(colour[w]);
      std::sort(u.begin(), u.end());
      std::sort(d.begin(), d.end());
      sig[v].push_back(colour[v]);
      sig[v].push_back(u.size());
      sig[v].insert(sig[v].end(), u.begin(), u.end());
      sig[v].push_back(d.size());
      sig[v].insert(sig[v].end(), d.begin(), d.end());
    }
    std::map<std::vector<std::size_t>, std::size_t> ids;
    for (const auto& s : sig) ids.emplace(s, 0);
    std::size_t k = 0;
    for (auto& [s, id] : ids) id = k++;
    for (std::size_t v = 0; v < n; ++v) colour[v] = ids.at(sig[v]);
    if (k == classes) return colour;
    classes = k;
  }
}

/// Backtracking search for a bijection between two multigraphs
/// given by adjacency counts; colours must match and counts between
/// assigned vertices must agree.
struct GraphMatcher {
  const std::vector<std::vector<std::size_t>>& up_a;
  const std::vector<std::vector<std::size_t>>& up_b;
  const std::vector<std::size_t>& colour_a;
  const std::vector<std::size_t>& colour_b;
  std::vector<std::map<std::size_t, std::size_t>> mult_a, mult_b;  // v -> (w -> count) both ways
  std::vector<std::size_t> order;
  std::vector<std::optional<std::size_t>> map_ab;
  std::vector<char> used_b;

  GraphMatcher(const std::vector<std::vector<std::size_t>>& ua,
               const std::vector<std::vector<std::size_t>>& ub, const std::vector<std::size_t>& ca,
               const std::vector<std::size_t>& cb)
      : up_a(ua), up_b(ub), colour_a(ca), colour_b(cb) {
    auto build = [](const std::vector<std::vector<std::size_t>>& up) {
      std::vector<std::map<std::size_t, std::size_t>> m(up.size());
      for (std::size_t v = 0; v < up.size(); ++v)
        for (std::size_t w : up[v]) {
          ++m[v][2 * w];      // v -> w
          ++m[w][2 * v + 1];  // w <- v
        }
      return m;
    };
    mult_a = build(ua);
    mult_b = build(ub);
    std::size_t n = ua.size();
    // Breadth-first order so each new vertex is constrained by earlier ones.
    std::vector<char> seen(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      seen[s] = 1;
      order.push_back(s);
      for (std::size_t h = order.size() - 1; h < order.size(); ++h)
        for (auto [key, cnt] : mult_a[order[h]]) {
          std::size_t w = key / 2;
          if (!seen[w]) {
            seen[w] = 1;
            order.push_back(w);
          }
        }
    }
    map_ab.assign(n, std::nullopt);
    used_b.assign(n, 0);
  }

  bool consistent(std::size_t a, std::size_t b) const {
    if (colour_a[a] != colour_b[b]) return false;
    for (auto [key, cnt] : mult_a[a]) {
      std::size_t w = key / 2;
      if (w == a || !map_ab[w]) continue;
      auto it = mult_b[b].find(2 * *map_ab[w] + (key & 1));
      if (it == mult_b[b].end() || it->second != cnt) return false;
    }
    // Edges in b to already-mapped vertices must exist in a too.
    std::size_t mapped_a = 0, mapped_b = 0;
    for (auto [key, cnt] : mult_a[a])
      if (key / 2 != a && map_ab[key / 2]) mapped_a += cnt;
    for (auto [key, cnt] : mult_b[b])
      if (key / 2 != b && used_b[key / 2]) mapped_b += cnt;
    return mapped_a == mapped_b;
  }

  bool search(std::size_t depth) {
    if (depth == order.size()) return true;
    std::size_t a = order[depth];
    for (std::size_t b = 0; b < used_b.size(); ++b) {
      if (used_b[b] || !consistent(a, b)) continue;
      map_ab[a] = b;
      used_b[b] = 1;
      if (search(depth + 1)) return true;
      map_ab[a] = std::nullopt;
      used_b[b] = 0;
    }
    return false;
  }
};

inline std::optional<std::vector<std::size_t>> match_graphs(
    const std::vector<std::vector<std::size_t>>& up_a, const std::vector<std::size_t>& base_a,
    const std::vector<std::vector<std::size_t>>& up_b, const std::vector<std::size_t>& base_b) {
  std::size_t n = up_a.size();
  if (up_b.size() != n) return std::nullopt;
  auto down_of = [](const std::vector<std::vector<std::size_t>>& up) {
    std::vector<std::vector<std::size_t>> d(up.size());
    for (std::size_t v = 0; v < up.size(); ++v)
      for (std::size_t w : up[v]) d[w].push_back(v);
    return d;
  };
  // Refine the disjoint union so colours are comparable across both sides.
  std::vector<std::vector<std::size_t>> up(2 * n), down;
  std::vector<std::size_t> colour(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : up_a[v]) up[v].push_back(w);
    for (std::size_t w : up_b[v]) up[n + v].push_back(n + w);
    colour[v] = base_a[v];
    colour[n + v] = base_b[v];
  }
  down = down_of(up);
  colour = refine_colours(colour, up, down);
  std::vector<std::size_t> ca(colour.begin(), colour.begin() + n), cb(colour.begin() + n, colour.end());
  auto sa = ca, sb = cb;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return std::nullopt;
  GraphMatcher m(up_a, up_b, ca, cb);
  if (!m.search(0)) return std::nullopt;
  std::vector<std::size_t> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = *m.map_ab[v];
  return out;
}

inline std::size_t grade_colour(std::optional<int> g) {
  return g ? static_cast<std::size_t>(*g + 1000) : 0;
}

}  // namespace detail

/// An order isomorphism p -> q preserving grades, if one exists.
inline std::optional<std::vector<std::size_t>> poset_isomorphism(const Poset& p, const Poset& q) {
  if (p.size() != q.size() || p.covers().size() != q.covers().size()) return std::nullopt;
  std::vector<std::vector<std::size_t>> up_p(p.size()), up_q(q.size());
  std::vector<std::size_t> cp(p.size()), cq(q.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    up_p[x] = p.up_covers(x);
    cp[x] = detail::grade_colour(p.grade(x));
  }
  for (std::size_t x = 0; x < q.size(); ++x) {
    up_q[x] = q.up_covers(x);
    cq[x] = detail::grade_colour(q.grade(x));
  }
  return detail::match_graphs(up_p, cp, up_q, cq);
}

inline bool isomorphic(const Poset& p, const Poset& q) { return poset_isomorphism(p, q).has_value(); }

/// Face poset of a Delta-complex whose cells have distinct faces: elements
/// are all cells (dimension-major ids), covers are the face relations.
inline Poset face_poset(const DeltaComplex& k) {
  std::vector<PosetElement> elems;
  std::vector<std::size_t> offset;
  int top = k.dimension();
  for (int n = 0; n <= top; ++n) {
    offset.push_back(elems.size());
    for (std::size_t c = 0; c < k.cell_count(n); ++c) elems.push_back({n, {}});
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (int n = 1; n <= top; ++n)
    for (std::size_t c = 0; c < k.cell_count(n); ++c)
      for (std::size_t f : k.faces(n, c)) covers.emplace_back(offset[n - 1] + f, offset[n] + c);
  return Poset(std::move(elems), std::move(covers));
}

/// Object and morphism bijections of a category isomorphism.
struct CategoryIsomorphism {
  std::vector<std::size_t> objects;
  std::vector<std::size_t> morphisms;
};

/// A grade-preserving category isomorphism c -> d, if one exists. Objects
/// are matched on the multigraph of non-identity morphisms; morphisms are
/// then matched hom-set by hom-set subject to composition.
inline std::optional<CategoryIsomorphism> category_isomorphism(const AcyclicCategory& c,
                                                               const AcyclicCategory& d) {
  if (c.object_count() != d.object_count() || c.morphism_count() != d.morphism_count())
    return std::nullopt;
  std::size_t n = c.object_count();
  std::vector<std::vector<std::size_t>> up_c(n), up_d(n);
  std::vector<std::size_t> cc(n), cd(n);
  for (std::size_t m = 0; m < c.morphism_count(); ++m) up_c[c.src(m)].push_back(c.dst(m));
  for (std::size_t m = 0; m < d.morphism_count(); ++m) up_d[d.src(m)].push_back(d.dst(m));
  for (std::size_t x = 0; x < n; ++x) {
    cc[x] = detail::grade_colour(c.grade(x));
    cd[x] = detail::grade_colour(d.grade(x));
  }
  // Object bijections are enumerated until one admits a morphism matching.
  auto colour = [&]() {
    std::vector<std::vector<std::size_t>> up(2 * n), down(2 * n);
    std::vector<std::size_t> col(2 * n);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w : up_c[v]) up[v].push_back(w);
      for (std::size_t w : up_d[v]) up[n + v].push_back(n + w);
      col[v] = cc[v];
      col[n + v] = cd[v];
    }
    for (std::size_t v = 0; v < 2 * n; ++v)
      for (std::size_t w : up[v]) down[w].push_back(v);
    return detail::refine_colours(col, up, down);
  }();
  std::vector<std::size_t> ca(colour.begin(), colour.begin() + n), cb(colour.begin() + n, colour.end());
  detail::GraphMatcher matcher(up_c, up_d, ca, cb);

  std::optional<CategoryIsomorphism> found;
  auto match_morphisms = [&](const std::vector<std::size_t>& obj) -> std::optional<std::vector<std::size_t>> {
    // Morphisms ordered by (source, target) so composites are checked as
    // soon as both factors are assigned.
    std::vector<std::size_t> order(c.morphism_count());
    for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(c.src(a), c.dst(a)) < std::pair(c.src(b), c.dst(b));
    });
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> mor(c.morphism_count(), unset);
    std::vector<char> used(d.morphism_count(), 0);
    auto ok = [&](std::size_t m) {
      // Every composition entry whose factors and result are assigned agrees.
      std::size_t x = c.src(m), y = c.dst(m);
      for (std::size_t g : c.out_morphisms(y))
        if (mor[g] != unset) {
          std::size_t gm = c.compose(g, m);
          if (mor[gm] != unset && d.composite(mor[g], mor[m]) != mor[gm]) return false;
        }
      for (std::size_t f : c.in_morphisms(x))
        if (mor[f] != unset) {
          std::size_t mf = c.compose(m, f);
          if (mor[mf] != unset && d.composite(mor[m], mor[f]) != mor[mf]) return false;
        }
      // m as a composite of assigned factors.
      for (std::size_t f : c.out_morphisms(x)) {
        if (mor[f] == unset) continue;
        for (std::size_t g : c.out_morphisms(c.dst(f)))
          if (mor[g] != unset && c.compose(g, f) == m && d.composite(mor[g], mor[f]) != mor[m])
            return false;
      }
      return true;
    };
    auto rec = [&](auto&& self, std::size_t i) -> bool {
      if (i == order.size()) return true;
      std::size_t m = order[i];
      for (std::size_t cand : d.hom(obj[c.src(m)], obj[c.dst(m)])) {
        if (used[cand]) continue;
        mor[m] = cand;
        used[cand] = 1;
        if (ok(m) && self(self, i + 1)) return true;
        mor[m] = unset;
        used[cand] = 0;
      }
      return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    return mor;
  };

  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == matcher.order.size()) {
      std::vector<std::size_t> obj(n);
      for (std::size_t v = 0; v < n; ++v) obj[v] = *matcher.map_ab[v];
      if (auto mor = match_morphisms(obj)) {
        found = CategoryIsomorphism{std::move(obj), std::move(*mor)};
        return true;
      }
      return false;
    }
    std::size_t a = matcher.order[depth];
    for (std::size_t b = 0; b < n; ++b) {
      if (matcher.used_b[b] || !matcher.consistent(a, b)) continue;
      matcher.map_ab[a] = b;
      matcher.used_b[b] = 1;
      if (self(self, depth + 1)) return true;
      matcher.map_ab[a] = std::nullopt;
      matcher.used_b[b] = 0;
    }
    return false;
  };
  auto sa = ca, sb = cb;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return std::nullopt;
  search(search, 0);
  return found;
}

inline bool isomorphic(const AcyclicCategory& c, const AcyclicCategory& d) {
  return category_isomorphism(c, d).has_value();
}

}  // namespace stratakit
