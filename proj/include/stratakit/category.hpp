#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stratakit/common.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/poset.hpp"

namespace stratakit {

struct CategoryObject {
  std::optional<int> grade;
  std::string label;
};

struct CategoryMorphism {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::string label;
};

/// A finite category with explicit hom-sets. Identities are implicit: the
/// stored morphisms are exactly the non-identity ones, and the composition
/// table covers composable pairs of non-identity morphisms.
class AcyclicCategory {
 public:
  std::size_t add_object(std::optional<int> grade = {}, std::string label = {}) {
    objects_.push_back({grade, std::move(label)});
    out_.emplace_back();
    in_.emplace_back();
    return objects_.size() - 1;
  }

  std::size_t add_morphism(std::size_t src, std::size_t dst, std::string label = {}) {
    if (src >= objects_.size() || dst >= objects_.size())
      throw Error("add_morphism: unknown object");
    morphisms_.push_back({src, dst, std::move(label)});
    std::size_t id = morphisms_.size() - 1;
    out_[src].push_back(id);
    in_[dst].push_back(id);
    return id;
  }

  /// Records g o f = gf.
  void set_composite(std::size_t g, std::size_t f, std::size_t gf) {
    if (g >= morphisms_.size() || f >= morphisms_.size() || gf >= morphisms_.size())
      throw Error("set_composite: unknown morphism");
    compose_[detail::pair_key(g, f)] = gf;
  }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const CategoryObject& object(std::size_t x) const { return objects_[x]; }
  const CategoryMorphism& morphism(std::size_t m) const { return morphisms_[m]; }
  std::size_t src(std::size_t m) const { return morphisms_[m].src; }
  std::size_t dst(std::size_t m) const { return morphisms_[m].dst; }
  std::optional<int> grade(std::size_t x) const { return objects_[x].grade; }
  void set_grade(std::size_t x, std::optional<int> g) { objects_[x].grade = g; }
  void set_object_label(std::size_t x, std::string s) { objects_[x].label = std::move(s); }

  const std::vector<std::size_t>& out_morphisms(std::size_t x) const { return out_[x]; }
  const std::vector<std::size_t>& in_morphisms(std::size_t x) const { return in_[x]; }

  std::vector<std::size_t> hom(std::size_t x, std::size_t y) const {
    std::vector<std::size_t> out;
    for (std::size_t m : out_[x])
      if (morphisms_[m].dst == y) out.push_back(m);
    return out;
  }

  std::optional<std::size_t> composite(std::size_t g, std::size_t f) const {
    auto it = compose_.find(detail::pair_key(g, f));
    if (it == compose_.end()) return std::nullopt;
    return it->second;
  }

  /// g o f for composable non-identity morphisms; throws if missing.
  std::size_t compose(std::size_t g, std::size_t f) const {
    auto c = composite(g, f);
    if (!c)
      throw Error("compose: no composite recorded for " + std::to_string(g) + " o " +
                  std::to_string(f));
    return *c;
  }

  /// (g, f, gf) triples sorted by (g, f).
  std::vector<std::array<std::size_t, 3>> composition_entries() const {
    std::vector<std::array<std::size_t, 3>> out;
    out.reserve(compose_.size());
    for (auto [k, v] : compose_) out.push_back({static_cast<std::size_t>(k >> 32),
                                                static_cast<std::size_t>(k & 0xffffffffu), v});
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<CategoryObject> objects_;
  std::vector<CategoryMorphism> morphisms_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::unordered_map<std::uint64_t, std::size_t> compose_;
};

/// A morphism that may be an identity: identity arrows carry the object.
struct Arrow {
  bool identity = true;
  std::size_t id = 0;  // morphism id, or object id when identity

  static Arrow ident(std::size_t x) { return {true, x}; }
  static Arrow of(std::size_t m) { return {false, m}; }
  bool operator==(const Arrow&) const = default;
};

inline std::size_t arrow_src(const AcyclicCategory& c, Arrow a) {
  return a.identity ? a.id : c.src(a.id);
}
inline std::size_t arrow_dst(const AcyclicCategory& c, Arrow a) {
  return a.identity ? a.id : c.dst(a.id);
}
inline Arrow compose_arrows(const AcyclicCategory& c, Arrow g, Arrow f) {
  if (f.identity) return g;
  if (g.identity) return f;
  return Arrow::of(c.compose(g.id, f.id));
}

/// Unit, associativity, totality and acyclicity checks.
inline Diagnostics validate_category(const AcyclicCategory& c) {
  Diagnostics out;
  auto name = [](std::size_t m) { return "morphism " + std::to_string(m); };
  for (std::size_t m = 0; m < c.morphism_count(); ++m)
    if (c.src(m) == c.dst(m))
      out.push_back("acyclicity violated: " + name(m) + " is a non-identity endomorphism of object " +
                    std::to_string(c.src(m)));
  for (const auto& [g, f, gf] : c.composition_entries()) {
    if (c.dst(f) != c.src(g))
      out.push_back("composition entry " + name(g) + " o " + name(f) + " is not composable");
    else if (c.src(gf) != c.src(f) || c.dst(gf) != c.dst(g))
      out.push_back("composite of " + name(g) + " o " + name(f) + " has wrong source or target");
  }
  for (std::size_t f = 0; f < c.morphism_count(); ++f)
    for (std::size_t g : c.out_morphisms(c.dst(f)))
      if (!c.composite(g, f))
        out.push_back("missing composition entry for " + name(g) + " o " + name(f));
  if (!out.empty()) return out;
  for (std::size_t f = 0; f < c.morphism_count(); ++f)
    for (std::size_t g : c.out_morphisms(c.dst(f)))
      for (std::size_t h : c.out_morphisms(c.dst(g)))
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          out.push_back("associativity fails on (" + name(h) + ", " + name(g) + ", " + name(f) +
                        ")");
  // x <= y iff Hom(x, y) nonempty must be antisymmetric.
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t m = 0; m < c.morphism_count(); ++m)
    if (c.src(m) != c.dst(m)) rel.emplace_back(c.src(m), c.dst(m));
  Poset reach(std::vector<PosetElement>(c.object_count()), rel);
  for (std::size_t x = 0; x < c.object_count(); ++x)
    for (std::size_t y = x + 1; y < c.object_count(); ++y)
      if (reach.less(x, y) && reach.less(y, x))
        out.push_back("acyclicity violated: objects " + std::to_string(x) + " and " +
                      std::to_string(y) + " have morphisms in both directions");
  return out;
}

namespace detail {
inline void require_valid(const AcyclicCategory& c, const char* op) {
  if (auto d = validate_category(c); !d.empty())
    throw Error(std::string(op) + ": invalid category: " + d.front());
}
}  // namespace detail

/// A poset viewed as a category: one morphism per strict comparison x < y.
inline AcyclicCategory poset_category(const Poset& p) {
  if (!validate_poset(p).empty()) throw Error("poset_category: invalid poset");
  AcyclicCategory c;
  for (std::size_t x = 0; x < p.size(); ++x) c.add_object(p.grade(x), p.label(x));
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y : p.strictly_above(x)) id[{x, y}] = c.add_morphism(x, y);
  for (auto [xy, f] : id)
    for (std::size_t z : p.strictly_above(xy.second))
      c.set_composite(id.at({xy.second, z}), f, id.at({xy.first, z}));
  return c;
}

/// x <= y iff Hom(x, y) is nonempty; grades and labels are copied.
inline Poset underlying_poset(const AcyclicCategory& c) {
  detail::require_valid(c, "underlying_poset");
  std::vector<PosetElement> elems;
  for (std::size_t x = 0; x < c.object_count(); ++x) elems.push_back({c.grade(x), c.object(x).label});
  std::set<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t m = 0; m < c.morphism_count(); ++m) rel.emplace(c.src(m), c.dst(m));
  return Poset::from_relation(std::move(elems), {rel.begin(), rel.end()});
}

/// Same objects and morphism ids with source and target exchanged.
inline AcyclicCategory opposite_category(const AcyclicCategory& c) {
  AcyclicCategory op;
  for (std::size_t x = 0; x < c.object_count(); ++x) op.add_object(c.grade(x), c.object(x).label);
  for (std::size_t m = 0; m < c.morphism_count(); ++m)
    op.add_morphism(c.dst(m), c.src(m), c.morphism(m).label);
  for (const auto& [g, f, gf] : c.composition_entries()) op.set_composite(f, g, gf);
  return op;
}

/// Full subcategory on `keep`; new object i corresponds to keep[i].
struct Subcategory {
  AcyclicCategory category;
  std::vector<std::size_t> objects;    // new object -> old object
  std::vector<std::size_t> morphisms;  // new morphism -> old morphism
};

inline Subcategory full_subcategory(const AcyclicCategory& c, const std::vector<std::size_t>& keep) {
  Subcategory s;
  std::vector<std::optional<std::size_t>> obj_map(c.object_count());
  for (std::size_t x : keep) {
    obj_map[x] = s.category.add_object(c.grade(x), c.object(x).label);
    s.objects.push_back(x);
  }
  std::vector<std::optional<std::size_t>> mor_map(c.morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m)
    if (obj_map[c.src(m)] && obj_map[c.dst(m)]) {
      mor_map[m] = s.category.add_morphism(*obj_map[c.src(m)], *obj_map[c.dst(m)],
                                           c.morphism(m).label);
      s.morphisms.push_back(m);
    }
  for (const auto& [g, f, gf] : c.composition_entries())
    if (mor_map[g] && mor_map[f]) s.category.set_composite(*mor_map[g], *mor_map[f], *mor_map[gf]);
  return s;
}

// ---------------------------------------------------------------------------
// Nerves
// ---------------------------------------------------------------------------

/// A nondegenerate chain: objects x_0 < ... < x_k joined by k non-identity
/// morphisms.
struct Chain {
  std::vector<std::size_t> objects;
  std::vector<std::size_t> morphisms;

  std::size_t length() const { return morphisms.size(); }
  std::size_t source() const { return objects.front(); }
  std::size_t target() const { return objects.back(); }
  bool operator==(const Chain&) const = default;
  auto operator<=>(const Chain& o) const {
    if (auto c = morphisms.size() <=> o.morphisms.size(); c != 0) return c;
    if (auto c = objects <=> o.objects; c != 0) return c;
    return morphisms <=> o.morphisms;
  }
};

struct Nerve {
  DeltaComplex complex;
  std::vector<std::vector<Chain>> chains;  // chains[k][i] is k-cell i
};

/// Nondegenerate nerve: k-cells are composable k-tuples of non-identity
/// morphisms. d_0 drops the first morphism, d_k the last, and inner faces
/// compose neighbours.
inline Nerve nondegenerate_nerve_with_chains(const AcyclicCategory& c) {
  detail::require_valid(c, "nondegenerate_nerve");
  Nerve out;
  out.chains.emplace_back();
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    out.chains[0].push_back({{x}, {}});
    out.complex.add_vertex();
  }
  // Outgoing lists sorted for a deterministic order.
  std::vector<std::vector<std::size_t>> outs(c.object_count());
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    outs[x] = c.out_morphisms(x);
    std::sort(outs[x].begin(), outs[x].end());
  }
  std::vector<std::unordered_map<std::vector<std::size_t>, std::size_t, detail::VectorHash>> index(1);
  std::vector<std::vector<std::size_t>> frontier;
  for (std::size_t m = 0; m < c.morphism_count(); ++m) frontier.push_back({m});
  std::vector<std::size_t> faces, key;
  for (std::size_t k = 1; !frontier.empty(); ++k) {
    std::sort(frontier.begin(), frontier.end());
    out.chains.emplace_back();
    index.emplace_back();
    index[k].reserve(frontier.size());
    std::vector<std::vector<std::size_t>> next;
    for (const auto& ms : frontier) {
      Chain ch;
      ch.morphisms = ms;
      ch.objects.push_back(c.src(ms[0]));
      for (std::size_t m : ms) ch.objects.push_back(c.dst(m));
      faces.clear();
      if (k == 1) {
        faces = {c.dst(ms[0]), c.src(ms[0])};
      } else {
        for (std::size_t i = 0; i <= k; ++i) {
          key.clear();
          if (i == 0) {
            key.assign(ms.begin() + 1, ms.end());
          } else if (i == k) {
            key.assign(ms.begin(), ms.end() - 1);
          } else {
            key.assign(ms.begin(), ms.begin() + (i - 1));
            key.push_back(c.compose(ms[i], ms[i - 1]));
            key.insert(key.end(), ms.begin() + i + 1, ms.end());
          }
          faces.push_back(index[k - 1].at(key));
        }
      }
      std::size_t id = out.complex.add_cell(k, faces);
      index[k].emplace(ms, id);
      out.chains[k].push_back(std::move(ch));
      for (std::size_t g : outs[c.dst(ms.back())]) {
        next.push_back(ms);
        next.back().push_back(g);
      }
    }
    frontier.swap(next);
  }
  return out;
}

inline DeltaComplex nondegenerate_nerve(const AcyclicCategory& c) {
  return nondegenerate_nerve_with_chains(c).complex;
}

/// True iff f = g o phi for an injective order map phi, i.e. f is an
/// iterated face of g. Objects along a chain are distinct, so phi is
/// forced by the objects of f.
inline bool factors_through(const AcyclicCategory& c, const Chain& f, const Chain& g) {
  if (f.length() > g.length()) return false;
  std::vector<std::size_t> pos;
  std::size_t from = 0;
  for (std::size_t y : f.objects) {
    auto it = std::find(g.objects.begin() + from, g.objects.end(), y);
    if (it == g.objects.end()) return false;
    pos.push_back(static_cast<std::size_t>(it - g.objects.begin()));
    from = pos.back() + 1;
  }
  for (std::size_t t = 0; t + 1 < pos.size(); ++t) {
    std::size_t m = g.morphisms[pos[t]];
    for (std::size_t s = pos[t] + 1; s < pos[t + 1]; ++s) m = c.compose(g.morphisms[s], m);
    if (m != f.morphisms[t]) return false;
  }
  return true;
}

/// Barycentric subdivision of a category: the poset of nondegenerate
/// chains, graded by length, ordered by factorization.
struct ChainPoset {
  Poset poset;
  std::vector<Chain> chains;  // poset element -> chain
};

inline ChainPoset sd_category_with_chains(const AcyclicCategory& c) {
  Nerve nerve = nondegenerate_nerve_with_chains(c);
  ChainPoset out;
  std::vector<PosetElement> elems;
  std::vector<std::size_t> offset;
  for (std::size_t k = 0; k < nerve.chains.size(); ++k) {
    offset.push_back(out.chains.size());
    for (const auto& ch : nerve.chains[k]) {
      std::string label;
      for (std::size_t i = 0; i < ch.objects.size(); ++i) {
        if (i) label += "<";
        label += c.object(ch.objects[i]).label.empty() ? std::to_string(ch.objects[i])
                                                       : c.object(ch.objects[i]).label;
      }
      elems.push_back({static_cast<int>(k), label});
      out.chains.push_back(ch);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t k = 1; k < nerve.chains.size(); ++k) {
    // Grade-(k-1) chains indexed by first object.
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_first;
    for (std::size_t i = 0; i < nerve.chains[k - 1].size(); ++i)
      by_first[nerve.chains[k - 1][i].source()].push_back(i);
    for (std::size_t j = 0; j < nerve.chains[k].size(); ++j) {
      const Chain& g = nerve.chains[k][j];
      for (std::size_t start : {g.objects[0], g.objects[1]}) {
        auto it = by_first.find(start);
        if (it == by_first.end()) continue;
        for (std::size_t i : it->second)
          if (factors_through(c, nerve.chains[k - 1][i], g))
            covers.emplace_back(offset[k - 1] + i, offset[k] + j);
      }
    }
  }
  out.poset = Poset(std::move(elems), std::move(covers));
  return out;
}

inline Poset sd_category(const AcyclicCategory& c) { return sd_category_with_chains(c).poset; }

// ---------------------------------------------------------------------------
// Stars and links
// ---------------------------------------------------------------------------

/// The comma category x|C (under) or C|x (over). Object 0 is the identity
/// of x when it is included; the remaining objects are the non-identity
/// morphisms out of (resp. into) x.
struct CommaCategory {
  AcyclicCategory category;
  std::vector<Arrow> arrows;  // comma object -> arrow of C
};

inline CommaCategory comma_category(const AcyclicCategory& c, std::size_t x, bool under,
                                    bool with_identity) {
  if (x >= c.object_count()) throw Error("star/link: unknown object " + std::to_string(x));
  detail::require_valid(c, "star/link");
  CommaCategory out;
  std::unordered_map<std::size_t, std::size_t> of_morphism;  // C morphism -> comma object
  if (with_identity) {
    out.arrows.push_back(Arrow::ident(x));
    out.category.add_object(c.grade(x), c.object(x).label);
  }
  const auto& base = under ? c.out_morphisms(x) : c.in_morphisms(x);
  for (std::size_t u : base) {
    std::size_t other = under ? c.dst(u) : c.src(u);
    of_morphism[u] = out.category.add_object(c.grade(other), c.object(other).label);
    out.arrows.push_back(Arrow::of(u));
  }
  auto object_of = [&](Arrow a) -> std::optional<std::size_t> {
    if (a.identity) return with_identity ? std::optional<std::size_t>(0) : std::nullopt;
    return of_morphism.at(a.id);
  };
  // Comma morphism key: (comma source object, underlying C morphism).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  for (std::size_t o = 0; o < out.arrows.size(); ++o) {
    Arrow u = out.arrows[o];
    if (under) {
      std::size_t y = arrow_dst(c, u);
      for (std::size_t v : c.out_morphisms(y)) {
        auto t = object_of(compose_arrows(c, Arrow::of(v), u));
        ids[{o, v}] = out.category.add_morphism(o, *t, c.morphism(v).label);
      }
    } else {
      std::size_t y = arrow_src(c, u);
      for (std::size_t v : c.in_morphisms(y)) {
        auto s = object_of(compose_arrows(c, u, Arrow::of(v)));
        ids[{*s, v}] = out.category.add_morphism(*s, o, c.morphism(v).label);
      }
    }
  }
  std::vector<std::size_t> underlying(out.category.morphism_count());
  for (const auto& [key, f] : ids) underlying[f] = key.second;
  for (std::size_t f = 0; f < out.category.morphism_count(); ++f)
    for (std::size_t g : out.category.out_morphisms(out.category.dst(f))) {
      std::size_t v1 = underlying[f], v2 = underlying[g];
      out.category.set_composite(g, f, ids.at({out.category.src(f), c.compose(v2, v1)}));
    }
  return out;
}

inline DeltaComplex upper_star(const AcyclicCategory& c, std::size_t x) {
  return nondegenerate_nerve(comma_category(c, x, true, true).category);
}
inline DeltaComplex upper_link(const AcyclicCategory& c, std::size_t x) {
  return nondegenerate_nerve(comma_category(c, x, true, false).category);
}
inline DeltaComplex lower_star(const AcyclicCategory& c, std::size_t x) {
  return nondegenerate_nerve(comma_category(c, x, false, true).category);
}
inline DeltaComplex lower_link(const AcyclicCategory& c, std::size_t x) {
  return nondegenerate_nerve(comma_category(c, x, false, false).category);
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Objects (x, y) with id x * d.object_count() + y; morphisms are pairs of
/// arrows, not both identities, composed componentwise. Grades add.
inline AcyclicCategory product_category(const AcyclicCategory& c, const AcyclicCategory& d) {
  detail::require_valid(c, "product_category");
  detail::require_valid(d, "product_category");
  AcyclicCategory p;
  std::size_t nd = d.object_count();
  for (std::size_t x = 0; x < c.object_count(); ++x)
    for (std::size_t y = 0; y < nd; ++y) {
      std::optional<int> g;
      if (c.grade(x) && d.grade(y)) g = *c.grade(x) + *d.grade(y);
      p.add_object(g, "(" + c.object(x).label + "," + d.object(y).label + ")");
    }
  auto code_c = [&](Arrow a) { return a.identity ? c.morphism_count() + a.id : a.id; };
  auto code_d = [&](Arrow a) { return a.identity ? d.morphism_count() + a.id : a.id; };
  std::unordered_map<std::uint64_t, std::size_t> ids;
  std::vector<std::pair<Arrow, Arrow>> parts;
  auto all_arrows = [](const AcyclicCategory& k) {
    std::vector<Arrow> v;
    for (std::size_t m = 0; m < k.morphism_count(); ++m) v.push_back(Arrow::of(m));
    for (std::size_t x = 0; x < k.object_count(); ++x) v.push_back(Arrow::ident(x));
    return v;
  };
  for (Arrow a : all_arrows(c))
    for (Arrow b : all_arrows(d)) {
      if (a.identity && b.identity) continue;
      std::size_t s = arrow_src(c, a) * nd + arrow_src(d, b);
      std::size_t t = arrow_dst(c, a) * nd + arrow_dst(d, b);
      auto lab = [](const AcyclicCategory& k, Arrow e) {
        return e.identity ? std::string("1") : k.morphism(e.id).label;
      };
      ids[detail::pair_key(code_c(a), code_d(b))] =
          p.add_morphism(s, t, "(" + lab(c, a) + "," + lab(d, b) + ")");
      parts.emplace_back(a, b);
    }
  for (std::size_t f = 0; f < parts.size(); ++f)
    for (std::size_t g : p.out_morphisms(p.dst(f))) {
      Arrow a = compose_arrows(c, parts[g].first, parts[f].first);
      Arrow b = compose_arrows(d, parts[g].second, parts[f].second);
      p.set_composite(g, f, ids.at(detail::pair_key(code_c(a), code_d(b))));
    }
  return p;
}

// ---------------------------------------------------------------------------
// Grothendieck construction
// ---------------------------------------------------------------------------

/// A poset-valued diagram on a category: a poset per object and, per
/// non-identity morphism u: x -> y, a map on elements F(x) -> F(y).
struct PosetDiagram {
  std::vector<Poset> fibers;
  std::vector<std::vector<std::size_t>> maps;
};

/// Checks shapes, monotonicity and lax functoriality
/// F(v o u)(a) <= F(v)(F(u)(a)). With `strict`, equality is required.
inline Diagnostics validate_diagram(const AcyclicCategory& c, const PosetDiagram& f,
                                    bool strict = false) {
  Diagnostics out;
  if (f.fibers.size() != c.object_count()) {
    out.push_back("diagram needs one fiber per object");
    return out;
  }
  if (f.maps.size() != c.morphism_count()) {
    out.push_back("diagram needs one map per non-identity morphism");
    return out;
  }
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const Poset& from = f.fibers[c.src(m)];
    const Poset& to = f.fibers[c.dst(m)];
    if (f.maps[m].size() != from.size()) {
      out.push_back("map of morphism " + std::to_string(m) + " has the wrong domain size");
      continue;
    }
    for (std::size_t a = 0; a < from.size(); ++a) {
      if (f.maps[m][a] >= to.size()) {
        out.push_back("map of morphism " + std::to_string(m) + " leaves its target fiber");
        continue;
      }
      for (std::size_t b : from.up_covers(a))
        if (b < f.maps[m].size() && f.maps[m][b] < to.size() && !to.leq(f.maps[m][a], f.maps[m][b]))
          out.push_back("map of morphism " + std::to_string(m) + " is not monotone on cover (" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
    }
  }
  if (!out.empty()) return out;
  for (const auto& [v, u, vu] : c.composition_entries()) {
    const Poset& target = f.fibers[c.dst(v)];
    for (std::size_t a = 0; a < f.fibers[c.src(u)].size(); ++a) {
      std::size_t direct = f.maps[vu][a];
      std::size_t stepwise = f.maps[v][f.maps[u][a]];
      bool ok = strict ? direct == stepwise : target.leq(direct, stepwise);
      if (!ok) {
        out.push_back("diagram is not functorial on " + std::to_string(v) + " o " +
                      std::to_string(u) + " at element " + std::to_string(a));
        break;
      }
    }
  }
  return out;
}

/// Grothendieck construction of a poset-valued diagram.
struct GrothendieckResult {
  AcyclicCategory category;
  std::vector<std::pair<std::size_t, std::size_t>> objects;  // (object of c, fiber element)
  std::vector<Arrow> over;                                    // morphism -> underlying arrow
};

/// Objects are pairs (x, a) with a in F(x); there is one morphism
/// (x, a) -> (y, b) for each arrow u: x -> y with F(u)(a) <= b (strictly
/// a < b for identities). The object grade is the fiber grade.
inline GrothendieckResult grothendieck_with_map(const AcyclicCategory& c, const PosetDiagram& f) {
  detail::require_valid(c, "grothendieck");
  if (auto d = validate_diagram(c, f); !d.empty()) throw Error("grothendieck: " + d.front());
  GrothendieckResult out;
  std::vector<std::size_t> base(c.object_count());
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    base[x] = out.objects.size();
    for (std::size_t a = 0; a < f.fibers[x].size(); ++a) {
      std::string lab = c.object(x).label + "/" +
                        (f.fibers[x].label(a).empty() ? std::to_string(a) : f.fibers[x].label(a));
      out.category.add_object(f.fibers[x].grade(a), lab);
      out.objects.emplace_back(x, a);
    }
  }
  // Key: (underlying arrow code, source object, target object).
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> ids;
  auto code = [&](Arrow u) { return u.identity ? c.morphism_count() + u.id : u.id; };
  auto add = [&](Arrow u, std::size_t s, std::size_t t) {
    ids[{code(u), s, t}] = out.category.add_morphism(s, t);
    out.over.push_back(u);
  };
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    const Poset& fx = f.fibers[x];
    for (std::size_t a = 0; a < fx.size(); ++a)
      for (std::size_t b : fx.strictly_above(a)) add(Arrow::ident(x), base[x] + a, base[x] + b);
  }
  for (std::size_t u = 0; u < c.morphism_count(); ++u) {
    std::size_t x = c.src(u), y = c.dst(u);
    const Poset& fy = f.fibers[y];
    for (std::size_t a = 0; a < f.fibers[x].size(); ++a)
      for (std::size_t b = 0; b < fy.size(); ++b)
        if (fy.leq(f.maps[u][a], b)) add(Arrow::of(u), base[x] + a, base[y] + b);
  }
  for (std::size_t m1 = 0; m1 < out.category.morphism_count(); ++m1)
    for (std::size_t m2 : out.category.out_morphisms(out.category.dst(m1))) {
      Arrow u = compose_arrows(c, out.over[m2], out.over[m1]);
      out.category.set_composite(
          m2, m1, ids.at({code(u), out.category.src(m1), out.category.dst(m2)}));
    }
  return out;
}

inline AcyclicCategory grothendieck(const AcyclicCategory& c, const PosetDiagram& f) {
  return grothendieck_with_map(c, f).category;
}

// ---------------------------------------------------------------------------
// Group actions and orbit categories
// ---------------------------------------------------------------------------

struct CategoryAutomorphism {
  std::vector<std::size_t> on_objects;
  std::vector<std::size_t> on_morphisms;

  bool operator==(const CategoryAutomorphism&) const = default;
};

/// A finite group given by generators acting on a category.
struct GroupActionOnCategory {
  std::vector<CategoryAutomorphism> generators;
};

inline Diagnostics validate_action(const AcyclicCategory& c, const GroupActionOnCategory& g) {
  Diagnostics out;
  auto is_perm = [](const std::vector<std::size_t>& p, std::size_t n) {
    if (p.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (std::size_t v : p) {
      if (v >= n || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  };
  for (std::size_t i = 0; i < g.generators.size(); ++i) {
    const auto& a = g.generators[i];
    std::string gen = "generator " + std::to_string(i);
    if (!is_perm(a.on_objects, c.object_count()) || !is_perm(a.on_morphisms, c.morphism_count())) {
      out.push_back(gen + " is not a bijection");
      continue;
    }
    for (std::size_t m = 0; m < c.morphism_count(); ++m) {
      std::size_t am = a.on_morphisms[m];
      if (c.src(am) != a.on_objects[c.src(m)] || c.dst(am) != a.on_objects[c.dst(m)]) {
        out.push_back(gen + " does not commute with source/target on morphism " +
                      std::to_string(m));
        break;
      }
    }
    for (const auto& [v, u, vu] : c.composition_entries())
      if (c.composite(a.on_morphisms[v], a.on_morphisms[u]) != a.on_morphisms[vu]) {
        out.push_back(gen + " does not preserve composition");
        break;
      }
  }
  return out;
}

/// All group elements generated by the action (identity first).
inline std::vector<CategoryAutomorphism> group_elements(const AcyclicCategory& c,
                                                        const GroupActionOnCategory& g,
                                                        std::size_t limit = 100000) {
  CategoryAutomorphism id;
  for (std::size_t x = 0; x < c.object_count(); ++x) id.on_objects.push_back(x);
  for (std::size_t m = 0; m < c.morphism_count(); ++m) id.on_morphisms.push_back(m);
  std::vector<CategoryAutomorphism> elems{id};
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen{
      {id.on_objects, id.on_morphisms}};
  for (std::size_t h = 0; h < elems.size(); ++h)
    for (const auto& gen : g.generators) {
      CategoryAutomorphism p;
      p.on_objects.resize(c.object_count());
      p.on_morphisms.resize(c.morphism_count());
      for (std::size_t x = 0; x < c.object_count(); ++x)
        p.on_objects[x] = gen.on_objects[elems[h].on_objects[x]];
      for (std::size_t m = 0; m < c.morphism_count(); ++m)
        p.on_morphisms[m] = gen.on_morphisms[elems[h].on_morphisms[m]];
      if (seen.insert({p.on_objects, p.on_morphisms}).second) {
        elems.push_back(std::move(p));
        if (elems.size() > limit) throw Error("group_elements: group too large");
      }
    }
  return elems;
}

struct OrbitCategory {
  AcyclicCategory category;
  std::vector<std::size_t> object_orbit;    // object of c -> quotient object
  std::vector<std::size_t> morphism_orbit;  // morphism of c -> quotient morphism
  std::size_t group_order = 1;
};

/// Orbit category of a free action. Rejects actions that fix an object and
/// categories with a non-identity morphism that does not raise the grade.
inline OrbitCategory quotient_by_free_action_with_map(const AcyclicCategory& c,
                                                      const GroupActionOnCategory& g) {
  detail::require_valid(c, "quotient_by_free_action");
  if (auto d = validate_action(c, g); !d.empty())
    throw Error("quotient_by_free_action: " + d.front());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    auto gs = c.grade(c.src(m)), gd = c.grade(c.dst(m));
    if (!gs || !gd || *gs >= *gd)
      throw Error("quotient_by_free_action: morphism " + std::to_string(m) +
                  " does not strictly raise the grade");
  }
  auto elems = group_elements(c, g);
  for (std::size_t e = 1; e < elems.size(); ++e)
    for (std::size_t x = 0; x < c.object_count(); ++x)
      if (elems[e].on_objects[x] == x)
        throw Error("quotient_by_free_action: action is not free, object " + std::to_string(x) +
                    " is fixed by a non-identity element");
  OrbitCategory out;
  out.group_order = elems.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  out.object_orbit.assign(c.object_count(), unset);
  out.morphism_orbit.assign(c.morphism_count(), unset);
  std::vector<std::size_t> rep_object, rep_morphism;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    if (out.object_orbit[x] != unset) continue;
    std::size_t id = out.category.add_object(c.grade(x), c.object(x).label);
    rep_object.push_back(x);
    for (const auto& e : elems) out.object_orbit[e.on_objects[x]] = id;
  }
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    if (out.morphism_orbit[m] != unset) continue;
    std::size_t id = out.category.add_morphism(out.object_orbit[c.src(m)],
                                               out.object_orbit[c.dst(m)], c.morphism(m).label);
    rep_morphism.push_back(m);
    for (const auto& e : elems) out.morphism_orbit[e.on_morphisms[m]] = id;
  }
  // Orbit members per quotient morphism, to find the lift starting at a
  // given object (unique by freeness).
  std::vector<std::vector<std::size_t>> members(rep_morphism.size());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) members[out.morphism_orbit[m]].push_back(m);
  for (std::size_t f = 0; f < rep_morphism.size(); ++f) {
    std::size_t lift_f = rep_morphism[f];
    for (std::size_t gq : out.category.out_morphisms(out.category.dst(f))) {
      for (std::size_t lift_g : members[gq])
        if (c.src(lift_g) == c.dst(lift_f)) {
          out.category.set_composite(gq, f, out.morphism_orbit[c.compose(lift_g, lift_f)]);
          break;
        }
    }
  }
  return out;
}

inline AcyclicCategory quotient_by_free_action(const AcyclicCategory& c,
                                               const GroupActionOnCategory& g) {
  return quotient_by_free_action_with_map(c, g).category;
}

}  // namespace stratakit
