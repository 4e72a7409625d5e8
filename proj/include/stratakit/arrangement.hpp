#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "stratakit/category.hpp"
#include "stratakit/css.hpp"
#include "stratakit/poset.hpp"
#include "stratakit/rational_lp.hpp"

namespace stratakit {

/// Affine form x -> a.x + b.
struct Hyperplane {
  RationalVector a;
  Rational b = 0;
};

struct Arrangement {
  std::size_t n = 0;
  std::vector<Hyperplane> hyperplanes;
};

inline Diagnostics validate_arrangement(const Arrangement& arr) {
  Diagnostics out;
  for (std::size_t i = 0; i < arr.hyperplanes.size(); ++i) {
    const auto& h = arr.hyperplanes[i];
    if (h.a.size() != arr.n) {
      out.push_back("hyperplane " + std::to_string(i) + " has " + std::to_string(h.a.size()) +
                    " coefficients, expected " + std::to_string(arr.n));
      continue;
    }
    if (std::all_of(h.a.begin(), h.a.end(), [](const Rational& v) { return v == 0; }))
      out.push_back("hyperplane " + std::to_string(i) + " has a zero linear part");
  }
  if (!out.empty()) return out;
  // Duplicates up to positive scaling: compare normalized forms.
  auto normalized = [](const Hyperplane& h) {
    Rational lead = 0;
    for (const auto& v : h.a)
      if (v != 0) {
        lead = abs(v);
        break;
      }
    std::vector<Rational> key;
    for (const auto& v : h.a) key.push_back(v / lead);
    key.push_back(h.b / lead);
    return key;
  };
  std::map<std::vector<Rational>, std::size_t> seen;
  for (std::size_t i = 0; i < arr.hyperplanes.size(); ++i) {
    auto [it, fresh] = seen.emplace(normalized(arr.hyperplanes[i]), i);
    if (!fresh)
      out.push_back("hyperplane " + std::to_string(i) + " duplicates hyperplane " +
                    std::to_string(it->second) + " up to positive scaling");
  }
  return out;
}

/// Sign vector over S_l: 0, or +-m for +-e_m (1 <= m <= l).
using SignVector = std::vector<int>;

/// 0 < +-e_1 < ... < +-e_l, with +e_j and -e_j incomparable.
inline bool sign_leq(int s, int t) { return s == 0 || s == t || std::abs(s) < std::abs(t); }

inline bool sign_vector_leq(const SignVector& s, const SignVector& t) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!sign_leq(s[i], t[i])) return false;
  return true;
}

inline std::string sign_vector_string(const SignVector& s) {
  std::string out;
  for (int v : s) {
    if (!out.empty()) out += ",";
    if (v == 0) {
      out += "0";
      continue;
    }
    out += v > 0 ? "+" : "-";
    out += "e" + std::to_string(std::abs(v));
  }
  return "(" + out + ")";
}

/// Realizable sign vectors with their stratum dimensions, ordered
/// lexicographically; poset element i is signs[i], graded by dims[i].
struct SignVectorPoset {
  Poset poset;
  std::vector<SignVector> signs;
  std::vector<int> dims;
  std::vector<RationalVector> witnesses;  // level-1 only: a point of each face
};

namespace detail {

inline Arrangement central_part(const Arrangement& arr) {
  Arrangement c = arr;
  for (auto& h : c.hyperplanes) h.b = 0;
  return c;
}

inline std::size_t rational_rank(RationalMatrix m) {
  std::size_t rank = 0, cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline StrictSystem sign_system(const Arrangement& arr, const SignVector& prefix) {
  StrictSystem s;
  s.variables = arr.n;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const auto& h = arr.hyperplanes[i];
    if (prefix[i] == 0) {
      s.eq_a.push_back(h.a);
      s.eq_b.push_back(-h.b);
    } else if (prefix[i] > 0) {
      s.gt_a.push_back(h.a);
      s.gt_b.push_back(-h.b);
    } else {
      RationalVector neg = h.a;
      for (auto& v : neg) v = -v;
      s.gt_a.push_back(std::move(neg));
      s.gt_b.push_back(h.b);
    }
  }
  return s;
}

inline Poset sign_poset(const std::vector<SignVector>& signs, const std::vector<int>& dims) {
  std::vector<PosetElement> elems;
  for (std::size_t i = 0; i < signs.size(); ++i) elems.push_back({dims[i], sign_vector_string(signs[i])});
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < signs.size(); ++i)
    for (std::size_t j = 0; j < signs.size(); ++j)
      if (i != j && sign_vector_leq(signs[i], signs[j])) rel.emplace_back(i, j);
  return Poset::from_relation(std::move(elems), rel);
}

// Parallel affine hyperplanes share linear parts, so the central part of a
// valid arrangement may repeat forms; this skips validation.
inline SignVectorPoset enumerate_faces(const Arrangement& arr) {
  std::size_t k = arr.hyperplanes.size();
  std::vector<SignVector> frontier{SignVector{}};
  std::vector<RationalVector> points{RationalVector(arr.n, 0)};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<SignVector> cand;
    for (const auto& p : frontier)
      for (int s : {-1, 0, 1}) {
        cand.push_back(p);
        cand.back().push_back(s);
      }
    std::vector<FeasibilityResult> res(cand.size());
    auto work = [&](std::size_t from, std::size_t step) {
      for (std::size_t c = from; c < cand.size(); c += step) res[c] = solve_strict(detail::sign_system(arr, cand[c]));
    };
    unsigned threads = std::min<std::size_t>(thread_budget(), cand.size());
    if (threads > 1) {
      std::vector<std::future<void>> jobs;
      for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t, threads));
      for (auto& j : jobs) j.get();
    } else {
      work(0, 1);
    }
    frontier.clear();
    points.clear();
    for (std::size_t c = 0; c < cand.size(); ++c)
      if (res[c].feasible) {
        frontier.push_back(std::move(cand[c]));
        points.push_back(std::move(res[c].point));
      }
  }
  SignVectorPoset out;
  for (std::size_t f = 0; f < frontier.size(); ++f) {
    RationalMatrix eq;
    for (std::size_t i = 0; i < k; ++i)
      if (frontier[f][i] == 0) eq.push_back(arr.hyperplanes[i].a);
    out.dims.push_back(static_cast<int>(arr.n - detail::rational_rank(eq)));
    out.signs.push_back(frontier[f]);
    out.witnesses.push_back(points[f]);
  }
  out.poset = detail::sign_poset(out.signs, out.dims);
  return out;
}

}  // namespace detail

/// Faces of the arrangement: every realizable sign vector in {-,0,+}^k.
/// Prefixes are extended one hyperplane at a time and each extension is
/// decided by exact rational feasibility; checks within a round are spread
/// over thread_budget() workers.
inline SignVectorPoset faces_level1(const Arrangement& arr) {
  if (auto d = validate_arrangement(arr); !d.empty()) throw Error("faces_level1: " + d.front());
  return detail::enumerate_faces(arr);
}

/// Strata of the arrangement tensored with R^l. A point (x_1, ..., x_l)
/// determines a level-1 face of the affine arrangement for x_1 and faces of
/// the central arrangement for x_2..x_l; its sign vector records, per form,
/// the sign and position of the last nonzero level. A stratum is the union
/// of the matching products of faces, and its dimension is the largest
/// dimension among them.
inline SignVectorPoset faces_higher(const Arrangement& arr, int level) {
  if (level < 1) throw Error("faces_higher: order must be at least 1");
  SignVectorPoset affine = faces_level1(arr);
  if (level == 1) return affine;
  SignVectorPoset central = detail::enumerate_faces(detail::central_part(arr));
  std::size_t k = arr.hyperplanes.size();
  std::map<SignVector, int> strata;
  SignVector combined(k);
  auto rec = [&](auto&& self, int lvl, const SignVector& acc, int dim) -> void {
    if (lvl > level) {
      auto [it, fresh] = strata.emplace(acc, dim);
      if (!fresh) it->second = std::max(it->second, dim);
      return;
    }
    const SignVectorPoset& faces = lvl == 1 ? affine : central;
    for (std::size_t f = 0; f < faces.signs.size(); ++f) {
      SignVector next = acc;
      for (std::size_t i = 0; i < k; ++i)
        if (faces.signs[f][i] != 0) next[i] = faces.signs[f][i] * lvl;
      self(self, lvl + 1, next, dim + faces.dims[f]);
    }
  };
  rec(rec, 1, SignVector(k, 0), 0);
  SignVectorPoset out;
  for (auto& [s, d] : strata) {
    out.signs.push_back(s);
    out.dims.push_back(d);
  }
  out.poset = detail::sign_poset(out.signs, out.dims);
  return out;
}

/// Strata off every hyperplane (all entries nonzero).
inline SignVectorPoset complement_poset(const Arrangement& arr, int level) {
  SignVectorPoset all = faces_higher(arr, level);
  SignVectorPoset out;
  for (std::size_t i = 0; i < all.signs.size(); ++i)
    if (std::none_of(all.signs[i].begin(), all.signs[i].end(), [](int v) { return v == 0; })) {
      out.signs.push_back(all.signs[i]);
      out.dims.push_back(all.dims[i]);
    }
  out.poset = detail::sign_poset(out.signs, out.dims);
  return out;
}

/// Order complex of the complement strata.
inline DeltaComplex higher_salvetti(const Arrangement& arr, int level) {
  return order_complex(complement_poset(arr, level).poset);
}

/// Dual of the complement stratification: the opposite of the complement
/// poset as a regular cell complex, open strata as vertices, grade = height
/// in the opposite order. All cells are closed.
inline CombinatorialCSS salvetti_cellular(const Arrangement& arr, int level) {
  SignVectorPoset comp = complement_poset(arr, level);
  const Poset& p = comp.poset;
  std::vector<int> height(p.size(), -1);
  auto h = [&](auto&& self, std::size_t x) -> int {
    if (height[x] < 0) {
      height[x] = 0;
      for (std::size_t y : p.up_covers(x)) height[x] = std::max(height[x], self(self, y) + 1);
    }
    return height[x];
  };
  for (std::size_t x = 0; x < p.size(); ++x) h(h, x);
  std::vector<PosetElement> elems;
  for (std::size_t x = 0; x < p.size(); ++x) elems.push_back({height[x], p.label(x)});
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (auto [lo, hi] : p.covers()) covers.emplace_back(hi, lo);
  Poset graded(std::move(elems), std::move(covers));
  return make_css(poset_category(graded));
}

/// Strata of the symmetric subdivision: independent level-1 faces per
/// level (affine at level 1, central above), product order, summed
/// dimensions. `faces[i]` lists the level-1 face index per level.
struct SymmetricSubdivision {
  SignVectorPoset strata;                        // signs flattened level-major
  std::vector<std::vector<std::size_t>> faces;  // per stratum, face index per level
  std::vector<std::size_t> collapse;            // stratum -> element of faces_higher
  SignVectorPoset higher;
  std::size_t levels = 1;
  std::size_t hyperplanes = 0;
};

inline SignVector collapse_sign(const SignVector& flat, std::size_t k, std::size_t levels) {
  SignVector out(k, 0);
  for (std::size_t lvl = 0; lvl < levels; ++lvl)
    for (std::size_t i = 0; i < k; ++i)
      if (flat[lvl * k + i] != 0) out[i] = flat[lvl * k + i] * static_cast<int>(lvl + 1);
  return out;
}

inline SymmetricSubdivision symmetric_subdivision(const Arrangement& arr, int level) {
  if (level < 1) throw Error("symmetric_subdivision: order must be at least 1");
  SignVectorPoset affine = faces_level1(arr);
  SignVectorPoset central = level > 1 ? detail::enumerate_faces(detail::central_part(arr)) : affine;
  SymmetricSubdivision out;
  out.levels = static_cast<std::size_t>(level);
  out.hyperplanes = arr.hyperplanes.size();
  std::size_t k = out.hyperplanes;
  std::vector<std::size_t> cur;
  std::vector<std::pair<SignVector, std::pair<int, std::vector<std::size_t>>>> items;
  auto rec = [&](auto&& self, std::size_t lvl) -> void {
    if (lvl == out.levels) {
      SignVector flat;
      int dim = 0;
      for (std::size_t l = 0; l < out.levels; ++l) {
        const SignVectorPoset& f = l == 0 ? affine : central;
        flat.insert(flat.end(), f.signs[cur[l]].begin(), f.signs[cur[l]].end());
        dim += f.dims[cur[l]];
      }
      items.push_back({flat, {dim, cur}});
      return;
    }
    const SignVectorPoset& f = lvl == 0 ? affine : central;
    for (std::size_t i = 0; i < f.signs.size(); ++i) {
      cur.push_back(i);
      self(self, lvl + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(items.begin(), items.end());
  std::vector<PosetElement> elems;
  for (auto& [flat, rest] : items) {
    out.strata.signs.push_back(flat);
    out.strata.dims.push_back(rest.first);
    out.faces.push_back(rest.second);
    std::string label;
    for (std::size_t l = 0; l < out.levels; ++l)
      label += sign_vector_string(SignVector(flat.begin() + l * k, flat.begin() + (l + 1) * k));
    elems.push_back({rest.first, label});
  }
  // Product order: covers change one level along a cover of that level.
  std::unordered_map<std::vector<std::size_t>, std::size_t, detail::VectorHash> index_of;
  for (std::size_t i = 0; i < out.faces.size(); ++i) index_of.emplace(out.faces[i], i);
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t i = 0; i < out.faces.size(); ++i)
    for (std::size_t l = 0; l < out.levels; ++l) {
      const Poset& p = (l == 0 ? affine : central).poset;
      std::vector<std::size_t> up = out.faces[i];
      for (std::size_t g : p.up_covers(out.faces[i][l])) {
        up[l] = g;
        covers.emplace_back(i, index_of.at(up));
      }
    }
  out.strata.poset = Poset(std::move(elems), std::move(covers));
  out.higher = faces_higher(arr, level);
  std::map<SignVector, std::size_t> index;
  for (std::size_t i = 0; i < out.higher.signs.size(); ++i) index[out.higher.signs[i]] = i;
  for (const auto& flat : out.strata.signs) out.collapse.push_back(index.at(collapse_sign(flat, k, out.levels)));
  return out;
}

/// Permutes the central levels 2..l of a symmetric-subdivision stratum;
/// perm is a permutation of {0, ..., l-2}.
inline std::size_t permute_central_levels(const SymmetricSubdivision& s, std::size_t stratum,
                                          const std::vector<std::size_t>& perm) {
  if (perm.size() + 1 != s.levels) throw Error("permute_central_levels: wrong permutation size");
  std::vector<std::size_t> f = s.faces[stratum];
  std::vector<std::size_t> g = f;
  for (std::size_t i = 0; i < perm.size(); ++i) g[1 + perm[i]] = f[1 + i];
  for (std::size_t t = 0; t < s.faces.size(); ++t)
    if (s.faces[t] == g) return t;
  throw Error("permute_central_levels: image stratum not found");
}

/// Compactly supported Euler characteristic of a stratification: the sum
/// of (-1)^dim over strata.
inline long long signed_stratum_count(const SignVectorPoset& p) {
  long long chi = 0;
  for (int d : p.dims) chi += d % 2 == 0 ? 1 : -1;
  return chi;
}

/// Sampling check of the closure order: for every cover sigma < tau of the
/// level-l strata, points moving from a witness of sigma towards a witness
/// of tau must land in tau for all small steps. Reports failing covers.
inline Diagnostics sample_closure_order(const Arrangement& arr, int level) {
  Diagnostics out;
  SignVectorPoset affine = faces_level1(arr);
  SignVectorPoset central = detail::enumerate_faces(detail::central_part(arr));
  SignVectorPoset higher = faces_higher(arr, level);
  std::size_t k = arr.hyperplanes.size();
  // Witnesses per stratum: one point per product of level-1 faces.
  std::map<SignVector, std::vector<std::vector<RationalVector>>> witness;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, int lvl, const SignVector& acc) -> void {
    if (lvl > level) {
      std::vector<RationalVector> pts;
      for (int l = 0; l < level; ++l) pts.push_back((l == 0 ? affine : central).witnesses[cur[l]]);
      witness[acc].push_back(std::move(pts));
      return;
    }
    const SignVectorPoset& faces = lvl == 1 ? affine : central;
    for (std::size_t f = 0; f < faces.signs.size(); ++f) {
      SignVector next = acc;
      for (std::size_t i = 0; i < k; ++i)
        if (faces.signs[f][i] != 0) next[i] = faces.signs[f][i] * lvl;
      cur.push_back(f);
      self(self, lvl + 1, next);
      cur.pop_back();
    }
  };
  rec(rec, 1, SignVector(k, 0));
  auto sign_at = [&](const std::vector<RationalVector>& pts) {
    SignVector s(k, 0);
    for (int l = 0; l < level; ++l)
      for (std::size_t i = 0; i < k; ++i) {
        Rational v = l == 0 ? arr.hyperplanes[i].b : Rational(0);
        for (std::size_t j = 0; j < arr.n; ++j) v += arr.hyperplanes[i].a[j] * pts[l][j];
        if (v != 0) s[i] = (v > 0 ? 1 : -1) * (l + 1);
      }
    return s;
  };
  for (auto [lo, hi] : higher.poset.covers()) {
    auto segment_ok = [&](const std::vector<RationalVector>& p, const std::vector<RationalVector>& q) {
      Rational eps(1, 2);
      for (int step = 0; step < 12; ++step, eps /= 4) {
        std::vector<RationalVector> pts(p);
        for (int l = 0; l < level; ++l)
          for (std::size_t j = 0; j < arr.n; ++j) pts[l][j] += eps * (q[l][j] - p[l][j]);
        if (sign_at(pts) != higher.signs[hi]) return false;
      }
      return true;
    };
    bool ok = false;
    for (const auto& p : witness.at(higher.signs[lo]))
      for (const auto& q : witness.at(higher.signs[hi]))
        if (!ok && segment_ok(p, q)) ok = true;
    if (!ok)
      out.push_back("cover " + sign_vector_string(higher.signs[lo]) + " < " +
                    sign_vector_string(higher.signs[hi]) + " not confirmed by sampling");
  }
  return out;
}

/// The braid arrangement x_i = x_j (i < j) in R^n.
inline Arrangement braid_arrangement(std::size_t n) {
  Arrangement a;
  a.n = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Hyperplane h;
      h.a.assign(n, 0);
      h.a[i] = 1;
      h.a[j] = -1;
      a.hyperplanes.push_back(h);
    }
  return a;
}

}  // namespace stratakit
