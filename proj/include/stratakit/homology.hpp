#pragma once

#include <algorithm>
#include <climits>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratakit/common.hpp"
#include "stratakit/delta_complex.hpp"

namespace stratakit {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix stored by columns; each column is sorted by row.
struct IntegerMatrix {
  using Column = std::vector<std::pair<std::size_t, long long>>;

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Column> columns;

  IntegerMatrix() = default;
  IntegerMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  long long at(std::size_t r, std::size_t c) const {
    const auto& col = columns[c];
    auto it = std::lower_bound(col.begin(), col.end(), std::make_pair(r, LLONG_MIN));
    return (it != col.end() && it->first == r) ? it->second : 0;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
  }
};

/// boundaries[n] maps n-chains to (n-1)-chains; boundaries[0] has zero rows.
struct ChainComplex {
  std::vector<std::size_t> ranks;
  std::vector<IntegerMatrix> boundaries;

  std::size_t top() const { return ranks.size(); }
};

struct HomologyResult {
  std::vector<std::size_t> betti;
  std::vector<std::vector<BigInt>> torsion;

  long long euler_characteristic() const {
    long long chi = 0;
    for (std::size_t n = 0; n < betti.size(); ++n)
      chi += (n % 2 == 0 ? 1 : -1) * static_cast<long long>(betti[n]);
    return chi;
  }

  /// Betti numbers with trailing zero dimensions removed.
  std::vector<std::size_t> trimmed_betti() const {
    std::vector<std::size_t> b = betti;
    while (!b.empty() && b.back() == 0) b.pop_back();
    return b;
  }

  bool has_torsion() const {
    return std::any_of(torsion.begin(), torsion.end(), [](const auto& t) { return !t.empty(); });
  }

  bool operator==(const HomologyResult&) const = default;
};

/// Boundary matrices with the convention  d = sum_i (-1)^i d_i.
/// Throws if the input violates the face identities.
inline ChainComplex chain_complex(const DeltaComplex& k) {
  if (auto bad = k.check_face_identities(); !bad.empty()) throw Error(bad.front());
  ChainComplex cc;
  std::size_t top = static_cast<std::size_t>(k.dimension() + 1);
  cc.ranks.resize(top);
  cc.boundaries.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    cc.ranks[n] = k.cell_count(n);
    IntegerMatrix m(n == 0 ? 0 : k.cell_count(n - 1), k.cell_count(n));
    if (n > 0) {
      std::map<std::size_t, long long> acc;
      for (std::size_t c = 0; c < k.cell_count(n); ++c) {
        acc.clear();
        for (std::size_t i = 0; i <= n; ++i) acc[k.face(n, c, i)] += (i % 2 == 0 ? 1 : -1);
        for (auto [r, v] : acc)
          if (v != 0) m.columns[c].emplace_back(r, v);
      }
    }
    cc.boundaries[n] = std::move(m);
  }
  return cc;
}

/// Checks boundaries[n-1] * boundaries[n] == 0 for every n.
inline Diagnostics check_boundary_squared(const ChainComplex& cc) {
  Diagnostics out;
  for (std::size_t n = 2; n < cc.boundaries.size(); ++n) {
    const auto& outer = cc.boundaries[n - 1];
    const auto& inner = cc.boundaries[n];
    std::map<std::size_t, long long> acc;
    for (std::size_t c = 0; c < inner.cols; ++c) {
      acc.clear();
      for (auto [r, v] : inner.columns[c])
        for (auto [r2, v2] : outer.columns[r]) acc[r2] += v * v2;
      for (auto [r, v] : acc)
        if (v != 0) {
          out.push_back("boundary squared is nonzero on " + std::to_string(n) + "-chain " +
                        std::to_string(c));
          break;
        }
    }
  }
  return out;
}

namespace detail {

struct Overflow {};

inline long long checked_sub_mul(long long a, long long b, long long c) {
  long long prod, res;
  if (__builtin_mul_overflow(b, c, &prod) || __builtin_sub_overflow(a, prod, &res))
    throw Overflow{};
  return res;
}
inline BigInt checked_sub_mul(const BigInt& a, const BigInt& b, const BigInt& c) {
  return a - b * c;
}

template <class Int>
bool is_unit(const Int& v) {
  return v == 1 || v == -1;
}

/// Result of eliminating unit pivots: how many were removed and what is left.
template <class Int>
struct SparseResidue {
  std::size_t unit_rank = 0;
  std::vector<std::vector<std::pair<std::size_t, Int>>> columns;  // nonzero leftovers
};

/// Repeatedly pivots on +-1 entries (column operations, then deleting the
/// pivot row and column). Each pivot contributes an invariant factor 1.
template <class Int>
SparseResidue<Int> eliminate_unit_pivots(const IntegerMatrix& m) {
  using Entry = std::pair<std::size_t, Int>;
  using Col = std::vector<Entry>;
  std::vector<Col> cols(m.cols);
  std::vector<std::vector<std::size_t>> row_index(m.rows);
  std::vector<std::size_t> row_count(m.rows, 0);
  for (std::size_t c = 0; c < m.cols; ++c) {
    cols[c].reserve(m.columns[c].size());
    for (auto [r, v] : m.columns[c]) {
      cols[c].emplace_back(r, Int(v));
      row_index[r].push_back(c);
      ++row_count[r];
    }
  }
  std::vector<char> active(m.cols, 1);
  std::vector<std::size_t> stamp(m.cols, 0);
  std::size_t epoch = 0;
  SparseResidue<Int> res;

  auto find_in = [](const Col& col, std::size_t r) -> const Int* {
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, std::size_t row) { return e.first < row; });
    return (it != col.end() && it->first == r) ? &it->second : nullptr;
  };

  std::vector<std::size_t> order(m.cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cols[a].size() < cols[b].size(); });

  Col merged;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t j : order) {
      if (!active[j] || cols[j].empty()) continue;
      // Choose the unit entry in the sparsest row.
      std::size_t best_row = 0;
      bool found = false;
      Int unit = 0;
      for (const auto& [r, v] : cols[j])
        if (is_unit(v) && (!found || row_count[r] < row_count[best_row])) {
          best_row = r;
          unit = v;
          found = true;
        }
      if (!found) continue;
      progress = true;
      ++epoch;
      stamp[j] = epoch;
      const Col pivot_col = cols[j];
      for (std::size_t k : row_index[best_row]) {
        if (!active[k] || stamp[k] == epoch) continue;
        stamp[k] = epoch;
        const Int* a = find_in(cols[k], best_row);
        if (!a) continue;
        Int factor = (*a) * unit;  // unit is its own inverse
        merged.clear();
        const Col& ck = cols[k];
        std::size_t p = 0, q = 0;
        while (p < ck.size() || q < pivot_col.size()) {
          if (q == pivot_col.size() || (p < ck.size() && ck[p].first < pivot_col[q].first)) {
            merged.push_back(ck[p++]);
          } else if (p == ck.size() || pivot_col[q].first < ck[p].first) {
            Int v = checked_sub_mul(Int(0), factor, pivot_col[q].second);
            std::size_t r = pivot_col[q].first;
            merged.emplace_back(r, v);
            row_index[r].push_back(k);
            ++row_count[r];
            ++q;
          } else {
            Int v = checked_sub_mul(ck[p].second, factor, pivot_col[q].second);
            std::size_t r = ck[p].first;
            if (v != 0)
              merged.emplace_back(r, v);
            else
              --row_count[r];
            ++p;
            ++q;
          }
        }
        cols[k].swap(merged);
      }
      for (const auto& [r, v] : pivot_col) --row_count[r];
      row_index[best_row].clear();
      active[j] = 0;
      cols[j].clear();
      ++res.unit_rank;
    }
  }
  for (std::size_t c = 0; c < m.cols; ++c)
    if (active[c] && !cols[c].empty()) res.columns.push_back(std::move(cols[c]));
  return res;
}

/// Dense Smith normal form on a small residue. Returns the nonzero diagonal
/// entries (positive, each dividing the next).
inline std::vector<BigInt> dense_smith_diagonal(std::vector<std::vector<BigInt>> a) {
  std::vector<BigInt> diag;
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero entry in the trailing block.
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (!piv || abs(a[i][j]) < abs(a[piv->first][piv->second]))) piv = {i, j};
    if (!piv) break;
    std::swap(a[t], a[piv->first]);
    for (auto& row : a) std::swap(row[t], row[piv->second]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // Divisibility: fold any non-multiple into the pivot row.
        for (std::size_t i = t + 1; i < rows && clean; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
              clean = false;
              break;
            }
      }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

inline std::size_t dense_rational_rank(std::vector<std::vector<BigInt>> a) {
  // Fraction-free (Bareiss) elimination.
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

template <class Int>
std::vector<std::vector<BigInt>> densify(const SparseResidue<Int>& res) {
  std::vector<std::size_t> rows;
  for (const auto& col : res.columns)
    for (const auto& e : col) rows.push_back(e.first);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<std::vector<BigInt>> dense(rows.size(), std::vector<BigInt>(res.columns.size()));
  for (std::size_t c = 0; c < res.columns.size(); ++c)
    for (const auto& [r, v] : res.columns[c]) {
      std::size_t i = std::lower_bound(rows.begin(), rows.end(), r) - rows.begin();
      dense[i][c] = BigInt(v);
    }
  return dense;
}

}  // namespace detail

/// Rank and nontrivial invariant factors (those > 1) of an integer matrix.
struct SmithSummary {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;
};

/// Invariant factors via unit-pivot sparse elimination followed by a dense
/// Smith normal form of the residue. Arithmetic starts in 64-bit and
/// restarts in arbitrary precision on overflow. With rank_only the residue
/// is ranked over the rationals and no torsion is reported.
inline SmithSummary smith_summary(const IntegerMatrix& m, bool rank_only = false) {
  auto finish = [&](const auto& residue) {
    SmithSummary s;
    s.rank = residue.unit_rank;
    if (residue.columns.empty()) return s;
    auto dense = detail::densify(residue);
    if (rank_only) {
      s.rank += detail::dense_rational_rank(std::move(dense));
      return s;
    }
    for (auto& d : detail::dense_smith_diagonal(std::move(dense))) {
      ++s.rank;
      if (d != 1) s.torsion.push_back(d);
    }
    std::sort(s.torsion.begin(), s.torsion.end());
    return s;
  };
  try {
    return finish(detail::eliminate_unit_pivots<long long>(m));
  } catch (const detail::Overflow&) {
    return finish(detail::eliminate_unit_pivots<BigInt>(m));
  }
}

enum class HomologyMode { Torsion, RankOnly };

/// Integral homology of a chain complex. Throws if the boundary does not
/// square to zero.
inline HomologyResult homology(const ChainComplex& cc, HomologyMode mode = HomologyMode::Torsion) {
  if (auto bad = check_boundary_squared(cc); !bad.empty()) throw Error(bad.front());
  std::size_t top = cc.top();
  std::vector<SmithSummary> smith(top + 1);
  bool rank_only = mode == HomologyMode::RankOnly;
  unsigned threads = thread_budget();
  if (threads > 1 && top > 1) {
    std::vector<std::future<SmithSummary>> jobs;
    for (std::size_t n = 1; n < top; ++n)
      jobs.push_back(std::async(std::launch::async,
                                [&, n] { return smith_summary(cc.boundaries[n], rank_only); }));
    for (std::size_t n = 1; n < top; ++n) smith[n] = jobs[n - 1].get();
  } else {
    for (std::size_t n = 1; n < top; ++n) smith[n] = smith_summary(cc.boundaries[n], rank_only);
  }
  HomologyResult h;
  h.betti.resize(top);
  h.torsion.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    std::size_t out_rank = smith[n].rank;
    std::size_t in_rank = n + 1 < top ? smith[n + 1].rank : 0;
    h.betti[n] = cc.ranks[n] - out_rank - in_rank;
    if (n + 1 < top) h.torsion[n] = smith[n + 1].torsion;
  }
  return h;
}

inline HomologyResult homology(const DeltaComplex& k, HomologyMode mode = HomologyMode::Torsion) {
  return homology(chain_complex(k), mode);
}

/// Reduced homology as (betti, torsion); the empty complex has a single
/// class in degree -1, reported through `empty`.
struct ReducedHomology {
  bool empty = false;
  HomologyResult groups;
};

inline ReducedHomology reduced_homology(const DeltaComplex& k) {
  ReducedHomology r;
  if (k.cell_count(0) == 0) {
    r.empty = true;
    return r;
  }
  r.groups = homology(k);
  r.groups.betti[0] -= 1;
  return r;
}

/// True when the complex has the integral homology of S^d (d = -1 is the
/// empty set).
inline bool has_sphere_homology(const DeltaComplex& k, int d) {
  ReducedHomology r = reduced_homology(k);
  if (d < 0) return r.empty;
  if (r.empty) return false;
  if (r.groups.has_torsion()) return false;
  for (std::size_t n = 0; n < r.groups.betti.size(); ++n)
    if (r.groups.betti[n] != (static_cast<int>(n) == d ? 1u : 0u)) return false;
  return static_cast<int>(r.groups.betti.size()) > d;
}

}  // namespace stratakit
