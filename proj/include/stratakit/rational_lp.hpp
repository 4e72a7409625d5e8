#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratakit/common.hpp"

namespace stratakit {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// The system  A_eq x = b_eq,  A_gt x > b_gt  over the rationals.
struct StrictSystem {
  std::size_t variables = 0;
  RationalMatrix eq_a;
  RationalVector eq_b;
  RationalMatrix gt_a;
  RationalVector gt_b;
};

/// Multipliers (y, z) proving infeasibility: y A_eq + z A_gt = 0, z >= 0,
/// and either z != 0 with y b_eq + z b_gt >= 0, or y b_eq + z b_gt > 0.
struct FarkasCertificate {
  RationalVector y;
  RationalVector z;
};

struct FeasibilityResult {
  bool feasible = false;
  RationalVector point;                         // when feasible
  std::optional<FarkasCertificate> certificate;  // when infeasible
};

inline bool satisfies(const StrictSystem& s, const RationalVector& x) {
  if (x.size() != s.variables) return false;
  auto dot = [&](const RationalVector& a) {
    Rational v = 0;
    for (std::size_t j = 0; j < s.variables; ++j) v += a[j] * x[j];
    return v;
  };
  for (std::size_t i = 0; i < s.eq_a.size(); ++i)
    if (dot(s.eq_a[i]) != s.eq_b[i]) return false;
  for (std::size_t i = 0; i < s.gt_a.size(); ++i)
    if (!(dot(s.gt_a[i]) > s.gt_b[i])) return false;
  return true;
}

/// Checks that a certificate really proves infeasibility.
inline bool verify_certificate(const StrictSystem& s, const FarkasCertificate& c) {
  if (c.y.size() != s.eq_a.size() || c.z.size() != s.gt_a.size()) return false;
  for (const auto& v : c.z)
    if (v < 0) return false;
  for (std::size_t j = 0; j < s.variables; ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < s.eq_a.size(); ++i) col += c.y[i] * s.eq_a[i][j];
    for (std::size_t i = 0; i < s.gt_a.size(); ++i) col += c.z[i] * s.gt_a[i][j];
    if (col != 0) return false;
  }
  Rational rhs = 0;
  bool z_nonzero = false;
  for (std::size_t i = 0; i < s.eq_b.size(); ++i) rhs += c.y[i] * s.eq_b[i];
  for (std::size_t i = 0; i < s.gt_b.size(); ++i) {
    rhs += c.z[i] * s.gt_b[i];
    z_nonzero = z_nonzero || c.z[i] != 0;
  }
  return z_nonzero ? rhs >= 0 : rhs > 0;
}

namespace detail {

/// Dense two-phase simplex on  max c.v  s.t.  M v = r, v >= 0  with Bland's
/// rule. Artificial columns stay in the tableau so that B^-1 (and hence the
/// duals) can be read off at the end.
class Simplex {
 public:
  Simplex(RationalMatrix m, RationalVector r, RationalVector c)
      : rows_(m.size()), cols_(c.size()), cost_(std::move(c)) {
    sign_.assign(rows_, 1);
    tab_.assign(rows_, RationalVector(cols_ + rows_ + 1, 0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (r[i] < 0) {
        sign_[i] = -1;
        for (auto& v : m[i]) v = -v;
        r[i] = -r[i];
      }
      for (std::size_t j = 0; j < cols_; ++j) tab_[i][j] = m[i][j];
      tab_[i][cols_ + i] = 1;
      tab_[i][cols_ + rows_] = r[i];
    }
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) basis_[i] = cols_ + i;
  }

  /// False when M v = r, v >= 0 has no solution.
  bool phase_one() {
    RationalVector c(cols_ + rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) c[cols_ + i] = -1;
    optimize(c, cols_ + rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_ && rhs(i) != 0) return false;
    // Drive zero-level artificials out where the row allows it.
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (tab_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    return true;
  }

  void phase_two() {
    RationalVector c(cols_ + rows_, 0);
    for (std::size_t j = 0; j < cols_; ++j) c[j] = cost_[j];
    optimize(c, cols_);
  }

  RationalVector solution() const {
    RationalVector v(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < cols_) v[basis_[i]] = rhs(i);
    return v;
  }

  /// Duals y = c_B B^-1 for the original (unflipped) rows.
  RationalVector duals() const {
    RationalVector y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational v = 0;
      for (std::size_t k = 0; k < rows_; ++k)
        if (basis_[k] < cols_) v += cost_[basis_[k]] * tab_[k][cols_ + i];
      y[i] = sign_[i] * v;
    }
    return y;
  }

 private:
  const Rational& rhs(std::size_t i) const { return tab_[i][cols_ + rows_]; }

  void pivot(std::size_t pr, std::size_t pc) {
    Rational p = tab_[pr][pc];
    for (auto& v : tab_[pr]) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == pr || tab_[i][pc] == 0) continue;
      Rational f = tab_[i][pc];
      for (std::size_t j = 0; j < tab_[i].size(); ++j)
        if (tab_[pr][j] != 0) tab_[i][j] -= f * tab_[pr][j];
    }
    basis_[pr] = pc;
  }

  // Columns >= `allowed` may not enter the basis.
  void optimize(const RationalVector& c, std::size_t allowed) {
    for (;;) {
      // Reduced costs c_j - c_B B^-1 a_j; enter the lowest index with a
      // positive one (Bland).
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed && !enter; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        Rational red = c[j];
        for (std::size_t i = 0; i < rows_; ++i)
          if (tab_[i][j] != 0) red -= c[basis_[i]] * tab_[i][j];
        if (red > 0) enter = j;
      }
      if (!enter) return;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (tab_[i][*enter] <= 0) continue;
        Rational ratio = rhs(i) / tab_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw Error("simplex: unbounded objective");
      pivot(*leave, *enter);
    }
  }

  std::size_t rows_, cols_;
  RationalVector cost_;
  std::vector<int> sign_;
  RationalMatrix tab_;
  std::vector<std::size_t> basis_;
};

/// y with y A = 0 and y b = 1, when A x = b is inconsistent.
inline std::optional<RationalVector> inconsistency_witness(const RationalMatrix& a, const RationalVector& b,
                                                           std::size_t n) {
  std::size_t m = a.size();
  // Row-reduce [A | b | I] and look for a row 0 ... 0 | nonzero.
  RationalMatrix t(m, RationalVector(n + 1 + m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n] = b[i];
    t[i][n + 1 + i] = 1;
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t p = row;
    while (p < m && t[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(t[p], t[row]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0) continue;
      Rational f = t[i][col] / t[row][col];
      for (std::size_t j = 0; j < t[i].size(); ++j) t[i][j] -= f * t[row][j];
    }
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (t[i][n] != 0) {
      RationalVector y(t[i].begin() + n + 1, t[i].end());
      for (auto& v : y) v /= t[i][n];
      return y;
    }
  return std::nullopt;
}

}  // namespace detail

/// Exact feasibility of a system of equalities and strict inequalities.
/// Solves  max t  s.t.  A_eq x = b_eq,  A_gt x - t >= b_gt,  t <= 1  with x
/// free; the system is feasible iff the optimum is positive. Infeasible
/// systems come with a verified Farkas certificate.
inline FeasibilityResult solve_strict(const StrictSystem& s) {
  std::size_t n = s.variables, me = s.eq_a.size(), ms = s.gt_a.size();
  FeasibilityResult out;
  if (auto y = detail::inconsistency_witness(s.eq_a, s.eq_b, n)) {
    out.certificate = FarkasCertificate{*y, RationalVector(ms, 0)};
    return out;
  }
  // Columns: x+ (n), x- (n), t+, t-, surplus s (ms), r.
  std::size_t cols = 2 * n + 2 + ms + 1;
  std::size_t tp = 2 * n, tm = 2 * n + 1, r = 2 * n + 2 + ms;
  RationalMatrix m;
  RationalVector rhs;
  for (std::size_t i = 0; i < me; ++i) {
    RationalVector row(cols, 0);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = s.eq_a[i][j];
      row[n + j] = -s.eq_a[i][j];
    }
    m.push_back(std::move(row));
    rhs.push_back(s.eq_b[i]);
  }
  for (std::size_t i = 0; i < ms; ++i) {
    RationalVector row(cols, 0);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = s.gt_a[i][j];
      row[n + j] = -s.gt_a[i][j];
    }
    row[tp] = -1;
    row[tm] = 1;
    row[2 * n + 2 + i] = -1;
    m.push_back(std::move(row));
    rhs.push_back(s.gt_b[i]);
  }
  {
    RationalVector row(cols, 0);
    row[tp] = 1;
    row[tm] = -1;
    row[r] = 1;
    m.push_back(std::move(row));
    rhs.push_back(1);
  }
  RationalVector cost(cols, 0);
  cost[tp] = 1;
  cost[tm] = -1;
  detail::Simplex lp(m, rhs, cost);
  if (!lp.phase_one()) throw Error("solve_strict: equalities consistent but phase one failed");
  lp.phase_two();
  RationalVector v = lp.solution();
  Rational t = v[tp] - v[tm];
  if (t > 0 || ms == 0) {
    out.feasible = true;
    out.point.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.point[j] = v[j] - v[n + j];
    if (!satisfies(s, out.point)) throw Error("solve_strict: internal error, point check failed");
    return out;
  }
  RationalVector y = lp.duals();
  FarkasCertificate cert;
  for (std::size_t i = 0; i < me; ++i) cert.y.push_back(-y[i]);
  for (std::size_t i = 0; i < ms; ++i) cert.z.push_back(-y[me + i]);
  if (!verify_certificate(s, cert)) throw Error("solve_strict: internal error, certificate check failed");
  out.certificate = std::move(cert);
  return out;
}

}  // namespace stratakit
