#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "stratakit/common.hpp"

namespace stratakit {

/// A finite Delta-set: n-cells with face maps d_0..d_n into (n-1)-cells.
///
/// Cells of each dimension are numbered densely from 0. The face maps are
/// stored flat, n+1 entries per n-cell. Vertices (0-cells) have no faces.
class DeltaComplex {
 public:
  DeltaComplex() = default;

  std::size_t add_vertex() { return add_cell(0, {}); }

  /// Adds an n-cell whose i-th face is faces[i]; faces.size() must be n+1
  /// (or 0 when n == 0).
  std::size_t add_cell(std::size_t n, std::span<const std::size_t> faces) {
    if (n == 0 ? !faces.empty() : faces.size() != n + 1)
      throw Error("DeltaComplex: a " + std::to_string(n) + "-cell needs " +
                  std::to_string(n == 0 ? 0 : n + 1) + " faces");
    if (n > 0 && counts_.size() < n)
      throw Error("DeltaComplex: no cells of dimension " + std::to_string(n - 1));
    for (std::size_t f : faces)
      if (f >= counts_[n - 1])
        throw Error("DeltaComplex: face id " + std::to_string(f) + " out of range in dimension " +
                    std::to_string(n - 1));
    if (counts_.size() <= n) {
      counts_.resize(n + 1, 0);
      faces_.resize(n + 1);
    }
    faces_[n].insert(faces_[n].end(), faces.begin(), faces.end());
    return counts_[n]++;
  }

  std::size_t add_cell(std::size_t n, std::initializer_list<std::size_t> faces) {
    return add_cell(n, std::span<const std::size_t>(faces.begin(), faces.size()));
  }

  /// Highest dimension with at least one cell; -1 for the empty complex.
  int dimension() const {
    for (std::size_t n = counts_.size(); n-- > 0;)
      if (counts_[n] > 0) return static_cast<int>(n);
    return -1;
  }

  std::size_t cell_count(std::size_t n) const { return n < counts_.size() ? counts_[n] : 0; }

  std::size_t face(std::size_t n, std::size_t cell, std::size_t i) const {
    return faces_[n][cell * (n + 1) + i];
  }

  std::span<const std::size_t> faces(std::size_t n, std::size_t cell) const {
    return {faces_[n].data() + cell * (n + 1), n + 1};
  }

  /// Number of cells per dimension, trimmed after the top dimension.
  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> f(counts_.begin(), counts_.begin() + (dimension() + 1));
    return f;
  }

  long long euler_characteristic() const {
    long long chi = 0;
    for (std::size_t n = 0; n < counts_.size(); ++n)
      chi += (n % 2 == 0 ? 1 : -1) * static_cast<long long>(counts_[n]);
    return chi;
  }

  /// Connected components of the 1-skeleton.
  std::size_t components() const {
    std::size_t nv = cell_count(0);
    std::vector<std::size_t> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t comps = nv;
    for (std::size_t e = 0; e < cell_count(1); ++e) {
      std::size_t a = find(face(1, e, 0)), b = find(face(1, e, 1));
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps;
  }

  /// The vertices of an n-cell, in order: vertex j is obtained by deleting
  /// every other position.
  std::vector<std::size_t> vertices(std::size_t n, std::size_t cell) const {
    std::vector<std::size_t> out(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      std::size_t c = cell;
      // Delete positions above j (from the top) then below j.
      for (std::size_t m = n; m > j; --m) c = face(m, c, m);
      for (std::size_t m = j; m > 0; --m) c = face(m, c, 0);
      out[j] = c;
    }
    return out;
  }

  /// Reports every violation of d_i d_j = d_{j-1} d_i (i < j).
  Diagnostics check_face_identities() const {
    Diagnostics out;
    for (std::size_t n = 2; n < counts_.size(); ++n)
      for (std::size_t c = 0; c < counts_[n]; ++c)
        for (std::size_t j = 1; j <= n; ++j)
          for (std::size_t i = 0; i < j; ++i) {
            std::size_t lhs = face(n - 1, face(n, c, j), i);
            std::size_t rhs = face(n - 1, face(n, c, i), j - 1);
            if (lhs != rhs)
              out.push_back("face identity d" + std::to_string(i) + "d" + std::to_string(j) +
                            " fails on " + std::to_string(n) + "-cell " + std::to_string(c));
          }
    return out;
  }

  bool operator==(const DeltaComplex&) const = default;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::size_t>> faces_;
};

}  // namespace stratakit
