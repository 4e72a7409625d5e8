#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "stratakit/common.hpp"
#include "stratakit/delta_complex.hpp"

namespace stratakit {

struct PosetElement {
  std::optional<int> grade;
  std::string label;

  bool operator==(const PosetElement&) const = default;
};

/// A finite poset on dense ids 0..n-1, exchanged as covering pairs.
///
/// The reachability relation is materialized when the poset is built, so a
/// Poset is immutable afterwards and safe to share between threads. Inputs
/// that are not partial orders (cycles, shortcut covers, bad grades) are
/// still representable; validate_poset reports what is wrong with them.
class Poset {
 public:
  Poset() = default;

  Poset(std::vector<PosetElement> elements, std::vector<std::pair<std::size_t, std::size_t>> covers)
      : elements_(std::move(elements)), covers_(std::move(covers)) {
    for (auto [lo, hi] : covers_)
      if (lo >= elements_.size() || hi >= elements_.size())
        throw Error("Poset: cover (" + std::to_string(lo) + "," + std::to_string(hi) +
                    ") references an unknown element");
    std::sort(covers_.begin(), covers_.end());
    covers_.erase(std::unique(covers_.begin(), covers_.end()), covers_.end());
    build();
  }

  /// Builds a poset from any generating relation (pairs lo < hi); the
  /// covers are its transitive reduction. The relation must be acyclic.
  static Poset from_relation(std::vector<PosetElement> elements,
                             const std::vector<std::pair<std::size_t, std::size_t>>& relation) {
    Poset tmp(elements, relation);
    if (tmp.has_cycle_) throw Error("Poset: relation contains a cycle");
    std::size_t n = tmp.size();
    // y covers x iff nothing strictly above x lies strictly below y.
    std::vector<boost::dynamic_bitset<>> below(n, boost::dynamic_bitset<>(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y : tmp.strictly_above(x)) below[y].set(x);
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y : tmp.strictly_above(x))
        if (!tmp.reach_[x].intersects(below[y])) covers.emplace_back(x, y);
    return Poset(std::move(elements), std::move(covers));
  }

  std::size_t size() const { return elements_.size(); }
  const PosetElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<PosetElement>& elements() const { return elements_; }
  std::optional<int> grade(std::size_t i) const { return elements_[i].grade; }
  const std::string& label(std::size_t i) const { return elements_[i].label; }
  const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }
  const std::vector<std::size_t>& up_covers(std::size_t i) const { return up_[i]; }
  const std::vector<std::size_t>& down_covers(std::size_t i) const { return down_[i]; }

  /// x <= y in the reflexive-transitive closure of the covers.
  bool leq(std::size_t x, std::size_t y) const { return x == y || reach_[x].test(y); }
  bool less(std::size_t x, std::size_t y) const { return x != y && reach_[x].test(y); }
  bool comparable(std::size_t x, std::size_t y) const { return leq(x, y) || leq(y, x); }

  /// All y with x < y, ascending by id.
  std::vector<std::size_t> strictly_above(std::size_t x) const {
    std::vector<std::size_t> out;
    for (auto y = reach_[x].find_first(); y != boost::dynamic_bitset<>::npos;
         y = reach_[x].find_next(y))
      if (y != x) out.push_back(y);
    return out;
  }

  std::vector<std::size_t> strictly_below(std::size_t x) const {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < size(); ++y)
      if (less(y, x)) out.push_back(y);
    return out;
  }

  bool has_cycle() const { return has_cycle_; }
  bool graded() const {
    return std::all_of(elements_.begin(), elements_.end(), [](const auto& e) { return e.grade; });
  }

  std::vector<std::size_t> minimal_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (down_[i].empty()) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> maximal_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (up_[i].empty()) out.push_back(i);
    return out;
  }

  bool operator==(const Poset& o) const { return elements_ == o.elements_ && covers_ == o.covers_; }

 private:
  void build() {
    std::size_t n = elements_.size();
    up_.assign(n, {});
    down_.assign(n, {});
    for (auto [lo, hi] : covers_) {
      up_[lo].push_back(hi);
      down_[hi].push_back(lo);
    }
    reach_.assign(n, boost::dynamic_bitset<>(n));
    // Kahn order; leftovers mean a cycle.
    std::vector<std::size_t> indeg(n, 0), topo;
    for (auto [lo, hi] : covers_) ++indeg[hi];
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) topo.push_back(i);
    for (std::size_t h = 0; h < topo.size(); ++h)
      for (std::size_t y : up_[topo[h]])
        if (--indeg[y] == 0) topo.push_back(y);
    has_cycle_ = topo.size() != n;
    if (!has_cycle_) {
      for (std::size_t h = n; h-- > 0;) {
        std::size_t x = topo[h];
        for (std::size_t y : up_[x]) {
          reach_[x].set(y);
          reach_[x] |= reach_[y];
        }
      }
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> stack(up_[x].begin(), up_[x].end());
        while (!stack.empty()) {
          std::size_t y = stack.back();
          stack.pop_back();
          if (reach_[x].test(y)) continue;
          reach_[x].set(y);
          for (std::size_t z : up_[y]) stack.push_back(z);
        }
      }
    }
  }

  std::vector<PosetElement> elements_;
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
  std::vector<std::vector<std::size_t>> up_, down_;
  std::vector<boost::dynamic_bitset<>> reach_;
  bool has_cycle_ = false;
};

/// Antisymmetry, transitivity (no shortcut covers) and grading checks.
inline Diagnostics validate_poset(const Poset& p) {
  Diagnostics out;
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = x + 1; y < p.size(); ++y)
      if (p.leq(x, y) && p.leq(y, x))
        out.push_back("antisymmetry violated: " + std::to_string(x) + " <= " + std::to_string(y) +
                      " and " + std::to_string(y) + " <= " + std::to_string(x));
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.less(x, x)) out.push_back("element " + std::to_string(x) + " lies strictly below itself");
  if (p.has_cycle()) return out;
  for (auto [lo, hi] : p.covers()) {
    for (std::size_t z : p.up_covers(lo))
      if (z != hi && p.less(z, hi)) {
        out.push_back("cover (" + std::to_string(lo) + "," + std::to_string(hi) +
                      ") is a transitive shortcut through " + std::to_string(z));
        break;
      }
    auto glo = p.grade(lo), ghi = p.grade(hi);
    if (glo && ghi && *glo >= *ghi)
      out.push_back("grade does not increase along cover (" + std::to_string(lo) + "," +
                    std::to_string(hi) + ")");
  }
  return out;
}

/// Same elements, reversed covers.
inline Poset opposite(const Poset& p) {
  if (!validate_poset(p).empty()) throw Error("opposite: input is not a valid poset");
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  covers.reserve(p.covers().size());
  for (auto [lo, hi] : p.covers()) covers.emplace_back(hi, lo);
  return Poset(p.elements(), std::move(covers));
}

/// Componentwise order on pairs; element (i, j) has id i * q.size() + j and
/// grade grade(i) + grade(j) when both are present.
inline Poset product(const Poset& p, const Poset& q) {
  if (!validate_poset(p).empty() || !validate_poset(q).empty())
    throw Error("product: inputs must be valid posets");
  std::size_t m = q.size();
  std::vector<PosetElement> elems;
  elems.reserve(p.size() * m);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) {
      PosetElement e;
      if (p.grade(i) && q.grade(j)) e.grade = *p.grade(i) + *q.grade(j);
      e.label = "(" + p.label(i) + "," + q.label(j) + ")";
      elems.push_back(std::move(e));
    }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i2 : p.up_covers(i)) covers.emplace_back(i * m + j, i2 * m + j);
      for (std::size_t j2 : q.up_covers(j)) covers.emplace_back(i * m + j, i * m + j2);
    }
  return Poset(std::move(elems), std::move(covers));
}

/// The subposet on `keep` (in the given order) with the induced order.
inline Poset induced_subposet(const Poset& p, const std::vector<std::size_t>& keep) {
  std::vector<PosetElement> elems;
  for (std::size_t x : keep) elems.push_back(p.element(x));
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (p.less(keep[a], keep[b])) rel.emplace_back(a, b);
  return Poset::from_relation(std::move(elems), rel);
}

/// Chains of the order complex, grouped by length: chains[k] lists the
/// strictly increasing (k+1)-chains in the same order as the k-cells of the
/// complex returned by order_complex.
struct OrderComplex {
  DeltaComplex complex;
  std::vector<std::vector<std::vector<std::size_t>>> chains;
};

/// Ordered simplicial complex of strictly increasing chains; d_i deletes
/// the i-th entry.
inline OrderComplex order_complex_with_chains(const Poset& p) {
  if (p.has_cycle()) throw Error("order_complex: relation has a cycle");
  OrderComplex out;
  std::vector<std::vector<std::size_t>> above(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) above[x] = p.strictly_above(x);

  // Enumerate all chains depth-first, bucketed by length.
  std::vector<std::vector<std::vector<std::size_t>>>& chains = out.chains;
  std::vector<std::size_t> cur;
  auto dfs = [&](auto&& self, std::size_t x) -> void {
    cur.push_back(x);
    if (chains.size() < cur.size()) chains.resize(cur.size());
    chains[cur.size() - 1].push_back(cur);
    for (std::size_t y : above[x]) self(self, y);
    cur.pop_back();
  };
  for (std::size_t x = 0; x < p.size(); ++x) dfs(dfs, x);
  for (auto& level : chains) std::sort(level.begin(), level.end());

  std::vector<std::unordered_map<std::vector<std::size_t>, std::size_t, detail::VectorHash>> index(
      chains.size());
  std::vector<std::size_t> faces, face_chain;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    index[k].reserve(chains[k].size());
    for (std::size_t c = 0; c < chains[k].size(); ++c) {
      const auto& ch = chains[k][c];
      index[k].emplace(ch, c);
      if (k == 0) {
        out.complex.add_vertex();
        continue;
      }
      faces.clear();
      for (std::size_t i = 0; i <= k; ++i) {
        face_chain.assign(ch.begin(), ch.end());
        face_chain.erase(face_chain.begin() + i);
        faces.push_back(index[k - 1].at(face_chain));
      }
      out.complex.add_cell(k, faces);
    }
  }
  return out;
}

inline DeltaComplex order_complex(const Poset& p) { return order_complex_with_chains(p).complex; }

}  // namespace stratakit
