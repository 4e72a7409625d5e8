#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "stratakit/arrangement.hpp"
#include "stratakit/homology.hpp"
#include "stratakit/isomorphism.hpp"

using namespace stratakit;

namespace {

Hyperplane form(std::vector<int> a, int b = 0) {
  Hyperplane h;
  for (int v : a) h.a.emplace_back(v);
  h.b = b;
  return h;
}

Arrangement point_in_line() { return {1, {form({1})}}; }

Arrangement generic_lines() { return {2, {form({1, 0}), form({0, 1}), form({1, 1}, -1)}}; }

std::vector<std::size_t> dim_histogram(const SignVectorPoset& p) {
  std::vector<std::size_t> h;
  for (int d : p.dims) {
    if (h.size() <= static_cast<std::size_t>(d)) h.resize(d + 1, 0);
    ++h[d];
  }
  return h;
}

std::vector<std::size_t> dim_histogram(const CombinatorialCSS& x) {
  std::vector<std::size_t> h;
  for (std::size_t v = 0; v < x.cell_count(); ++v) {
    if (h.size() <= static_cast<std::size_t>(x.dim(v))) h.resize(x.dim(v) + 1, 0);
    ++h[x.dim(v)];
  }
  return h;
}

Arrangement random_arrangement(std::mt19937& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<int> coef(-2, 2);
  for (;;) {
    Arrangement a;
    a.n = n;
    for (std::size_t i = 0; i < k; ++i) {
      Hyperplane h;
      for (std::size_t j = 0; j < n; ++j) h.a.emplace_back(coef(rng));
      h.b = coef(rng);
      a.hyperplanes.push_back(h);
    }
    if (validate_arrangement(a).empty()) return a;
  }
}

// Oracle: Poincare polynomial of the complement of a central arrangement
// tensored with R^l, from the Moebius function of its intersection lattice.
// Degree (l-1)*codim(X) receives |mu(X)|.
std::vector<long long> lattice_betti(const Arrangement& a, int level) {
  std::size_t k = a.hyperplanes.size();
  auto rank_of = [&](std::uint32_t mask) {
    RationalMatrix m;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) m.push_back(a.hyperplanes[i].a);
    // Plain Gaussian elimination.
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.n && r < m.size(); ++c) {
      std::size_t p = r;
      while (p < m.size() && m[p][c] == 0) ++p;
      if (p == m.size()) continue;
      std::swap(m[p], m[r]);
      for (std::size_t i = 0; i < m.size(); ++i)
        if (i != r && m[i][c] != 0) {
          Rational f = m[i][c] / m[r][c];
          for (std::size_t j = 0; j < a.n; ++j) m[i][j] -= f * m[r][j];
        }
      ++r;
    }
    return r;
  };
  // Flats = closed subsets (adding any other hyperplane raises the rank).
  std::vector<std::uint32_t> flats;
  std::map<std::uint32_t, std::size_t> rk;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::size_t r = rank_of(mask);
    bool closed = true;
    for (std::size_t i = 0; i < k && closed; ++i)
      if (!(mask >> i & 1) && rank_of(mask | 1u << i) == r) closed = false;
    if (closed) {
      flats.push_back(mask);
      rk[mask] = r;
    }
  }
  std::sort(flats.begin(), flats.end(), [](auto x, auto y) { return __builtin_popcount(x) < __builtin_popcount(y); });
  std::map<std::uint32_t, long long> mu;
  for (auto f : flats) {
    if (f == 0) {
      mu[f] = 1;
      continue;
    }
    long long s = 0;
    for (auto g : flats)
      if (g != f && (g & f) == g) s += mu[g];
    mu[f] = -s;
  }
  std::vector<long long> betti;
  for (auto f : flats) {
    std::size_t deg = static_cast<std::size_t>(level - 1) * rk[f];
    if (betti.size() <= deg) betti.resize(deg + 1, 0);
    betti[deg] += std::llabs(mu[f]);
  }
  return betti;
}

std::vector<long long> as_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

std::vector<long long> padded(std::vector<long long> v, std::size_t n) {
  v.resize(std::max(v.size(), n), 0);
  return v;
}

}  // namespace

TEST(RationalLp, FeasiblePointSatisfiesSystem) {
  StrictSystem s{2, {{1, 1}}, {1}, {{1, 0}, {0, 1}}, {0, 0}};
  auto r = solve_strict(s);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(satisfies(s, r.point));
}

TEST(RationalLp, OpposedStrictInequalitiesGiveCertificate) {
  StrictSystem s{1, {}, {}, {{1}, {-1}}, {0, 0}};
  auto r = solve_strict(s);
  ASSERT_FALSE(r.feasible);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(verify_certificate(s, *r.certificate));
}

TEST(RationalLp, InconsistentEqualitiesGiveCertificate) {
  StrictSystem s{1, {{1}, {1}}, {0, 1}, {}, {}};
  auto r = solve_strict(s);
  ASSERT_FALSE(r.feasible);
  EXPECT_TRUE(verify_certificate(s, *r.certificate));
}

TEST(RationalLp, BoundaryOfHalfPlaneIsNotInterior) {
  // x = 0 and x > 0.
  StrictSystem s{2, {{1, 0}}, {0}, {{1, 0}}, {0}};
  auto r = solve_strict(s);
  ASSERT_FALSE(r.feasible);
  EXPECT_TRUE(verify_certificate(s, *r.certificate));
  // A wrong certificate is rejected.
  EXPECT_FALSE(verify_certificate(s, FarkasCertificate{{0}, {0}}));
}

TEST(RationalLp, RandomSystemsAgreeWithCertificates) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 60; ++trial) {
    StrictSystem s;
    s.variables = 2;
    std::size_t me = trial % 2, mg = 2 + trial % 3;
    for (std::size_t i = 0; i < me; ++i) {
      s.eq_a.push_back({coef(rng), coef(rng)});
      s.eq_b.emplace_back(coef(rng));
    }
    for (std::size_t i = 0; i < mg; ++i) {
      s.gt_a.push_back({coef(rng), coef(rng)});
      s.gt_b.emplace_back(coef(rng));
    }
    auto r = solve_strict(s);
    if (r.feasible)
      EXPECT_TRUE(satisfies(s, r.point));
    else
      EXPECT_TRUE(verify_certificate(s, *r.certificate));
  }
}

TEST(Arrangement, ValidationRejectsZeroAndScaledDuplicates) {
  EXPECT_FALSE(validate_arrangement({2, {form({0, 0}, 1)}}).empty());
  EXPECT_FALSE(validate_arrangement({2, {form({1, 2}, 1), form({2, 4}, 2)}}).empty());
  EXPECT_TRUE(validate_arrangement({2, {form({1, 2}, 1), form({-1, -2}, -1)}}).empty());
  EXPECT_FALSE(validate_arrangement({2, {form({1})}}).empty());
  EXPECT_THROW(faces_level1({1, {form({0})}}), Error);
}

TEST(Arrangement, SignOrder) {
  EXPECT_TRUE(sign_leq(0, 2));
  EXPECT_TRUE(sign_leq(-1, 2));
  EXPECT_TRUE(sign_leq(2, 2));
  EXPECT_FALSE(sign_leq(2, -2));
  EXPECT_FALSE(sign_leq(2, 1));
  EXPECT_EQ(sign_vector_string({0, 1, -2}), "(0,+e1,-e2)");
}

TEST(Arrangement, PointInLineHasThreeFaces) {
  auto f = faces_level1(point_in_line());
  ASSERT_EQ(f.signs.size(), 3u);
  EXPECT_EQ(f.signs, (std::vector<SignVector>{{-1}, {0}, {1}}));
  EXPECT_EQ(f.dims, (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(f.poset.covers().size(), 2u);
}

TEST(Arrangement, GenericLines) {
  auto lines = generic_lines();
  auto f = faces_level1(lines);
  EXPECT_EQ(dim_histogram(f), (std::vector<std::size_t>{3, 9, 7}));
  EXPECT_EQ(signed_stratum_count(f), 1);
  for (std::size_t i = 0; i < f.signs.size(); ++i) {
    // Witness points lie in their faces.
    for (std::size_t h = 0; h < 3; ++h) {
      const auto& hp = lines.hyperplanes[h];
      Rational v = hp.b + hp.a[0] * f.witnesses[i][0] + hp.a[1] * f.witnesses[i][1];
      int s = v > 0 ? 1 : v < 0 ? -1 : 0;
      EXPECT_EQ(s, f.signs[i][h]);
    }
  }
}

TEST(Arrangement, EmptyArrangementIsOneFace) {
  auto f = faces_level1({3, {}});
  ASSERT_EQ(f.signs.size(), 1u);
  EXPECT_EQ(f.dims[0], 3);
  EXPECT_EQ(complement_poset({3, {}}, 2).signs.size(), 1u);
  EXPECT_EQ(salvetti_cellular({3, {}}, 2).cell_count(), 1u);
}

TEST(Arrangement, PointInLineSecondOrder) {
  auto f = faces_higher(point_in_line(), 2);
  ASSERT_EQ(f.signs.size(), 5u);
  std::map<SignVector, int> dims;
  for (std::size_t i = 0; i < 5; ++i) dims[f.signs[i]] = f.dims[i];
  EXPECT_EQ(dims, (std::map<SignVector, int>{{{-2}, 2}, {{-1}, 1}, {{0}, 0}, {{1}, 1}, {{2}, 2}}));
  auto c = complement_poset(point_in_line(), 2);
  ASSERT_EQ(c.signs.size(), 4u);
  // Both e1 strata lie below both e2 strata.
  EXPECT_EQ(c.poset.covers().size(), 4u);
  auto k = higher_salvetti(point_in_line(), 2);
  EXPECT_EQ(k.f_vector(), (std::vector<std::size_t>{4, 4}));
  EXPECT_EQ(homology(k).trimmed_betti(), (std::vector<std::size_t>{1, 1}));
}

TEST(Arrangement, FirstOrderMatchesLevelOne) {
  std::mt19937 rng(3);
  for (int t = 0; t < 5; ++t) {
    auto a = random_arrangement(rng, 2, 3);
    auto f1 = faces_level1(a);
    auto fh = faces_higher(a, 1);
    EXPECT_EQ(f1.signs, fh.signs);
    EXPECT_EQ(f1.dims, fh.dims);
    EXPECT_EQ(f1.poset, fh.poset);
  }
  EXPECT_THROW(faces_higher(point_in_line(), 0), Error);
}

TEST(Arrangement, BraidA1) {
  auto a = braid_arrangement(2);
  auto f3 = faces_higher(a, 3);
  EXPECT_EQ(f3.signs.size(), 7u);
  auto c2 = complement_poset(a, 2);
  std::multiset<int> dims(c2.dims.begin(), c2.dims.end());
  EXPECT_EQ(dims, (std::multiset<int>{3, 3, 4, 4}));
  auto k = higher_salvetti(a, 3);
  EXPECT_EQ(k.f_vector(), (std::vector<std::size_t>{6, 12, 8}));
  EXPECT_EQ(homology(k).trimmed_betti(), (std::vector<std::size_t>{1, 0, 1}));
}

TEST(Arrangement, BraidA2AgreesWithLatticeOracle) {
  auto a = braid_arrangement(3);
  auto k = higher_salvetti(a, 2);
  auto h = as_ll(homology(k).trimmed_betti());
  EXPECT_EQ(h, (std::vector<long long>{1, 3, 2}));
  EXPECT_EQ(padded(h, 3), padded(lattice_betti(a, 2), 3));
}

TEST(Arrangement, CentralArrangementsAgreeWithLatticeOracle) {
  // Lines through the origin of R^2 at orders 2 and 3.
  Arrangement a{2, {form({1, 0}), form({0, 1}), form({1, 1}), form({1, -2})}};
  for (int level : {2, 3}) {
    auto h = as_ll(homology(higher_salvetti(a, level)).trimmed_betti());
    auto oracle = lattice_betti(a, level);
    std::size_t n = std::max(h.size(), oracle.size());
    EXPECT_EQ(padded(h, n), padded(oracle, n)) << "order " << level;
  }
}

TEST(Arrangement, SalvettiCellular) {
  auto s = salvetti_cellular(point_in_line(), 2);
  ASSERT_EQ(s.cell_count(), 4u);
  std::multiset<int> dims;
  for (std::size_t v = 0; v < 4; ++v) dims.insert(s.dim(v));
  EXPECT_EQ(dims, (std::multiset<int>{0, 0, 1, 1}));
  auto b = salvetti_cellular(braid_arrangement(2), 2);
  ASSERT_EQ(b.cell_count(), 4u);
  EXPECT_EQ(homology(nondegenerate_nerve(b.category)).trimmed_betti(), (std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE(isomorphic(salvetti_complex(s).category, s.category));
  // Three generic lines: vertices are the chambers of the central part,
  // top cells the chambers of the lines themselves.
  auto g = salvetti_cellular(generic_lines(), 2);
  EXPECT_EQ(dim_histogram(g), (std::vector<std::size_t>{6, 12, 7}));
  EXPECT_TRUE(g.all_closed());
  EXPECT_EQ(homology(nondegenerate_nerve(g.category)).trimmed_betti(), (std::vector<std::size_t>{1, 3, 3}));
}

TEST(Arrangement, SymmetricSubdivision) {
  auto s = symmetric_subdivision(point_in_line(), 2);
  EXPECT_EQ(s.strata.signs.size(), 9u);
  EXPECT_EQ(signed_stratum_count(s.strata), 1);
  // Collapse is surjective and order preserving.
  std::set<std::size_t> image(s.collapse.begin(), s.collapse.end());
  EXPECT_EQ(image.size(), s.higher.signs.size());
  for (std::size_t x = 0; x < 9; ++x)
    for (std::size_t y = 0; y < 9; ++y)
      if (s.strata.poset.leq(x, y)) {
        EXPECT_TRUE(s.higher.poset.leq(s.collapse[x], s.collapse[y]));
      }
  EXPECT_THROW(symmetric_subdivision(point_in_line(), 0), Error);
}

TEST(Arrangement, SymmetricLevelPermutation) {
  auto s = symmetric_subdivision(point_in_line(), 3);
  EXPECT_EQ(s.strata.signs.size(), 27u);
  std::vector<std::size_t> swap{1, 0};
  for (std::size_t x = 0; x < s.faces.size(); ++x) {
    std::size_t y = permute_central_levels(s, x, swap);
    EXPECT_EQ(permute_central_levels(s, y, swap), x);
    EXPECT_EQ(s.faces[y][0], s.faces[x][0]);
    EXPECT_EQ(s.faces[y][1], s.faces[x][2]);
    EXPECT_EQ(s.strata.dims[y], s.strata.dims[x]);
    for (std::size_t z = 0; z < s.faces.size(); ++z)
      if (s.strata.poset.leq(x, z)) {
        EXPECT_TRUE(s.strata.poset.leq(y, permute_central_levels(s, z, swap)));
      }
  }
}

TEST(ArrangementProperties, EulerIdentityOnRandomArrangements) {
  std::mt19937 rng(2024);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 3, k = 1 + t % 4;
    int level = 1 + t % 3;
    auto a = random_arrangement(rng, n, k);
    auto f = faces_higher(a, level);
    long long expected = (n * level) % 2 == 0 ? 1 : -1;
    EXPECT_EQ(signed_stratum_count(f), expected) << "trial " << t;
    if (n * level <= 6) {
      auto s = symmetric_subdivision(a, level);
      EXPECT_EQ(signed_stratum_count(s.strata), expected) << "trial " << t;
    }
  }
}

TEST(ArrangementProperties, SmallerStrataHaveSmallerDimension) {
  std::mt19937 rng(11);
  for (int t = 0; t < 10; ++t) {
    auto a = random_arrangement(rng, 2, 3);
    auto f = faces_higher(a, 1 + t % 3);
    for (auto [x, y] : f.poset.covers()) EXPECT_LT(f.dims[x], f.dims[y]);
  }
}

TEST(ArrangementProperties, SamplingConfirmsClosureOrder) {
  std::mt19937 rng(5);
  EXPECT_TRUE(sample_closure_order(point_in_line(), 2).empty());
  EXPECT_TRUE(sample_closure_order(generic_lines(), 2).empty());
  for (int t = 0; t < 4; ++t) {
    auto a = random_arrangement(rng, 2, 2);
    auto d = sample_closure_order(a, 2);
    EXPECT_TRUE(d.empty()) << (d.empty() ? "" : d.front());
  }
}

TEST(ArrangementProperties, SuspensionLaw) {
  for (int level = 1; level <= 4; ++level) {
    auto k = higher_salvetti(point_in_line(), level);
    EXPECT_EQ(k.euler_characteristic(), 1 + (level % 2 == 0 ? -1 : 1)) << level;
    auto h = homology(k).trimmed_betti();
    std::vector<std::size_t> sphere(level, 0);
    sphere[0] += 1;
    sphere[level - 1] += 1;
    EXPECT_EQ(h, sphere);
  }
}

TEST(ArrangementProperties, SalvettiHomologyInvariantUnderRescalingAndRelabeling) {
  Arrangement a{2, {form({1, 0}), form({0, 1}), form({1, 1}, -1)}};
  auto base = homology(higher_salvetti(a, 2));
  Arrangement b = a;
  for (auto& v : b.hyperplanes[2].a) v *= 3;
  b.hyperplanes[2].b *= 3;
  EXPECT_EQ(homology(higher_salvetti(b, 2)), base);
  std::swap(b.hyperplanes[0], b.hyperplanes[2]);
  EXPECT_EQ(homology(higher_salvetti(b, 2)), base);
}
