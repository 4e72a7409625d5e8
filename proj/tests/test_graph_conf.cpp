#include <gtest/gtest.h>

#include <set>

#include "stratakit/fixtures.hpp"
#include "stratakit/graph_conf.hpp"
#include "stratakit/homology.hpp"
#include "stratakit/isomorphism.hpp"

using namespace stratakit;

namespace {

// Betti numbers and torsion with trailing zero degrees dropped.
HomologyResult sd_homology(const AcyclicCategory& c) {
  HomologyResult h = homology(nondegenerate_nerve(c));
  while (!h.betti.empty() && h.betti.back() == 0 && h.torsion.back().empty()) {
    h.betti.pop_back();
    h.torsion.pop_back();
  }
  return h;
}

std::vector<std::size_t> sd_betti(const AcyclicCategory& c) { return sd_homology(c).trimmed_betti(); }

long long sd_euler(const AcyclicCategory& c) { return nondegenerate_nerve(c).euler_characteristic(); }

std::size_t count_hom(const AcyclicCategory& c, std::size_t x, std::size_t y) { return c.hom(x, y).size(); }

// Number of edge-valued coordinates, counted independently of the model.
int edge_coordinates(const ConfigurationModel& m, std::size_t x) {
  int n = 0;
  for (std::size_t cell : m.cells[x].cells) n += cell >= m.graph.vertex_count() ? 1 : 0;
  return n;
}

}  // namespace

TEST(Graph, ToCss) {
  auto loop = graph_to_css(graphs::loop());
  EXPECT_EQ(loop.cell_count(), 2u);
  EXPECT_EQ(count_hom(loop.category, 0, 1), 2u);
  EXPECT_TRUE(validate_total_normality(loop).empty());
  EXPECT_TRUE(isomorphic(loop.category, fixtures::circle_minimal().category));

  auto edge = graph_to_css(graphs::edge());
  EXPECT_EQ(count_hom(edge.category, 0, 2), 1u);
  EXPECT_EQ(count_hom(edge.category, 1, 2), 1u);

  auto y = graph_to_css(graphs::y());
  EXPECT_EQ(y.cell_count(), 7u);
  EXPECT_EQ(y.category.morphism_count(), 6u);
  EXPECT_TRUE(validate_total_normality(y).empty());

  Graph bad = graphs::edge();
  bad.edges[0].ends[1] = 5;
  EXPECT_FALSE(validate_graph(bad).empty());
  EXPECT_THROW(graph_to_css(bad), Error);
}

TEST(Graph, Subdivide) {
  auto p = subdivide_graph(graphs::edge(), 2);
  EXPECT_EQ(p.vertex_count(), 3u);
  EXPECT_EQ(p.edge_count(), 2u);
  auto t = subdivide_graph(graphs::loop(), 3);
  EXPECT_EQ(t.vertex_count(), 3u);
  EXPECT_EQ(t.edge_count(), 3u);
  for (auto d : t.degrees()) EXPECT_EQ(d, 2u);
  auto y = subdivide_graph(graphs::y(), 3);
  EXPECT_EQ(y.vertex_count(), 10u);
  EXPECT_EQ(y.edge_count(), 9u);
  EXPECT_THROW(subdivide_graph(graphs::y(), 0), Error);
  // Subdivision does not change the homology of the graph.
  for (const auto& name : graphs::names())
    EXPECT_EQ(sd_homology(graph_to_css(subdivide_graph(graphs::by_name(name), 3)).category),
              sd_homology(graph_to_css(graphs::by_name(name)).category))
        << name;
}

TEST(Graph, AbramsConditions) {
  EXPECT_FALSE(check_abrams_conditions(graphs::loop(), 2).empty());
  EXPECT_TRUE(check_abrams_conditions(subdivide_graph(graphs::loop(), 3), 2).empty());
  EXPECT_FALSE(check_abrams_conditions(graphs::y(), 2).empty());
  EXPECT_TRUE(check_abrams_conditions(subdivide_graph(graphs::y(), 3), 2).empty());
  EXPECT_FALSE(check_abrams_conditions(subdivide_graph(graphs::complete(5), 2), 2).empty());
  EXPECT_TRUE(check_abrams_conditions(subdivide_graph(graphs::complete(5), 3), 2).empty());
  EXPECT_FALSE(check_abrams_conditions(subdivide_graph(graphs::theta(), 3), 3).empty());
}

TEST(ConfCategory, EdgeTwoPoints) {
  auto m = conf_category(graphs::edge(), 2);
  std::vector<std::size_t> dims(3, 0);
  for (std::size_t x = 0; x < m.css.cell_count(); ++x) ++dims[m.css.dim(x)];
  EXPECT_EQ(dims, (std::vector<std::size_t>{2, 4, 2}));
  auto n = nondegenerate_nerve(m.css.category);
  EXPECT_EQ(n.f_vector(), (std::vector<std::size_t>{8, 10, 4}));
  EXPECT_EQ(homology(n).trimmed_betti(), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(validate_total_normality(m.css).empty());
}

TEST(ConfCategory, LoopTwoPoints) {
  auto m = conf_category(graphs::loop(), 2);
  ASSERT_EQ(m.css.cell_count(), 4u);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_GE(m.css.dim(x), 1);
  EXPECT_EQ(m.css.category.morphism_count(), 4u);
  EXPECT_EQ(nondegenerate_nerve(m.css.category).f_vector(), (std::vector<std::size_t>{4, 4}));
  EXPECT_EQ(sd_betti(m.css.category), (std::vector<std::size_t>{1, 1}));
  EXPECT_THROW(conf_category(graphs::loop(), 0), Error);
}

TEST(ConfCategory, YTwoPoints) {
  auto m = conf_category(graphs::y(), 2);
  EXPECT_EQ(sd_betti(m.css.category), (std::vector<std::size_t>{1, 1}));
}

TEST(ConfCategory, OnePointIsTheGraph) {
  for (const auto& name : graphs::names()) {
    Graph g = graphs::by_name(name);
    auto m = conf_category(g, 1);
    EXPECT_TRUE(isomorphic(m.css.category, graph_to_css(g).category)) << name;
  }
}

TEST(ConfCategory, NormalAndDimensionRaising) {
  for (const auto& name : graphs::names())
    for (std::size_t k : {1u, 2u, 3u}) {
      if (k == 3 && (name == "k5" || name == "k33")) continue;
      auto m = conf_category(graphs::by_name(name), k);
      EXPECT_TRUE(validate_total_normality(m.css).empty()) << name << " k=" << k;
      const auto& c = m.css.category;
      for (std::size_t f = 0; f < c.morphism_count(); ++f) {
        int moved = 0;
        for (int s : m.specializations[f]) moved += s >= 0 ? 1 : 0;
        EXPECT_EQ(edge_coordinates(m, c.dst(f)) - edge_coordinates(m, c.src(f)), moved);
        EXPECT_EQ(m.css.dim(c.dst(f)) - m.css.dim(c.src(f)), moved);
      }
    }
}

TEST(ConfCategory, SubdivisionInvariance) {
  auto coarse = conf_category(graphs::loop(), 2);
  auto fine = conf_category(subdivide_graph(graphs::loop(), 3), 2);
  EXPECT_EQ(sd_homology(coarse.css.category), sd_homology(fine.css.category));
  auto y1 = conf_category(graphs::y(), 2);
  auto y2 = conf_category(subdivide_graph(graphs::y(), 2), 2);
  EXPECT_EQ(sd_homology(y1.css.category), sd_homology(y2.css.category));
}

TEST(Abrams, SmallExamples) {
  auto loop = abrams_complex(graphs::loop(), 2, 3);
  EXPECT_EQ(sd_betti(loop.css.category), (std::vector<std::size_t>{1, 1}));
  auto y = abrams_complex(graphs::y(), 2, 3);
  EXPECT_EQ(sd_betti(y.css.category), (std::vector<std::size_t>{1, 1}));
  auto one = abrams_complex(graphs::y(), 1, 1);
  EXPECT_TRUE(isomorphic(one.css.category, graph_to_css(graphs::y()).category));
  EXPECT_THROW(abrams_complex(graphs::loop(), 2, 1), Error);
  EXPECT_THROW(abrams_complex(graphs::theta(), 2, 1), Error);
}

TEST(Abrams, OracleAgreement) {
  for (const auto& name : {"edge", "loop", "y", "theta", "k4"}) {
    Graph g = graphs::by_name(name);
    auto m = conf_category(g, 2);
    auto a = abrams_complex(g, 2, 3);
    ASSERT_TRUE(check_abrams_conditions(a.graph, 2).empty()) << name;
    EXPECT_EQ(sd_homology(m.css.category), sd_homology(a.css.category)) << name;
  }
}

TEST(Abrams, ThreePointsOracleAgreement) {
  for (const auto& name : {"edge", "y"}) {
    Graph g = graphs::by_name(name);
    auto m = conf_category(g, 3);
    auto a = abrams_complex(g, 3, 4);
    ASSERT_TRUE(check_abrams_conditions(a.graph, 3).empty()) << name;
    EXPECT_EQ(sd_homology(m.css.category), sd_homology(a.css.category)) << name;
  }
}

TEST(Sigma, FreeActionAndQuotient) {
  auto m = conf_category(graphs::loop(), 2);
  auto action = sigma_action(m);
  EXPECT_TRUE(validate_action(m.css.category, action).empty());
  auto q = unordered_conf(m);
  EXPECT_EQ(q.group_order, 2u);
  EXPECT_EQ(nondegenerate_nerve(q.category).f_vector(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(sd_betti(q.category), (std::vector<std::size_t>{1, 1}));
}

TEST(Sigma, TrivialPermutationIsIdentity) {
  auto m = conf_category(graphs::y(), 2);
  auto id = permute_coordinates(m, {0, 1});
  for (std::size_t x = 0; x < id.on_objects.size(); ++x) EXPECT_EQ(id.on_objects[x], x);
  for (std::size_t f = 0; f < id.on_morphisms.size(); ++f) EXPECT_EQ(id.on_morphisms[f], f);
}

TEST(Sigma, NoFixedCellsAndEulerHalving) {
  for (const auto& name : graphs::names())
    for (std::size_t k : {2u, 3u}) {
      if (k == 3 && (name == "k5" || name == "k33")) continue;
      auto m = conf_category(graphs::by_name(name), k);
      auto elems = group_elements(m.css.category, sigma_action(m));
      ASSERT_EQ(elems.size(), k == 2 ? 2u : 6u);
      for (std::size_t e = 1; e < elems.size(); ++e)
        for (std::size_t x = 0; x < m.cells.size(); ++x) EXPECT_NE(elems[e].on_objects[x], x);
      auto q = unordered_conf(m);
      EXPECT_EQ(sd_euler(m.css.category), static_cast<long long>(elems.size()) * sd_euler(q.category))
          << name << " k=" << k;
    }
}

TEST(Sigma, AbramsQuotientMatchesModel) {
  Graph g = graphs::theta();
  auto m = conf_category(g, 2);
  auto a = abrams_complex(g, 2, 3);
  auto qa = quotient_by_free_action(a.css.category, abrams_sigma_action(a));
  EXPECT_EQ(sd_homology(unordered_conf(m).category), sd_homology(qa));
}

TEST(ConfCategory, TorusBraidSubdivisionGivesLoopModel) {
  // Cut the square of S^1 x S^1 along the diagonal, then remove the diagonal.
  auto torus = fixtures::torus();
  const auto& c = torus.category;
  PosetDiagram f;
  std::size_t square = 0;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    if (torus.dim(x) == 2) {
      square = x;
      f.fibers.push_back(Poset({{1, "D"}, {2, "T<"}, {2, "T>"}}, {{0, 1}, {0, 2}}));
    } else {
      f.fibers.push_back(Poset({{torus.dim(x), "pt"}}, {}));
    }
  }
  // Circle lifts: b-1 is the 0-end, b+1 the 1-end.
  auto end_of = [](const std::string& part) { return part == "b-1" ? 0 : part == "b+1" ? 1 : -1; };
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    if (c.dst(m) != square) {
      f.maps.push_back({0});
      continue;
    }
    const std::string& lab = c.morphism(m).label;
    auto comma = lab.find(',');
    int x1 = end_of(lab.substr(1, comma - 1));
    int x2 = end_of(lab.substr(comma + 1, lab.size() - comma - 2));
    std::size_t piece = 0;
    if (x1 >= 0 && x2 >= 0)
      piece = x1 == x2 ? 0 : x1 < x2 ? 1 : 2;
    else if (x1 >= 0)
      piece = x1 == 0 ? 1 : 2;
    else
      piece = x2 == 0 ? 2 : 1;
    f.maps.push_back({piece});
  }
  auto sub = subdivide(torus, f);
  ASSERT_EQ(sub.cell_count(), 6u);
  std::vector<std::size_t> diagonal;
  for (std::size_t x = 0; x < sub.cell_count(); ++x)
    if (sub.dim(x) == 0 || sub.category.object(x).label.find("D") != std::string::npos) diagonal.push_back(x);
  ASSERT_EQ(diagonal.size(), 2u);
  auto conf = remove_closed_subcomplex(sub, diagonal);
  auto model = conf_category(graphs::loop(), 2);
  EXPECT_TRUE(isomorphic(conf.category, model.css.category));
}
