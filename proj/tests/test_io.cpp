#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "stratakit/json_io.hpp"
#include "stratakit/stratakit.hpp"

using namespace stratakit;
using io::Json;

namespace {

std::string data(const std::string& name) { return std::string(STRATAKIT_DATA_DIR) + "/" + name; }

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI; `streams` picks what is captured ("2>/dev/null" keeps stdout).
CliRun cli(const std::string& args, const std::string& streams = "2>/dev/null") {
  std::string cmd = std::string("\"") + STRATAKIT_CLI_PATH + "\" " + args + " " + streams;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

CliRun cli_stderr(const std::string& args) { return cli(args, "2>&1 >/dev/null"); }

std::vector<std::size_t> betti(const Json& report) {
  std::vector<std::size_t> b = report["homology"]["betti"].get<std::vector<std::size_t>>();
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

template <class F>
std::string schema_pointer(F&& f) {
  try {
    f();
  } catch (const io::SchemaError& e) {
    return e.pointer();
  }
  return "<no error>";
}

}  // namespace

// -- round trips -------------------------------------------------------------

TEST(JsonIo, PosetRoundTrip) {
  Poset p = fixtures::simplex_face_poset(2);
  Poset q = io::poset_from_json(io::poset_to_json(p));
  EXPECT_EQ(p, q);
}

TEST(JsonIo, CategoryRoundTripKeepsParallelMorphisms) {
  for (const char* name : {"circle-minimal", "torus", "punctured-torus", "cubical-rp2", "y-space"}) {
    auto x = fixtures::by_name(name);
    auto y = io::css_from_json(io::css_to_json(x));
    EXPECT_EQ(y.cell_count(), x.cell_count()) << name;
    EXPECT_EQ(y.category.morphism_count(), x.category.morphism_count()) << name;
    EXPECT_TRUE(isomorphic(x.category, y.category)) << name;
    EXPECT_EQ(y.closed, x.closed) << name;
    for (std::size_t v = 0; v < x.cell_count(); ++v) EXPECT_EQ(y.dim(v), x.dim(v)) << name;
  }
}

TEST(JsonIo, SerializationIsStable) {
  auto x = fixtures::torus();
  std::string once = io::css_to_json(x).dump();
  std::string twice = io::css_to_json(io::css_from_json(io::css_to_json(x))).dump();
  EXPECT_EQ(once, twice);
}

TEST(JsonIo, DeltaRoundTrip) {
  DeltaComplex k = sd(fixtures::torus());
  DeltaComplex back = io::delta_from_json(io::delta_to_json(k));
  EXPECT_EQ(k, back);
}

TEST(JsonIo, ArrangementRoundTripWithFractions) {
  std::ifstream in(data("generic-lines.json"));
  Arrangement a = io::arrangement_from_json(Json::parse(in));
  ASSERT_EQ(a.hyperplanes.size(), 3u);
  EXPECT_EQ(a.hyperplanes[2].a[0], Rational(1, 2));
  EXPECT_EQ(a.hyperplanes[2].b, Rational(-1, 2));
  Json j = io::arrangement_to_json(a);
  EXPECT_EQ(j["hyperplanes"][2]["b"], "-1/2");
  EXPECT_EQ(io::arrangement_to_json(io::arrangement_from_json(j)), j);
}

TEST(JsonIo, GraphRoundTrip) {
  Graph g = graphs::complete_bipartite(3, 3);
  Graph h = io::graph_from_json(io::graph_to_json(g));
  EXPECT_EQ(h.vertices, g.vertices);
  ASSERT_EQ(h.edges.size(), g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) EXPECT_EQ(h.edges[e].ends, g.edges[e].ends);
}

TEST(JsonIo, HomologyTorsionAsStrings) {
  Json h = io::homology_to_json(homology(sd(fixtures::cubical_rp2())));
  EXPECT_EQ(h["torsion"][1], Json::array({"2"}));
}

// -- schema errors -----------------------------------------------------------

TEST(JsonIo, SchemaErrorsNamePointers) {
  EXPECT_EQ(schema_pointer([] { io::poset_from_json(Json::parse(R"({"covers": []})")); }), "/elements");
  EXPECT_EQ(schema_pointer([] {
              io::poset_from_json(Json::parse(R"({"elements": [{"id": 0}], "covers": [[0, 7]]})"));
            }),
            "/covers/0/1");
  EXPECT_EQ(schema_pointer([] {
              io::category_from_json(Json::parse(
                  R"({"objects": [{"id": 0}], "morphisms": [{"id": 0, "src": 0}], "compose": []})"));
            }),
            "/morphisms/0/dst");
  EXPECT_EQ(schema_pointer([] {
              io::arrangement_from_json(Json::parse(R"({"n": 2, "hyperplanes": [{"a": ["1"], "b": "0"}]})"));
            }),
            "/hyperplanes/0/a");
  EXPECT_EQ(schema_pointer([] {
              io::graph_from_json(Json::parse(R"({"vertices": ["a"], "edges": [{"ends": ["a", "q"]}]})"));
            }),
            "/edges/0/ends/1");
  EXPECT_EQ(schema_pointer([] {
              io::arrangement_from_json(Json::parse(R"({"n": 1, "hyperplanes": [{"a": ["1/0"], "b": "0"}]})"));
            }),
            "/hyperplanes/0/a/0");
}

TEST(JsonIo, PointerEscapesKeys) { EXPECT_EQ(io::detail::child("/dims", "a/b~c"), "/dims/a~1b~0c"); }

TEST(JsonIo, MissingCompositionIsReportedNotThrownAsSchema) {
  std::ifstream in(data("incomplete-category.json"));
  Json j = Json::parse(in);
  bool schema = false, library = false;
  try {
    io::css_from_json(j);
  } catch (const io::SchemaError&) {
    schema = true;
  } catch (const Error&) {
    library = true;
  }
  EXPECT_FALSE(schema);
  EXPECT_TRUE(library);
}

TEST(Export, DotRendersParallelEdges) {
  std::string dot = to_dot(fixtures::circle_minimal().category);
  std::size_t edges = 0;
  for (std::size_t at = dot.find("n0 -> n1"); at != std::string::npos; at = dot.find("n0 -> n1", at + 1)) ++edges;
  EXPECT_EQ(edges, 2u);
}

TEST(Export, DotHasseOmitsTransitiveEdges) {
  std::string dot = to_dot(fixtures::simplex_face_poset(1));
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 2);
}

TEST(Export, OffCountsMatchComplex) {
  DeltaComplex k = sd(fixtures::punctured_torus());
  std::istringstream off(to_off(k));
  std::string magic;
  std::size_t v, f, e;
  off >> magic >> v >> f >> e;
  EXPECT_EQ(magic, "OFF");
  EXPECT_EQ(v, k.cell_count(0));
  EXPECT_EQ(e, k.cell_count(1));
  EXPECT_EQ(f, 0u);
  EXPECT_THROW(to_off(sd(fixtures::simplex(3))), Error);
}

// -- command line ------------------------------------------------------------

TEST(Cli, SdPuncturedTorusIsWedgeOfTwoCircles) {
  CliRun r = cli("sd --fixture punctured-torus");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["f_vector"], Json::array({3, 4}));
  EXPECT_EQ(betti(j), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(j["operation"], "sd");
}

TEST(Cli, SalvettiOfPointInLineAtOrderTwo) {
  CliRun r = cli("arrangement salvetti --file \"" + data("point-line.json") + "\" --order 2");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["cells_by_dim"], Json::array({2, 2}));
  EXPECT_EQ(betti(j), (std::vector<std::size_t>{1, 1}));
}

TEST(Cli, ConfLoopIsAnnulus) {
  CliRun r = cli("conf --fixture loop --k 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(betti(Json::parse(r.out)), (std::vector<std::size_t>{1, 1}));
  CliRun f = cli("conf --file \"" + data("loop.json") + "\" --k 2 --oracle");
  ASSERT_EQ(f.code, 0);
  Json j = Json::parse(f.out);
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
}

TEST(Cli, ReportEulerMatchesBettiSum) {
  for (const char* args : {"sd --fixture torus", "homology --fixture cubical-rp2", "conf --fixture theta --k 2",
                           "arrangement complement --fixture braid-3 --order 2"}) {
    CliRun r = cli(args);
    ASSERT_EQ(r.code, 0) << args;
    Json j = Json::parse(r.out);
    long long alt = 0, sign = 1;
    for (const auto& b : j["homology"]["betti"]) {
      alt += sign * b.get<long long>();
      sign = -sign;
    }
    EXPECT_EQ(j["euler_characteristic"].get<long long>(), alt) << args;
  }
}

TEST(Cli, ReportsAreByteIdentical) {
  for (const char* args : {"facecat --fixture torus", "arrangement faces --fixture generic-lines",
                           "conf --fixture y --k 2 --unordered"}) {
    CliRun a = cli(args), b = cli(args);
    ASSERT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, TimingDoesNotChangeDigest) {
  Json plain = Json::parse(cli("sd --fixture torus").out);
  Json timed = Json::parse(cli("sd --fixture torus --timing").out);
  EXPECT_FALSE(plain.contains("timing_ms"));
  ASSERT_TRUE(timed.contains("timing_ms"));
  EXPECT_EQ(plain["input_digest"], timed["input_digest"]);
  EXPECT_NE(plain["input_digest"], Json::parse(cli("sd --fixture circle-minimal").out)["input_digest"]);
}

TEST(Cli, FileAndFixtureAgree) {
  Json a = Json::parse(cli("sd --fixture circle-minimal").out);
  Json b = Json::parse(cli("sd --file \"" + data("circle-minimal.json") + "\"").out);
  EXPECT_EQ(a["f_vector"], b["f_vector"]);
  EXPECT_EQ(a["homology"], b["homology"]);
}

TEST(Cli, PosetAndDeltaInputs) {
  Json p = Json::parse(cli("homology --file \"" + data("diamond.json") + "\"").out);
  EXPECT_EQ(betti(p), (std::vector<std::size_t>{1}));
  Json d = Json::parse(cli("homology --file \"" + data("triangle-boundary.json") + "\"").out);
  EXPECT_EQ(betti(d), (std::vector<std::size_t>{1, 1}));
}

TEST(Cli, ValidationFailureExitsTwo) {
  CliRun r = cli("validate --file \"" + data("incomplete-category.json") + "\"");
  EXPECT_EQ(r.code, 2);
  Json j = Json::parse(r.out);
  ASSERT_FALSE(j["diagnostics"].empty());
  EXPECT_NE(j["diagnostics"][0].get<std::string>().find("missing composition"), std::string::npos);
}

TEST(Cli, SchemaErrorExitsOneWithPointer) {
  CliRun r = cli_stderr("arrangement faces --file \"" + data("bad-arrangement.json") + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["pointer"], "/hyperplanes/1/a/1");
}

TEST(Cli, IoErrorsExitOne) {
  EXPECT_EQ(cli("sd --file /nonexistent/input.json").code, 1);
  EXPECT_EQ(cli("sd --fixture no-such-fixture").code, 1);
  EXPECT_EQ(cli("sd").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
}

TEST(Cli, ExportWritesFile) {
  std::string path = testing::TempDir() + "stratakit_export.dot";
  std::remove(path.c_str());
  ASSERT_EQ(cli("export dot --fixture circle-minimal --out \"" + path + "\"").code, 0);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, to_dot(fixtures::circle_minimal().category));
}

TEST(Cli, ExportJsonReadsBack) {
  CliRun r = cli("export json --fixture torus");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(isomorphic(io::css_from_json(Json::parse(r.out)).category, fixtures::torus().category));
}
