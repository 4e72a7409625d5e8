// stratakit: command-line front end. Every command prints a JSON run report.
// Exit codes: 0 success, 2 validation failure, 1 I/O or parse error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stratakit/json_io.hpp"
#include "stratakit/stratakit.hpp"

namespace sk = stratakit;
using sk::io::Json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string fixture;
  std::string out;
  int order = 1;
  std::size_t k = 2;
  bool unordered = false;
  bool oracle = false;
  std::size_t subdivide = 1;
  bool rank_only = false;
  bool timing = false;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// The input document together with the string its digest is taken over.
struct Input {
  Json doc;
  std::string canonical;
};

Input load(const Options& o) {
  if (!o.file.empty() == !o.fixture.empty()) throw InputError("give exactly one of --file and --fixture");
  if (!o.file.empty()) {
    Json doc = read_json_file(o.file);
    return {doc, doc.dump()};
  }
  return {Json(), "fixture:" + o.fixture};
}

sk::CombinatorialCSS css_fixture(const std::string& name) {
  if (name.rfind("graph-", 0) == 0) return sk::graph_to_css(sk::graphs::by_name(name.substr(6)));
  if (name.rfind("conf2-", 0) == 0) return sk::conf_category(sk::graphs::by_name(name.substr(6)), 2).css;
  return sk::fixtures::by_name(name);
}

template <class F>
auto fixture(F&& make) {
  try {
    return make();
  } catch (const sk::Error& e) {
    throw InputError(e.what());
  }
}

sk::CombinatorialCSS load_css(const Options& o, const Input& in) {
  if (!o.fixture.empty()) return fixture([&] { return css_fixture(o.fixture); });
  if (in.doc.contains("elements")) return sk::make_css(sk::poset_category(sk::io::poset_from_json(in.doc)));
  return sk::io::css_from_json(in.doc);
}

sk::Arrangement arrangement_fixture(const std::string& name) {
  auto form = [](std::vector<int> a, int b) {
    sk::Hyperplane h;
    for (int v : a) h.a.emplace_back(v);
    h.b = b;
    return h;
  };
  if (name == "point-line") return {1, {form({1}, 0)}};
  if (name == "generic-lines") return {2, {form({1, 0}, 0), form({0, 1}, 0), form({1, 1}, -1)}};
  if (name.rfind("braid-", 0) == 0) return sk::braid_arrangement(std::stoul(name.substr(6)));
  throw sk::Error("unknown arrangement fixture '" + name + "'");
}

sk::Graph load_graph(const Options& o, const Input& in) {
  if (!o.fixture.empty()) return fixture([&] { return sk::graphs::by_name(o.fixture); });
  return sk::io::graph_from_json(in.doc);
}

std::vector<std::size_t> cells_by_dim(const sk::CombinatorialCSS& x) {
  std::vector<std::size_t> h;
  for (std::size_t v = 0; v < x.cell_count(); ++v) {
    auto d = static_cast<std::size_t>(x.dim(v));
    if (h.size() <= d) h.resize(d + 1, 0);
    ++h[d];
  }
  return h;
}

std::vector<std::size_t> strata_by_dim(const std::vector<int>& dims) {
  std::vector<std::size_t> h;
  for (int d : dims) {
    if (h.size() <= static_cast<std::size_t>(d)) h.resize(static_cast<std::size_t>(d) + 1, 0);
    ++h[static_cast<std::size_t>(d)];
  }
  return h;
}

class Report {
 public:
  explicit Report(std::string op) { j_["operation"] = std::move(op); }

  Json& operator[](const char* key) { return j_[key]; }

  /// f-vector, Euler characteristic and homology of a complex.
  void complex(const sk::DeltaComplex& k, bool rank_only) {
    auto h = sk::homology(k, rank_only ? sk::HomologyMode::RankOnly : sk::HomologyMode::Torsion);
    j_["f_vector"] = k.f_vector();
    j_["euler_characteristic"] = k.euler_characteristic();
    j_["homology"] = sk::io::homology_to_json(h);
    if (h.euler_characteristic() != k.euler_characteristic())
      diagnostics_.push_back("Euler characteristic of the f-vector differs from the Betti sum");
  }

  void diagnose(const sk::Diagnostics& d) { diagnostics_.insert(diagnostics_.end(), d.begin(), d.end()); }
  bool failed() const { return !diagnostics_.empty(); }

  std::string finish(const std::string& canonical, const Options& o, double ms) {
    j_["input_digest"] = sk::io::fnv1a_hex(j_["operation"].get<std::string>() + "\n" + canonical + "\n" +
                                           parameters(o));
    j_["diagnostics"] = diagnostics_;
    if (o.timing) j_["timing_ms"] = ms;
    return j_.dump(2) + "\n";
  }

 private:
  static std::string parameters(const Options& o) {
    std::ostringstream os;
    os << "order=" << o.order << ";k=" << o.k << ";unordered=" << o.unordered << ";oracle=" << o.oracle
       << ";subdivide=" << o.subdivide << ";rank_only=" << o.rank_only;
    return os.str();
  }

  Json j_;
  sk::Diagnostics diagnostics_;
};

// -- commands ----------------------------------------------------------------

void run_validate(const Options& o, const Input& in, Report& r) {
  auto x = load_css(o, in);
  r["result"] = {{"cells", x.cell_count()},
                 {"cells_by_dim", cells_by_dim(x)},
                 {"closed_cells", std::count(x.closed.begin(), x.closed.end(), 1)}};
  r.diagnose(sk::validate_total_normality(x));
}

void run_facecat(const Options& o, const Input& in, Report& r) {
  auto x = load_css(o, in);
  r["result"] = sk::io::css_to_json(x);
  r["cells_by_dim"] = cells_by_dim(x);
  r.complex(sk::nondegenerate_nerve(x.category), o.rank_only);
}

void run_sd(const Options& o, const Input& in, Report& r) {
  auto x = load_css(o, in);
  r["cells_by_dim"] = cells_by_dim(x);
  r.complex(sk::sd(x), o.rank_only);
}

void run_homology(const Options& o, const Input& in, Report& r) {
  if (o.file.empty() || in.doc.contains("objects")) {
    auto x = load_css(o, in);
    r["source"] = "sd";
    r.complex(sk::sd(x), o.rank_only);
  } else if (in.doc.contains("cells")) {
    r["source"] = "delta-complex";
    r.complex(sk::io::delta_from_json(in.doc), o.rank_only);
  } else {
    r["source"] = "order-complex";
    r.complex(sk::order_complex(sk::io::poset_from_json(in.doc)), o.rank_only);
  }
}

void run_dual(const Options& o, const Input& in, Report& r) {
  auto x = sk::dual(load_css(o, in));
  r["cells_by_dim"] = cells_by_dim(x);
  r["result"] = sk::io::css_to_json(x);
  r.complex(sk::sd(x), o.rank_only);
}

void run_salvetti(const Options& o, const Input& in, Report& r) {
  auto src = load_css(o, in);
  auto x = sk::salvetti_complex(src);
  r["cells_by_dim"] = cells_by_dim(x);
  r["isomorphic_to_input"] = sk::isomorphic(x.category, src.category);
  r.complex(sk::sd(x), o.rank_only);
}

void run_arrangement(const std::string& mode, const Options& o, const Input& in, Report& r) {
  sk::Arrangement a = o.fixture.empty() ? sk::io::arrangement_from_json(in.doc)
                                      : fixture([&] { return arrangement_fixture(o.fixture); });
  auto strata_json = [](const sk::SignVectorPoset& p) {
    Json list = Json::array();
    for (std::size_t i = 0; i < p.signs.size(); ++i)
      list.push_back({{"sign", sk::sign_vector_string(p.signs[i])}, {"dim", p.dims[i]}});
    return list;
  };
  r["order"] = o.order;
  if (mode == "faces") {
    auto f = sk::faces_higher(a, o.order);
    r["strata"] = strata_json(f);
    r["strata_by_dim"] = strata_by_dim(f.dims);
    r["compactly_supported_euler"] = sk::signed_stratum_count(f);
  } else if (mode == "complement") {
    auto c = sk::complement_poset(a, o.order);
    r["strata"] = strata_json(c);
    r["strata_by_dim"] = strata_by_dim(c.dims);
    r.complex(sk::order_complex(c.poset), o.rank_only);
  } else if (mode == "salvetti") {
    auto x = sk::salvetti_cellular(a, o.order);
    r["cells_by_dim"] = cells_by_dim(x);
    r.complex(sk::sd(x), o.rank_only);
  } else {
    auto s = sk::symmetric_subdivision(a, o.order);
    r["strata"] = strata_json(s.strata);
    r["strata_by_dim"] = strata_by_dim(s.strata.dims);
    r["compactly_supported_euler"] = sk::signed_stratum_count(s.strata);
    r["collapse_image"] = std::set<std::size_t>(s.collapse.begin(), s.collapse.end()).size();
  }
}

void run_conf(const Options& o, const Input& in, Report& r) {
  sk::Graph g = sk::subdivide_graph(load_graph(o, in), o.subdivide);
  auto m = sk::conf_category(g, o.k);
  r["k"] = o.k;
  r["ordered"] = !o.unordered;
  r["cells_by_dim"] = cells_by_dim(m.css);
  auto model_homology = [&]() {
    if (!o.unordered) return sk::nondegenerate_nerve(m.css.category);
    return sk::nondegenerate_nerve(sk::unordered_conf(m).category);
  }();
  r.complex(model_homology, o.rank_only);
  if (o.oracle) {
    auto a = sk::abrams_complex(g, o.k, o.k + 1);
    auto oracle = o.unordered
                      ? sk::nondegenerate_nerve(sk::quotient_by_free_action(a.css.category, sk::abrams_sigma_action(a)))
                      : sk::nondegenerate_nerve(a.css.category);
    auto h1 = sk::homology(model_homology), h2 = sk::homology(oracle);
    bool agree = h1.trimmed_betti() == h2.trimmed_betti() && h1.has_torsion() == h2.has_torsion();
    r["oracle"] = {{"subdivisions", o.k + 1},
                   {"cells", a.css.cell_count()},
                   {"conditions", sk::check_abrams_conditions(a.graph, o.k)},
                   {"homology", sk::io::homology_to_json(h2)},
                   {"agrees", agree}};
    if (!agree) r.diagnose({"model and oracle homology differ"});
  }
}

void run_abrams(const Options& o, const Input& in, Report& r) {
  sk::Graph g = load_graph(o, in);
  auto a = sk::abrams_complex(g, o.k, o.subdivide);
  r["k"] = o.k;
  r["ordered"] = !o.unordered;
  r["cells_by_dim"] = cells_by_dim(a.css);
  r["conditions"] = sk::check_abrams_conditions(a.graph, o.k);
  if (o.unordered)
    r.complex(sk::nondegenerate_nerve(sk::quotient_by_free_action(a.css.category, sk::abrams_sigma_action(a))),
              o.rank_only);
  else
    r.complex(sk::nondegenerate_nerve(a.css.category), o.rank_only);
}

std::string run_export(const std::string& format, const Options& o, const Input& in) {
  auto x = load_css(o, in);
  if (format == "dot") return sk::to_dot(x.category);
  if (format == "off") return sk::to_off(sk::sd(x));
  return sk::io::css_to_json(x).dump(2) + "\n";
}

void add_input_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--file", o.file, "JSON input file");
  cmd->add_option("--fixture", o.fixture, "built-in fixture name");
  cmd->add_option("--out", o.out, "write output to this path instead of stdout");
  cmd->add_flag("--rank-only", o.rank_only, "Betti numbers only (no torsion)");
  cmd->add_flag("--timing", o.timing, "include wall-clock timing in the report");
}

void add_conf_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--k", o.k, "number of points")->check(CLI::PositiveNumber);
  auto* ord = cmd->add_flag("--ordered", [&o](std::int64_t) { o.unordered = false; }, "ordered configurations");
  cmd->add_flag("--unordered", o.unordered, "unordered configurations")->excludes(ord);
  cmd->add_option("--subdivide", o.subdivide, "edge subdivisions")->check(CLI::PositiveNumber);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratakit: cell structures, face categories and configuration spaces"};
  app.require_subcommand(1);
  Options o;
  std::string arrangement_mode, export_format;

  for (const char* name : {"validate", "facecat", "sd", "homology", "dual", "salvetti"})
    add_input_options(app.add_subcommand(name, std::string(name) + " of a cell structure"), o);

  auto* arr = app.add_subcommand("arrangement", "hyperplane arrangement strata");
  arr->add_option("mode", arrangement_mode, "faces | complement | salvetti | symmetric")
      ->required()
      ->check(CLI::IsMember({"faces", "complement", "salvetti", "symmetric"}));
  add_input_options(arr, o);
  arr->add_option("--order", o.order, "order l of A (x) R^l")->check(CLI::PositiveNumber);

  auto* conf = app.add_subcommand("conf", "configuration space model of a graph");
  add_input_options(conf, o);
  add_conf_options(conf, o);
  conf->add_flag("--oracle", o.oracle, "compare with the discretized (Abrams) complex");

  auto* abrams = app.add_subcommand("abrams", "discretized configuration space of a graph");
  add_input_options(abrams, o);
  add_conf_options(abrams, o);

  auto* exp = app.add_subcommand("export", "export a cell structure");
  exp->add_option("format", export_format, "dot | off | json")
      ->required()
      ->check(CLI::IsMember({"dot", "off", "json"}));
  add_input_options(exp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  std::string op = cmd->get_name();
  if (op == "arrangement") op += " " + arrangement_mode;
  if (op == "export") op += " " + export_format;
  auto started = std::chrono::steady_clock::now();
  Report report(op);
  std::string canonical;
  try {
    Input in = load(o);
    canonical = in.canonical;
    if (cmd == exp) {
      emit(o, run_export(export_format, o, in));
      return 0;
    }
    const std::string& name = cmd->get_name();
    if (name == "validate") run_validate(o, in, report);
    else if (name == "facecat") run_facecat(o, in, report);
    else if (name == "sd") run_sd(o, in, report);
    else if (name == "homology") run_homology(o, in, report);
    else if (name == "dual") run_dual(o, in, report);
    else if (name == "salvetti") run_salvetti(o, in, report);
    else if (name == "arrangement") run_arrangement(arrangement_mode, o, in, report);
    else if (name == "conf") run_conf(o, in, report);
    else run_abrams(o, in, report);
  } catch (const InputError& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 1;
  } catch (const sk::io::SchemaError& e) {
    std::cerr << Json{{"error", e.what()}, {"pointer", e.pointer()}}.dump() << "\n";
    return 1;
  } catch (const sk::Error& e) {
    report.diagnose({e.what()});
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  try {
    emit(o, report.finish(canonical, o, ms));
  } catch (const InputError& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return report.failed() ? 2 : 0;
}
