#pragma once

// JSON readers and writers. Needs nlohmann/json (vendor/json.hpp) on the
// include path.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stratakit/arrangement.hpp"
#include "stratakit/category.hpp"
#include "stratakit/css.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/graph_conf.hpp"
#include "stratakit/homology.hpp"
#include "stratakit/poset.hpp"

namespace stratakit::io {

using Json = nlohmann::json;

/// Schema violation at a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

namespace detail {

inline std::string child(const std::string& ptr, const std::string& key) {
  std::string out = ptr + "/";
  for (char ch : key) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline const Json& field(const Json& j, const std::string& ptr, const std::string& key) {
  if (!j.is_object()) throw SchemaError(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(ptr, key), "missing field");
  return *it;
}

inline const Json& array_at(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  return j;
}

inline long long integer(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  return j.get<long long>();
}

inline std::size_t index(const Json& j, const std::string& ptr) {
  long long v = integer(j, ptr);
  if (v < 0) throw SchemaError(ptr, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

/// Ids may be integers or strings; this is their key in id maps.
inline std::string id_key(const Json& j, const std::string& ptr) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw SchemaError(ptr, "expected an integer or string id");
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& ids, const Json& j, const std::string& ptr,
                          const char* what) {
  auto it = ids.find(id_key(j, ptr));
  if (it == ids.end()) throw SchemaError(ptr, std::string("unknown ") + what + " id " + id_key(j, ptr));
  return it->second;
}

inline Rational rational(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw SchemaError(ptr, "expected a rational \"p/q\"");
  std::string s = j.get<std::string>();
  try {
    auto slash = s.find('/');
    BigInt p(s.substr(0, slash));
    BigInt q = slash == std::string::npos ? BigInt(1) : BigInt(s.substr(slash + 1));
    if (q == 0) throw SchemaError(ptr, "zero denominator");
    return Rational(p, q);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception&) {
    throw SchemaError(ptr, "malformed rational '" + s + "'");
  }
}

inline std::string rational_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace detail

// -- posets -----------------------------------------------------------------

inline Poset poset_from_json(const Json& j) {
  const Json& elems = detail::array_at(detail::field(j, "", "elements"), "/elements");
  std::map<std::string, std::size_t> ids;
  std::vector<PosetElement> out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::string p = detail::child("/elements", i);
    std::string key = detail::id_key(detail::field(elems[i], p, "id"), detail::child(p, "id"));
    if (!ids.emplace(key, i).second) throw SchemaError(detail::child(p, "id"), "duplicate id " + key);
    PosetElement e;
    if (auto g = elems[i].find("grade"); g != elems[i].end() && !g->is_null())
      e.grade = static_cast<int>(detail::integer(*g, detail::child(p, "grade")));
    if (auto l = elems[i].find("label"); l != elems[i].end()) {
      if (!l->is_string()) throw SchemaError(detail::child(p, "label"), "expected a string");
      e.label = l->get<std::string>();
    } else {
      e.label = key;
    }
    out.push_back(std::move(e));
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  if (j.contains("covers")) {
    const Json& cs = detail::array_at(j["covers"], "/covers");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string p = detail::child("/covers", i);
      if (!cs[i].is_array() || cs[i].size() != 2) throw SchemaError(p, "expected a pair [lo, hi]");
      covers.emplace_back(detail::lookup(ids, cs[i][0], p + "/0", "element"),
                          detail::lookup(ids, cs[i][1], p + "/1", "element"));
    }
  }
  return Poset(std::move(out), std::move(covers));
}

inline Json poset_to_json(const Poset& p) {
  Json elems = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json e = {{"id", i}, {"label", p.label(i)}};
    if (p.grade(i)) e["grade"] = *p.grade(i);
    elems.push_back(std::move(e));
  }
  Json covers = Json::array();
  for (auto [lo, hi] : p.covers()) covers.push_back({lo, hi});
  return {{"elements", elems}, {"covers", covers}};
}

// -- categories and CSS -----------------------------------------------------

struct CategoryIds {
  std::map<std::string, std::size_t> objects;
  std::map<std::string, std::size_t> morphisms;
};

inline AcyclicCategory category_from_json(const Json& j, CategoryIds* ids_out = nullptr) {
  CategoryIds ids;
  AcyclicCategory c;
  const Json& objs = detail::array_at(detail::field(j, "", "objects"), "/objects");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    std::string p = detail::child("/objects", i);
    std::string key = detail::id_key(detail::field(objs[i], p, "id"), detail::child(p, "id"));
    std::optional<int> grade;
    if (auto g = objs[i].find("grade"); g != objs[i].end() && !g->is_null())
      grade = static_cast<int>(detail::integer(*g, detail::child(p, "grade")));
    std::string label = key;
    if (auto l = objs[i].find("label"); l != objs[i].end() && l->is_string()) label = l->get<std::string>();
    if (!ids.objects.emplace(key, c.add_object(grade, label)).second)
      throw SchemaError(detail::child(p, "id"), "duplicate object id " + key);
  }
  if (j.contains("morphisms")) {
    const Json& ms = detail::array_at(j["morphisms"], "/morphisms");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      std::string p = detail::child("/morphisms", i);
      std::string key = detail::id_key(detail::field(ms[i], p, "id"), detail::child(p, "id"));
      std::size_t s = detail::lookup(ids.objects, detail::field(ms[i], p, "src"), detail::child(p, "src"), "object");
      std::size_t t = detail::lookup(ids.objects, detail::field(ms[i], p, "dst"), detail::child(p, "dst"), "object");
      std::string label = key;
      if (auto l = ms[i].find("label"); l != ms[i].end() && l->is_string()) label = l->get<std::string>();
      if (!ids.morphisms.emplace(key, c.add_morphism(s, t, label)).second)
        throw SchemaError(detail::child(p, "id"), "duplicate morphism id " + key);
    }
  }
  if (j.contains("compose")) {
    const Json& cs = detail::array_at(j["compose"], "/compose");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string p = detail::child("/compose", i);
      if (!cs[i].is_array() || cs[i].size() != 3) throw SchemaError(p, "expected a triple [g, f, gf]");
      std::size_t g = detail::lookup(ids.morphisms, cs[i][0], p + "/0", "morphism");
      std::size_t f = detail::lookup(ids.morphisms, cs[i][1], p + "/1", "morphism");
      std::size_t gf = detail::lookup(ids.morphisms, cs[i][2], p + "/2", "morphism");
      c.set_composite(g, f, gf);
    }
  }
  if (ids_out) *ids_out = std::move(ids);
  return c;
}

inline Json category_to_json(const AcyclicCategory& c) {
  Json objs = Json::array(), ms = Json::array(), comp = Json::array();
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    Json o = {{"id", x}, {"label", c.object(x).label}};
    if (c.grade(x)) o["grade"] = *c.grade(x);
    objs.push_back(std::move(o));
  }
  for (std::size_t m = 0; m < c.morphism_count(); ++m)
    ms.push_back({{"id", m}, {"src", c.src(m)}, {"dst", c.dst(m)}, {"label", c.morphism(m).label}});
  for (const auto& [g, f, gf] : c.composition_entries()) comp.push_back({g, f, gf});
  return {{"objects", objs}, {"morphisms", ms}, {"compose", comp}};
}

/// Category format plus optional "dims" and "closed" maps keyed by object
/// id. Missing dims fall back to object grades; missing closed flags are
/// computed. Structural problems of the category raise stratakit::Error.
inline CombinatorialCSS css_from_json(const Json& j) {
  CategoryIds ids;
  AcyclicCategory c = category_from_json(j, &ids);
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    if (!d.is_object()) throw SchemaError("/dims", "expected an object keyed by object id");
    for (auto it = d.begin(); it != d.end(); ++it) {
      std::string p = detail::child("/dims", it.key());
      auto o = ids.objects.find(it.key());
      if (o == ids.objects.end()) throw SchemaError(p, "unknown object id " + it.key());
      c.set_grade(o->second, static_cast<int>(detail::integer(it.value(), p)));
    }
  }
  for (std::size_t x = 0; x < c.object_count(); ++x)
    if (!c.grade(x)) throw SchemaError(detail::child("/objects", x), "cell has no dimension");
  if (!j.contains("closed")) return make_css(std::move(c));
  const Json& cl = j["closed"];
  if (!cl.is_object()) throw SchemaError("/closed", "expected an object keyed by object id");
  stratakit::detail::require_valid(c, "css");
  std::vector<char> flags = compute_closed_flags(c);
  for (auto it = cl.begin(); it != cl.end(); ++it) {
    std::string p = detail::child("/closed", it.key());
    auto o = ids.objects.find(it.key());
    if (o == ids.objects.end()) throw SchemaError(p, "unknown object id " + it.key());
    if (!it.value().is_boolean()) throw SchemaError(p, "expected a boolean");
    flags[o->second] = it.value().get<bool>() ? 1 : 0;
  }
  return make_css(std::move(c), std::move(flags));
}

inline Json css_to_json(const CombinatorialCSS& x) {
  Json j = category_to_json(x.category);
  Json dims = Json::object(), closed = Json::object();
  for (std::size_t v = 0; v < x.cell_count(); ++v) {
    dims[std::to_string(v)] = x.dim(v);
    closed[std::to_string(v)] = x.closed[v] != 0;
  }
  j["dims"] = dims;
  j["closed"] = closed;
  return j;
}

// -- Delta complexes and homology ------------------------------------------

/// {"cells": [[ids of 0-cells], [ids of 1-cells], ...],
///  "faces": {"1": [[d0, d1], ...], "2": [[d0, d1, d2], ...], ...}}
/// where faces[n][i] lists the faces of the i-th n-cell by (n-1)-cell id.
inline DeltaComplex delta_from_json(const Json& j) {
  const Json& cells = detail::array_at(detail::field(j, "", "cells"), "/cells");
  DeltaComplex k;
  std::vector<std::map<std::string, std::size_t>> ids(cells.size());
  for (std::size_t n = 0; n < cells.size(); ++n) {
    std::string p = detail::child("/cells", n);
    const Json& level = detail::array_at(cells[n], p);
    const Json* faces = nullptr;
    std::string fp = detail::child("/faces", std::to_string(n));
    if (n > 0) {
      faces = &detail::field(detail::field(j, "", "faces"), "/faces", std::to_string(n));
      detail::array_at(*faces, fp);
      if (faces->size() != level.size()) throw SchemaError(fp, "expected one face list per " + std::to_string(n) + "-cell");
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
      std::string key = detail::id_key(level[i], detail::child(p, i));
      std::vector<std::size_t> fs;
      if (n > 0) {
        std::string cp = detail::child(fp, i);
        const Json& row = detail::array_at((*faces)[i], cp);
        if (row.size() != n + 1) throw SchemaError(cp, "an " + std::to_string(n) + "-cell needs " + std::to_string(n + 1) + " faces");
        for (std::size_t f = 0; f < row.size(); ++f) fs.push_back(detail::lookup(ids[n - 1], row[f], detail::child(cp, f), "cell"));
      }
      std::size_t id = k.add_cell(n, fs);
      if (!ids[n].emplace(key, id).second) throw SchemaError(detail::child(p, i), "duplicate cell id " + key);
    }
  }
  if (auto d = k.check_face_identities(); !d.empty()) throw SchemaError("/faces", d.front());
  return k;
}

inline Json delta_to_json(const DeltaComplex& k) {
  Json cells = Json::array(), faces = Json::object();
  for (int n = 0; n <= k.dimension(); ++n) {
    Json level = Json::array(), rows = Json::array();
    for (std::size_t i = 0; i < k.cell_count(n); ++i) {
      level.push_back(i);
      if (n > 0) {
        auto fs = k.faces(n, i);
        rows.push_back(std::vector<std::size_t>(fs.begin(), fs.end()));
      }
    }
    cells.push_back(level);
    if (n > 0) faces[std::to_string(n)] = rows;
  }
  return {{"cells", cells}, {"faces", faces}};
}

inline Json homology_to_json(const HomologyResult& h) {
  Json torsion = Json::array();
  for (const auto& t : h.torsion) {
    Json row = Json::array();
    for (const auto& v : t) row.push_back(v.str());
    torsion.push_back(row);
  }
  return {{"betti", h.betti}, {"torsion", torsion}};
}

// -- arrangements and graphs ------------------------------------------------

inline Arrangement arrangement_from_json(const Json& j) {
  Arrangement a;
  a.n = detail::index(detail::field(j, "", "n"), "/n");
  const Json& hs = detail::array_at(detail::field(j, "", "hyperplanes"), "/hyperplanes");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::string p = detail::child("/hyperplanes", i);
    const Json& coeffs = detail::array_at(detail::field(hs[i], p, "a"), detail::child(p, "a"));
    if (coeffs.size() != a.n) throw SchemaError(detail::child(p, "a"), "expected " + std::to_string(a.n) + " coefficients");
    Hyperplane h;
    for (std::size_t c = 0; c < coeffs.size(); ++c) h.a.push_back(detail::rational(coeffs[c], detail::child(detail::child(p, "a"), c)));
    if (hs[i].contains("b")) h.b = detail::rational(hs[i]["b"], detail::child(p, "b"));
    a.hyperplanes.push_back(std::move(h));
  }
  auto d = validate_arrangement(a);
  for (const auto& msg : d) {
    // Point at the offending hyperplane when the message names one.
    std::size_t pos = msg.find("hyperplane ");
    std::string ptr = "/hyperplanes";
    if (pos == 0) ptr = detail::child(ptr, std::stoul(msg.substr(11)));
    throw SchemaError(ptr, msg);
  }
  return a;
}

inline Json arrangement_to_json(const Arrangement& a) {
  Json hs = Json::array();
  for (const auto& h : a.hyperplanes) {
    Json coeffs = Json::array();
    for (const auto& v : h.a) coeffs.push_back(detail::rational_string(v));
    hs.push_back({{"a", coeffs}, {"b", detail::rational_string(h.b)}});
  }
  return {{"n", a.n}, {"hyperplanes", hs}};
}

inline Graph graph_from_json(const Json& j) {
  Graph g;
  std::map<std::string, std::size_t> ids;
  const Json& vs = detail::array_at(detail::field(j, "", "vertices"), "/vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string key = detail::id_key(vs[i], detail::child("/vertices", i));
    if (!ids.emplace(key, i).second) throw SchemaError(detail::child("/vertices", i), "duplicate vertex id " + key);
    g.vertices.push_back(key);
  }
  const Json& es = detail::array_at(detail::field(j, "", "edges"), "/edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string p = detail::child("/edges", i);
    GraphEdge e;
    e.label = es[i].contains("id") ? detail::id_key(es[i]["id"], detail::child(p, "id")) : "e" + std::to_string(i);
    const Json& ends = detail::array_at(detail::field(es[i], p, "ends"), detail::child(p, "ends"));
    if (ends.size() != 2) throw SchemaError(detail::child(p, "ends"), "expected two endpoints");
    for (std::size_t s = 0; s < 2; ++s) e.ends[s] = detail::lookup(ids, ends[s], detail::child(detail::child(p, "ends"), s), "vertex");
    g.edges.push_back(std::move(e));
  }
  return g;
}

inline Json graph_to_json(const Graph& g) {
  Json es = Json::array();
  for (const auto& e : g.edges) es.push_back({{"id", e.label}, {"ends", {g.vertices[e.ends[0]], g.vertices[e.ends[1]]}}});
  return {{"vertices", g.vertices}, {"edges", es}};
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace stratakit::io
