#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace catmin {

Json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double as_number(const Json& j) {
  if (j.is_string()) {
    if (j == "inf") return kInf;
    if (j == "-inf") return -kInf;
  }
  if (!j.is_number()) fail_input("expected a number");
  return j.get<double>();
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}
Json to_json(const Vec2& v) { return Json::array({number(v.x()), number(v.y())}); }
Json to_json(const Vec3& v) { return Json::array({number(v.x()), number(v.y()), number(v.z())}); }

Json to_json(const PseudometricMatrix& p) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < p.size(); ++j) row.push_back(number(p(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Tolerances& t) {
  return {{"zero", t.zero}, {"descent", t.descent}, {"angle", t.angle}, {"geodesic", t.geodesic}};
}

Json to_json(const MappedDisc& m) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : m.vertices) j["vertices"].push_back(to_json(v));
  j["triangles"] = m.triangles;
  j["boundary_loop"] = m.boundary_loop;
  j["images"] = Json::array();
  for (const auto& v : m.images) j["images"].push_back(to_json(v));
  return j;
}

Json to_json(const GraphInTarget& g) {
  Json j;
  j["points"] = Json::array();
  for (const auto& p : g.points) j["points"].push_back(to_json(p));
  j["edges"] = g.edges;
  j["pinned"] = g.pinned;
  if (!g.realizations.empty()) {
    Json r = Json::array();
    for (const auto& poly : g.realizations) {
      Json pts = Json::array();
      for (const auto& p : poly) pts.push_back(to_json(p));
      r.push_back(pts);
    }
    j["realizations"] = r;
  }
  if (g.has_rotation()) j["rotation"] = g.rotation;
  if (!g.param.empty()) {
    j["param"] = Json::array();
    for (const auto& p : g.param) j["param"].push_back(to_json(p));
  }
  if (!g.param_paths.empty()) {
    Json r = Json::array();
    for (const auto& poly : g.param_paths) {
      Json pts = Json::array();
      for (const auto& p : poly) pts.push_back(to_json(p));
      r.push_back(pts);
    }
    j["param_paths"] = r;
  }
  return j;
}

Json to_json(const HeightFieldPatch& p) {
  Json j{{"nx", p.nx}, {"ny", p.ny}, {"x0", p.x0}, {"y0", p.y0}, {"h", p.h}};
  j["s"] = Json::array();
  for (const auto& v : p.s) j["s"].push_back(to_json(v));
  return j;
}

Json to_json(const PolyhedralDisc& w) {
  Json j;
  j["num_vertices"] = w.num_vertices;
  j["edges"] = Json::array();
  for (const auto& e : w.edges) j["edges"].push_back(Json::array({e.a, e.b, number(e.length)}));
  j["triangles"] = Json::array();
  j["triangle_edges"] = Json::array();
  for (const auto& t : w.triangles) {
    j["triangles"].push_back(t.v);
    j["triangle_edges"].push_back(t.e);
  }
  j["boundary"] = w.boundary;
  j["boundary_vertices"] = w.boundary_vertices;
  return j;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Checker {
 public:
  std::vector<std::string> out;

  void add(const std::string& path, const std::string& msg) { out.push_back(path + ": " + msg); }

  static bool is_num(const Json& j) {
    return (j.is_number() && std::isfinite(j.get<double>())) || (j.is_string() && (j == "inf" || j == "-inf"));
  }
  static bool is_finite_num(const Json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

  // Array of finite numbers; dim < 0 accepts any positive length.
  bool point(const Json& j, const std::string& path, int dim) {
    if (!j.is_array() || j.empty()) {
      add(path, "expected a non-empty array of numbers");
      return false;
    }
    if (dim >= 0 && static_cast<int>(j.size()) != dim) {
      add(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
      return false;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      if (!is_finite_num(j[i])) {
        add(path + "[" + std::to_string(i) + "]", "expected a finite number");
        return false;
      }
    return true;
  }

  // Array of points of a common dimension; returns that dimension or -1.
  int points(const Json& obj, const std::string& key, const std::string& path, int dim, bool required = true) {
    if (!obj.contains(key)) {
      if (required) add(path + "." + key, "missing");
      return -1;
    }
    const Json& a = obj[key];
    if (!a.is_array()) {
      add(path + "." + key, "expected an array");
      return -1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!point(a[i], path + "." + key + "[" + std::to_string(i) + "]", dim)) return -1;
      if (dim < 0) dim = static_cast<int>(a[i].size());
    }
    return dim;
  }

  bool index(const Json& j, const std::string& path, long lo, long hi) {
    if (!j.is_number_integer()) {
      add(path, "expected an integer");
      return false;
    }
    const long v = j.get<long>();
    if (v < lo || v >= hi) {
      add(path, "index " + std::to_string(v) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
      return false;
    }
    return true;
  }

  // Array of integer tuples of a fixed arity (arity < 0: any) within [0, hi).
  bool tuples(const Json& obj, const std::string& key, const std::string& path, int arity, long hi,
              bool required = true) {
    if (!obj.contains(key)) {
      if (required) add(path + "." + key, "missing");
      return !required;
    }
    const Json& a = obj[key];
    if (!a.is_array()) {
      add(path + "." + key, "expected an array");
      return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
      if (!a[i].is_array() || (arity >= 0 && static_cast<int>(a[i].size()) != arity)) {
        add(p, arity >= 0 ? "expected " + std::to_string(arity) + " indices" : "expected an array of indices");
        ok = false;
        continue;
      }
      for (std::size_t k = 0; k < a[i].size(); ++k) ok = index(a[i][k], p + "[" + std::to_string(k) + "]", 0, hi) && ok;
    }
    return ok;
  }

  bool indices(const Json& obj, const std::string& key, const std::string& path, long hi, bool required = true) {
    if (!obj.contains(key)) {
      if (required) add(path + "." + key, "missing");
      return !required;
    }
    const Json& a = obj[key];
    if (!a.is_array()) {
      add(path + "." + key, "expected an array");
      return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      ok = index(a[i], path + "." + key + "[" + std::to_string(i) + "]", 0, hi) && ok;
    return ok;
  }

  void prefixed(const std::string& path, const std::vector<std::string>& diags) {
    for (const auto& d : diags) add(path, d);
  }
};

void check_disc(Checker& c, const Json& j, int dim) {
  const std::string path = "mapped_disc";
  if (!j.is_object()) return c.add(path, "expected an object");
  const auto before = c.out.size();
  c.points(j, "vertices", path, 2);
  const long n = j.contains("vertices") && j["vertices"].is_array() ? static_cast<long>(j["vertices"].size()) : 0;
  c.tuples(j, "triangles", path, 3, n);
  c.indices(j, "boundary_loop", path, n);
  const int d = c.points(j, "images", path, dim);
  if (j.contains("images") && j["images"].is_array() && static_cast<long>(j["images"].size()) != n)
    c.add(path + ".images", "expected one image per vertex");
  (void)d;
  if (c.out.size() == before) c.prefixed(path, disc_diagnostics(disc_from_json(j)));
}

void check_graph(Checker& c, const Json& j, int dim) {
  const std::string path = "graph";
  if (!j.is_object()) return c.add(path, "expected an object");
  const auto before = c.out.size();
  dim = c.points(j, "points", path, dim);
  const long n = j.contains("points") && j["points"].is_array() ? static_cast<long>(j["points"].size()) : 0;
  c.tuples(j, "edges", path, 2, n);
  const long m = j.contains("edges") && j["edges"].is_array() ? static_cast<long>(j["edges"].size()) : 0;
  if (!j.contains("pinned") || !j["pinned"].is_array() || static_cast<long>(j["pinned"].size()) != n)
    c.add(path + ".pinned", "expected one boolean per point");
  else
    for (std::size_t i = 0; i < j["pinned"].size(); ++i)
      if (!j["pinned"][i].is_boolean()) c.add(path + ".pinned[" + std::to_string(i) + "]", "expected a boolean");
  if (j.contains("realizations")) {
    const Json& r = j["realizations"];
    if (!r.is_array() || static_cast<long>(r.size()) != m)
      c.add(path + ".realizations", "expected one polyline per edge");
    else
      for (std::size_t e = 0; e < r.size(); ++e) {
        if (!r[e].is_array()) {
          c.add(path + ".realizations[" + std::to_string(e) + "]", "expected an array of points");
          continue;
        }
        for (std::size_t k = 0; k < r[e].size(); ++k)
          c.point(r[e][k], path + ".realizations[" + std::to_string(e) + "][" + std::to_string(k) + "]", dim);
      }
  }
  c.tuples(j, "rotation", path, -1, m, false);
  if (j.contains("rotation") && j["rotation"].is_array() && static_cast<long>(j["rotation"].size()) != n)
    c.add(path + ".rotation", "expected one cyclic order per point");
  if (j.contains("param")) {
    c.points(j, "param", path, 2);
    if (j["param"].is_array() && static_cast<long>(j["param"].size()) != n)
      c.add(path + ".param", "expected one position per point");
  }
  if (j.contains("param_paths")) {
    const Json& r = j["param_paths"];
    if (!r.is_array() || static_cast<long>(r.size()) != m) c.add(path + ".param_paths", "expected one polyline per edge");
  }
  if (c.out.size() == before) c.prefixed(path, graph_diagnostics(graph_from_json(j)));
}

void check_patch(Checker& c, const Json& j) {
  const std::string path = "patch";
  if (!j.is_object()) return c.add(path, "expected an object");
  const auto before = c.out.size();
  for (const char* key : {"nx", "ny"})
    if (!j.contains(key) || !j[key].is_number_integer()) c.add(path + "." + key, "expected an integer");
  for (const char* key : {"x0", "y0", "h"})
    if (!j.contains(key) || !Checker::is_finite_num(j[key])) c.add(path + "." + key, "expected a finite number");
  c.points(j, "s", path, 3);
  if (c.out.size() == before) c.prefixed(path, patch_diagnostics(patch_from_json(j)));
}

void check_polyhedral(Checker& c, const Json& j) {
  const std::string path = "polyhedral_disc";
  if (!j.is_object()) return c.add(path, "expected an object");
  const auto before = c.out.size();
  if (!j.contains("num_vertices") || !j["num_vertices"].is_number_integer() || j["num_vertices"].get<long>() < 1) {
    c.add(path + ".num_vertices", "expected a positive integer");
    return;
  }
  const long n = j["num_vertices"].get<long>();
  c.tuples(j, "triangles", path, 3, n);
  const bool full = j.contains("edges");
  auto edge_rows = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) return c.add(path + "." + key, "expected an array");
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
      const Json& e = j[key][i];
      if (!e.is_array() || e.size() != 3) {
        c.add(p, "expected [a, b, length]");
        continue;
      }
      c.index(e[0], p + "[0]", 0, n);
      c.index(e[1], p + "[1]", 0, n);
      if (!Checker::is_finite_num(e[2]) || e[2].get<double>() < 0.0) c.add(p + "[2]", "length must be finite and >= 0");
    }
  };
  if (full) {
    edge_rows("edges");
    const long m = j["edges"].is_array() ? static_cast<long>(j["edges"].size()) : 0;
    c.tuples(j, "triangle_edges", path, 3, m);
    c.indices(j, "boundary", path, m);
    c.indices(j, "boundary_vertices", path, n);
  } else {
    edge_rows("lengths");
  }
  if (c.out.size() != before) return;
  try {
    c.prefixed(path, polyhedral_diagnostics(polyhedral_from_json(j)));
  } catch (const Error& e) {
    c.add(path, e.what());
  }
}

}  // namespace

std::vector<std::string> validate_instance(const Json& j) {
  Checker c;
  if (!j.is_object()) {
    c.add("$", "expected a JSON object");
    return c.out;
  }
  if (!j.contains("version") || !j["version"].is_number_integer())
    c.add("version", "missing format version");
  else if (j["version"].get<int>() != kFormatVersion)
    c.add("version", "unsupported format version " + std::to_string(j["version"].get<int>()));
  int dim = -1;
  if (j.contains("target")) {
    const Json& t = j["target"];
    if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string())
      c.add("target.kind", "expected a string");
    else if (t["kind"] != "euclidean" && t["kind"] != "polyhedral")
      c.add("target.kind", "unknown target kind");
    if (t.is_object() && t.contains("dimension")) {
      if (!t["dimension"].is_number_integer() || t["dimension"].get<int>() < 1)
        c.add("target.dimension", "expected a positive integer");
      else
        dim = t["dimension"].get<int>();
    }
  }
  int payloads = 0;
  for (const char* key : {"mapped_disc", "graph", "patch", "polyhedral_disc"}) payloads += j.contains(key);
  if (payloads != 1) c.add("$", "expected exactly one of mapped_disc, graph, patch, polyhedral_disc");
  if (j.contains("mapped_disc")) check_disc(c, j["mapped_disc"], dim);
  if (j.contains("graph")) check_graph(c, j["graph"], dim);
  if (j.contains("patch")) check_patch(c, j["patch"]);
  if (j.contains("polyhedral_disc")) check_polyhedral(c, j["polyhedral_disc"]);
  if (j.contains("F")) {
    long n = std::numeric_limits<long>::max();
    if (j.contains("mapped_disc") && j["mapped_disc"].is_object() && j["mapped_disc"].contains("vertices") &&
        j["mapped_disc"]["vertices"].is_array())
      n = static_cast<long>(j["mapped_disc"]["vertices"].size());
    else
      c.add("F", "sample set requires a mapped_disc payload");
    c.indices(j, "F", "", n);
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) {
      c.add("tolerances", "expected an object");
    } else {
      for (auto it = t.begin(); it != t.end(); ++it) {
        const std::string key = it.key();
        if (key != "zero" && key != "descent" && key != "angle" && key != "geodesic")
          c.add("tolerances." + key, "unknown tolerance");
        else if (!Checker::is_finite_num(it.value()) || it.value().get<double>() <= 0.0)
          c.add("tolerances." + key, "must be a positive number");
      }
    }
  }
  for (auto& d : c.out)
    if (d.rfind(".F", 0) == 0) d = d.substr(1);
  std::sort(c.out.begin(), c.out.end());
  return c.out;
}

// ---------------------------------------------------------------------------
// Conversion (input assumed structurally valid)

namespace {

Vec vec_from(const Json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_number(j[i]);
  return v;
}
Vec2 vec2_from(const Json& j) { return {as_number(j[0]), as_number(j[1])}; }
Vec3 vec3_from(const Json& j) { return {as_number(j[0]), as_number(j[1]), as_number(j[2])}; }

}  // namespace

MappedDisc disc_from_json(const Json& j) {
  MappedDisc m;
  for (const auto& v : j.at("vertices")) m.vertices.push_back(vec2_from(v));
  m.triangles = j.at("triangles").get<std::vector<std::array<int, 3>>>();
  m.boundary_loop = j.at("boundary_loop").get<std::vector<int>>();
  for (const auto& v : j.at("images")) m.images.push_back(vec_from(v));
  return m;
}

GraphInTarget graph_from_json(const Json& j) {
  GraphInTarget g;
  for (const auto& p : j.at("points")) g.points.push_back(vec_from(p));
  g.edges = j.at("edges").get<std::vector<std::array<int, 2>>>();
  g.pinned = j.at("pinned").get<std::vector<bool>>();
  if (j.contains("realizations"))
    for (const auto& poly : j["realizations"]) {
      g.realizations.emplace_back();
      for (const auto& p : poly) g.realizations.back().push_back(vec_from(p));
    }
  if (j.contains("rotation")) g.rotation = j["rotation"].get<std::vector<std::vector<int>>>();
  if (j.contains("param"))
    for (const auto& p : j["param"]) g.param.push_back(vec2_from(p));
  if (j.contains("param_paths"))
    for (const auto& poly : j["param_paths"]) {
      g.param_paths.emplace_back();
      for (const auto& p : poly) g.param_paths.back().push_back(vec2_from(p));
    }
  return g;
}

HeightFieldPatch patch_from_json(const Json& j) {
  HeightFieldPatch p;
  p.nx = j.at("nx").get<int>();
  p.ny = j.at("ny").get<int>();
  p.x0 = as_number(j.at("x0"));
  p.y0 = as_number(j.at("y0"));
  p.h = as_number(j.at("h"));
  for (const auto& v : j.at("s")) p.s.push_back(vec3_from(v));
  return p;
}

PolyhedralDisc polyhedral_from_json(const Json& j) {
  const int n = j.at("num_vertices").get<int>();
  const auto tris = j.at("triangles").get<std::vector<std::array<int, 3>>>();
  if (!j.contains("edges")) {
    std::map<std::pair<int, int>, double> len;
    for (const auto& e : j.at("lengths")) {
      const int a = e[0].get<int>(), b = e[1].get<int>();
      len[{std::min(a, b), std::max(a, b)}] = as_number(e[2]);
    }
    return disc_from_triangles(n, tris, [&](int a, int b) {
      auto it = len.find({a, b});
      if (it == len.end()) fail_input("no length given for edge " + std::to_string(a) + "-" + std::to_string(b));
      return it->second;
    });
  }
  PolyhedralDisc w;
  w.num_vertices = n;
  for (const auto& e : j["edges"]) w.edges.push_back({e[0].get<int>(), e[1].get<int>(), as_number(e[2])});
  const auto tedges = j.at("triangle_edges").get<std::vector<std::array<int, 3>>>();
  if (tedges.size() != tris.size()) fail_input("triangle_edges must match triangles");
  for (std::size_t t = 0; t < tris.size(); ++t) {
    PolyTriangle pt;
    pt.v = tris[t];
    pt.e = tedges[t];
    w.triangles.push_back(pt);
  }
  w.boundary = j.at("boundary").get<std::vector<int>>();
  w.boundary_vertices = j.at("boundary_vertices").get<std::vector<int>>();
  finalize_disc(w);
  return w;
}

Instance parse_instance(const Json& j) {
  const auto diags = validate_instance(j);
  if (!diags.empty()) fail_input(diags.front());
  Instance inst;
  inst.version = j["version"].get<int>();
  if (j.contains("target")) {
    inst.target = j["target"]["kind"].get<std::string>();
    if (j["target"].contains("dimension")) inst.dimension = j["target"]["dimension"].get<int>();
  }
  if (j.contains("mapped_disc")) {
    inst.disc = disc_from_json(j["mapped_disc"]);
    inst.dimension = inst.disc->dimension();
  }
  if (j.contains("graph")) {
    inst.graph = graph_from_json(j["graph"]);
    inst.dimension = static_cast<int>(inst.graph->points[0].size());
  }
  if (j.contains("patch")) {
    inst.patch = patch_from_json(j["patch"]);
    inst.dimension = 3;
  }
  if (j.contains("polyhedral_disc")) {
    inst.polyhedral = polyhedral_from_json(j["polyhedral_disc"]);
    inst.target = "polyhedral";
  }
  if (j.contains("F")) inst.F = j["F"].get<std::vector<int>>();
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (t.contains("zero")) inst.tol.zero = t["zero"].get<double>();
    if (t.contains("descent")) inst.tol.descent = t["descent"].get<double>();
    if (t.contains("angle")) inst.tol.angle = t["angle"].get<double>();
    if (t.contains("geodesic")) inst.tol.geodesic = t["geodesic"].get<double>();
  }
  return inst;
}

Json to_json(const Instance& inst) {
  Json j;
  j["version"] = inst.version;
  j["target"] = {{"kind", inst.target}};
  if (inst.dimension > 0) j["target"]["dimension"] = inst.dimension;
  if (inst.disc) j["mapped_disc"] = to_json(*inst.disc);
  if (inst.graph) j["graph"] = to_json(*inst.graph);
  if (inst.patch) j["patch"] = to_json(*inst.patch);
  if (inst.polyhedral) j["polyhedral_disc"] = to_json(*inst.polyhedral);
  if (!inst.F.empty()) j["F"] = inst.F;
  j["tolerances"] = to_json(inst.tol);
  return j;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail_input("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write " + path);
  out << text;
}

Json load_json_file(const std::string& path) { return parse_json_text(read_text_file(path)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace catmin
