#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "simpkit/deligne.hpp"
#include "simpkit/simpset.hpp"
#include "simpkit/vanest.hpp"

namespace simpkit {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent input; `where` names the file and JSON location.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what) : std::runtime_error(where + ": " + what) {}
};

namespace io {

inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    auto at = msg.find("parse error");
    throw InputError(source, at == std::string::npos ? msg : msg.substr(at));
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

// A cursor into a document that remembers its JSON pointer for error messages.
class Node {
 public:
  Node(const Json& j, std::string source, std::string pointer = "") : j_(&j), source_(std::move(source)), pointer_(std::move(pointer)) {}

  const Json& json() const { return *j_; }
  std::string where() const { return source_ + " at " + (pointer_.empty() ? "/" : pointer_); }
  [[noreturn]] void fail(const std::string& what) const { throw InputError(where(), what); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node operator[](const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) fail("missing field '" + key + "'");
    return Node(*it, source_, pointer_ + "/" + key);
  }
  std::vector<Node> items() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], source_, pointer_ + "/" + std::to_string(i));
    return out;
  }

  long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long>();
  }
  double number() const {
    if (!j_->is_number()) fail("expected a number");
    return j_->get<double>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  Rat rational() const {
    if (j_->is_number_integer()) return Rat(Int(j_->get<long>()));
    if (!j_->is_string()) fail("expected a rational as an integer or a \"p/q\" string");
    Rat r;
    try {
      r.set_str(j_->get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
      fail("malformed rational '" + j_->get<std::string>() + "'");
    }
    if (r.get_den() == 0) fail("rational has zero denominator");
    r.canonicalize();
    return r;
  }
  std::vector<long> integers() const {
    std::vector<long> out;
    for (const auto& n : items()) out.push_back(n.integer());
    return out;
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& n : items()) out.push_back(n.number());
    return out;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& n : items()) out.push_back(n.string());
    return out;
  }

 private:
  const Json* j_;
  std::string source_, pointer_;
};

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Json to_json(const Poly& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"exps", m}, {"coef", rat_str(c)}});
  return {{"monomials", terms}};
}

inline Poly read_poly(const Node& n, int nvars) {
  Poly p(nvars);
  for (const auto& t : n["monomials"].items()) {
    auto e = t["exps"].integers();
    if (static_cast<int>(e.size()) != nvars) t["exps"].fail("expected " + std::to_string(nvars) + " exponents");
    Monomial m(nvars);
    for (int i = 0; i < nvars; ++i) {
      if (e[i] < 0) t["exps"].fail("negative exponent");
      m[i] = static_cast<int>(e[i]);
    }
    p.add_term(m, t["coef"].rational());
  }
  return p;
}

inline Json to_json(const RationalFunction& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline RationalFunction read_function(const Node& n, int nvars) {
  Poly num = read_poly(n["num"], nvars);
  if (!n.has("den")) return RationalFunction(num);
  Poly den = read_poly(n["den"], nvars);
  if (den.is_zero()) n["den"].fail("zero denominator");
  return RationalFunction(num, den);
}

// Form indices are 1-based in files.
inline Json to_json(const RationalForm& w) {
  Json terms = Json::array();
  for (const auto& [idx, f] : w.terms()) {
    std::vector<int> one_based;
    for (int i : idx) one_based.push_back(i + 1);
    terms.push_back({{"idx", one_based}, {"num", to_json(f.num())}, {"den", to_json(f.den())}});
  }
  return {{"chart_dim", w.chart_dim()}, {"degree", w.degree()}, {"terms", terms}};
}

inline RationalForm read_form(const Node& n, int expect_dim = -1, int expect_degree = -1) {
  long dim = n["chart_dim"].integer(), degree = n["degree"].integer();
  if (dim < 0 || dim > 16) n["chart_dim"].fail("chart dimension out of range");
  if (degree < 0 || degree > dim) n["degree"].fail("degree must lie between 0 and the chart dimension");
  if (expect_dim >= 0 && dim != expect_dim) n["chart_dim"].fail("expected chart dimension " + std::to_string(expect_dim));
  if (expect_degree >= 0 && degree != expect_degree) n["degree"].fail("expected degree " + std::to_string(expect_degree));
  RationalForm w(static_cast<int>(dim), static_cast<int>(degree));
  for (const auto& t : n["terms"].items()) {
    auto raw = t["idx"].integers();
    if (static_cast<long>(raw.size()) != degree) t["idx"].fail("index list must have length " + std::to_string(degree));
    std::vector<int> idx;
    for (long i : raw) {
      if (i < 1 || i > dim) t["idx"].fail("index " + std::to_string(i) + " outside 1.." + std::to_string(dim));
      idx.push_back(static_cast<int>(i - 1));
    }
    w.add(idx, read_function(t, static_cast<int>(dim)));
  }
  return w;
}

inline Json to_json(const OrderedComplex& k) {
  Json simplices = Json::array();
  for (int d = k.dim(); d >= 0; --d)
    for (const auto& s : k.simplices(d)) simplices.push_back(s);
  Json order = Json::array();
  for (const auto& [a, b] : k.order()) order.push_back({a, b});
  return {{"vertices", k.vertices()}, {"order", order}, {"simplices", simplices}};
}

inline OrderedComplex read_ordered_complex(const Node& n) {
  std::vector<std::pair<std::string, std::string>> order;
  if (n.has("order"))
    for (const auto& p : n["order"].items()) {
      auto ab = p.strings();
      if (ab.size() != 2) p.fail("order entries are [a, b] pairs");
      order.emplace_back(ab[0], ab[1]);
    }
  std::vector<std::vector<std::string>> simplices;
  for (const auto& s : n["simplices"].items()) simplices.push_back(s.strings());
  try {
    return OrderedComplex(n["vertices"].strings(), order, simplices);
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

inline Json to_json(const FinSimplicialSet& k) {
  Json cells = Json::array();
  for (const auto& s : k.simplices()) {
    Json faces = Json::array();
    for (const auto& f : s.faces) faces.push_back({{"base", k.simplex(f.base).id}, {"degens", f.degeneracy_word()}});
    cells.push_back({{"dim", s.dim}, {"id", s.id}, {"faces", faces}});
  }
  return {{"max_degree", k.max_degree()}, {"cells", cells}};
}

inline FinSimplicialSet read_simplicial_set(const Node& n) {
  long top = n["max_degree"].integer();
  if (top < 0 || top > 64) n["max_degree"].fail("max_degree out of range");
  FinSimplicialSet k(static_cast<int>(top));
  for (const auto& c : n["cells"].items()) {
    std::vector<Cell> faces;
    for (const auto& f : c["faces"].items()) {
      std::string base = f["base"].string();
      if (!k.contains(base)) f["base"].fail("face refers to unknown or later cell '" + base + "'");
      int b = k.find(base);
      std::vector<int> word;
      for (long w : f["degens"].integers()) word.push_back(static_cast<int>(w));
      try {
        faces.push_back(cell_from_word(b, k.simplex(b).dim, word));
      } catch (const std::invalid_argument& e) {
        f["degens"].fail(e.what());
      }
    }
    try {
      k.add_simplex(c["id"].string(), static_cast<int>(c["dim"].integer()), faces);
    } catch (const std::invalid_argument& e) {
      c.fail(e.what());
    }
  }
  try {
    k.validate();
  } catch (const std::exception& e) {
    n.fail(e.what());
  }
  return k;
}

// Either file format, as a simplicial set explicit through `degree` when it comes from an ordered complex.
inline FinSimplicialSet read_complex(const Node& n, int degree) {
  if (n.has("cells")) return read_simplicial_set(n);
  return ordered_to_sset(read_ordered_complex(n), degree);
}

inline Json to_json(const Triangulation& t) {
  Json vertices = Json::array(), tops = Json::array();
  for (const auto& p : t.vertices()) {
    Json coords = Json::array();
    for (const auto& c : p) coords.push_back(rat_str(c));
    vertices.push_back(coords);
  }
  for (const auto& s : t.tops()) tops.push_back({{"vertices", s.vertices}, {"sign", s.sign}});
  return {{"vertices", vertices}, {"tops", tops}};
}

inline Triangulation read_triangulation(const Node& n) {
  std::vector<Point> vertices;
  for (const auto& v : n["vertices"].items()) {
    Point p;
    for (const auto& c : v.items()) p.push_back(c.rational());
    vertices.push_back(std::move(p));
  }
  std::vector<OrientedSimplex> tops;
  for (const auto& s : n["tops"].items()) {
    OrientedSimplex o;
    for (long v : s["vertices"].integers()) {
      if (v < 0 || v >= static_cast<long>(vertices.size())) s["vertices"].fail("vertex index " + std::to_string(v) + " out of range");
      o.vertices.push_back(static_cast<int>(v));
    }
    o.sign = s.has("sign") ? static_cast<int>(s["sign"].integer()) : 1;
    tops.push_back(std::move(o));
  }
  try {
    return Triangulation(std::move(vertices), std::move(tops));
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

inline Json box_json(const std::vector<double>& lo, const std::vector<double>& hi) { return {{"lo", lo}, {"hi", hi}}; }

inline Json to_json(const Cover& cover) {
  Json charts = Json::array(), overlaps = Json::array();
  for (const auto& c : cover.charts()) charts.push_back({{"name", c.name}, {"dim", c.dim}, {"box", box_json(c.lo, c.hi)}});
  for (const auto& [ids, p] : cover.all_patches()) {
    if (ids.size() < 2) continue;
    Json names = Json::array(), incl = Json::array();
    for (int c : ids) names.push_back(cover.name(c));
    for (const auto& m : p.inclusions) {
      Json comps = Json::array();
      for (const auto& f : m.components()) comps.push_back(to_json(f));
      incl.push_back(comps);
    }
    overlaps.push_back({{"charts", names}, {"inclusions", incl}, {"box", box_json(p.lo, p.hi)}});
  }
  return {{"charts", charts}, {"overlaps", overlaps}};
}

inline void read_box(const Node& n, std::vector<double>& lo, std::vector<double>& hi) {
  if (!n.has("box")) return;
  lo = n["box"]["lo"].numbers();
  hi = n["box"]["hi"].numbers();
}

inline std::vector<int> read_chart_ids(const Node& n, const std::vector<ChartSpec>& charts) {
  std::vector<int> ids;
  for (const auto& name : n.strings()) {
    auto it = std::find_if(charts.begin(), charts.end(), [&](const auto& c) { return c.name == name; });
    if (it == charts.end()) n.fail("unknown chart '" + name + "'");
    ids.push_back(static_cast<int>(it - charts.begin()));
  }
  return ids;
}

inline Cover read_cover(const Node& n) {
  std::vector<ChartSpec> charts;
  for (const auto& c : n["charts"].items()) {
    ChartSpec s{c["name"].string(), static_cast<int>(c["dim"].integer()), {}, {}};
    if (s.dim < 0 || s.dim > 16) c["dim"].fail("chart dimension out of range");
    read_box(c, s.lo, s.hi);
    charts.push_back(std::move(s));
  }
  std::vector<Patch> overlaps;
  if (n.has("overlaps"))
    for (const auto& o : n["overlaps"].items()) {
      Patch p;
      p.charts = read_chart_ids(o["charts"], charts);
      if (p.charts.empty()) o["charts"].fail("overlap lists no charts");
      int d = charts[p.charts[0]].dim;
      for (const auto& m : o["inclusions"].items()) {
        std::vector<RationalFunction> comps;
        for (const auto& f : m.items()) comps.push_back(read_function(f, d));
        p.inclusions.emplace_back(d, std::move(comps));
      }
      read_box(o, p.lo, p.hi);
      overlaps.push_back(std::move(p));
    }
  try {
    return Cover(std::move(charts), std::move(overlaps));
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

inline Json to_json(const UnitFunction& u) {
  Json factors = Json::array();
  for (const auto& [p, k] : u.factors()) factors.push_back({{"re", to_json(p.re)}, {"im", to_json(p.im)}, {"exp", k}});
  return {{"factors", factors}};
}

inline UnitFunction read_unit(const Node& n, int nvars) {
  UnitFunction u(nvars);
  for (const auto& f : n["factors"].items()) {
    ComplexPoly p{read_poly(f["re"], nvars), read_poly(f["im"], nvars)};
    if (p.is_zero()) f.fail("factor polynomial is zero");
    u = u * UnitFunction::phase(p, static_cast<int>(f["exp"].integer()));
  }
  return u;
}

inline Json patch_names(const Cover& cover, const std::vector<int>& ids) {
  Json names = Json::array();
  for (int c : ids) names.push_back(cover.name(c));
  return names;
}

// Cover plus the cochain: unit values in bidegree (degree, 0), forms[q-1] in bidegree (degree - q, q).
inline Json to_json(const Cover& cover, const DeligneCochain& c) {
  Json doc = to_json(cover);
  doc["degree"] = c.degree;
  doc["top"] = c.top;
  Json units = Json::array();
  for (const auto& [ids, u] : c.unit.values) units.push_back({{"patch", patch_names(cover, ids)}, {"value", to_json(u)}});
  doc["unit"] = units;
  Json forms = Json::array();
  for (const auto& f : c.forms) {
    Json values = Json::array();
    for (const auto& [ids, w] : f.values) values.push_back({{"patch", patch_names(cover, ids)}, {"form", to_json(w)}});
    forms.push_back({{"cech", f.cech}, {"degree", f.degree}, {"values", values}});
  }
  doc["forms"] = forms;
  return doc;
}

inline std::vector<int> read_patch(const Node& n, const Cover& cover, int cech) {
  std::vector<int> ids = read_chart_ids(n, cover.charts());
  if (static_cast<int>(ids.size()) != cech + 1) n.fail("expected an overlap of " + std::to_string(cech + 1) + " charts");
  if (!cover.has(ids)) n.fail("no intersection data for " + cover.label(ids));
  return ids;
}

inline CoverWithCochain read_cocycle(const Node& n) {
  Cover cover = read_cover(n);
  long degree = n["degree"].integer();
  long top = n.has("top") ? n["top"].integer() : std::max(1L, degree);
  if (degree < 0 || degree > Cover::max_depth - 1) n["degree"].fail("degree out of range");
  if (top < 1 || top > 8) n["top"].fail("top form degree out of range");
  DeligneCochain c = zero_cochain(cover, static_cast<int>(degree), static_cast<int>(top));
  for (const auto& u : n["unit"].items()) {
    auto ids = read_patch(u["patch"], cover, static_cast<int>(degree));
    c.unit.values[ids] = read_unit(u["value"], cover.patch_dim(ids));
  }
  auto forms = n.has("forms") ? n["forms"].items() : std::vector<Node>{};
  if (forms.size() != c.forms.size()) (n.has("forms") ? n["forms"] : n).fail("expected " + std::to_string(c.forms.size()) + " form components");
  for (std::size_t q = 1; q <= forms.size(); ++q) {
    const auto& f = forms[q - 1];
    int cech = static_cast<int>(degree - q);
    if (f.has("degree") && f["degree"].integer() != static_cast<long>(q)) f["degree"].fail("expected form degree " + std::to_string(q));
    if (f.has("cech") && f["cech"].integer() != cech) f["cech"].fail("expected Cech degree " + std::to_string(cech));
    for (const auto& v : f["values"].items()) {
      auto ids = read_patch(v["patch"], cover, cech);
      c.forms[q - 1].values.insert_or_assign(ids, read_form(v["form"], cover.patch_dim(ids), static_cast<int>(q)));
    }
  }
  return {std::move(cover), std::move(c)};
}

inline CircleLoop read_loop(const Node& n, const Cover& cover, int& samples) {
  CircleLoop loop{read_patch(n["overlap"], cover, 1), n["center"].numbers(), n["radius"].number()};
  if (loop.radius <= 0) n["radius"].fail("radius must be positive");
  if (n.has("samples")) samples = static_cast<int>(n["samples"].integer());
  return loop;
}

inline std::vector<PathSegment> read_path(const Node& n, const Cover& cover, QuadratureRule& rule) {
  if (n.has("order")) rule.order = static_cast<int>(n["order"].integer());
  if (n.has("panels")) rule.panels = static_cast<int>(n["panels"].integer());
  std::vector<PathSegment> path;
  for (const auto& s : n["segments"].items()) {
    std::string name = s["chart"].string();
    int chart = -1;
    for (int c = 0; c < cover.size(); ++c)
      if (cover.name(c) == name) chart = c;
    if (chart < 0) s["chart"].fail("unknown chart '" + name + "'");
    std::vector<RationalFunction> comps;
    for (const auto& f : s["map"].items()) comps.push_back(read_function(f, 1));
    if (static_cast<int>(comps.size()) != cover.dim(chart)) s["map"].fail("expected " + std::to_string(cover.dim(chart)) + " components");
    path.push_back({chart, PolyMap(1, std::move(comps))});
  }
  return path;
}

inline Json to_json(const Cover& cover, const std::vector<PathSegment>& path, const QuadratureRule& rule) {
  Json segs = Json::array();
  for (const auto& s : path) {
    Json comps = Json::array();
    for (const auto& f : s.path.components()) comps.push_back(to_json(f));
    segs.push_back({{"chart", cover.name(s.chart)}, {"map", comps}});
  }
  return {{"order", rule.order}, {"panels", rule.panels}, {"segments", segs}};
}

}  // namespace io
}  // namespace simpkit
