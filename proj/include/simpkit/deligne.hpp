#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "simpkit/forms.hpp"

namespace simpkit {

// re + i im in chart coordinates.
struct ComplexPoly {
  Poly re, im;
  int nvars() const { return re.nvars(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  ComplexPoly conj() const { return {re, -im}; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  bool operator==(const ComplexPoly& o) const { return re == o.re && im == o.im; }
  bool operator<(const ComplexPoly& o) const {
    if (!(re == o.re)) return re.terms() < o.re.terms();
    return im.terms() < o.im.terms();
  }
  std::complex<double> eval(const std::vector<double>& x) const { return {re.eval(x), im.eval(x)}; }
  std::string str() const { return "(" + re.str() + ") + i(" + im.str() + ")"; }
};

// Product of phases (P / |P|)^k of complex polynomials P.
class UnitFunction {
 public:
  UnitFunction() = default;
  explicit UnitFunction(int nvars) : nvars_(nvars) {}

  static UnitFunction phase(const ComplexPoly& p, int k = 1) {
    if (p.is_zero()) throw std::domain_error("unit function: zero polynomial has no phase");
    UnitFunction u(p.nvars());
    u.multiply_factor(p, k);
    return u;
  }

  int nvars() const { return nvars_; }
  const std::map<ComplexPoly, int>& factors() const { return factors_; }
  bool is_trivially_one() const { return factors_.empty(); }

  UnitFunction inverse() const {
    UnitFunction u = *this;
    for (auto& [p, k] : u.factors_) k = -k;
    return u;
  }
  friend UnitFunction operator*(UnitFunction a, const UnitFunction& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("unit function: variable count mismatch");
    for (const auto& [p, k] : b.factors_) a.multiply_factor(p, k);
    return a;
  }
  UnitFunction pow(int e) const {
    UnitFunction u(nvars_);
    for (const auto& [p, k] : factors_) u.multiply_factor(p, k * e);
    return u;
  }

  // Composition with a rational map; the real denominator D of P o f is absorbed as P o f * D.
  UnitFunction pullback(const PolyMap& f) const {
    if (f.codomain() != nvars_) throw std::invalid_argument("unit function: map codomain does not match");
    UnitFunction u(f.domain());
    for (const auto& [p, k] : factors_) {
      RationalFunction a = RationalFunction(p.re).compose(f.components());
      RationalFunction b = RationalFunction(p.im).compose(f.components());
      ComplexPoly q;
      if (a.den() == b.den()) {
        q = {a.num() * a.den(), b.num() * a.den()};
      } else {
        Poly both = a.den() * b.den();
        q = {a.num() * b.den() * both, b.num() * a.den() * both};
      }
      if (q.is_zero()) throw std::domain_error("unit function: pullback vanishes identically");
      u.multiply_factor(q, k);
    }
    return u;
  }

  std::complex<double> eval(const std::vector<double>& x) const {
    std::complex<double> z = 1;
    for (const auto& [p, k] : factors_) {
      std::complex<double> v = p.eval(x);
      double r = std::abs(v);
      if (!(r > 0) || !std::isfinite(r)) throw std::domain_error("unit function: phase undefined at the point");
      z *= std::pow(v / r, k);
    }
    return z;
  }

  // (1 / 2 pi i) g^-1 dg in units of 2 pi, i.e. d arg g = sum k (a db - b da) / (a^2 + b^2).
  RationalForm dlog() const {
    RationalForm w(nvars_, 1);
    for (const auto& [p, k] : factors_) {
      RationalFunction a(p.re), b(p.im);
      RationalForm arg = RationalFunction(Poly(nvars_, Rat(1)), p.re * p.re + p.im * p.im) * (a * differential(b) - b * differential(a));
      w += Rat(k) * arg;
    }
    return w;
  }

  // Q with this = Q / |Q|.
  ComplexPoly representative() const {
    ComplexPoly q{Poly(nvars_, Rat(1)), Poly(nvars_)};
    for (const auto& [p, k] : factors_) {
      ComplexPoly base = k > 0 ? p : p.conj();
      for (int e = 0; e < std::abs(k); ++e) q = q * base;
    }
    return q;
  }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [p, k] : factors_) s += (s.empty() ? "" : " * ") + std::string("phase") + p.str() + "^" + std::to_string(k);
    return s;
  }

 private:
  void multiply_factor(const ComplexPoly& p, int k) {
    if (p.nvars() != nvars_) throw std::invalid_argument("unit function: variable count mismatch");
    if (k == 0) return;
    auto [it, fresh] = factors_.try_emplace(p, k);
    if (!fresh && (it->second += k) == 0) factors_.erase(it);
  }

  int nvars_ = 0;
  std::map<ComplexPoly, int> factors_;
};

inline std::string chart_list(const std::vector<int>& ids, const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + (names.empty() ? std::to_string(ids[i]) : names.at(ids[i]));
  return s + ")";
}

struct ChartSpec {
  std::string name;
  int dim = 0;
  std::vector<double> lo, hi;
};

// Intersection of the listed charts in the coordinates of its first chart.
struct Patch {
  std::vector<int> charts;
  std::vector<PolyMap> inclusions;
  std::vector<double> lo, hi;
};

class Cover {
 public:
  static constexpr int max_depth = 4;

  Cover(std::vector<ChartSpec> charts, std::vector<Patch> overlaps) : charts_(std::move(charts)) {
    for (std::size_t c = 0; c < charts_.size(); ++c) {
      auto& spec = charts_[c];
      if (spec.dim < 0) throw std::invalid_argument("cover: chart " + spec.name + " has negative dimension");
      fill_box(spec.lo, spec.hi, spec.dim);
      for (std::size_t d = 0; d < c; ++d)
        if (charts_[d].name == spec.name) throw std::invalid_argument("cover: duplicate chart name " + spec.name);
      int id = static_cast<int>(c);
      patches_.emplace(std::vector<int>{id}, Patch{{id}, {PolyMap::identity(spec.dim)}, spec.lo, spec.hi});
    }
    for (auto& p : overlaps) {
      std::string where = "cover: overlap " + label(p.charts);
      if (p.charts.size() < 2 || static_cast<int>(p.charts.size()) > max_depth) throw std::invalid_argument(where + " must join 2 to 4 charts");
      for (std::size_t i = 0; i < p.charts.size(); ++i) {
        if (p.charts[i] < 0 || p.charts[i] >= size()) throw std::invalid_argument(where + " refers to a missing chart");
        if (i && p.charts[i] <= p.charts[i - 1]) throw std::invalid_argument(where + " must list charts in increasing order");
      }
      if (p.inclusions.size() != p.charts.size()) throw std::invalid_argument(where + " needs one inclusion per chart");
      int d = dim(p.charts[0]);
      for (std::size_t i = 0; i < p.charts.size(); ++i) {
        if (p.inclusions[i].domain() != d || p.inclusions[i].codomain() != dim(p.charts[i]))
          throw std::invalid_argument(where + ": inclusion into " + name(p.charts[i]) + " has the wrong shape");
      }
      for (int v = 0; v < d; ++v)
        if (!(p.inclusions[0][v] == RationalFunction::variable(d, v))) throw std::invalid_argument(where + ": inclusion into its first chart must be the identity");
      fill_box(p.lo, p.hi, d);
      if (!patches_.emplace(p.charts, p).second) throw std::invalid_argument(where + " is listed twice");
    }
    for (const auto& [ids, p] : patches_)
      for (const auto& sub : proper_faces(ids))
        if (sub.size() > 1 && !has(sub)) throw std::invalid_argument("cover: overlap " + label(ids) + " is missing its sub-overlap " + label(sub));
  }

  int size() const { return static_cast<int>(charts_.size()); }
  int dim(int chart) const { return charts_.at(chart).dim; }
  const std::string& name(int chart) const { return charts_.at(chart).name; }
  const std::vector<ChartSpec>& charts() const { return charts_; }
  int index(const std::string& name) const {
    for (int c = 0; c < size(); ++c)
      if (charts_[c].name == name) return c;
    throw std::invalid_argument("cover: unknown chart '" + name + "'");
  }
  std::string label(const std::vector<int>& ids) const {
    std::vector<std::string> names;
    for (const auto& c : charts_) names.push_back(c.name);
    for (int i : ids)
      if (i < 0 || i >= size()) return chart_list(ids, {});
    return chart_list(ids, names);
  }

  bool has(const std::vector<int>& ids) const { return patches_.count(ids) > 0; }
  const Patch& patch(const std::vector<int>& ids) const {
    auto it = patches_.find(ids);
    if (it == patches_.end()) throw std::invalid_argument("cover: missing intersection data for " + label(ids));
    return it->second;
  }
  int patch_dim(const std::vector<int>& ids) const { return dim(patch(ids).charts[0]); }
  std::vector<std::vector<int>> patches(int cech) const {
    std::vector<std::vector<int>> out;
    for (const auto& [ids, p] : patches_)
      if (static_cast<int>(ids.size()) == cech + 1) out.push_back(ids);
    return out;
  }
  const std::map<std::vector<int>, Patch>& all_patches() const { return patches_; }

  // Coordinates of `big` mapped into those of `small`, for small a sub-overlap of big.
  PolyMap restriction(const std::vector<int>& big, const std::vector<int>& small) const {
    const Patch& p = patch(big);
    auto it = std::find(p.charts.begin(), p.charts.end(), small.at(0));
    if (it == p.charts.end()) throw std::invalid_argument("cover: " + label(small) + " is not contained in " + label(big));
    return p.inclusions[it - p.charts.begin()];
  }

  // Exact check that inclusions commute through every sub-overlap.
  std::vector<std::string> consistency_failures() const {
    std::vector<std::string> out;
    for (const auto& [ids, p] : patches_) {
      for (const auto& sub : proper_faces(ids)) {
        if (sub.size() < 2) continue;
        PolyMap into_sub = restriction(ids, sub);
        const Patch& q = patch(sub);
        for (std::size_t i = 0; i < sub.size(); ++i) {
          PolyMap through = q.inclusions[i].after(into_sub), direct = restriction(ids, {sub[i]});
          for (int v = 0; v < through.codomain(); ++v)
            if (!(through[v] == direct[v])) {
              out.push_back(label(ids) + " -> " + label(sub) + " -> " + name(sub[i]));
              break;
            }
        }
      }
    }
    return out;
  }

  static std::vector<std::vector<int>> proper_faces(const std::vector<int>& ids) {
    std::vector<std::vector<int>> out;
    int n = static_cast<int>(ids.size());
    for (int mask = 1; mask + 1 < (1 << n); ++mask) {
      std::vector<int> sub;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) sub.push_back(ids[i]);
      out.push_back(sub);
    }
    return out;
  }

 private:
  static void fill_box(std::vector<double>& lo, std::vector<double>& hi, int d) {
    if (lo.empty()) lo.assign(d, -2.0);
    if (hi.empty()) hi.assign(d, 2.0);
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) throw std::invalid_argument("cover: sampling box has the wrong dimension");
  }

  std::vector<ChartSpec> charts_;
  std::map<std::vector<int>, Patch> patches_;
};

inline std::vector<int> drop(const std::vector<int>& ids, int k) {
  std::vector<int> r = ids;
  r.erase(r.begin() + k);
  return r;
}

// Cech p-cochain with values in q-forms on the overlaps of p+1 charts.
struct FormCochain {
  int cech = 0, degree = 0;
  std::map<std::vector<int>, RationalForm> values;
};

// Cech p-cochain with values in unit functions.
struct UnitCochain {
  int cech = 0;
  std::map<std::vector<int>, UnitFunction> values;
};

namespace detail {

template <class Map>
const typename Map::mapped_type& value_on(const Cover& cover, const Map& values, const std::vector<int>& ids) {
  auto it = values.find(ids);
  if (it == values.end()) throw std::invalid_argument("cochain has no value on " + cover.label(ids));
  return it->second;
}

}  // namespace detail

inline FormCochain cech_delta(const Cover& cover, const FormCochain& c) {
  FormCochain r{c.cech + 1, c.degree, {}};
  for (const auto& ids : cover.patches(c.cech + 1)) {
    RationalForm sum(cover.patch_dim(ids), c.degree);
    for (int k = 0; k <= c.cech + 1; ++k) {
      auto face = drop(ids, k);
      RationalForm term = pullback(detail::value_on(cover, c.values, face), cover.restriction(ids, face));
      sum += k % 2 ? -term : term;
    }
    r.values.emplace(ids, std::move(sum));
  }
  return r;
}

inline UnitCochain cech_delta(const Cover& cover, const UnitCochain& c) {
  UnitCochain r{c.cech + 1, {}};
  for (const auto& ids : cover.patches(c.cech + 1)) {
    UnitFunction prod(cover.patch_dim(ids));
    for (int k = 0; k <= c.cech + 1; ++k) {
      auto face = drop(ids, k);
      UnitFunction term = detail::value_on(cover, c.values, face).pullback(cover.restriction(ids, face));
      prod = prod * (k % 2 ? term.inverse() : term);
    }
    r.values.emplace(ids, std::move(prod));
  }
  return r;
}

inline FormCochain exterior_d(const FormCochain& c) {
  FormCochain r{c.cech, c.degree + 1, {}};
  for (const auto& [ids, w] : c.values) r.values.emplace(ids, exterior_d(w));
  return r;
}

inline FormCochain dlog(const UnitCochain& c) {
  FormCochain r{c.cech, 1, {}};
  for (const auto& [ids, u] : c.values) r.values.emplace(ids, u.dlog());
  return r;
}

inline FormCochain operator+(FormCochain a, const FormCochain& b) {
  if (a.cech != b.cech || a.degree != b.degree) throw std::invalid_argument("cochain bidegree mismatch");
  for (const auto& [ids, w] : b.values) {
    auto [it, fresh] = a.values.try_emplace(ids, w);
    if (!fresh) it->second += w;
  }
  return a;
}

inline FormCochain operator-(const FormCochain& a) {
  FormCochain r = a;
  for (auto& [ids, w] : r.values) w = -w;
  return r;
}

inline UnitCochain operator*(UnitCochain a, const UnitCochain& b) {
  if (a.cech != b.cech) throw std::invalid_argument("cochain degree mismatch");
  for (const auto& [ids, u] : b.values) {
    auto [it, fresh] = a.values.try_emplace(ids, u);
    if (!fresh) it->second = it->second * u;
  }
  return a;
}

// Element of total degree p in the truncated complex U(1) -> Omega^1 -> ... -> Omega^top:
// unit in bidegree (p, 0), forms[q-1] in bidegree (p-q, q) for 1 <= q <= min(p, top).
struct DeligneCochain {
  int degree = 0, top = 1;
  UnitCochain unit;
  std::vector<FormCochain> forms;

  const FormCochain& form(int q) const { return forms.at(q - 1); }
};

inline DeligneCochain zero_cochain(const Cover& cover, int degree, int top) {
  DeligneCochain c{degree, top, {degree, {}}, {}};
  for (const auto& ids : cover.patches(degree)) c.unit.values.emplace(ids, UnitFunction(cover.patch_dim(ids)));
  for (int q = 1; q <= std::min(degree, top); ++q) {
    FormCochain f{degree - q, q, {}};
    for (const auto& ids : cover.patches(degree - q)) f.values.emplace(ids, RationalForm(cover.patch_dim(ids), q));
    c.forms.push_back(std::move(f));
  }
  return c;
}

// D = d + (-1)^q delta on bidegree (p, q), with d = dlog on the unit row.
inline DeligneCochain total_differential(const Cover& cover, const DeligneCochain& c) {
  if (static_cast<int>(c.forms.size()) != std::min(c.degree, c.top)) throw std::invalid_argument("Deligne cochain has the wrong number of form components");
  DeligneCochain r{c.degree + 1, c.top, cech_delta(cover, c.unit), {}};
  for (int q = 1; q <= std::min(c.degree + 1, c.top); ++q) {
    FormCochain slot = q == 1 ? dlog(c.unit) : exterior_d(c.form(q - 1));
    if (q <= c.degree) {
      FormCochain delta = cech_delta(cover, c.form(q));
      slot = slot + (q % 2 ? -delta : delta);
    }
    r.forms.push_back(std::move(slot));
  }
  return r;
}

// c + D(h) for a degree-0 unit cochain h.
inline DeligneCochain gauge_transform(const Cover& cover, const DeligneCochain& c, const UnitCochain& h) {
  if (h.cech != 0 || c.degree != 1) throw std::invalid_argument("gauge_transform: needs a degree-1 cochain and a 0-cochain of units");
  DeligneCochain g{0, c.top, h, {}};
  DeligneCochain dh = total_differential(cover, g);
  DeligneCochain r = c;
  r.unit = r.unit * dh.unit;
  r.forms[0] = r.forms[0] + dh.forms[0];
  return r;
}

struct CheckOptions {
  enum class Mode { automatic, exact, sampled };
  Mode mode = Mode::automatic;
  int samples = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct IdentityCheck {
  std::string name;
  std::string patch;
  bool ok = true;
  std::string mode;
  double residual = 0;
  std::vector<double> witness;
};

struct CocycleReport {
  std::vector<IdentityCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
  }
  std::vector<IdentityCheck> failures() const {
    std::vector<IdentityCheck> out;
    for (const auto& c : checks)
      if (!c.ok) out.push_back(c);
    return out;
  }
};

namespace detail {

inline double radical_inverse(std::uint64_t i, int base) {
  double f = 1, r = 0;
  for (; i; i /= base) {
    f /= base;
    r += f * static_cast<double>(i % base);
  }
  return r;
}

inline std::vector<std::vector<double>> halton_points(const Patch& p, int count, std::uint64_t seed) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<std::vector<double>> pts;
  for (int s = 0; s < count; ++s) {
    std::vector<double> x(p.lo.size());
    for (std::size_t v = 0; v < x.size(); ++v)
      x[v] = p.lo[v] + (p.hi[v] - p.lo[v]) * radical_inverse(seed * static_cast<std::uint64_t>(count) + s + 1, primes[v % 8]);
    pts.push_back(std::move(x));
  }
  return pts;
}

inline std::vector<Point> rational_probes(const Patch& p, int count, std::uint64_t seed) {
  std::vector<Point> out;
  for (const auto& x : halton_points(p, count, seed + 7919)) {
    Point q;
    for (double v : x) {
      Rat r(Int(std::lround(v * 64)), Int(64));
      r.canonicalize();
      q.push_back(r);
    }
    out.push_back(std::move(q));
  }
  return out;
}

inline double form_size(const RationalForm& w, const std::vector<double>& x) {
  double m = 0;
  for (const auto& [idx, f] : w.terms()) {
    double v = f.eval(x);
    if (!std::isfinite(v)) return std::nan("");
    m = std::max(m, std::abs(v));
  }
  return m;
}

// Largest sampled residual and where it occurs; points at poles are skipped.
template <class Residual>
std::pair<double, std::vector<double>> sample_residual(const Patch& p, const CheckOptions& opt, Residual&& residual) {
  double worst = 0;
  std::vector<double> at;
  for (const auto& x : halton_points(p, opt.samples, opt.seed)) {
    double r;
    try {
      r = residual(x);
    } catch (const std::domain_error&) {
      continue;
    }
    if (!std::isfinite(r)) continue;
    if (r > worst || at.empty()) {
      worst = r;
      at = x;
    }
  }
  return {worst, at};
}

inline std::optional<bool> exactly_one(const UnitFunction& u, const Patch& p, std::uint64_t seed) {
  ComplexPoly q = u.representative();
  if (!q.im.is_zero()) return false;
  if (q.re.is_constant()) return q.re.constant_value() > 0;
  bool seen = false;
  for (const auto& x : rational_probes(p, 16, seed)) {
    Rat v = q.re.eval(x);
    if (v < 0) return false;
    seen = seen || v > 0;
  }
  if (!seen) return std::nullopt;
  return true;
}

inline IdentityCheck check_unit(const std::string& name, const Cover& cover, const std::vector<int>& ids, const UnitFunction& u, const CheckOptions& opt) {
  IdentityCheck c{name, cover.label(ids), true, "exact", 0, {}};
  const Patch& p = cover.patch(ids);
  auto distance = [&](const std::vector<double>& x) { return std::abs(u.eval(x) - 1.0); };
  if (opt.mode != CheckOptions::Mode::sampled) {
    try {
      if (auto exact = exactly_one(u, p, opt.seed)) {
        c.ok = *exact;
        if (!c.ok) std::tie(c.residual, c.witness) = sample_residual(p, opt, distance);
        return c;
      }
    } catch (const std::exception&) {
      if (opt.mode == CheckOptions::Mode::exact) throw;
    }
  }
  c.mode = "sampled";
  std::tie(c.residual, c.witness) = sample_residual(p, opt, distance);
  c.ok = c.residual <= opt.tol;
  return c;
}

inline IdentityCheck check_form(const std::string& name, const Cover& cover, const std::vector<int>& ids, const RationalForm& w, const CheckOptions& opt) {
  IdentityCheck c{name, cover.label(ids), true, "exact", 0, {}};
  const Patch& p = cover.patch(ids);
  auto size = [&](const std::vector<double>& x) { return form_size(w, x); };
  if (opt.mode != CheckOptions::Mode::sampled) {
    c.ok = w.is_zero();
    if (!c.ok) std::tie(c.residual, c.witness) = sample_residual(p, opt, size);
    return c;
  }
  c.mode = "sampled";
  std::tie(c.residual, c.witness) = sample_residual(p, opt, size);
  c.ok = c.residual <= opt.tol;
  return c;
}

inline std::string slot_name(int degree, int cech, int q) {
  if (degree == 1 && q == 0) return "g_jk g_ij = g_ik";
  if (degree == 1 && q == 1) return "A_j - A_i = dlog g_ij";
  if (degree == 2 && q == 0) return "g_jkl g_ikl^-1 g_ijl g_ijk^-1 = 1";
  if (degree == 2 && q == 1) return "A_jk - A_ik + A_ij = dlog g_ijk";
  if (degree == 2 && q == 2) return "dA_ij = B_i - B_j";
  return "D slot (" + std::to_string(cech) + "," + std::to_string(q) + ") = 0";
}

}  // namespace detail

// Every component of D c must vanish; each overlap and bidegree is one reported identity.
inline CocycleReport verify_cocycle(const Cover& cover, const DeligneCochain& c, const CheckOptions& opt = {}) {
  DeligneCochain d = total_differential(cover, c);
  CocycleReport report;
  for (const auto& [ids, u] : d.unit.values) report.checks.push_back(detail::check_unit(detail::slot_name(c.degree, d.unit.cech, 0), cover, ids, u, opt));
  for (const auto& f : d.forms)
    for (const auto& [ids, w] : f.values) report.checks.push_back(detail::check_form(detail::slot_name(c.degree, f.cech, f.degree), cover, ids, w, opt));
  return report;
}

inline CocycleReport verify_cocycle_deg1(const Cover& cover, const DeligneCochain& c, const CheckOptions& opt = {}) {
  if (c.degree != 1) throw std::invalid_argument("verify_cocycle_deg1: cochain has degree " + std::to_string(c.degree));
  return verify_cocycle(cover, c, opt);
}

inline CocycleReport verify_cocycle_deg2(const Cover& cover, const DeligneCochain& c, const CheckOptions& opt = {}) {
  if (c.degree != 2) throw std::invalid_argument("verify_cocycle_deg2: cochain has degree " + std::to_string(c.degree));
  return verify_cocycle(cover, c, opt);
}

struct Curvature {
  std::map<int, RationalForm> forms;
  bool consistent = true;
};

// F_i = dA_i, with F_i = F_j checked on every double overlap.
inline Curvature curvature(const Cover& cover, const DeligneCochain& c, const CheckOptions& opt = {}) {
  if (c.degree != 1) throw std::invalid_argument("curvature: needs a degree-1 cocycle");
  if (!verify_cocycle(cover, c, opt).ok()) throw std::invalid_argument("curvature: input is not a cocycle");
  Curvature r;
  FormCochain f = exterior_d(c.form(1));
  for (const auto& [ids, w] : f.values) r.forms.emplace(ids.at(0), w);
  FormCochain jump = cech_delta(cover, f);
  for (const auto& [ids, w] : jump.values) r.consistent = r.consistent && w.is_zero();
  return r;
}

struct QuadratureRule {
  int order = 10;
  int panels = 16;
};

namespace detail {

template <class F>
double gauss_legendre(F&& f, double a, double b, int order) {
  switch (order) {
    case 7: return boost::math::quadrature::gauss<double, 7>::integrate(f, a, b);
    case 10: return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
    case 15: return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
    case 20: return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
    case 25: return boost::math::quadrature::gauss<double, 25>::integrate(f, a, b);
    case 30: return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
    default: throw std::invalid_argument("quadrature order must be one of 7, 10, 15, 20, 25, 30");
  }
}

template <class F>
double composite(F&& f, double a, double b, const QuadratureRule& rule) {
  if (rule.panels < 1) throw std::invalid_argument("quadrature needs at least one panel");
  double h = (b - a) / rule.panels, total = 0;
  for (int k = 0; k < rule.panels; ++k) total += gauss_legendre(f, a + k * h, a + (k + 1) * h, rule.order);
  return total;
}

inline double checked(double v) {
  if (!std::isfinite(v)) throw std::domain_error("pole on the integration domain");
  return v;
}

inline const UnitFunction& transition(const Cover& cover, const DeligneCochain& c, int i, int j, UnitFunction& scratch) {
  std::vector<int> ids{std::min(i, j), std::max(i, j)};
  if (!cover.has(ids)) throw std::invalid_argument("holonomy: charts " + cover.label(ids) + " do not overlap");
  const UnitFunction& g = value_on(cover, c.unit.values, ids);
  if (i < j) return g;
  scratch = g.inverse();
  return scratch;
}

}  // namespace detail

// A path piece in one chart, parametrized by t in [0, 1].
struct PathSegment {
  int chart;
  PolyMap path;
};

inline double segment_integral(const RationalForm& a, const PolyMap& path, const QuadratureRule& rule) {
  if (path.domain() != 1) throw std::invalid_argument("path segments must be parametrized by one variable");
  RationalForm pulled = pullback(a, path);
  RationalFunction f = pulled.coefficient({0});
  return detail::composite([&](double t) { return detail::checked(f.eval(std::vector<double>{t})); }, 0.0, 1.0, rule);
}

// prod over segments of exp(i int A_chart) times g_ij at each chart change, in units where F integrates to 2 pi k.
inline std::complex<double> holonomy(const Cover& cover, const DeligneCochain& c, const std::vector<PathSegment>& path, const QuadratureRule& rule = {}) {
  if (c.degree != 1) throw std::invalid_argument("holonomy: needs a degree-1 cocycle");
  if (path.empty()) throw std::invalid_argument("holonomy: empty path");
  std::complex<double> h = 1;
  for (std::size_t s = 0; s < path.size(); ++s) {
    const auto& seg = path[s];
    if (seg.chart < 0 || seg.chart >= cover.size()) throw std::invalid_argument("holonomy: segment " + std::to_string(s) + " names a missing chart");
    if (seg.path.codomain() != cover.dim(seg.chart)) throw std::invalid_argument("holonomy: segment " + std::to_string(s) + " has the wrong dimension");
    const RationalForm& a = detail::value_on(cover, c.form(1).values, {seg.chart});
    h *= std::polar(1.0, segment_integral(a, seg.path, rule));
    const auto& next = path[(s + 1) % path.size()];
    auto end = seg.path.eval(std::vector<double>{1.0}), start = next.path.eval(std::vector<double>{0.0});
    if (next.chart == seg.chart) {
      for (std::size_t v = 0; v < end.size(); ++v)
        if (std::abs(end[v] - start[v]) > 1e-9) throw std::invalid_argument("holonomy: segments " + std::to_string(s) + " and the next do not meet");
      continue;
    }
    int lo = std::min(seg.chart, next.chart);
    const auto& at = lo == seg.chart ? end : start;
    const auto& other = lo == seg.chart ? start : end;
    std::vector<int> ids{lo, std::max(seg.chart, next.chart)};
    if (!cover.has(ids)) throw std::invalid_argument("holonomy: charts " + cover.label(ids) + " do not overlap");
    auto mapped = cover.restriction(ids, {lo == seg.chart ? next.chart : seg.chart}).eval(at);
    for (std::size_t v = 0; v < mapped.size(); ++v)
      if (!(std::abs(mapped[v] - other[v]) <= 1e-9)) throw std::invalid_argument("holonomy: transition point after segment " + std::to_string(s) + " is outside the overlap");
    UnitFunction scratch;
    h *= detail::transition(cover, c, seg.chart, next.chart, scratch).eval(at);
  }
  return h;
}

// Integral of a 2-form over the image of [0,1]^2 under a parametrization, tensor Gauss-Legendre.
inline double surface_integral(const RationalForm& f, const PolyMap& square, const QuadratureRule& rule = {}) {
  if (square.domain() != 2 || f.degree() != 2) throw std::invalid_argument("surface_integral: needs a 2-form and a map from the unit square");
  RationalFunction h = pullback(f, square).coefficient({0, 1});
  return detail::composite(
      [&](double s) {
        return detail::composite([&](double t) { return detail::checked(h.eval(std::vector<double>{s, t})); }, 0.0, 1.0, rule);
      },
      0.0, 1.0, rule);
}

// Counterclockwise boundary of the square with corner (x, y) and side h, as four segments in one chart.
inline std::vector<PathSegment> square_boundary(int chart, int dim, const Point& corner, const Rat& side) {
  if (dim != 2 || corner.size() != 2) throw std::invalid_argument("square_boundary: needs a 2-dimensional chart");
  auto t = RationalFunction::variable(1, 0);
  auto c = [](const Rat& v) { return RationalFunction(1, v); };
  Rat x = corner[0], y = corner[1];
  return {{chart, PolyMap(1, {c(x) + t * side, c(y)})},
          {chart, PolyMap(1, {c(x + side), c(y) + t * side})},
          {chart, PolyMap(1, {c(x + side) - t * side, c(y + side)})},
          {chart, PolyMap(1, {c(x), c(y + side) - t * side})}};
}

// |hol(boundary of the square) - exp(i int F)| for a square inside one chart.
inline double stokes_defect(const Cover& cover, const DeligneCochain& c, int chart, const Point& corner, const Rat& side, const QuadratureRule& rule = {}) {
  auto loop = square_boundary(chart, cover.dim(chart), corner, side);
  auto h = holonomy(cover, c, loop, rule);
  RationalForm f = exterior_d(detail::value_on(cover, c.form(1).values, {chart}));
  auto t = RationalFunction::variable(2, 0), s = RationalFunction::variable(2, 1);
  PolyMap square(2, {RationalFunction(2, corner[0]) + t * side, RationalFunction(2, corner[1]) + s * side});
  return std::abs(h - std::polar(1.0, surface_integral(f, square, rule)));
}

struct CircleLoop {
  std::vector<int> overlap;
  std::vector<double> center;
  double radius = 1;
};

struct ChernResult {
  long value = 0;
  double raw = 0;
  double distance = 0;
  bool flagged = false;
};

// -(1/2 pi) times the winding of g_ij around a counterclockwise circle in the overlap, periodic trapezoid rule.
inline ChernResult chern_number(const Cover& cover, const DeligneCochain& c, const CircleLoop& loop, int samples = 256) {
  if (c.degree != 1) throw std::invalid_argument("chern_number: needs a degree-1 cocycle");
  if (loop.overlap.size() != 2) throw std::invalid_argument("chern_number: loop must lie in a double overlap");
  if (cover.patch_dim(loop.overlap) != 2 || loop.center.size() != 2) throw std::invalid_argument("chern_number: loop must lie in a 2-dimensional overlap");
  if (samples < 1) throw std::invalid_argument("chern_number: needs at least one sample");
  RationalForm w = detail::value_on(cover, c.unit.values, loop.overlap).dlog();
  const double tau = 2 * std::numbers::pi;
  double total = 0;
  for (int s = 0; s < samples; ++s) {
    double t = tau * s / samples;
    std::vector<double> x{loop.center[0] + loop.radius * std::cos(t), loop.center[1] + loop.radius * std::sin(t)};
    std::vector<double> v{-loop.radius * std::sin(t), loop.radius * std::cos(t)};
    total += detail::checked(evaluate(w, x, {v}));
  }
  ChernResult r;
  r.raw = -total / samples;
  r.value = std::lround(r.raw);
  r.distance = std::abs(r.raw - static_cast<double>(r.value));
  r.flagged = r.distance > 0.01;
  return r;
}

struct CoverWithCochain {
  Cover cover;
  DeligneCochain cochain;
};

// Two stereographic charts of the sphere; the overlap is the punctured plane in N coordinates,
// w = 1/z taking it to S. A_N = k (x dy - y dx) / (1 + r^2), g_NS = (z/|z|)^-k.
inline CoverWithCochain monopole(int k) {
  auto x = RationalFunction::variable(2, 0), y = RationalFunction::variable(2, 1);
  auto one = RationalFunction(2, Rat(1));
  auto r2 = x * x + y * y;
  PolyMap to_south(2, {x / r2, -y / r2});
  Cover cover({{"N", 2, {}, {}}, {"S", 2, {}, {}}}, {{{0, 1}, {PolyMap::identity(2), to_south}, {}, {}}});
  auto dx = RationalForm::dx(2, 0), dy = RationalForm::dx(2, 1);
  RationalForm a = Rat(k) * ((one / (one + r2)) * (x * dy - y * dx));
  DeligneCochain c{1, 1, {1, {}}, {{0, 1, {}}}};
  c.unit.values.emplace(std::vector<int>{0, 1}, UnitFunction::phase({Poly::variable(2, 0), Poly::variable(2, 1)}, -k));
  c.forms[0].values.emplace(std::vector<int>{0}, a);
  c.forms[0].values.emplace(std::vector<int>{1}, a);
  return {std::move(cover), std::move(c)};
}

// Four quarter arcs of the unit circle in N coordinates, alternating between the charts N and S.
inline std::vector<PathSegment> equator_path(const Cover& monopole_cover) {
  auto t = RationalFunction::variable(1, 0);
  auto one = RationalFunction(1, Rat(1));
  RationalFunction c = (one - t * t) / (one + t * t), s = (Rat(2) * t) / (one + t * t);
  std::vector<PolyMap> arcs{PolyMap(1, {c, s}), PolyMap(1, {-s, c}), PolyMap(1, {-c, -s}), PolyMap(1, {s, -c})};
  std::vector<PathSegment> path;
  for (int q = 0; q < 4; ++q) {
    if (q % 2 == 0)
      path.push_back({0, arcs[q]});
    else
      path.push_back({1, monopole_cover.restriction({0, 1}, {1}).after(arcs[q])});
  }
  return path;
}

inline UnitFunction random_unit(Rng& rng, int nvars) {
  UnitFunction u(nvars);
  int factors = static_cast<int>(rng.uniform(1, 2));
  for (int f = 0; f < factors; ++f) {
    ComplexPoly p{Poly(nvars, Rat(static_cast<long>(rng.uniform(3, 5)))), Poly(nvars, rng.rational(2, 1))};
    for (int v = 0; v < nvars; ++v) {
      p.re += Poly::variable(nvars, v) * rng.rational(1, 2);
      p.im += Poly::variable(nvars, v) * rng.rational(1, 2);
    }
    u = u * UnitFunction::phase(p, rng.uniform(0, 1) ? 1 : -1);
  }
  return u;
}

inline DeligneCochain random_cochain(const Cover& cover, int degree, int top, Rng& rng, bool rational = false) {
  DeligneCochain c = zero_cochain(cover, degree, top);
  for (auto& [ids, u] : c.unit.values) u = random_unit(rng, cover.patch_dim(ids));
  for (auto& f : c.forms)
    for (auto& [ids, w] : f.values) w = random_form(rng, cover.patch_dim(ids), f.degree, rational, 2);
  return c;
}

inline UnitCochain random_gauge(const Cover& cover, Rng& rng) {
  UnitCochain h{0, {}};
  for (const auto& ids : cover.patches(0)) h.values.emplace(ids, random_unit(rng, cover.patch_dim(ids)));
  return h;
}

namespace detail {

inline std::vector<std::vector<Rat>> inverse(std::vector<std::vector<Rat>> a) {
  int n = static_cast<int>(a.size());
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw std::invalid_argument("singular chart transition");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rat s = 1 / a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] *= s;
      inv[c][j] *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace detail

// Charts of one region of Q^dim related by random affine changes of coordinates; every subset of
// up to four charts overlaps.
inline Cover affine_cover(int charts, int dim, Rng& rng) {
  std::vector<std::vector<std::vector<Rat>>> m(charts);
  std::vector<std::vector<Rat>> shift(charts);
  for (int c = 0; c < charts; ++c) {
    m[c].assign(dim, std::vector<Rat>(dim, Rat(0)));
    for (int i = 0; i < dim; ++i) {
      m[c][i][i] = rng.uniform(0, 1) ? 1 : -1;
      for (int j = i + 1; j < dim; ++j) m[c][i][j] = Rat(static_cast<long>(rng.uniform(-1, 1)));
      shift[c].push_back(rng.rational(2, 2));
    }
  }
  // chart a coordinates -> chart b coordinates: y_b = M_b M_a^-1 (y_a - t_a) + t_b.
  auto transition = [&](int a, int b) {
    auto inv = detail::inverse(m[a]);
    std::vector<std::vector<Rat>> lin(dim, std::vector<Rat>(dim, Rat(0)));
    std::vector<Rat> off = shift[b];
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) lin[i][j] += m[b][i][k] * inv[k][j];
        off[i] -= lin[i][j] * shift[a][j];
      }
    return PolyMap::affine(lin, off);
  };
  std::vector<ChartSpec> specs;
  for (int c = 0; c < charts; ++c) specs.push_back({"U" + std::to_string(c), dim, {}, {}});
  std::vector<Patch> overlaps;
  for (int mask = 1; mask < (1 << charts); ++mask) {
    std::vector<int> ids;
    for (int c = 0; c < charts; ++c)
      if (mask >> c & 1) ids.push_back(c);
    if (ids.size() < 2 || static_cast<int>(ids.size()) > Cover::max_depth) continue;
    Patch p{ids, {}, {}, {}};
    for (int c : ids) p.inclusions.push_back(c == ids[0] ? PolyMap::identity(dim) : transition(ids[0], c));
    overlaps.push_back(std::move(p));
  }
  return Cover(std::move(specs), std::move(overlaps));
}

}  // namespace simpkit
