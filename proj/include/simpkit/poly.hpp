#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simpkit/rational.hpp"

namespace simpkit {

using Monomial = std::vector<int>;

// Multivariate polynomial over Q, expanded, terms kept in lex order (variable 0 most significant).
class Poly {
 public:
  using Terms = std::map<Monomial, Rat>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  Poly(int nvars, const Rat& c) : nvars_(nvars) {
    if (c != 0) terms_.emplace(Monomial(nvars, 0), c);
  }

  static Poly variable(int nvars, int i) {
    Poly p(nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.terms_.emplace(std::move(m), Rat(1));
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total(terms_.begin()->first) == 0);
  }
  Rat constant_value() const {
    auto it = terms_.find(Monomial(nvars_, 0));
    return it == terms_.end() ? Rat(0) : it->second;
  }
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const Rat& leading_coefficient() const { return terms_.rbegin()->second; }

  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int degree(int var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total(m));
    return d;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Rat& s) {
    if (s == 0) terms_.clear();
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rat& s) { return a *= s; }
  friend Poly operator*(const Rat& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check(b);
    Poly r(a.nvars_);
    Monomial m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Poly pow(int e) const {
    Poly r(nvars_, Rat(1)), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return r;
  }

  Poly derivative(int var) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d[var] -= 1;
      r.add_term(d, c * m[var]);
    }
    return r;
  }

  template <class T>
  T eval(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("Poly::eval: arity mismatch");
    std::vector<std::vector<T>> powers(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      powers[i].push_back(T(1));
      for (int e = 1, d = degree(i); e <= d; ++e) powers[i].push_back(powers[i].back() * x[i]);
    }
    T sum(0);
    for (const auto& [m, c] : terms_) {
      T t = convert<T>(c);
      for (int i = 0; i < nvars_; ++i)
        if (m[i]) t *= powers[i][m[i]];
      sum += t;
    }
    return sum;
  }
  Rat eval(const std::vector<Rat>& x) const { return eval<Rat>(std::span<const Rat>(x)); }
  double eval(const std::vector<double>& x) const { return eval<double>(std::span<const double>(x)); }

  // Substitute polynomials for every variable.
  Poly substitute(const std::vector<Poly>& images) const {
    if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("Poly::substitute: arity mismatch");
    int target = images.empty() ? 0 : images[0].nvars();
    std::vector<std::vector<Poly>> powers(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      powers[i].emplace_back(target, Rat(1));
      for (int e = 1, d = degree(i); e <= d; ++e) powers[i].push_back(powers[i].back() * images[i]);
    }
    Poly r(target);
    for (const auto& [m, c] : terms_) {
      Poly t(target, c);
      for (int i = 0; i < nvars_; ++i)
        if (m[i]) t *= powers[i][m[i]];
      r += t;
    }
    return r;
  }

  // Re-embed into a ring of `nvars` variables; variable i goes to slot placement[i].
  Poly relabel(int nvars, const std::vector<int>& placement) const {
    Poly r(nvars);
    for (const auto& [m, c] : terms_) {
      Monomial n(nvars, 0);
      for (int i = 0; i < nvars_; ++i) n[placement[i]] += m[i];
      r.add_term(n, c);
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += it->second.get_str();
      for (int i = 0; i < nvars_; ++i)
        if (it->first[i]) s += "*x" + std::to_string(i) + (it->first[i] > 1 ? "^" + std::to_string(it->first[i]) : "");
    }
    return s;
  }

 private:
  static int total(const Monomial& m) {
    int t = 0;
    for (int e : m) t += e;
    return t;
  }
  void check(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Poly: variable count mismatch");
  }
  template <class T>
  static T convert(const Rat& c) {
    if constexpr (std::is_same_v<T, Rat>)
      return c;
    else
      return T(c.get_d());
  }

  int nvars_ = 0;
  Terms terms_;
};

inline Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p * Rat(1 / p.leading_coefficient());
}

// Exact quotient a / b, or nothing when b does not divide a.
inline std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
  Poly q(a.nvars()), r = a;
  const Monomial& lb = b.leading_monomial();
  const Rat& cb = b.leading_coefficient();
  while (!r.is_zero()) {
    Monomial m = r.leading_monomial();
    for (int i = 0; i < a.nvars(); ++i) {
      m[i] -= lb[i];
      if (m[i] < 0) return std::nullopt;
    }
    Poly t(a.nvars());
    t.add_term(m, r.leading_coefficient() / cb);
    q += t;
    r -= t * b;
  }
  return q;
}

namespace detail {

inline std::vector<Poly> coefficients_in(const Poly& p, int v) {
  std::vector<Poly> c(p.degree(v) + 1, Poly(p.nvars()));
  for (const auto& [m, a] : p.terms()) {
    Monomial rest = m;
    rest[v] = 0;
    c[m[v]].add_term(rest, a);
  }
  return c;
}

inline int lowest_variable(const Poly& p) {
  int v = p.nvars();
  for (const auto& [m, c] : p.terms())
    for (int i = 0; i < v; ++i)
      if (m[i] > 0) {
        v = i;
        break;
      }
  return v;
}

// Scalar multiple with coprime integer coefficients and positive leading coefficient.
inline Poly numeric_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Int num = 0, den = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  Rat scale(den, num);
  if (p.leading_coefficient() < 0) scale = -scale;
  return p * scale;
}

inline Poly pseudo_remainder(Poly r, const Poly& b, int v) {
  int db = b.degree(v);
  Poly lcb = coefficients_in(b, v)[db];
  while (!r.is_zero() && r.degree(v) >= db) {
    int dr = r.degree(v);
    Poly lcr = coefficients_in(r, v)[dr];
    Monomial shift(r.nvars(), 0);
    shift[v] = dr - db;
    Poly xs(r.nvars());
    xs.add_term(shift, Rat(1));
    r = numeric_primitive(lcb * r - lcr * xs * b);
  }
  return r;
}

}  // namespace detail

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly content_in(const Poly& p, int v) {
  Poly g(p.nvars());
  for (const auto& c : coefficients_in(p, v)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

inline Poly primitive_in(const Poly& p, int v) {
  if (p.is_zero()) return p;
  return *exact_divide(p, content_in(p, v));
}

// Univariate images in each shared variable, at points keeping both leading coefficients alive.
// Coprime images in every variable certify a constant gcd.
inline bool coprime_by_images(const Poly& a, const Poly& b) {
  int n = a.nvars(), live = 0;
  for (int v = 0; v < n; ++v) live += a.degree(v) > 0 || b.degree(v) > 0;
  if (live < 2) return false;
  for (int v = 0; v < n; ++v) {
    int da = a.degree(v), db = b.degree(v);
    if (da == 0 || db == 0) continue;
    Poly la = coefficients_in(a, v)[da], lb = coefficients_in(b, v)[db];
    bool certified = false;
    for (int attempt = 0; attempt < 4 && !certified; ++attempt) {
      std::vector<Rat> point(n);
      for (int i = 0; i < n; ++i) point[i] = Rat(3 + 7 * attempt + 2 * i + (i * i + attempt) % 5, 1 + (i + attempt) % 3);
      if (la.eval(point) == 0 || lb.eval(point) == 0) continue;
      std::vector<Poly> images(n);
      for (int i = 0; i < n; ++i) images[i] = i == v ? Poly::variable(n, v) : Poly(n, point[i]);
      if (!gcd(a.substitute(images), b.substitute(images)).is_constant()) return false;
      certified = true;
    }
    if (!certified) return false;
  }
  return true;
}

inline std::vector<int> live_variables(const Poly& a, const Poly& b) {
  std::vector<int> live;
  for (int v = 0; v < a.nvars(); ++v)
    if (a.degree(v) > 0 || b.degree(v) > 0) live.push_back(v);
  return live;
}

// Coefficients of p viewed as a polynomial in every variable except y, each coefficient a polynomial in y.
inline std::map<Monomial, Poly> split_off(const Poly& p, int y) {
  std::map<Monomial, Poly> parts;
  for (const auto& [m, c] : p.terms()) {
    Monomial x = m, ym(p.nvars(), 0);
    ym[y] = x[y];
    x[y] = 0;
    parts.try_emplace(x, Poly(p.nvars())).first->second.add_term(ym, c);
  }
  return parts;
}

inline Poly content_off(const Poly& p, int y) {
  Poly g(p.nvars());
  for (const auto& [x, c] : split_off(p, y)) {
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

inline Poly fix_variable(const Poly& p, int y, const Rat& c) {
  std::vector<Poly> images;
  for (int i = 0; i < p.nvars(); ++i) images.push_back(i == y ? Poly(p.nvars(), c) : Poly::variable(p.nvars(), i));
  return p.substitute(images);
}

inline Poly interpolate(const std::vector<Rat>& points, const std::vector<Poly>& values, int y) {
  int n = values[0].nvars();
  Poly result(n), Y = Poly::variable(n, y);
  for (size_t j = 0; j < points.size(); ++j) {
    Poly basis(n, Rat(1));
    for (size_t k = 0; k < points.size(); ++k)
      if (k != j) basis = basis * (Y - Poly(n, points[k])) * Rat(1 / (points[j] - points[k]));
    result += values[j] * basis;
  }
  return result;
}

// Evaluate y at sample points, recurse, and interpolate the leading-coefficient-scaled images.
inline Poly dense_gcd(const Poly& a, const Poly& b, int y) {
  int n = a.nvars();
  Poly ca = content_off(a, y), cb = content_off(b, y);
  Poly pa = *exact_divide(a, ca), pb = *exact_divide(b, cb);
  Poly la = split_off(pa, y).rbegin()->second, lb = split_off(pb, y).rbegin()->second;
  Poly gamma = gcd(la, lb), cg = gcd(ca, cb);
  int bound = gamma.degree(y) + std::min(pa.degree(y), pb.degree(y)) + 1;
  std::vector<Rat> points;
  std::vector<Poly> images;
  std::optional<Monomial> lead;
  for (int t = 0; t < 64 + 4 * bound; ++t) {
    std::vector<Rat> at(n, Rat(0));
    at[y] = Rat(t % 2 ? (t + 1) / 2 : -(t / 2));
    if (la.eval(at) == 0 || lb.eval(at) == 0) continue;
    Poly g = gcd(fix_variable(pa, y, at[y]), fix_variable(pb, y, at[y]));
    if (g.is_constant()) return monic(cg);
    const Monomial& m = g.leading_monomial();
    if (lead && m > *lead) continue;
    if (lead && m < *lead) {
      points.clear();
      images.clear();
    }
    lead = m;
    points.push_back(at[y]);
    images.push_back(g * gamma.eval(at));
    if (static_cast<int>(points.size()) < bound) continue;
    Poly h = interpolate(points, images, y);
    h = *exact_divide(h, content_off(h, y));
    if (exact_divide(pa, h) && exact_divide(pb, h)) return monic(cg * h);
  }
  throw std::logic_error("gcd: interpolation did not converge");
}

}  // namespace detail

// Monic greatest common divisor: dense interpolation over several variables, primitive PRS in one.
inline Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(a.nvars(), Rat(1));
  if (a == b) return monic(a);
  if (detail::coprime_by_images(a, b)) return Poly(a.nvars(), Rat(1));
  if (auto live = detail::live_variables(a, b); live.size() > 1) {
    int y = live[0];
    for (int v : live)
      if (std::min(a.degree(v), b.degree(v)) < std::min(a.degree(y), b.degree(y))) y = v;
    return detail::dense_gcd(a, b, y);
  }
  int v = std::min(detail::lowest_variable(a), detail::lowest_variable(b));
  if (a.degree(v) == 0) return gcd(a, detail::content_in(b, v));
  if (b.degree(v) == 0) return gcd(detail::content_in(a, v), b);
  Poly ca = detail::content_in(a, v), cb = detail::content_in(b, v);
  Poly p = *exact_divide(a, ca), q = *exact_divide(b, cb);
  if (p.degree(v) < q.degree(v)) std::swap(p, q);
  while (!q.is_zero()) {
    Poly r = detail::pseudo_remainder(p, q, v);
    p = std::move(q);
    q = detail::numeric_primitive(detail::primitive_in(r, v));
  }
  return monic(gcd(ca, cb) * detail::primitive_in(p, v));
}

// Quotient of polynomials in canonical form: gcd-free, denominator with leading coefficient 1.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(int nvars) : num_(nvars), den_(nvars, Rat(1)) {}
  RationalFunction(int nvars, const Rat& c) : num_(nvars, c), den_(nvars, Rat(1)) {}
  RationalFunction(Poly num) : num_(std::move(num)), den_(num_.nvars(), Rat(1)) {}
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.nvars() != den_.nvars()) throw std::invalid_argument("RationalFunction: variable count mismatch");
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    normalize();
  }

  static RationalFunction variable(int nvars, int i) { return RationalFunction(Poly::variable(nvars, i)); }

  int nvars() const { return num_.nvars(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ + b.num_);
    if (a.is_polynomial() || b.is_polynomial()) {
      const RationalFunction& p = a.is_polynomial() ? a : b;
      const RationalFunction& q = a.is_polynomial() ? b : a;
      return reduced(q.num_ + p.num_ * q.den_, q.den_);
    }
    Poly g = a.den_ == b.den_ ? a.den_ : gcd(a.den_, b.den_);
    if (g.is_constant()) return reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    Poly ad = *exact_divide(a.den_, g), bd = *exact_divide(b.den_, g);
    return cancel_within(a.num_ * bd + b.num_ * ad, ad * b.den_, g);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction(a.nvars());
    Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    cross_cancel(an, bd);
    cross_cancel(bn, ad);
    return reduced(an * bn, ad * bd);
  }
  friend RationalFunction operator*(const RationalFunction& a, const Rat& s) {
    RationalFunction r = a;
    r.num_ *= s;
    if (s == 0) r.den_ = Poly(a.nvars(), Rat(1));
    return r;
  }
  friend RationalFunction operator*(const Rat& s, const RationalFunction& a) { return a * s; }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

  RationalFunction pow(int e) const {
    if (e < 0) return RationalFunction(den_.pow(-e), num_.pow(-e));
    return RationalFunction(num_.pow(e), den_.pow(e));
  }

  RationalFunction derivative(int var) const {
    if (is_polynomial()) return RationalFunction(num_.derivative(var));
    Poly dd = den_.derivative(var);
    if (dd.is_zero()) return reduced(num_.derivative(var), den_);
    Poly h = gcd(den_, dd);
    Poly dh = *exact_divide(den_, h);
    return cancel_within(num_.derivative(var) * dh - num_ * *exact_divide(dd, h), den_ * dh, h);
  }

  Rat eval(const std::vector<Rat>& x) const {
    Rat d = den_.eval(x);
    if (d == 0) throw std::domain_error("RationalFunction: pole at evaluation point");
    return num_.eval(x) / d;
  }
  double eval(const std::vector<double>& x) const { return num_.eval(x) / den_.eval(x); }
  bool has_pole_at(const std::vector<Rat>& x) const { return den_.eval(x) == 0; }

  // this(f_1, ..., f_m) for rational functions f_i sharing one domain.
  RationalFunction compose(const std::vector<RationalFunction>& f) const {
    if (static_cast<int>(f.size()) != nvars()) throw std::invalid_argument("RationalFunction::compose: arity mismatch");
    int target = f.empty() ? 0 : f[0].nvars();
    std::vector<Poly> nums, dens;
    std::vector<int> top(nvars());
    bool polynomial_args = true;
    for (int i = 0; i < nvars(); ++i) {
      top[i] = std::max(num_.degree(i), den_.degree(i));
      nums.push_back(f[i].num_);
      dens.push_back(f[i].den_);
      polynomial_args = polynomial_args && f[i].is_polynomial();
    }
    if (polynomial_args) {
      std::vector<Poly> images;
      for (int i = 0; i < nvars(); ++i) images.push_back(f[i].num_ * Rat(1 / f[i].den_.constant_value()));
      return RationalFunction(num_.substitute(images), den_.substitute(images));
    }
    // Homogenize each variable with its own denominator so a single normalization suffices.
    auto homogenized = [&](const Poly& p) {
      std::vector<std::vector<Poly>> np(nvars()), dp(nvars());
      for (int i = 0; i < nvars(); ++i) {
        np[i].emplace_back(target, Rat(1));
        dp[i].emplace_back(target, Rat(1));
        for (int e = 1; e <= top[i]; ++e) {
          np[i].push_back(np[i].back() * nums[i]);
          dp[i].push_back(dp[i].back() * dens[i]);
        }
      }
      Poly r(target);
      for (const auto& [m, c] : p.terms()) {
        Poly t(target, c);
        for (int i = 0; i < nvars(); ++i) {
          if (top[i] == 0) continue;
          t *= np[i][m[i]] * dp[i][top[i] - m[i]];
        }
        r += t;
      }
      return r;
    };
    return RationalFunction(homogenized(num_), homogenized(den_));
  }

  std::string str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

 private:
  // Caller guarantees num and den are coprime.
  static RationalFunction reduced(Poly num, Poly den) {
    RationalFunction r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    r.scale();
    return r;
  }
  // Every common factor of num and den divides `witness`.
  static RationalFunction cancel_within(Poly num, Poly den, const Poly& witness) {
    if (num.is_zero()) return RationalFunction(den.nvars());
    if (!witness.is_constant()) {
      for (Poly g = gcd(num, witness); !g.is_constant(); g = gcd(num, witness)) {
        num = *exact_divide(num, g);
        den = *exact_divide(den, g);
      }
    }
    return reduced(std::move(num), std::move(den));
  }
  static void cross_cancel(Poly& n, Poly& d) {
    if (d.is_constant() || n.is_constant()) return;
    Poly g = gcd(n, d);
    if (g.is_constant()) return;
    n = *exact_divide(n, g);
    d = *exact_divide(d, g);
  }
  void scale() {
    if (num_.is_zero()) {
      den_ = Poly(num_.nvars(), Rat(1));
      return;
    }
    Rat lc = den_.leading_coefficient();
    if (lc != 1) {
      num_ *= Rat(1 / lc);
      den_ *= Rat(1 / lc);
    }
  }
  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly(num_.nvars(), Rat(1));
      return;
    }
    if (!den_.is_constant()) {
      Poly g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *exact_divide(num_, g);
        den_ = *exact_divide(den_, g);
      }
    }
    Rat lc = den_.leading_coefficient();
    if (lc != 1) {
      num_ *= Rat(1 / lc);
      den_ *= Rat(1 / lc);
    }
  }

  Poly num_, den_;
};

// Sum of `terms` random monomials with exponents up to max_exp and small rational coefficients.
inline Poly random_poly(Rng& rng, int nvars, int terms, int max_exp) {
  Poly p(nvars);
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars);
    for (auto& e : m) e = static_cast<int>(rng.uniform(0, max_exp));
    p.add_term(m, rng.rational(5, 3));
  }
  return p;
}

}  // namespace simpkit
