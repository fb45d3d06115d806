#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simpkit/poly.hpp"

namespace simpkit {

// Rational map R^domain -> R^codomain given by its components.
class PolyMap {
 public:
  PolyMap(int domain, std::vector<RationalFunction> components) : domain_(domain), components_(std::move(components)) {
    for (const auto& c : components_)
      if (c.nvars() != domain_) throw std::invalid_argument("map component has the wrong number of variables");
  }
  static PolyMap identity(int n) {
    std::vector<RationalFunction> c;
    for (int i = 0; i < n; ++i) c.push_back(RationalFunction::variable(n, i));
    return PolyMap(n, std::move(c));
  }
  // x -> A x + b with A given row by row.
  static PolyMap affine(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("affine map: row count mismatch");
    const int domain = a.empty() ? 0 : static_cast<int>(a[0].size());
    std::vector<RationalFunction> c;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (static_cast<int>(a[i].size()) != domain) throw std::invalid_argument("affine map: ragged matrix");
      Poly p(domain, b[i]);
      for (int j = 0; j < domain; ++j) p += Poly::variable(domain, j) * a[i][j];
      c.emplace_back(p);
    }
    return PolyMap(domain, std::move(c));
  }

  int domain() const { return domain_; }
  int codomain() const { return static_cast<int>(components_.size()); }
  const std::vector<RationalFunction>& components() const { return components_; }
  const RationalFunction& operator[](int i) const { return components_.at(i); }

  // (this o inner)(t) = this(inner(t)).
  PolyMap after(const PolyMap& inner) const {
    if (inner.codomain() != domain_) throw std::invalid_argument("composition: dimension mismatch");
    std::vector<RationalFunction> c;
    for (const auto& f : components_) c.push_back(f.compose(inner.components_));
    return PolyMap(inner.domain_, std::move(c));
  }

  std::vector<Rat> eval(const std::vector<Rat>& x) const {
    std::vector<Rat> y;
    for (const auto& f : components_) y.push_back(f.eval(x));
    return y;
  }
  std::vector<double> eval(const std::vector<double>& x) const {
    std::vector<double> y;
    for (const auto& f : components_) y.push_back(f.eval(x));
    return y;
  }

 private:
  int domain_;
  std::vector<RationalFunction> components_;
};

// Differential k-form on R^n: sum over increasing index sets I of f_I dx_I (indices 0-based).
class RationalForm {
 public:
  using Index = std::vector<int>;
  using Terms = std::map<Index, RationalFunction>;

  RationalForm(int chart_dim, int degree) : chart_dim_(chart_dim), degree_(degree) {
    if (chart_dim < 0 || degree < 0) throw std::invalid_argument("form dimensions must be nonnegative");
  }
  static RationalForm function(const RationalFunction& f) {
    RationalForm w(f.nvars(), 0);
    w.add({}, f);
    return w;
  }
  static RationalForm dx(int chart_dim, int i) {
    RationalForm w(chart_dim, 1);
    w.add({i}, RationalFunction(chart_dim, Rat(1)));
    return w;
  }
  // f dx_{i_1} ^ ... ^ dx_{i_k}; unsorted or repeated indices are normalized.
  static RationalForm monomial(const RationalFunction& f, const Index& idx) {
    RationalForm w(f.nvars(), static_cast<int>(idx.size()));
    w.add(idx, f);
    return w;
  }

  int chart_dim() const { return chart_dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  RationalFunction coefficient(const Index& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? RationalFunction(chart_dim_) : it->second;
  }

  void add(Index idx, const RationalFunction& f) {
    if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("index set has the wrong size");
    if (f.nvars() != chart_dim_) throw std::invalid_argument("coefficient lives on a different chart");
    for (int i : idx)
      if (i < 0 || i >= chart_dim_) throw std::invalid_argument("form index out of range");
    int sign = sort_with_sign(idx);
    if (sign == 0 || f.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(idx, sign > 0 ? f : -f);
    if (!fresh) {
      it->second = sign > 0 ? it->second + f : it->second - f;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  RationalForm operator-() const {
    RationalForm r = *this;
    for (auto& [i, f] : r.terms_) f = -f;
    return r;
  }
  RationalForm& operator+=(const RationalForm& o) {
    check(o);
    for (const auto& [i, f] : o.terms_) add(i, f);
    return *this;
  }
  RationalForm& operator-=(const RationalForm& o) { return *this += -o; }
  friend RationalForm operator+(RationalForm a, const RationalForm& b) { return a += b; }
  friend RationalForm operator-(RationalForm a, const RationalForm& b) { return a -= b; }
  friend RationalForm operator*(const RationalFunction& h, const RationalForm& w) {
    RationalForm r(w.chart_dim_, w.degree_);
    for (const auto& [i, f] : w.terms_) r.add(i, h * f);
    return r;
  }
  friend RationalForm operator*(const Rat& s, const RationalForm& w) { return RationalFunction(w.chart_dim_, s) * w; }
  bool operator==(const RationalForm& o) const {
    return chart_dim_ == o.chart_dim_ && degree_ == o.degree_ && terms_ == o.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [idx, f] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + f.str() + ")";
      for (std::size_t j = 0; j < idx.size(); ++j) s += (j ? "^dx" : " dx") + std::to_string(idx[j] + 1);
    }
    return s;
  }

  // Sorts in place; returns the permutation sign, or 0 on a repeated index.
  static int sort_with_sign(Index& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
      for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
        if (idx[j - 1] == idx[j]) return 0;
        std::swap(idx[j - 1], idx[j]);
        sign = -sign;
      }
    return sign;
  }

 private:
  void check(const RationalForm& o) const {
    if (chart_dim_ != o.chart_dim_) throw std::invalid_argument("forms live on different charts");
    if (degree_ != o.degree_) throw std::invalid_argument("form degree mismatch");
  }

  int chart_dim_;
  int degree_;
  Terms terms_;
};

inline RationalForm wedge(const RationalForm& a, const RationalForm& b) {
  if (a.chart_dim() != b.chart_dim()) throw std::invalid_argument("wedge: forms live on different charts");
  RationalForm r(a.chart_dim(), a.degree() + b.degree());
  for (const auto& [i, f] : a.terms())
    for (const auto& [j, g] : b.terms()) {
      RationalForm::Index k = i;
      k.insert(k.end(), j.begin(), j.end());
      r.add(k, f * g);
    }
  return r;
}

inline RationalForm exterior_d(const RationalForm& w) {
  RationalForm r(w.chart_dim(), w.degree() + 1);
  for (const auto& [idx, f] : w.terms())
    for (int j = 0; j < w.chart_dim(); ++j) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      RationalFunction df = f.derivative(j);
      if (df.is_zero()) continue;
      RationalForm::Index k{j};
      k.insert(k.end(), idx.begin(), idx.end());
      r.add(k, df);
    }
  return r;
}

// d of a function as a 1-form.
inline RationalForm differential(const RationalFunction& f) { return exterior_d(RationalForm::function(f)); }

inline RationalForm pullback(const RationalForm& w, const PolyMap& f) {
  if (f.codomain() != w.chart_dim()) throw std::invalid_argument("pullback: map codomain does not match the chart");
  std::vector<RationalForm> dfi;
  for (int i = 0; i < f.codomain(); ++i) dfi.push_back(differential(f[i]));
  RationalForm r(f.domain(), w.degree());
  for (const auto& [idx, g] : w.terms()) {
    RationalForm term = RationalForm::function(g.compose(f.components()));
    for (int i : idx) term = wedge(term, dfi[i]);
    r += term;
  }
  return r;
}

// w_x(v_1, ..., v_k) = sum_I f_I(x) det(rows I of [v_1 ... v_k]).
inline Rat evaluate(const RationalForm& w, const std::vector<Rat>& x, const std::vector<std::vector<Rat>>& vectors) {
  if (static_cast<int>(vectors.size()) != w.degree()) throw std::invalid_argument("evaluate: need one vector per degree");
  if (static_cast<int>(x.size()) != w.chart_dim()) throw std::invalid_argument("evaluate: point has the wrong dimension");
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != w.chart_dim()) throw std::invalid_argument("evaluate: vector has the wrong dimension");
  Rat total = 0;
  for (const auto& [idx, f] : w.terms()) {
    if (f.has_pole_at(x)) throw std::domain_error("evaluate: coefficient has a pole at the point");
    std::vector<std::vector<Rat>> m(idx.size(), std::vector<Rat>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) m[r][c] = vectors[c][idx[r]];
    total += f.eval(x) * determinant(m);
  }
  return total;
}

inline double evaluate(const RationalForm& w, const std::vector<double>& x, const std::vector<std::vector<double>>& vectors) {
  if (static_cast<int>(vectors.size()) != w.degree()) throw std::invalid_argument("evaluate: need one vector per degree");
  double total = 0;
  for (const auto& [idx, f] : w.terms()) {
    const std::size_t k = idx.size();
    std::vector<std::vector<double>> m(k, std::vector<double>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) m[r][c] = vectors[c][idx[r]];
    double det = 1;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < k; ++r)
        if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
      if (m[p][c] == 0) {
        det = 0;
        break;
      }
      if (p != c) std::swap(m[p], m[c]), det = -det;
      det *= m[c][c];
      for (std::size_t r = c + 1; r < k; ++r) {
        double q = m[r][c] / m[c][c];
        for (std::size_t j = c; j < k; ++j) m[r][j] -= q * m[c][j];
      }
    }
    total += f.eval(x) * det;
  }
  return total;
}

// Random k-form on R^n; with `rational` set, coefficients get positive denominators 1 + sum x_i^2 / c.
inline RationalForm random_form(Rng& rng, int n, int k, bool rational = false, int max_exp = 2) {
  RationalForm w(n, k);
  std::vector<int> idx(k);
  for (int t = 0, terms = static_cast<int>(rng.uniform(1, 3)); t < terms; ++t) {
    for (auto& i : idx) i = static_cast<int>(rng.uniform(0, n - 1));
    Poly num = random_poly(rng, n, static_cast<int>(rng.uniform(1, 3)), max_exp);
    Poly den(n, Rat(1));
    if (rational)
      for (int v = 0; v < n; ++v) den += Poly::variable(n, v).pow(2) * Rat(1, rng.uniform(1, 4));
    w.add(idx, RationalFunction(num, den));
  }
  return w;
}

// Random rational map R^domain -> R^codomain with polynomial components.
inline PolyMap random_poly_map(Rng& rng, int domain, int codomain, int max_exp = 2) {
  std::vector<RationalFunction> c;
  for (int i = 0; i < codomain; ++i) c.emplace_back(random_poly(rng, domain, static_cast<int>(rng.uniform(1, 3)), max_exp));
  return PolyMap(domain, std::move(c));
}

using MultiIndex = std::vector<int>;

inline RationalFunction partial(const RationalFunction& f, const MultiIndex& beta) {
  RationalFunction r = f;
  for (std::size_t v = 0; v < beta.size(); ++v)
    for (int k = 0; k < beta[v]; ++k) r = r.derivative(static_cast<int>(v));
  return r;
}

namespace detail {

inline void check_chain_rule_inputs(const RationalFunction& g, const PolyMap& f, const MultiIndex& beta,
                                    const std::vector<Rat>& x0) {
  if (g.nvars() != f.codomain()) throw std::invalid_argument("chain rule: g does not live on the codomain of f");
  if (static_cast<int>(beta.size()) != f.domain() || static_cast<int>(x0.size()) != f.domain())
    throw std::invalid_argument("chain rule: multi-index or point has the wrong length");
  int order = 0;
  for (int b : beta) {
    if (b < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
    order += b;
  }
  if (order == 0) throw std::invalid_argument("multi-index must have positive order");
  for (const auto& c : f.components())
    if (c.has_pole_at(x0)) throw std::domain_error("f has a pole at the point");
  if (g.has_pole_at(f.eval(x0))) throw std::domain_error("g has a pole at f(x0)");
}

}  // namespace detail

// Direct symbolic derivative of g o f.
inline Rat direct_partial(const RationalFunction& g, const PolyMap& f, const MultiIndex& beta, const std::vector<Rat>& x0) {
  detail::check_chain_rule_inputs(g, f, beta, x0);
  return partial(g.compose(f.components()), beta).eval(x0);
}

// Multivariate Faa di Bruno: sum over sigma and over multiplicities e_{i,gamma} with sum_gamma e_{i,gamma} = sigma_i
// and sum e_{i,gamma} gamma = beta of beta! d^sigma g prod (1/e!) (d^gamma f_i / gamma!)^e.
inline Rat faa_di_bruno(const RationalFunction& g, const PolyMap& f, const MultiIndex& beta, const std::vector<Rat>& x0) {
  detail::check_chain_rule_inputs(g, f, beta, x0);
  const int n = f.domain(), m = f.codomain();
  std::vector<MultiIndex> gammas;
  MultiIndex gamma(n, 0);
  auto enumerate = [&](auto&& self, int v) -> void {
    if (v == n) {
      if (std::any_of(gamma.begin(), gamma.end(), [](int x) { return x > 0; })) gammas.push_back(gamma);
      return;
    }
    for (gamma[v] = 0; gamma[v] <= beta[v]; ++gamma[v]) self(self, v + 1);
    gamma[v] = 0;
  };
  enumerate(enumerate, 0);
  auto factorial_of = [](const MultiIndex& a) {
    Int r = 1;
    for (int x : a) r *= factorial(x);
    return r;
  };
  // Scaled Taylor coefficients (d^gamma f_i / gamma!)(x0).
  std::vector<std::vector<Rat>> taylor(m, std::vector<Rat>(gammas.size()));
  for (int i = 0; i < m; ++i)
    for (std::size_t k = 0; k < gammas.size(); ++k)
      taylor[i][k] = partial(f[i], gammas[k]).eval(x0) / Rat(factorial_of(gammas[k]));
  const std::vector<Rat> y0 = f.eval(x0);
  std::map<MultiIndex, Rat> g_partials;
  auto g_partial = [&](const MultiIndex& sigma) {
    auto it = g_partials.find(sigma);
    if (it == g_partials.end()) it = g_partials.emplace(sigma, partial(g, sigma).eval(y0)).first;
    return it->second;
  };
  Rat total = 0;
  MultiIndex remaining = beta, sigma(m, 0);
  // Walks the pairs (i, gamma) in order, taking multiplicities that fit in the remaining budget.
  std::function<void(int, std::size_t, Rat)> rec = [&](int i, std::size_t k, Rat weight) {
    if (i == m) {
      if (std::all_of(remaining.begin(), remaining.end(), [](int x) { return x == 0; })) total += weight * g_partial(sigma);
      return;
    }
    if (k == gammas.size()) return rec(i + 1, 0, weight);
    const MultiIndex& gm = gammas[k];
    int taken = 0;
    Rat w = weight;
    for (;;) {
      rec(i, k + 1, w / Rat(factorial(taken)));
      bool fits = true;
      for (int v = 0; v < n; ++v) fits = fits && remaining[v] >= gm[v];
      if (!fits || taylor[i][k] == 0) break;
      for (int v = 0; v < n; ++v) remaining[v] -= gm[v];
      ++sigma[i];
      ++taken;
      w *= taylor[i][k];
    }
    for (int v = 0; v < n; ++v) remaining[v] += taken * gm[v];
    sigma[i] -= taken;
  };
  rec(0, 0, Rat(1));
  return total * Rat(factorial_of(beta));
}

}  // namespace simpkit
