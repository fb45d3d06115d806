#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simpkit/forms.hpp"
#include "simpkit/subdivision.hpp"

namespace simpkit {

enum class CochainKind { taylor, exact, custom };

inline std::string to_string(CochainKind k) {
  switch (k) {
    case CochainKind::taylor: return "taylor";
    case CochainKind::exact: return "exact";
    default: return "custom";
  }
}

inline CochainKind parse_cochain_kind(const std::string& s) {
  if (s == "taylor") return CochainKind::taylor;
  if (s == "exact") return CochainKind::exact;
  throw std::invalid_argument("unknown cochain kind '" + s + "' (expected taylor or exact)");
}

namespace detail {

inline Poly polynomial_part(const RationalFunction& f) {
  if (!f.is_polynomial()) throw std::domain_error("cochain: form coefficient has a pole");
  return f.num() * Rat(1 / f.den().constant_value());
}

inline std::vector<std::vector<int>> increasing_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// det of the k x k matrix with entries entry(r, c), expanded over permutations.
template <class Entry>
Poly symbolic_determinant(int nvars, int k, Entry&& entry) {
  Poly d(nvars, Rat(1));
  if (k == 0) return d;
  d = Poly(nvars);
  for (const auto& s : permutations(k)) {
    Poly t(nvars, Rat(permutation_sign(s)));
    for (int r = 0; r < k; ++r) t *= entry(r, s[r]);
    d += t;
  }
  return d;
}

}  // namespace detail

// Function on (n+1)-tuples of chart points. Taylor and exact kinds carry a polynomial in the
// (n+1)*m argument coordinates, argument a coordinate c being variable a*m + c.
class PairCochain {
 public:
  using Evaluator = std::function<Rat(const std::vector<Point>&)>;

  static PairCochain taylor(const RationalForm& w) {
    int m = w.chart_dim(), n = w.degree(), vars = (n + 1) * m;
    PairCochain c(CochainKind::taylor, m, n);
    c.form_ = w;
    std::vector<Poly> at_base(m);
    for (int j = 0; j < m; ++j) at_base[j] = Poly::variable(vars, j);
    Poly total(vars);
    for (const auto& [idx, f] : w.terms()) {
      Poly coeff = detail::polynomial_part(f).substitute(at_base);
      total += coeff * detail::symbolic_determinant(vars, n, [&](int r, int col) {
                 return Poly::variable(vars, (col + 1) * m + idx[r]) - Poly::variable(vars, idx[r]);
               });
    }
    c.symbolic_ = total * Rat(Int(1), factorial(n));
    return c;
  }

  // Integral of w over the affine simplex [x_0, ..., x_n], via pullback to the standard simplex.
  static PairCochain exact(const RationalForm& w) {
    int m = w.chart_dim(), n = w.degree(), vars = (n + 1) * m, all = vars + n;
    PairCochain c(CochainKind::exact, m, n);
    c.form_ = w;
    std::vector<Poly> param(m);
    for (int j = 0; j < m; ++j) {
      param[j] = Poly::variable(all, j);
      for (int i = 1; i <= n; ++i)
        param[j] += Poly::variable(all, vars + i - 1) * (Poly::variable(all, i * m + j) - Poly::variable(all, j));
    }
    Poly integrand(all);
    for (const auto& [idx, f] : w.terms()) {
      Poly coeff = detail::polynomial_part(f).substitute(param);
      integrand += coeff * detail::symbolic_determinant(all, n, [&](int r, int col) {
                     return Poly::variable(all, (col + 1) * m + idx[r]) - Poly::variable(all, idx[r]);
                   });
    }
    Poly total(vars);
    for (const auto& [mono, coef] : integrand.terms()) {
      Int weight = 1;
      int degree = n;
      for (int i = 0; i < n; ++i) {
        weight *= factorial(mono[vars + i]);
        degree += mono[vars + i];
      }
      Rat scale(weight, factorial(degree));
      scale.canonicalize();
      total.add_term(Monomial(mono.begin(), mono.begin() + vars), coef * scale);
    }
    c.symbolic_ = total;
    return c;
  }

  static PairCochain of_kind(CochainKind k, const RationalForm& w) {
    if (k == CochainKind::taylor) return taylor(w);
    if (k == CochainKind::exact) return exact(w);
    throw std::invalid_argument("of_kind: a custom cochain needs an evaluator");
  }

  static PairCochain custom(int chart_dim, int degree, Evaluator f) {
    PairCochain c(CochainKind::custom, chart_dim, degree);
    c.evaluator_ = std::move(f);
    return c;
  }

  static PairCochain zero(int chart_dim, int degree) {
    PairCochain c(CochainKind::exact, chart_dim, degree);
    c.symbolic_ = Poly((degree + 1) * chart_dim);
    return c;
  }

  CochainKind kind() const { return kind_; }
  int chart_dim() const { return m_; }
  int degree() const { return n_; }
  const std::optional<RationalForm>& form() const { return form_; }
  bool is_symbolic() const { return kind_ != CochainKind::custom; }
  const Poly& symbolic() const {
    if (!is_symbolic()) throw std::invalid_argument("custom cochain has no symbolic expression");
    return symbolic_;
  }

  Rat operator()(const std::vector<Point>& args) const {
    if (static_cast<int>(args.size()) != n_ + 1) throw std::invalid_argument("cochain: expected " + std::to_string(n_ + 1) + " points");
    for (const auto& p : args)
      if (static_cast<int>(p.size()) != m_) throw std::invalid_argument("cochain: point has the wrong dimension");
    if (kind_ == CochainKind::custom) return evaluator_(args);
    if (kind_ == CochainKind::taylor) {
      std::vector<std::vector<Rat>> edges;
      for (int i = 1; i <= n_; ++i) {
        Point e(m_);
        for (int j = 0; j < m_; ++j) e[j] = args[i][j] - args[0][j];
        edges.push_back(std::move(e));
      }
      return evaluate(*form_, args[0], edges) / factorial(n_);
    }
    std::vector<Rat> flat;
    for (const auto& p : args) flat.insert(flat.end(), p.begin(), p.end());
    return symbolic_.eval(flat);
  }

 private:
  PairCochain(CochainKind k, int m, int n) : kind_(k), m_(m), n_(n) {
    if (m < 0 || n < 0) throw std::invalid_argument("cochain: negative dimension");
  }

  CochainKind kind_;
  int m_, n_;
  std::optional<RationalForm> form_;
  Poly symbolic_;
  Evaluator evaluator_;
};

inline PairCochain taylor_antiderivative(const RationalForm& w) { return PairCochain::taylor(w); }
inline PairCochain exact_antiderivative(const RationalForm& w) { return PairCochain::exact(w); }

// Zero on consecutive repeats and sign-changing under permutations fixing the first argument, on random tuples.
inline bool normalized_and_antisymmetric(const PairCochain& c, Rng& rng, int trials = 10) {
  int m = c.chart_dim(), n = c.degree();
  auto random_point = [&] {
    Point p(m);
    for (auto& x : p) x = rng.rational(4, 3);
    return p;
  };
  for (int t = 0; t < trials; ++t) {
    std::vector<Point> args;
    for (int i = 0; i <= n; ++i) args.push_back(random_point());
    Rat base = c(args);
    for (int i = 0; i < n; ++i) {
      auto repeated = args;
      repeated[i + 1] = repeated[i];
      if (c(repeated) != 0) return false;
    }
    if (n < 2) continue;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<Point> permuted{args[0]};
    for (int i : perm) permuted.push_back(args[i + 1]);
    if (c(permuted) != permutation_sign(perm) * base) return false;
  }
  return true;
}

namespace detail {

// X_1(... X_n(c(x, -, ..., -)) ...)(x): differentiate the last free argument along its field and
// identify it with the previous one, down to the base point.
inline Poly iterated_derivative(const Poly& c, int m, int n, const std::vector<int>& directions) {
  int vars = (n + 1) * m;
  Poly q = c;
  for (int k = n; k >= 1; --k) {
    q = q.derivative(k * m + directions[k - 1]);
    std::vector<Poly> merge(vars);
    for (int v = 0; v < vars; ++v) merge[v] = Poly::variable(vars, v / m == k ? v - m : v);
    q = q.substitute(merge);
  }
  std::vector<Poly> base(vars, Poly(m));
  for (int j = 0; j < m; ++j) base[j] = Poly::variable(m, j);
  return q.substitute(base);
}

}  // namespace detail

// VE(c)(X_1, ..., X_n) = sum_s sgn(s) X_{s(1)} ... X_{s(n)} c along coordinate fields.
inline RationalForm van_est(const PairCochain& c) {
  if (!c.is_symbolic()) throw std::invalid_argument("van_est: custom cochains have no symbolic derivatives");
  int m = c.chart_dim(), n = c.degree();
  RationalForm w(m, n);
  for (const auto& idx : detail::increasing_subsets(m, n)) {
    Poly total(m);
    for (const auto& s : detail::permutations(n)) {
      std::vector<int> dirs(n);
      for (int k = 0; k < n; ++k) dirs[k] = idx[s[k]];
      total += detail::iterated_derivative(c.symbolic(), m, n, dirs) * Rat(permutation_sign(s));
    }
    w.add(idx, RationalFunction(total));
  }
  return w;
}

inline std::map<RationalForm::Index, Rat> van_est(const PairCochain& c, const Point& x) {
  if (static_cast<int>(x.size()) != c.chart_dim()) throw std::invalid_argument("van_est: point has the wrong dimension");
  std::map<RationalForm::Index, Rat> out;
  RationalForm w = van_est(c);
  for (const auto& [idx, f] : w.terms()) out.emplace(idx, f.eval(x));
  return out;
}

struct OrientedSimplex {
  std::vector<int> vertices;
  int sign = 1;
};

// Piecewise-affine triangulation of a region of Q^n by ordered n-simplices with signs.
class Triangulation {
 public:
  Triangulation(std::vector<Point> vertices, std::vector<OrientedSimplex> tops)
      : vertices_(std::move(vertices)), tops_(std::move(tops)) {
    validate();
  }

  static Triangulation standard_simplex(int n) {
    std::vector<Point> v(n + 1, Point(n, Rat(0)));
    for (int i = 0; i < n; ++i) v[i + 1][i] = 1;
    std::vector<int> ids(n + 1);
    std::iota(ids.begin(), ids.end(), 0);
    return Triangulation(std::move(v), {{ids, 1}});
  }

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<OrientedSimplex>& tops() const { return tops_; }

  std::vector<Point> points(const OrientedSimplex& s) const {
    std::vector<Point> p;
    for (int v : s.vertices) p.push_back(vertices_[v]);
    return p;
  }
  Rat signed_volume(const OrientedSimplex& s) const {
    std::vector<std::vector<Rat>> m(dim_, std::vector<Rat>(dim_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m[i][j] = vertices_[s.vertices[j + 1]][i] - vertices_[s.vertices[0]][i];
    return determinant(m) / factorial(dim_);
  }
  // Every top simplex carries the standard orientation of Q^n.
  bool positively_oriented() const {
    return std::all_of(tops_.begin(), tops_.end(), [&](const auto& s) { return s.sign * signed_volume(s) > 0; });
  }

  LinearChain top_chain(const std::shared_ptr<PointPool>& pool) const {
    LinearChain c(pool, dim_);
    for (const auto& s : tops_) c.add(points(s), s.sign);
    return c;
  }

 private:
  void validate() {
    if (vertices_.empty()) throw std::invalid_argument("triangulation: no vertices");
    dim_ = static_cast<int>(vertices_[0].size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (static_cast<int>(vertices_[i].size()) != dim_) throw std::invalid_argument("triangulation: vertex " + std::to_string(i) + " has the wrong dimension");
      for (std::size_t j = 0; j < i; ++j)
        if (vertices_[i] == vertices_[j]) throw std::invalid_argument("triangulation: vertices " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
    if (tops_.empty()) throw std::invalid_argument("triangulation: no top simplices");
    std::map<std::vector<int>, std::pair<int, long>> faces;
    for (std::size_t t = 0; t < tops_.size(); ++t) {
      const auto& s = tops_[t];
      std::string where = "triangulation: top simplex " + std::to_string(t);
      if (static_cast<int>(s.vertices.size()) != dim_ + 1) throw std::invalid_argument(where + " needs " + std::to_string(dim_ + 1) + " vertices");
      if (s.sign != 1 && s.sign != -1) throw std::invalid_argument(where + " has a sign other than +1 or -1");
      for (int v : s.vertices)
        if (v < 0 || v >= static_cast<int>(vertices_.size())) throw std::invalid_argument(where + " refers to a missing vertex");
      if (signed_volume(s) == 0) throw std::invalid_argument(where + " is degenerate");
      for (int i = 0; i <= dim_; ++i) {
        std::vector<int> face = s.vertices;
        face.erase(face.begin() + i);
        std::vector<int> order(face.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return face[a] < face[b]; });
        std::vector<int> sorted;
        for (int k : order) sorted.push_back(face[k]);
        auto& [count, coeff] = faces[sorted];
        ++count;
        coeff += s.sign * (i % 2 ? -1 : 1) * permutation_sign(order);
      }
    }
    for (const auto& [face, cc] : faces) {
      if (cc.first > 2 || (cc.first == 2 && cc.second != 0)) {
        std::string f;
        for (int v : face) f += (f.empty() ? "" : ",") + std::to_string(v);
        throw std::invalid_argument("triangulation: top chain is not closed relative to the boundary at face (" + f + ")");
      }
    }
  }

  std::vector<Point> vertices_;
  std::vector<OrientedSimplex> tops_;
  int dim_ = 0;
};

// Replaces the top chain by its barycentric subdivision, keeping the subdivision operator's vertex order.
inline Triangulation barycentric_refine(const Triangulation& t) {
  auto pool = std::make_shared<PointPool>(t.dim());
  for (const auto& v : t.vertices()) pool->intern(v);
  LinearChain s = subdivide(t.top_chain(pool));
  std::vector<Point> vertices;
  for (int i = 0; i < pool->size(); ++i) vertices.push_back(pool->point(i));
  std::vector<OrientedSimplex> tops;
  for (const auto& [k, c] : s.terms()) {
    if (c != 1 && c != -1) throw std::logic_error("barycentric_refine: overlapping top simplices");
    tops.push_back({std::vector<int>(k.begin(), k.end()), static_cast<int>(c)});
  }
  return Triangulation(std::move(vertices), std::move(tops));
}

inline Triangulation barycentric_refine(Triangulation t, int r) {
  for (int i = 0; i < r; ++i) t = barycentric_refine(t);
  return t;
}

// Sum of sign * c(vertex tuple) over top simplices, tuples taken in stored order.
inline Rat riemann_sum(const PairCochain& c, const Triangulation& t) {
  if (c.degree() != t.dim()) throw std::invalid_argument("riemann_sum: cochain degree does not match the triangulation");
  if (c.chart_dim() != t.dim()) throw std::invalid_argument("riemann_sum: chart dimension does not match the triangulation");
  if (!t.positively_oriented()) throw std::invalid_argument("riemann_sum: triangulation is not positively oriented");
  Rat total = 0;
  for (const auto& s : t.tops()) total += s.sign * c(t.points(s));
  return total;
}

inline Rat riemann_sum(const RationalForm& w, const Triangulation& t, CochainKind kind) {
  if (w.degree() != t.dim()) throw std::invalid_argument("riemann_sum: form degree does not match the triangulation");
  return riemann_sum(PairCochain::of_kind(kind, w), t);
}

}  // namespace simpkit
