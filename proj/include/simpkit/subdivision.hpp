#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simpkit/rational.hpp"

namespace simpkit {

// Ordered vertex list (y_0, ..., y_k); the empty list is the (-1)-simplex.
using AffineSimplex = std::vector<Point>;

// Interning table for exact points; chains refer to points by index.
class PointPool {
 public:
  explicit PointPool(int ambient) : ambient_(ambient) {}

  int ambient() const { return ambient_; }
  int size() const { return static_cast<int>(points_.size()); }

  int intern(const Point& p) {
    if (static_cast<int>(p.size()) != ambient_) throw std::invalid_argument("point has the wrong ambient dimension");
    auto [it, fresh] = index_.try_emplace(p, size());
    if (fresh) points_.push_back(p);
    return it->second;
  }
  const Point& point(int id) const { return points_.at(id); }

  template <class Ids>
  int barycenter(const Ids& vertices) {
    std::vector<int> ids(vertices.begin(), vertices.end());
    std::sort(ids.begin(), ids.end());
    auto it = barycenters_.find(ids);
    if (it != barycenters_.end()) return it->second;
    Point b(ambient_, Rat(0));
    for (int id : ids)
      for (int c = 0; c < ambient_; ++c) b[c] += points_[id][c];
    for (auto& x : b) x /= static_cast<long>(ids.size());
    int r = intern(b);
    barycenters_.emplace(std::move(ids), r);
    return r;
  }

 private:
  int ambient_;
  struct PointHash {
    std::size_t operator()(const Point& p) const {
      std::size_t h = p.size();
      for (const auto& x : p) {
        h = h * 1000003u ^ mpz_get_ui(x.get_num_mpz_t()) ^ (mpz_sgn(x.get_num_mpz_t()) < 0 ? 0x9e3779b9u : 0u);
        h = h * 1000003u ^ mpz_get_ui(x.get_den_mpz_t());
      }
      return h;
    }
  };
  struct IdsHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = v.size();
      for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
      return h;
    }
  };
  std::unordered_map<Point, int, PointHash> index_;
  std::vector<Point> points_;
  std::unordered_map<std::vector<int>, int, IdsHash> barycenters_;
};

// Vertex ids of an ordered simplex, stored inline.
class SimplexKey {
 public:
  static constexpr int capacity = 15;

  SimplexKey() = default;
  SimplexKey(std::initializer_list<int> ids) {
    for (int id : ids) push_back(id);
  }

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }
  const int* begin() const { return v_.data(); }
  const int* end() const { return v_.data() + n_; }
  int operator[](int i) const { return v_[i]; }
  void reserve(std::size_t) {}
  void push_back(int id) {
    if (n_ == capacity) throw std::length_error("simplex has too many vertices");
    v_[n_++] = id;
  }
  SimplexKey without(int i) const {
    SimplexKey r;
    for (int j = 0; j < n_; ++j)
      if (j != i) r.v_[r.n_++] = v_[j];
    return r;
  }
  SimplexKey prepended(int id) const {
    if (n_ == capacity) throw std::length_error("simplex has too many vertices");
    SimplexKey r;
    r.n_ = n_ + 1;
    r.v_[0] = id;
    std::copy(begin(), end(), r.v_.begin() + 1);
    return r;
  }

  friend bool operator==(const SimplexKey& a, const SimplexKey& b) {
    return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend bool operator<(const SimplexKey& a, const SimplexKey& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<int, capacity> v_{};
  int n_ = 0;
};

class LinearChain {
 public:
  using Key = SimplexKey;
  using Coeff = long;
  using Terms = std::vector<std::pair<Key, Coeff>>;

  LinearChain(std::shared_ptr<PointPool> pool, int degree) : pool_(std::move(pool)), degree_(degree) {
    if (degree < -1) throw std::invalid_argument("chain degree must be at least -1");
  }

  static LinearChain simplex(std::shared_ptr<PointPool> pool, const AffineSimplex& s, Coeff coeff = 1) {
    LinearChain c(pool, static_cast<int>(s.size()) - 1);
    c.add(s, coeff);
    return c;
  }
  static LinearChain empty_simplex(std::shared_ptr<PointPool> pool) {
    LinearChain c(std::move(pool), -1);
    c.add_key({}, 1);
    return c;
  }
  // Builds a chain from unsorted terms, merging repeats and dropping zeros.
  static LinearChain from_terms(std::shared_ptr<PointPool> pool, int degree, Terms raw) {
    LinearChain c(std::move(pool), degree);
    for (const auto& [k, v] : raw)
      if (static_cast<int>(k.size()) != degree + 1) throw std::invalid_argument("simplex degree does not match chain");
    c.terms_ = canonical(std::move(raw));
    return c;
  }

  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  const std::shared_ptr<PointPool>& pool() const { return pool_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coeff coefficient(const Key& k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const auto& t, const Key& key) { return t.first < key; });
    return it != terms_.end() && it->first == k ? it->second : 0;
  }

  void add(const AffineSimplex& s, Coeff coeff) {
    Key k;
    for (const auto& p : s) k.push_back(pool_->intern(p));
    add_key(k, coeff);
  }
  void add_key(const Key& k, Coeff coeff) {
    if (static_cast<int>(k.size()) != degree_ + 1) throw std::invalid_argument("simplex degree does not match chain");
    if (coeff == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const auto& t, const Key& key) { return t.first < key; });
    if (it != terms_.end() && it->first == k) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.insert(it, {k, coeff});
    }
  }
  AffineSimplex points(const Key& k) const {
    AffineSimplex s;
    for (int id : k) s.push_back(pool_->point(id));
    return s;
  }

  LinearChain& operator+=(const LinearChain& o) { return combine(o, 1); }
  LinearChain& operator-=(const LinearChain& o) { return combine(o, -1); }
  friend LinearChain operator+(LinearChain a, const LinearChain& b) { return a += b; }
  friend LinearChain operator-(LinearChain a, const LinearChain& b) { return a -= b; }
  friend LinearChain operator*(Coeff s, LinearChain a) {
    if (s == 0) a.terms_.clear();
    for (auto& [k, c] : a.terms_) c *= s;
    return a;
  }
  bool operator==(const LinearChain& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

  static Terms canonical(Terms raw) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Terms out;
    out.reserve(raw.size());
    for (auto& t : raw) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else {
        if (!out.empty() && out.back().second == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().second == 0) out.pop_back();
    return out;
  }

 private:
  LinearChain& combine(const LinearChain& o, Coeff sign) {
    if (pool_ != o.pool_) throw std::invalid_argument("chains live in different point pools");
    if (degree_ != o.degree_) throw std::invalid_argument("chain degree mismatch");
    Terms merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        merged.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->first < a->first) {
        merged.emplace_back(b->first, sign * b->second);
        ++b;
      } else {
        Coeff v = a->second + sign * b->second;
        if (v != 0) merged.emplace_back(std::move(a->first), v);
        ++a, ++b;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }

  std::shared_ptr<PointPool> pool_;
  int degree_;
  Terms terms_;
};

inline LinearChain boundary(const LinearChain& c) {
  if (c.degree() < 0) throw std::invalid_argument("boundary of a degree -1 chain");
  LinearChain::Terms raw;
  raw.reserve(c.size() * (c.degree() + 1));
  for (const auto& [k, coeff] : c.terms())
    for (int i = 0; i < k.size(); ++i) raw.emplace_back(k.without(i), i % 2 ? -coeff : coeff);
  return LinearChain::from_terms(c.pool(), c.degree() - 1, std::move(raw));
}

inline LinearChain cone(int apex, const LinearChain& c) {
  LinearChain::Terms raw;
  raw.reserve(c.size());
  for (const auto& [k, coeff] : c.terms()) raw.emplace_back(k.prepended(apex), coeff);
  return LinearChain::from_terms(c.pool(), c.degree() + 1, std::move(raw));
}

inline LinearChain cone(const Point& apex, const LinearChain& c) { return cone(c.pool()->intern(apex), c); }

namespace detail {

using KeyMemo = std::map<SimplexKey, LinearChain::Terms>;

inline LinearChain::Terms coned(int apex, const LinearChain::Terms& inner) {
  LinearChain::Terms out;
  out.reserve(inner.size());
  for (const auto& [ik, ic] : inner) out.emplace_back(ik.prepended(apex), ic);
  return out;
}

inline const LinearChain::Terms& subdivide_key(PointPool& pool, const LinearChain::Key& k, KeyMemo& memo) {
  auto it = memo.find(k);
  if (it != memo.end()) return it->second;
  LinearChain::Terms out;
  if (k.empty()) {
    out.emplace_back(k, 1);
  } else {
    LinearChain::Terms faces;
    for (int i = 0; i < k.size(); ++i)
      for (const auto& [fk, fc] : subdivide_key(pool, k.without(i), memo)) faces.emplace_back(fk, i % 2 ? -fc : fc);
    out = coned(pool.barycenter(k), LinearChain::canonical(std::move(faces)));
  }
  return memo.emplace(k, std::move(out)).first->second;
}

inline const LinearChain::Terms& homotopy_key(PointPool& pool, const LinearChain::Key& k, KeyMemo& memo) {
  auto it = memo.find(k);
  if (it != memo.end()) return it->second;
  LinearChain::Terms inner{{k, 1}};
  for (int i = 0; k.size() > 1 && i < k.size(); ++i)
    for (const auto& [fk, fc] : homotopy_key(pool, k.without(i), memo)) inner.emplace_back(fk, i % 2 ? fc : -fc);
  LinearChain::Terms out = coned(pool.barycenter(k), LinearChain::canonical(std::move(inner)));
  return memo.emplace(k, std::move(out)).first->second;
}

template <class Expand>
LinearChain expand_linearly(const LinearChain& c, int degree, Expand&& expand) {
  KeyMemo memo;
  LinearChain::Terms raw;
  for (const auto& [k, coeff] : c.terms())
    for (const auto& [tk, tc] : expand(*c.pool(), k, memo)) raw.emplace_back(tk, coeff * tc);
  return LinearChain::from_terms(c.pool(), degree, std::move(raw));
}

}  // namespace detail

// S(lambda) = b_lambda(S(d lambda)), S = id in degrees -1 and 0.
inline LinearChain subdivide(const LinearChain& c) {
  return detail::expand_linearly(c, c.degree(), detail::subdivide_key);
}

// T = 0 in degree -1, T(lambda) = b_lambda(lambda - T(d lambda)).
inline LinearChain chain_homotopy_T(const LinearChain& c) {
  if (c.degree() < 0) return LinearChain(c.pool(), 0);
  return detail::expand_linearly(c, c.degree() + 1, detail::homotopy_key);
}

struct Iterated {
  LinearChain subdivided;  // S^r c
  LinearChain homotopy;    // D_r c = sum_{i<r} T S^i c
};

inline Iterated iterate(const LinearChain& c, int r) {
  if (r < 0) throw std::invalid_argument("iterate: r must be nonnegative");
  Iterated out{c, LinearChain(c.pool(), c.degree() + 1)};
  for (int i = 0; i < r; ++i) {
    out.homotopy += chain_homotopy_T(out.subdivided);
    out.subdivided = subdivide(out.subdivided);
  }
  return out;
}

// sigma_* lambda = (y_{sigma(0)}, ..., y_{sigma(k)}) together with sgn(sigma).
inline std::pair<AffineSimplex, int> permute(const AffineSimplex& s, const std::vector<int>& sigma) {
  if (sigma.size() != s.size()) throw std::invalid_argument("permute: arity mismatch");
  std::vector<bool> hit(s.size(), false);
  AffineSimplex r;
  for (int j : sigma) {
    if (j < 0 || j >= static_cast<int>(s.size()) || hit[j]) throw std::invalid_argument("permute: not a permutation");
    hit[j] = true;
    r.push_back(s[j]);
  }
  return {r, permutation_sign(sigma)};
}

inline LinearChain random_chain(Rng& rng, const std::shared_ptr<PointPool>& pool, int degree, int max_terms = 3) {
  LinearChain c(pool, degree);
  int terms = static_cast<int>(rng.uniform(1, max_terms));
  for (int t = 0; t < terms; ++t) {
    AffineSimplex s;
    for (int v = 0; v <= degree; ++v) {
      Point p;
      for (int x = 0; x < pool->ambient(); ++x) p.push_back(rng.rational(6, 4));
      s.push_back(p);
    }
    long coeff = 0;
    while (coeff == 0) coeff = rng.uniform(-3, 3);
    c.add(s, coeff);
  }
  return c;
}

// The standard k-simplex (0, e_1, ..., e_k) in Q^max(k,1).
inline LinearChain standard_simplex_chain(int k) {
  auto pool = std::make_shared<PointPool>(std::max(k, 1));
  AffineSimplex s;
  for (int v = 0; v <= k; ++v) {
    Point p(pool->ambient(), Rat(0));
    if (v > 0) p[v - 1] = 1;
    s.push_back(p);
  }
  return LinearChain::simplex(pool, s);
}

struct IdentityTally {
  std::string name;
  int passed = 0;
  int failed = 0;
};

struct SubdivisionSelftest {
  std::vector<IdentityTally> tallies;
  bool ok() const {
    for (const auto& t : tallies)
      if (t.failed) return false;
    return true;
  }
};

// Random rational chains of degree 0..max_degree; D_r is checked for r <= max_r while ((k+1)!)^r <= term_budget.
inline SubdivisionSelftest subdivision_selftest(std::uint64_t seed, int count = 200, int max_degree = 4, int max_r = 4,
                                                long term_budget = 20000) {
  Rng rng(seed);
  SubdivisionSelftest report;
  report.tallies = {{"dS = Sd"}, {"dT + Td = id - S"}, {"dD_r + D_r d = id - S^r"}, {"S term count = (k+1)!"}};
  auto record = [&](int which, bool ok) { (ok ? report.tallies[which].passed : report.tallies[which].failed)++; };
  for (int n = 0; n < count; ++n) {
    int k = n % (max_degree + 1);
    auto pool = std::make_shared<PointPool>(static_cast<int>(rng.uniform(std::max(k, 1), k + 1)));
    LinearChain c = random_chain(rng, pool, k);
    LinearChain s = subdivide(c);
    LinearChain dc = boundary(c);
    record(0, boundary(s) == subdivide(dc));
    LinearChain t = chain_homotopy_T(c);
    record(1, boundary(t) + chain_homotopy_T(dc) == c - s);
    long cost = 1;
    long pieces = factorial(k + 1).get_si();
    Iterated it{c, LinearChain(pool, k + 1)};
    Iterated itd{dc, LinearChain(pool, k)};
    for (int r = 1; r <= max_r; ++r) {
      cost *= pieces;
      if (cost > term_budget) break;
      for (Iterated* x : {&it, &itd}) {
        x->homotopy += chain_homotopy_T(x->subdivided);
        x->subdivided = subdivide(x->subdivided);
      }
      record(2, boundary(it.homotopy) + itd.homotopy == c - it.subdivided);
    }
    record(3, static_cast<long>(subdivide(standard_simplex_chain(k)).size()) == pieces);
  }
  return report;
}

// S(sigma_* lambda) = sgn(sigma) S(lambda) for every permutation of random k-simplices, k <= max_degree.
inline IdentityTally barr_kock_selftest(std::uint64_t seed, int simplices_per_degree = 3, int max_degree = 3) {
  Rng rng(seed);
  IdentityTally tally{"S(sigma_* lambda) = sgn(sigma) S(lambda)"};
  for (int k = 0; k <= max_degree; ++k)
    for (int t = 0; t < simplices_per_degree; ++t) {
      auto pool = std::make_shared<PointPool>(k + 1);
      AffineSimplex s;
      for (int v = 0; v <= k; ++v) {
        Point q;
        for (int x = 0; x <= k; ++x) q.push_back(rng.rational(9, 5));
        s.push_back(q);
      }
      LinearChain base = subdivide(LinearChain::simplex(pool, s));
      std::vector<int> sigma(k + 1);
      std::iota(sigma.begin(), sigma.end(), 0);
      do {
        auto [moved, sign] = permute(s, sigma);
        (subdivide(LinearChain::simplex(pool, moved)) == sign * base ? tally.passed : tally.failed)++;
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  return tally;
}

}  // namespace simpkit
