#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace simpkit {

// Image vector of an order-preserving map [m] -> [n].
using MonotoneMap = std::vector<int>;

inline MonotoneMap identity_map(int n) {
  MonotoneMap m(n + 1);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

// coface delta^i : [n-1] -> [n], skipping i
inline MonotoneMap coface_map(int n, int i) {
  MonotoneMap m(n);
  for (int j = 0; j < n; ++j) m[j] = j < i ? j : j + 1;
  return m;
}

// codegeneracy sigma^i : [n+1] -> [n], hitting i twice
inline MonotoneMap codegeneracy_map(int n, int i) {
  MonotoneMap m(n + 2);
  for (int j = 0; j <= n + 1; ++j) m[j] = j <= i ? j : j - 1;
  return m;
}

// (f . g)(j) = f(g(j))
inline MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g) {
  MonotoneMap r(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) r[j] = f[g[j]];
  return r;
}

// A cell in Eilenberg-Zilber normal form: X(eta)(base) with eta : [dim] -> [dim base] surjective.
struct Cell {
  int base = 0;
  MonotoneMap eta;

  int dim() const { return static_cast<int>(eta.size()) - 1; }
  int base_dim() const { return eta.empty() ? -1 : eta.back(); }
  bool nondegenerate() const { return base_dim() == dim(); }

  // Degeneracy word i_k > ... > i_1 with cell = s_{i_k} ... s_{i_1} base.
  std::vector<int> degeneracy_word() const {
    std::vector<int> w;
    for (int j = dim() - 1; j >= 0; --j)
      if (eta[j] == eta[j + 1]) w.push_back(j);
    return w;
  }

  auto operator<=>(const Cell&) const = default;
  bool operator==(const Cell&) const = default;
};

inline Cell degenerate(const Cell& c, int i) { return {c.base, compose(c.eta, codegeneracy_map(c.dim(), i))}; }

inline Cell cell_from_word(int base, int base_dim, const std::vector<int>& word) {
  for (std::size_t k = 1; k < word.size(); ++k)
    if (word[k - 1] <= word[k]) throw std::invalid_argument("degeneracy word is not strictly decreasing");
  Cell c{base, identity_map(base_dim)};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it < 0 || *it > c.dim()) throw std::invalid_argument("degeneracy index out of range");
    c = degenerate(c, *it);
  }
  return c;
}

// Finitely generated simplicial set, explicit up to max_degree; only nondegenerate simplices are stored.
class FinSimplicialSet {
 public:
  struct Simplex {
    std::string id;
    int dim = 0;
    std::vector<Cell> faces;
  };

  FinSimplicialSet() = default;
  explicit FinSimplicialSet(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("max_degree must be nonnegative");
  }

  // Appends a nondegenerate simplex; faces d_0..d_dim must refer to earlier simplices.
  int add_simplex(std::string id, int dim, std::vector<Cell> faces) {
    if (dim < 0 || dim > max_degree_)
      throw std::invalid_argument("simplex '" + id + "' has dimension outside 0..max_degree");
    if (index_.count(id)) throw std::invalid_argument("duplicate simplex id '" + id + "'");
    if (static_cast<int>(faces.size()) != (dim == 0 ? 0 : dim + 1))
      throw std::invalid_argument("simplex '" + id + "' has wrong number of faces");
    for (const auto& f : faces) {
      if (f.base < 0 || f.base >= static_cast<int>(simplices_.size()))
        throw std::invalid_argument("simplex '" + id + "' references an unknown face");
      if (f.dim() != dim - 1 || f.base_dim() != simplices_[f.base].dim)
        throw std::invalid_argument("simplex '" + id + "' has a face of the wrong dimension");
    }
    int k = static_cast<int>(simplices_.size());
    simplices_.push_back({id, dim, std::move(faces)});
    index_.emplace(std::move(id), k);
    if (static_cast<int>(by_dim_.size()) <= dim) by_dim_.resize(dim + 1);
    by_dim_[dim].push_back(k);
    return k;
  }

  int max_degree() const { return max_degree_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Simplex& simplex(int k) const { return simplices_.at(k); }
  const std::vector<int>& nondegenerate(int n) const {
    static const std::vector<int> none;
    return n >= 0 && n < static_cast<int>(by_dim_.size()) ? by_dim_[n] : none;
  }
  int find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown simplex '" + id + "'");
    return it->second;
  }
  bool contains(const std::string& id) const { return index_.count(id) > 0; }

  Cell cell(int k) const { return {k, identity_map(simplices_.at(k).dim)}; }

  // X(theta)(c) for theta : [m] -> [dim c].
  Cell apply(const Cell& c, const MonotoneMap& theta) const {
    MonotoneMap total = compose(c.eta, theta);
    MonotoneMap image = total;
    image.erase(std::unique(image.begin(), image.end()), image.end());
    MonotoneMap epi(total.size());
    for (std::size_t j = 0, r = 0; j < total.size(); ++j) {
      if (j > 0 && total[j] != total[j - 1]) ++r;
      epi[j] = static_cast<int>(r);
    }
    Cell f = restrict_to(c.base, image);
    return {f.base, compose(f.eta, epi)};
  }

  Cell face(const Cell& c, int i) const {
    if (c.dim() < 1 || i < 0 || i > c.dim()) throw std::out_of_range("face index out of range");
    return apply(c, coface_map(c.dim(), i));
  }
  Cell degeneracy(const Cell& c, int i) const {
    if (i < 0 || i > c.dim() || c.dim() + 1 > max_degree_) throw std::out_of_range("degeneracy outside truncation");
    return degenerate(c, i);
  }

  // All n-cells, degenerate ones included, ordered by base then map.
  std::vector<Cell> cells(int n) const {
    std::vector<Cell> out;
    for (const auto& s : simplices_) {
      if (s.dim > n) continue;
      int k = static_cast<int>(&s - simplices_.data());
      for_each_surjection(n, s.dim, [&](const MonotoneMap& eta) { out.push_back({k, eta}); });
    }
    return out;
  }

  std::string describe(const Cell& c) const {
    std::string s;
    for (int i : c.degeneracy_word()) s += "s" + std::to_string(i) + " ";
    return s + simplices_.at(c.base).id;
  }

  // Exhaustive check of every simplicial identity on all cells up to max_degree.
  void validate() const {
    for (const auto& s : simplices_)
      if (s.dim > 0 && s.dim - 1 > max_degree_ - 1)
        throw std::invalid_argument("simplex '" + s.id + "' has faces beyond the truncation");
    for (int n = 0; n <= max_degree_; ++n) {
      for (const Cell& x : cells(n)) {
        for (int j = 0; j <= n && n >= 2; ++j)
          for (int i = 0; i < j; ++i)
            if (face(face(x, j), i) != face(face(x, i), j - 1))
              fail("d_i d_j = d_{j-1} d_i", x, i, j);
        if (n + 1 > max_degree_) continue;
        for (int j = 0; j <= n; ++j) {
          Cell sj = degenerate(x, j);
          for (int i = 0; i <= n + 1; ++i) {
            Cell lhs = face(sj, i);
            Cell rhs;
            if (i < j)
              rhs = degenerate(face(x, i), j - 1);
            else if (i == j || i == j + 1)
              rhs = x;
            else
              rhs = degenerate(face(x, i - 1), j);
            if (lhs != rhs) fail("d_i s_j", x, i, j);
          }
          if (n + 2 > max_degree_) continue;
          for (int i = 0; i <= j; ++i)
            if (degenerate(degenerate(x, j), i) != degenerate(degenerate(x, i), j + 1))
              fail("s_i s_j = s_{j+1} s_i", x, i, j);
        }
      }
    }
  }

  template <class F>
  static void for_each_surjection(int n, int m, F&& f) {
    MonotoneMap eta(n + 1);
    auto rec = [&](auto&& self, int pos, int value) -> void {
      if (pos == n + 1) {
        if (value == m) f(eta);
        return;
      }
      if (pos == 0) {
        eta[0] = 0;
        self(self, 1, 0);
        return;
      }
      for (int v = value; v <= std::min(value + 1, m); ++v) {
        if (m - v > n - pos) continue;
        eta[pos] = v;
        self(self, pos + 1, v);
      }
    };
    if (m <= n) rec(rec, 0, 0);
  }

 private:
  // X(iota)(base) for an injective iota given by its image.
  Cell restrict_to(int base, const MonotoneMap& image) const {
    int d = simplices_[base].dim;
    if (static_cast<int>(image.size()) == d + 1) return {base, identity_map(d)};
    int missing = d;
    for (int j = static_cast<int>(image.size()) - 1, v = d; v >= 0; --v) {
      if (j >= 0 && image[j] == v) {
        --j;
        continue;
      }
      missing = v;
      break;
    }
    MonotoneMap shifted(image.size());
    for (std::size_t j = 0; j < image.size(); ++j) shifted[j] = image[j] < missing ? image[j] : image[j] - 1;
    return apply(simplices_[base].faces[missing], shifted);
  }

  [[noreturn]] void fail(const std::string& rule, const Cell& x, int i, int j) const {
    throw std::invalid_argument("simplicial identity " + rule + " fails on " + describe(x) + " (i=" +
                                std::to_string(i) + ", j=" + std::to_string(j) + ")");
  }

  int max_degree_ = 0;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<int>> by_dim_;
  std::unordered_map<std::string, int> index_;
};

// Simplicial complex on opaque vertex ids with an order that is total on every simplex.
class OrderedComplex {
 public:
  OrderedComplex() = default;

  // An empty `order` selects lexicographic order on ids.
  OrderedComplex(std::vector<std::string> vertices, std::vector<std::pair<std::string, std::string>> order,
                 std::vector<std::vector<std::string>> simplices)
      : vertices_(std::move(vertices)), order_(std::move(order)) {
    std::set<std::string> seen;
    for (const auto& v : vertices_)
      if (!seen.insert(v).second) throw std::invalid_argument("duplicate vertex '" + v + "'");
    for (const auto& [a, b] : order_)
      if (!seen.count(a) || !seen.count(b)) throw std::invalid_argument("order mentions unknown vertex");
    build_order();
    std::set<std::vector<std::string>> closed;
    for (auto s : simplices) {
      if (s.empty()) throw std::invalid_argument("empty simplex");
      for (const auto& v : s)
        if (!seen.count(v)) throw std::invalid_argument("simplex mentions unknown vertex '" + v + "'");
      s = sorted(s);
      for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k - 1] == s[k]) throw std::invalid_argument("simplex repeats vertex '" + s[k] + "'");
      std::size_t n = s.size();
      for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        std::vector<std::string> sub;
        for (std::size_t k = 0; k < n; ++k)
          if (mask >> k & 1) sub.push_back(s[k]);
        closed.insert(sub);
      }
    }
    for (const auto& v : vertices_) closed.insert({v});
    for (const auto& s : closed) {
      int d = static_cast<int>(s.size()) - 1;
      if (static_cast<int>(simplices_.size()) <= d) simplices_.resize(d + 1);
      simplices_[d].push_back(s);
    }
    for (auto& level : simplices_) std::sort(level.begin(), level.end(), [&](const auto& a, const auto& b) {
        return ranks(a) < ranks(b);
      });
  }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<std::pair<std::string, std::string>>& order() const { return order_; }
  int dim() const { return static_cast<int>(simplices_.size()) - 1; }
  // Simplices of dimension n, each listed in increasing vertex order.
  const std::vector<std::vector<std::string>>& simplices(int n) const {
    static const std::vector<std::vector<std::string>> none;
    return n >= 0 && n < static_cast<int>(simplices_.size()) ? simplices_[n] : none;
  }
  bool less(const std::string& a, const std::string& b) const {
    if (order_.empty()) return a < b;
    return reach_.count({a, b}) > 0;
  }

  // Sorts a simplex by the order; throws when the order is not total on it.
  std::vector<std::string> sorted(std::vector<std::string> s) const {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[i] != s[j] && !less(s[i], s[j]) && !less(s[j], s[i])) {
          std::string name;
          for (const auto& v : s) name += (name.empty() ? "" : ",") + v;
          throw std::invalid_argument("order is not total on simplex {" + name + "}");
        }
    std::sort(s.begin(), s.end(), [&](const auto& a, const auto& b) { return a != b && less(a, b); });
    return s;
  }

  static std::string simplex_id(const std::vector<std::string>& s) {
    if (s.size() == 1) return s[0];
    std::string id = "[";
    for (std::size_t k = 0; k < s.size(); ++k) id += (k ? "," : "") + s[k];
    return id + "]";
  }

 private:
  void build_order() {
    if (order_.empty()) return;
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& [a, b] : order_) next[a].push_back(b);
    for (const auto& v : vertices_) {
      std::vector<std::string> stack{v};
      std::set<std::string> visited;
      while (!stack.empty()) {
        std::string u = stack.back();
        stack.pop_back();
        for (const auto& w : next[u])
          if (visited.insert(w).second) stack.push_back(w);
      }
      if (visited.count(v)) throw std::invalid_argument("vertex order has a cycle through '" + v + "'");
      for (const auto& w : visited) reach_.insert({v, w});
    }
    rank_.clear();
  }
  std::vector<int> ranks(const std::vector<std::string>& s) const {
    std::vector<int> r;
    for (const auto& v : s) r.push_back(position(v));
    return r;
  }
  int position(const std::string& v) const {
    if (rank_.empty()) {
      std::vector<std::string> all = vertices_;
      std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        if (order_.empty()) return a < b;
        int below_a = 0, below_b = 0;
        for (const auto& u : vertices_) {
          below_a += less(u, a);
          below_b += less(u, b);
        }
        return below_a < below_b;
      });
      for (std::size_t k = 0; k < all.size(); ++k) rank_[all[k]] = static_cast<int>(k);
    }
    return rank_.at(v);
  }

  std::vector<std::string> vertices_;
  std::vector<std::pair<std::string, std::string>> order_;
  std::set<std::pair<std::string, std::string>> reach_;
  std::vector<std::vector<std::vector<std::string>>> simplices_;
  mutable std::map<std::string, int> rank_;
};

// S_<=(K): n-simplices are weakly monotone vertex tuples spanning a simplex of K.
inline FinSimplicialSet ordered_to_sset(const OrderedComplex& k, int max_degree) {
  if (max_degree < k.dim()) throw std::invalid_argument("max_degree is below the dimension of the complex");
  FinSimplicialSet x(max_degree);
  std::map<std::vector<std::string>, int> index;
  for (int n = 0; n <= k.dim(); ++n)
    for (const auto& s : k.simplices(n)) {
      std::vector<Cell> faces;
      for (int i = 0; n > 0 && i <= n; ++i) {
        auto f = s;
        f.erase(f.begin() + i);
        faces.push_back({index.at(f), identity_map(n - 1)});
      }
      index[s] = x.add_simplex(OrderedComplex::simplex_id(s), n, std::move(faces));
    }
  return x;
}

// Vertices 0..n, ordered numerically.
inline OrderedComplex standard_simplex_complex(int n, bool boundary_only) {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> order;
  for (int i = 0; i <= n; ++i) v.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) order.emplace_back(v[i], v[i + 1]);
  std::vector<std::vector<std::string>> simplices;
  if (boundary_only) {
    for (int i = 0; i <= n; ++i) {
      auto f = v;
      f.erase(f.begin() + i);
      simplices.push_back(f);
    }
  } else {
    simplices.push_back(v);
  }
  return OrderedComplex(v, order, simplices);
}

inline FinSimplicialSet boundary_sphere(int n, int max_degree = -1) {
  if (n < 1) throw std::invalid_argument("boundary_sphere: n must be at least 1 (the boundary of a point is empty)");
  return ordered_to_sset(standard_simplex_complex(n, true), max_degree < 0 ? n : max_degree);
}

inline FinSimplicialSet full_simplex(int n, int max_degree = -1) {
  if (n < 0) throw std::invalid_argument("full_simplex: n must be nonnegative");
  return ordered_to_sset(standard_simplex_complex(n, false), max_degree < 0 ? n + 1 : max_degree);
}

// An n-simplex of the nerve of the pair groupoid: an (n+1)-tuple of points.
template <class P>
class PairNerveTuple {
 public:
  PairNerveTuple(std::vector<P> points, int n) : points_(std::move(points)) {
    if (n < 0 || static_cast<int>(points_.size()) != n + 1)
      throw std::invalid_argument("pair nerve tuple: expected n+1 points");
  }
  int dim() const { return static_cast<int>(points_.size()) - 1; }
  const std::vector<P>& points() const { return points_; }
  PairNerveTuple face(int i) const {
    if (dim() < 1 || i < 0 || i > dim()) throw std::out_of_range("face index out of range");
    auto p = points_;
    p.erase(p.begin() + i);
    return PairNerveTuple(std::move(p), dim() - 1);
  }
  PairNerveTuple degeneracy(int i) const {
    if (i < 0 || i > dim()) throw std::out_of_range("degeneracy index out of range");
    auto p = points_;
    p.insert(p.begin() + i, points_[i]);
    return PairNerveTuple(std::move(p), dim() + 1);
  }
  // Indices i with this = s_i d_{i+1}, i.e. repeated consecutive entries.
  std::vector<int> degeneracies() const {
    std::vector<int> r;
    for (int i = 0; i < dim(); ++i)
      if (points_[i] == points_[i + 1]) r.push_back(i);
    return r;
  }
  bool is_degenerate() const { return !degeneracies().empty(); }
  bool operator==(const PairNerveTuple&) const = default;

 private:
  std::vector<P> points_;
};

template <class P>
PairNerveTuple<P> pair_nerve_tuple(std::vector<P> points, int n) {
  return PairNerveTuple<P>(std::move(points), n);
}

}  // namespace simpkit
