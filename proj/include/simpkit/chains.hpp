#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simpkit/rational.hpp"
#include "simpkit/simpset.hpp"

namespace simpkit {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged matrix literal");
      for (long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Int& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  bool operator==(const IntMatrix&) const = default;

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& v) { return v == 0; });
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Int& v = a(i, k);
        if (v == 0) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += v * b(k, j);
      }
    return r;
  }
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  IntMatrix operator-() const {
    IntMatrix r = *this;
    for (auto& v : r.data_) v = -v;
    return r;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<Int> column(int c) const {
    std::vector<Int> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  // Columns side by side.
  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("hcat row mismatch");
    IntMatrix r(a.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
      for (int j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
    }
    return r;
  }

  static IntMatrix from_columns(int rows, const std::vector<std::vector<Int>>& cols) {
    IntMatrix m(rows, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (int i = 0; i < rows; ++i) m(i, static_cast<int>(j)) = cols[j][i];
    return m;
  }

  void swap_rows(int a, int b) {
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(int a, int b) {
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row a += f * row b
  void add_row(int a, int b, const Int& f) {
    for (int j = 0; j < cols_; ++j) (*this)(a, j) += f * (*this)(b, j);
  }
  void add_col(int a, int b, const Int& f) {
    for (int i = 0; i < rows_; ++i) (*this)(i, a) += f * (*this)(i, b);
  }
  void negate_row(int a) {
    for (int j = 0; j < cols_; ++j) (*this)(a, j) = -(*this)(a, j);
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

inline Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  std::vector<std::vector<Rat>> a(m.rows(), std::vector<Rat>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return Rat(determinant(std::move(a))).get_num();
}

struct SmithForm {
  IntMatrix U, D, V;
  int rank = 0;
  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    for (int i = 0; i < rank; ++i) d.push_back(D(i, i));
    return d;
  }
};

// U * M * V = D, D diagonal with d_1 | d_2 | ..., all d_i > 0; U and V unimodular.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const int rows = m.rows(), cols = m.cols();
  SmithForm s{IntMatrix::identity(rows), m, IntMatrix::identity(cols), 0};
  IntMatrix& a = s.D;
  for (int t = 0; t < std::min(rows, cols); ++t) {
    auto bring_smallest = [&]() {
      int pr = -1, pc = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j)
          if (a(i, j) != 0 && (pr < 0 || abs(a(i, j)) < abs(a(pr, pc)))) pr = i, pc = j;
      if (pr < 0) return false;
      if (pr != t) a.swap_rows(pr, t), s.U.swap_rows(pr, t);
      if (pc != t) a.swap_cols(pc, t), s.V.swap_cols(pc, t);
      return true;
    };
    if (!bring_smallest()) break;
    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_row(i, t, -q), s.U.add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_col(j, t, -q), s.V.add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        bring_smallest();
        continue;
      }
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      a.add_row(t, bad, 1), s.U.add_row(t, bad, 1);
    }
    if (a(t, t) < 0) a.negate_row(t), s.U.negate_row(t);
    s.rank = t + 1;
  }
  return s;
}

struct HomologyGroup {
  Int betti = 0;
  std::vector<Int> torsion;
  bool operator==(const HomologyGroup&) const = default;
  bool trivial() const { return betti == 0 && torsion.empty(); }
  std::string str() const {
    std::string s;
    if (betti != 0) s = betti == 1 ? "Z" : "Z^" + betti.get_str();
    for (const auto& t : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + t.get_str());
    return s.empty() ? "0" : s;
  }
};

inline std::vector<Int> invariant_factors_above_one(const SmithForm& s) {
  std::vector<Int> r;
  for (const auto& d : s.diagonal())
    if (d > 1) r.push_back(d);
  return r;
}

class ChainComplex {
 public:
  ChainComplex() = default;
  // boundaries[n] has shape ranks[n-1] x ranks[n]; boundaries[0] is ignored.
  ChainComplex(std::vector<int> ranks, std::vector<IntMatrix> boundaries, std::vector<std::vector<std::string>> labels = {})
      : ranks_(std::move(ranks)), boundaries_(std::move(boundaries)), labels_(std::move(labels)) {
    boundaries_.resize(ranks_.size());
    if (!ranks_.empty()) boundaries_[0] = IntMatrix(0, ranks_[0]);
    for (std::size_t n = 1; n < ranks_.size(); ++n)
      if (boundaries_[n].rows() != ranks_[n - 1] || boundaries_[n].cols() != ranks_[n])
        throw std::invalid_argument("boundary matrix " + std::to_string(n) + " has the wrong shape");
  }

  int top() const { return static_cast<int>(ranks_.size()) - 1; }
  int rank(int n) const { return n >= 0 && n <= top() ? ranks_[n] : 0; }
  const IntMatrix& boundary(int n) const { return boundaries_.at(n); }
  const std::vector<std::string>& labels(int n) const { return labels_.at(n); }

  bool boundary_squares_to_zero() const {
    for (int n = 2; n <= top(); ++n)
      if (!(boundaries_[n - 1] * boundaries_[n]).is_zero()) return false;
    return true;
  }

 private:
  std::vector<int> ranks_;
  std::vector<IntMatrix> boundaries_;
  std::vector<std::vector<std::string>> labels_;
};

inline ChainComplex normalized_complex(const FinSimplicialSet& k, int top) {
  if (top < 0 || top > k.max_degree())
    throw std::invalid_argument("normalized_complex: top " + std::to_string(top) + " exceeds stored degree " +
                                std::to_string(k.max_degree()));
  std::vector<int> ranks;
  std::vector<std::vector<std::string>> labels;
  std::vector<int> slot(k.simplices().size(), -1);
  for (int n = 0; n <= top; ++n) {
    ranks.push_back(static_cast<int>(k.nondegenerate(n).size()));
    labels.emplace_back();
    for (std::size_t j = 0; j < k.nondegenerate(n).size(); ++j) {
      int s = k.nondegenerate(n)[j];
      slot[s] = static_cast<int>(j);
      labels.back().push_back(k.simplex(s).id);
    }
  }
  std::vector<IntMatrix> bd(top + 1);
  for (int n = 1; n <= top; ++n) {
    bd[n] = IntMatrix(ranks[n - 1], ranks[n]);
    for (int j = 0; j < ranks[n]; ++j) {
      int s = k.nondegenerate(n)[j];
      for (int i = 0; i <= n; ++i) {
        const Cell& f = k.simplex(s).faces[i];
        if (!f.nondegenerate()) continue;
        bd[n](slot[f.base], j) += (i % 2 ? -1 : 1);
      }
    }
  }
  return ChainComplex(ranks, bd, labels);
}

// H_n = ker d_n / im d_{n+1} of a free complex.
inline HomologyGroup homology(const ChainComplex& c, int n) {
  if (n < 0 || n + 1 > c.top())
    throw std::out_of_range("homology: degree " + std::to_string(n) + " needs boundaries up to " +
                            std::to_string(n + 1) + " but the complex stops at " + std::to_string(c.top()));
  int rank_in = n == 0 ? 0 : smith_normal_form(c.boundary(n)).rank;
  SmithForm out = smith_normal_form(c.boundary(n + 1));
  return {c.rank(n) - rank_in - out.rank, invariant_factors_above_one(out)};
}

// Integer kernel basis (as columns) of m.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  IntMatrix k(m.cols(), m.cols() - s.rank);
  for (int j = s.rank; j < m.cols(); ++j)
    for (int i = 0; i < m.cols(); ++i) k(i, j - s.rank) = s.V(i, j);
  return k;
}

// Subquotient {x : d x in im out_relations} / (im incoming + im relations) for groups Z^g / R.
// `d` maps Z^g -> Z^h, `target_relations` spans the relations of Z^h.
inline HomologyGroup presented_homology(const IntMatrix& d, const IntMatrix& target_relations, const IntMatrix& incoming,
                                        const IntMatrix& relations) {
  const int g = d.cols();
  IntMatrix cycles_lifted = integer_kernel(IntMatrix::hcat(d, target_relations));
  IntMatrix cycles(g, cycles_lifted.cols());
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < cycles_lifted.cols(); ++j) cycles(i, j) = cycles_lifted(i, j);
  SmithForm cs = smith_normal_form(cycles);
  const int k = cs.rank;
  IntMatrix boundaries = IntMatrix::hcat(incoming, relations);
  // Cycle lattice basis is U^{-1} diag(d_1..d_k); coordinates of b are (U b)_i / d_i.
  IntMatrix ub = cs.U * boundaries;
  IntMatrix coords(k, boundaries.cols());
  for (int j = 0; j < boundaries.cols(); ++j) {
    for (int i = 0; i < g; ++i) {
      if (i < k) {
        if (ub(i, j) % cs.D(i, i) != 0) throw std::logic_error("boundary not contained in cycles");
        coords(i, j) = ub(i, j) / cs.D(i, i);
      } else if (ub(i, j) != 0) {
        throw std::logic_error("boundary not contained in cycles");
      }
    }
  }
  SmithForm q = smith_normal_form(coords);
  return {k - q.rank, invariant_factors_above_one(q)};
}

}  // namespace simpkit
