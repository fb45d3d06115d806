#include <catch2/catch_amalgamated.hpp>

#include "simpkit/chains.hpp"

using namespace simpkit;

namespace {

// Oracle: alternate row and column Hermite reductions (first nonzero pivot, pairwise Euclid,
// entries above pivots reduced) until diagonal, then repair the divisibility chain by gcd/lcm swaps.
void hermite_rows(IntMatrix& a) {
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    a.swap_rows(r, p);
    for (int i = r + 1; i < a.rows(); ++i)
      while (a(i, c) != 0) {
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(i, c).get_mpz_t());
        a.add_row(r, i, -q);
        a.swap_rows(r, i);
      }
    if (a(r, c) < 0) a.negate_row(r);
    for (int i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
      a.add_row(i, r, -q);
    }
    ++r;
  }
}

std::vector<Int> naive_invariant_factors(IntMatrix a) {
  auto diagonal = [](const IntMatrix& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (i != j && m(i, j) != 0) return false;
    return true;
  };
  while (!diagonal(a)) {
    hermite_rows(a);
    a = a.transpose();
  }
  std::vector<Int> diag;
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (a(i, i) != 0) diag.push_back(abs(a(i, i)));
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      Int g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      diag[i] = g, diag[j] = l;
    }
  return diag;
}

// Second oracle for tiny matrices: d_k = D_k / D_{k-1}, D_k the gcd of k x k minors.
std::vector<Int> determinantal_factors(const IntMatrix& m) {
  std::vector<Int> out;
  Int prev = 1;
  int n = std::min(m.rows(), m.cols());
  for (int k = 1; k <= n; ++k) {
    Int g = 0;
    std::vector<int> rs(k), cs(k);
    auto choose = [](int total, int k, auto&& visit) {
      std::vector<int> pick(k);
      auto rec = [&](auto&& self, int pos, int from) -> void {
        if (pos == k) {
          visit(pick);
          return;
        }
        for (int v = from; v < total; ++v) {
          pick[pos] = v;
          self(self, pos + 1, v + 1);
        }
      };
      rec(rec, 0, 0);
    };
    choose(m.rows(), k, [&](const std::vector<int>& r) {
      choose(m.cols(), k, [&](const std::vector<int>& c) {
        IntMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = m(r[i], c[j]);
        Int d = determinant(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      });
    });
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntMatrix random_matrix(Rng& rng, int rows, int cols, int bound, int zero_bias) {
  IntMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rng.uniform(0, zero_bias) == 0) m(i, j) = static_cast<long>(rng.uniform(-bound, bound));
  return m;
}

bool is_diagonal_chain(const SmithForm& s) {
  for (int i = 0; i < s.D.rows(); ++i)
    for (int j = 0; j < s.D.cols(); ++j)
      if (i != j && s.D(i, j) != 0) return false;
  auto d = s.diagonal();
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i] <= 0 || d[i + 1] % d[i] != 0) return false;
  return true;
}

// Torus on 7 vertices: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
OrderedComplex torus7() {
  std::vector<std::string> v;
  for (int i = 0; i < 7; ++i) v.push_back(std::to_string(i));
  std::vector<std::vector<std::string>> tri;
  for (int i = 0; i < 7; ++i) {
    tri.push_back({v[i], v[(i + 1) % 7], v[(i + 3) % 7]});
    tri.push_back({v[i], v[(i + 2) % 7], v[(i + 3) % 7]});
  }
  return OrderedComplex(v, {}, tri);
}

// Simplicial chain complex of an ordered complex, built straight from its sorted simplices.
ChainComplex ordered_complex_chains(const OrderedComplex& k, int top) {
  std::vector<int> ranks;
  std::vector<IntMatrix> bd(top + 1);
  std::vector<std::map<std::vector<std::string>, int>> index(top + 1);
  for (int n = 0; n <= top; ++n) {
    ranks.push_back(static_cast<int>(k.simplices(n).size()));
    for (std::size_t j = 0; j < k.simplices(n).size(); ++j) index[n][k.simplices(n)[j]] = static_cast<int>(j);
  }
  for (int n = 1; n <= top; ++n) {
    bd[n] = IntMatrix(ranks[n - 1], ranks[n]);
    for (const auto& [s, j] : index[n])
      for (int i = 0; i <= n; ++i) {
        auto f = s;
        f.erase(f.begin() + i);
        bd[n](index[n - 1].at(f), j) += i % 2 ? -1 : 1;
      }
  }
  return ChainComplex(ranks, bd);
}

}  // namespace

TEST_CASE("smith normal form examples") {
  auto s = smith_normal_form(IntMatrix{{2, 0}, {0, 3}});
  CHECK(s.diagonal() == std::vector<Int>{1, 6});
  auto z = smith_normal_form(IntMatrix(2, 3));
  CHECK(z.rank == 0);
  CHECK(z.U == IntMatrix::identity(2));
  CHECK(z.V == IntMatrix::identity(3));
  auto id = smith_normal_form(IntMatrix::identity(3));
  CHECK(id.D == IntMatrix::identity(3));
  auto empty = smith_normal_form(IntMatrix(0, 4));
  CHECK(empty.rank == 0);
}

TEST_CASE("smith normal form agrees with oracles on random matrices up to 20x20") {
  Rng rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    int rows = static_cast<int>(rng.uniform(1, 20)), cols = static_cast<int>(rng.uniform(1, 20));
    IntMatrix m = random_matrix(rng, rows, cols, trial % 3 == 0 ? 40 : 4, static_cast<int>(rng.uniform(0, 4)));
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    REQUIRE(is_diagonal_chain(s));
    REQUIRE(abs(determinant(s.U)) == 1);
    REQUIRE(abs(determinant(s.V)) == 1);
    CHECK(s.diagonal() == naive_invariant_factors(m));
  }
  for (int trial = 0; trial < 80; ++trial) {
    int rows = static_cast<int>(rng.uniform(1, 4)), cols = static_cast<int>(rng.uniform(1, 4));
    IntMatrix m = random_matrix(rng, rows, cols, 9, 1);
    CHECK(smith_normal_form(m).diagonal() == determinantal_factors(m));
  }
}

TEST_CASE("normalized complexes") {
  SECTION("point") {
    OrderedComplex k({"p"}, {}, {{"p"}});
    auto c = normalized_complex(ordered_to_sset(k, 3), 3);
    CHECK(c.rank(0) == 1);
    CHECK(c.rank(1) == 0);
    CHECK(homology(c, 0) == HomologyGroup{1, {}});
    CHECK(homology(c, 1).trivial());
    CHECK(homology(c, 2).trivial());
  }
  SECTION("circle boundary matrix is the signed incidence matrix") {
    auto c = normalized_complex(boundary_sphere(2), 1);
    CHECK(c.boundary(1) == IntMatrix{{-1, -1, 0}, {1, 0, -1}, {0, 1, 1}});
  }
  SECTION("2-sphere") {
    auto c = normalized_complex(boundary_sphere(3), 3);
    CHECK(c.rank(0) == 4);
    CHECK(c.rank(1) == 6);
    CHECK(c.rank(2) == 4);
    CHECK(c.boundary_squares_to_zero());
    CHECK(homology(c, 0) == HomologyGroup{1, {}});
    CHECK(homology(c, 1).trivial());
    CHECK(homology(c, 2) == HomologyGroup{1, {}});
    CHECK_THROWS_AS(homology(c, 3), std::out_of_range);
  }
  SECTION("top beyond stored data") { CHECK_THROWS(normalized_complex(boundary_sphere(2), 5)); }
}

TEST_CASE("torus and sphere agree with the ordered complex's own chains") {
  for (const OrderedComplex& k : {torus7(), standard_simplex_complex(3, true)}) {
    auto x = ordered_to_sset(k, 3);
    auto via_sset = normalized_complex(x, 3);
    auto direct = ordered_complex_chains(k, 3);
    for (int n = 0; n <= 2; ++n) CHECK(homology(via_sset, n) == homology(direct, n));
  }
  auto t = normalized_complex(ordered_to_sset(torus7(), 3), 3);
  CHECK(homology(t, 0) == HomologyGroup{1, {}});
  CHECK(homology(t, 1) == HomologyGroup{2, {}});
  CHECK(homology(t, 2) == HomologyGroup{1, {}});
}

TEST_CASE("d squared vanishes on the corpus") {
  for (const auto& x : {boundary_sphere(2, 4), boundary_sphere(3, 4), full_simplex(3, 4),
                        ordered_to_sset(torus7(), 4)})
    CHECK(normalized_complex(x, 4).boundary_squares_to_zero());
}

TEST_CASE("presented homology") {
  SECTION("free complexes reduce to ordinary homology") {
    auto c = normalized_complex(ordered_to_sset(torus7(), 3), 3);
    for (int n = 1; n <= 2; ++n)
      CHECK(presented_homology(c.boundary(n), IntMatrix(c.rank(n - 1), 0), c.boundary(n + 1), IntMatrix(c.rank(n), 0)) ==
            homology(c, n));
  }
  SECTION("quotient by relations creates torsion") {
    // Z / 6 with zero differentials.
    auto h = presented_homology(IntMatrix(1, 1), IntMatrix(1, 0), IntMatrix(1, 0), IntMatrix{{6}});
    CHECK(h == HomologyGroup{0, {6}});
    // Z^2 / (2, 4) -> Z/2 + Z
    auto g = presented_homology(IntMatrix(1, 2), IntMatrix(1, 0), IntMatrix(2, 0), IntMatrix{{2}, {4}});
    CHECK(g == HomologyGroup{1, {2}});
  }
  SECTION("cycles modulo target relations") {
    // d : Z -> Z/2 multiplication by 1; kernel is 2Z.
    auto h = presented_homology(IntMatrix{{1}}, IntMatrix{{2}}, IntMatrix(1, 0), IntMatrix(1, 0));
    CHECK(h == HomologyGroup{1, {}});
  }
}
