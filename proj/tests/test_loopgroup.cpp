#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "simpkit/loopgroup.hpp"

using namespace simpkit;

namespace {

HomologyGroup z() { return {1, {}}; }
HomologyGroup zmod(long n) { return {0, {Int(n)}}; }
HomologyGroup zero() { return {0, {}}; }

// Two vertices joined by two parallel edges.
FinSimplicialSet digon() {
  FinSimplicialSet k(2);
  int a = k.add_simplex("a", 0, {});
  int b = k.add_simplex("b", 0, {});
  k.add_simplex("e", 1, {k.cell(b), k.cell(a)});
  k.add_simplex("f", 1, {k.cell(b), k.cell(a)});
  return k;
}

FiniteSimplicialGroup symmetric3(int depth) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteSimplicialGroup::constant(table, depth);
}

}  // namespace

TEST_CASE("group words reduce freely") {
  GroupWord g = GroupWord::letter(0), h = GroupWord::letter(1);
  CHECK((g * g.inverse()).empty());
  CHECK((g * h * h.inverse() * g).length() == 2);
  CHECK((g * h).inverse() == h.inverse() * g.inverse());
  CHECK((g * h * g.inverse()).exponent_sum(2) == std::vector<Int>{0, 1});
  CHECK((g * h * g.inverse()).cyclically_reduced() == h);
  CHECK(GroupWord::power(0, -3).str({"a"}) == "a^-3");
  CHECK((g * h * h).str({"a", "b"}) == "a b^2");
  CHECK(GroupWord().str({}) == "e");
  CHECK_THROWS(GroupWord::letter(0, 2));
}

TEST_CASE("maximal trees are breadth-first spanning trees") {
  auto circle = boundary_sphere(2);
  auto t = maximal_tree(circle, "0");
  CHECK(t.edges.size() == 2);
  for (int e : t.edges) CHECK(circle.simplex(e).dim == 1);

  OrderedComplex point({"v"}, {}, {{"v"}});
  CHECK(maximal_tree(ordered_to_sset(point, 1), "v").edges.empty());

  auto two = digon();
  CHECK(maximal_tree(two, "a").edges.size() == 1);

  OrderedComplex apart({"p", "q"}, {}, {{"p"}, {"q"}});
  try {
    maximal_tree(ordered_to_sset(apart, 1), "p");
    FAIL("disconnected input accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("'q'") != std::string::npos);
  }
  CHECK_THROWS(maximal_tree(circle, "[0,1]"));
}

TEST_CASE("loop group generators and simplicial identities") {
  SECTION("circle") {
    auto k = boundary_sphere(2, 3);
    auto t = maximal_tree(k, "0");
    auto g = loop_group(k, t, 2);
    CHECK(g.rank(0) == 1);
    g.validate();
    for (int n = 0; n <= 2; ++n)
      CHECK(g.rank(n) == static_cast<int>(k.cells(n + 1).size() - k.cells(n).size() - t.edges.size()));
  }
  SECTION("generator count on larger inputs") {
    for (auto k : {boundary_sphere(3, 4), full_simplex(2, 4), digon()}) {
      const std::string base = k.simplex(k.nondegenerate(0)[0]).id;
      auto t = maximal_tree(k, base);
      int depth = k.max_degree() - 1;
      auto g = loop_group(k, t, depth);
      g.validate();
      for (int n = 0; n <= depth; ++n)
        CHECK(g.rank(n) == static_cast<int>(k.cells(n + 1).size() - k.cells(n).size() - t.edges.size()));
    }
  }
  SECTION("truncation and tree errors") {
    auto k = boundary_sphere(2, 2);
    CHECK_THROWS_AS(loop_group(k, "0", 2), std::invalid_argument);
    MaximalTree short_tree{k.find("0"), {k.find("[0,1]")}};
    CHECK_THROWS_AS(loop_group(k, short_tree, 1), std::invalid_argument);
    MaximalTree wrong{k.find("0"), {k.find("[0,1]"), k.find("2")}};
    CHECK_THROWS_AS(loop_group(k, wrong, 1), std::invalid_argument);
  }
}

TEST_CASE("pi_0 of loop groups and constant groups") {
  auto circle = pi0_of_group(loop_group(boundary_sphere(2, 2), "0", 1));
  CHECK(circle.free_rank() == 1);
  CHECK(circle.str() == "Z");
  CHECK(circle.abelianization == z());

  auto disk = pi0_of_group(loop_group(full_simplex(2, 3), "0", 1));
  CHECK(disk.trivial());
  CHECK(disk.abelianization.trivial());

  auto two = pi0_of_group(loop_group(digon(), "a", 1));
  CHECK(two.free_rank() == 1);

  auto c2 = pi0_of_group(constant_cyclic(2, 2));
  CHECK(c2.abelianization == zmod(2));
  CHECK(c2.str() == "Z/2");
  CHECK_THROWS(pi0_of_group(constant_cyclic(2, 0)));
}

TEST_CASE("abelianization") {
  auto g = loop_group(boundary_sphere(2, 2), "0", 1);
  auto a = abelianize(g);
  CHECK(a.abelian());
  CHECK(a.rank(0) == 1);
  a.validate();
  CHECK(simplicial_abelian_homotopy(a, 0) == z());
}

TEST_CASE("homotopy of simplicial abelian groups") {
  auto c2 = constant_cyclic(2, 3);
  c2.validate();
  CHECK(simplicial_abelian_homotopy(c2, 0) == zmod(2));
  CHECK(simplicial_abelian_homotopy(c2, 1) == zero());
  CHECK(simplicial_abelian_homotopy(c2, 2) == zero());
  auto none = zero_group(3);
  for (int i = 0; i <= 2; ++i) CHECK(simplicial_abelian_homotopy(none, i).trivial());
  try {
    simplicial_abelian_homotopy(c2, 3);
    FAIL("truncated degree accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("through degree 4") != std::string::npos);
  }
  CHECK_THROWS(simplicial_abelian_homotopy(loop_group(boundary_sphere(2, 2), "0", 1), 0));
}

TEST_CASE("Kan theorem on small complexes") {
  struct Case {
    FinSimplicialSet k;
    int i;
  };
  std::vector<Case> cases{{boundary_sphere(2, 2), 1}, {boundary_sphere(3, 3), 2}, {full_simplex(2, 3), 1}};
  for (auto& [k, i] : cases) {
    auto a = abelianize(loop_group(k, k.simplex(k.nondegenerate(0)[0]).id, i));
    auto h = homology(normalized_complex(k, i + 1 <= k.max_degree() ? i + 1 : i), i);
    CHECK(simplicial_abelian_homotopy(a, i - 1) == h);
  }
  auto disk = abelianize(loop_group(full_simplex(2, 3), "0", 2));
  CHECK(simplicial_abelian_homotopy(disk, 0).trivial());
  CHECK(simplicial_abelian_homotopy(disk, 1).trivial());
  CHECK(simplicial_abelian_homotopy(abelianize(loop_group(boundary_sphere(3, 3), "0", 2)), 1) == z());
}

TEST_CASE("finite groups from presentations") {
  auto g = finite_group(constant_cyclic(6, 2));
  CHECK(g.order(0) == 6);
  for (int a = 0; a < 6; ++a) CHECK(g.face(1, 0, a) == a);
  CHECK_THROWS_WITH(finite_group(constant_cyclic(0, 1)), Catch::Matchers::ContainsSubstring("infinite"));
  CHECK(finite_group(zero_group(1)).order(1) == 1);
}

TEST_CASE("classifying complex of Z/2") {
  auto g = FiniteSimplicialGroup::cyclic(2, 4);
  auto wb = wbar(g, 4);
  wb.validate();
  CHECK(wb.nondegenerate(0).size() == 1);
  CHECK(wb.simplex(wb.nondegenerate(0)[0]).id == "*");
  for (int n = 0; n <= 4; ++n) {
    CHECK(wb.cells(n).size() == (std::size_t{1} << n));
    CHECK(wb.nondegenerate(n).size() == 1);
  }
  auto c = normalized_complex(wb, 4);
  CHECK(homology(c, 1) == zmod(2));
  CHECK(homology(c, 2) == zero());
  CHECK(homology(c, 3) == zmod(2));

  auto w = w_total(g, 4);
  w.validate();
  auto cw = normalized_complex(w, 4);
  CHECK(homology(cw, 0) == z());
  for (int i = 1; i <= 3; ++i) CHECK(homology(cw, i).trivial());
}

TEST_CASE("classifying complex face formulas") {
  auto g = FiniteSimplicialGroup::cyclic(3, 3);
  auto t = detail::wbar_tuples(g);
  CHECK(t.face({1, 2, 0}, 3, 0) == detail::Tuple{2, 0});
  CHECK(t.face({1, 2, 0}, 3, 3) == detail::Tuple{1, 2});
  CHECK(t.face({1, 2, 0}, 3, 1) == detail::Tuple{0, 0});
  CHECK(t.face({1, 2, 0}, 3, 2) == detail::Tuple{1, 2});
  CHECK(t.degeneracy({1, 2}, 2, 0) == detail::Tuple{0, 1, 2});
  CHECK(t.degeneracy({1, 2}, 2, 2) == detail::Tuple{1, 2, 0});
  CHECK(wbar(FiniteSimplicialGroup::cyclic(6, 3), 3).nondegenerate(1).size() == 5);
  CHECK(homology(normalized_complex(wbar(finite_group(constant_cyclic(6, 3)), 3), 2), 1) == zmod(6));
}

TEST_CASE("principal fibration checks") {
  auto r2 = check_principal_fibration(FiniteSimplicialGroup::cyclic(2, 3), 3);
  CHECK(r2.ok());
  CHECK(r2.degrees.size() == 4);

  auto r3 = check_principal_fibration(FiniteSimplicialGroup::cyclic(3, 2), 2);
  CHECK(r3.ok());
  for (const auto& d : r3.degrees) CHECK(d.orbits * 3 == d.total_cells);

  auto trivial = FiniteSimplicialGroup::cyclic(1, 3);
  CHECK(check_principal_fibration(trivial, 3).ok());
  auto w = w_total(trivial, 3), wb = wbar(trivial, 3);
  for (int n = 0; n <= 3; ++n) CHECK(w.nondegenerate(n).size() == wb.nondegenerate(n).size());

  auto s3 = symmetric3(3);
  CHECK(check_principal_fibration(s3, 3).ok());
  wbar(s3, 3).validate();
  w_total(s3, 3).validate();
}
