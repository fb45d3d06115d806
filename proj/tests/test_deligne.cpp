#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "simpkit/deligne.hpp"

using namespace simpkit;

namespace {

ComplexPoly z_poly() { return {Poly::variable(2, 0), Poly::variable(2, 1)}; }

std::complex<double> expi(double a) { return std::polar(1.0, a); }

std::vector<PathSegment> unit_circle_in(int chart) {
  auto t = RationalFunction::variable(1, 0);
  auto one = RationalFunction(1, Rat(1));
  RationalFunction c = (one - t * t) / (one + t * t), s = (Rat(2) * t) / (one + t * t);
  return {{chart, PolyMap(1, {c, s})}, {chart, PolyMap(1, {-s, c})}, {chart, PolyMap(1, {-c, -s})}, {chart, PolyMap(1, {s, -c})}};
}

}  // namespace

TEST_CASE("unit functions") {
  auto g = UnitFunction::phase(z_poly(), 2);
  CHECK(std::abs(g.eval(std::vector<double>{0, 3}) - std::complex<double>(-1, 0)) < 1e-14);
  CHECK((g * g.inverse()).is_trivially_one());
  CHECK(g.pow(3).factors().begin()->second == 6);

  auto x = RationalFunction::variable(2, 0), y = RationalFunction::variable(2, 1);
  auto dx = RationalForm::dx(2, 0), dy = RationalForm::dx(2, 1);
  CHECK(g.dlog() == Rat(2) * ((RationalFunction(2, Rat(1)) / (x * x + y * y)) * (x * dy - y * dx)));

  auto r2 = x * x + y * y;
  PolyMap inv(2, {x / r2, -y / r2});
  auto pulled = g.pullback(inv);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> p{rng.unit() * 2 - 1, rng.unit() * 2 + 0.1};
    CHECK(std::abs(pulled.eval(p) - g.eval(inv.eval(p))) < 1e-12);
    CHECK(std::abs((pulled * g).eval(p) - 1.0) < 1e-12);
  }
  auto q = (pulled * g).representative();
  CHECK(q.im.is_zero());

  CHECK_THROWS_AS(UnitFunction::phase({Poly(2), Poly(2)}), std::domain_error);
  CHECK_THROWS_AS(g.eval(std::vector<double>{0, 0}), std::domain_error);
}

TEST_CASE("cover validation") {
  Rng rng(5);
  Cover cover = affine_cover(4, 2, rng);
  CHECK(cover.patches(0).size() == 4);
  CHECK(cover.patches(1).size() == 6);
  CHECK(cover.patches(2).size() == 4);
  CHECK(cover.patches(3).size() == 1);
  CHECK(cover.consistency_failures().empty());

  auto x = RationalFunction::variable(1, 0);
  std::vector<ChartSpec> charts{{"A", 1, {}, {}}, {"B", 1, {}, {}}, {"C", 1, {}, {}}};
  PolyMap shift(1, {x + RationalFunction(1, Rat(1))}), flip(1, {-x});
  CHECK_THROWS_WITH(Cover(charts, {{{0, 1, 2}, {PolyMap::identity(1), shift, flip}, {}, {}}}), Catch::Matchers::ContainsSubstring("missing its sub-overlap"));
  CHECK_THROWS_WITH(Cover(charts, {{{0, 1}, {shift, shift}, {}, {}}}), Catch::Matchers::ContainsSubstring("identity"));
  CHECK_THROWS_WITH(Cover(charts, {{{1, 0}, {PolyMap::identity(1), shift}, {}, {}}}), Catch::Matchers::ContainsSubstring("increasing"));

  Cover bent(charts, {{{0, 1}, {PolyMap::identity(1), shift}, {}, {}},
                      {{0, 2}, {PolyMap::identity(1), flip}, {}, {}},
                      {{1, 2}, {PolyMap::identity(1), flip}, {}, {}},
                      {{0, 1, 2}, {PolyMap::identity(1), shift, flip}, {}, {}}});
  CHECK(bent.consistency_failures().size() == 1);
  CHECK_THROWS_WITH(bent.patch({0, 3}), Catch::Matchers::ContainsSubstring("missing intersection data"));
}

TEST_CASE("monopole cocycle and curvature") {
  for (int k = -2; k <= 2; ++k) {
    auto [cover, c] = monopole(k);
    auto report = verify_cocycle_deg1(cover, c);
    CHECK(report.ok());
    for (const auto& chk : report.checks) CHECK(chk.mode == "exact");

    auto curv = curvature(cover, c);
    CHECK(curv.consistent);
    auto x = RationalFunction::variable(2, 0), y = RationalFunction::variable(2, 1);
    auto one = RationalFunction(2, Rat(1));
    auto expected = (Rat(2 * k) * one / ((one + x * x + y * y).pow(2))) * wedge(RationalForm::dx(2, 0), RationalForm::dx(2, 1));
    CHECK(curv.forms.at(0) == expected);
    CHECK(curv.forms.at(1) == expected);

    auto chern = chern_number(cover, c, {{0, 1}, {0, 0}, 1});
    CHECK(chern.value == k);
    CHECK(std::abs(chern.raw - k) <= 1e-6);
    CHECK_FALSE(chern.flagged);
  }
}

TEST_CASE("corrupted monopole data is rejected with a witness") {
  auto [cover, c] = monopole(1);
  c.unit.values.at({0, 1}) = UnitFunction::phase(z_poly(), 1);
  auto report = verify_cocycle_deg1(cover, c);
  CHECK_FALSE(report.ok());
  auto bad = report.failures();
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].name == "A_j - A_i = dlog g_ij");
  CHECK(bad[0].patch == "(N,S)");
  CHECK(bad[0].witness.size() == 2);
  CHECK(bad[0].residual > 0.01);

  CheckOptions sampled;
  sampled.mode = CheckOptions::Mode::sampled;
  CHECK_FALSE(verify_cocycle_deg1(cover, c, sampled).ok());
  auto [cover2, good] = monopole(2);
  auto ok = verify_cocycle_deg1(cover2, good, sampled);
  CHECK(ok.ok());
  for (const auto& chk : ok.checks) CHECK(chk.mode == "sampled");
}

TEST_CASE("residual of a bare transition function is its dlog") {
  auto [cover, c] = monopole(1);
  c.forms[0].values.at({0}) = RationalForm(2, 1);
  c.forms[0].values.at({1}) = RationalForm(2, 1);
  auto d = total_differential(cover, c);
  CHECK(d.form(1).values.at({0, 1}) == c.unit.values.at({0, 1}).dlog());
}

TEST_CASE("monopole holonomy") {
  for (int k = -2; k <= 2; ++k) {
    auto [cover, c] = monopole(k);
    auto north = holonomy(cover, c, unit_circle_in(0));
    CHECK(std::abs(north - expi(std::numbers::pi * k)) < 1e-10);
    auto mixed = holonomy(cover, c, equator_path(cover));
    CHECK(std::abs(mixed - north) < 1e-10);

    Rng rng(40 + k);
    auto h = random_gauge(cover, rng);
    auto c2 = gauge_transform(cover, c, h);
    CHECK(verify_cocycle_deg1(cover, c2).ok());
    CHECK(std::abs(holonomy(cover, c2, equator_path(cover)) - mixed) < 1e-10);
    CHECK(chern_number(cover, c2, {{0, 1}, {0, 0}, 1}).value == k);

    CHECK(stokes_defect(cover, c, 0, {Rat(1, 3), Rat(-1, 2)}, Rat(1, 2)) <= 1e-6);
    CHECK(stokes_defect(cover, c, 1, {Rat(-1), Rat(1, 4)}, Rat(3, 4)) <= 1e-6);
  }
}

TEST_CASE("holonomy input errors") {
  auto [cover, c] = monopole(1);
  auto path = equator_path(cover);
  path[1].path = path[0].path;
  CHECK_THROWS_WITH(holonomy(cover, c, path), Catch::Matchers::ContainsSubstring("outside the overlap"));
  auto origin = unit_circle_in(0);
  auto t = RationalFunction::variable(1, 0);
  origin[0].path = PolyMap(1, {t, RationalFunction(1)});
  CHECK_THROWS(holonomy(cover, c, origin));
  CHECK_THROWS_WITH(holonomy(cover, c, unit_circle_in(0), {8, 4}), Catch::Matchers::ContainsSubstring("order"));
}

TEST_CASE("cech and total differentials square to zero") {
  Rng rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    Cover cover = affine_cover(4, 2, rng);
    for (int q = 0; q <= 2; ++q) {
      FormCochain f{0, q, {}};
      for (const auto& ids : cover.patches(0)) f.values.emplace(ids, random_form(rng, 2, q, trial == 1));
      auto dd = cech_delta(cover, cech_delta(cover, f));
      for (const auto& [ids, w] : dd.values) CHECK(w.is_zero());
    }
    UnitCochain u{0, {}};
    for (const auto& ids : cover.patches(0)) u.values.emplace(ids, random_unit(rng, 2));
    auto uu = cech_delta(cover, cech_delta(cover, u));
    for (const auto& [ids, v] : uu.values) {
      auto qv = v.representative();
      CHECK(qv.im.is_zero());
    }

    for (int degree = 0; degree <= 2; ++degree) {
      auto c = random_cochain(cover, degree, 2, rng);
      auto twice = total_differential(cover, total_differential(cover, c));
      CHECK(verify_cocycle(cover, total_differential(cover, c)).ok());
      for (const auto& f : twice.forms)
        for (const auto& [ids, w] : f.values) CHECK(w.is_zero());
    }
    auto one = random_cochain(cover, 1, 2, rng);
    CHECK(verify_cocycle_deg2(cover, total_differential(cover, one)).ok());
  }
}

TEST_CASE("degree-2 conditions") {
  Rng rng(2);
  Cover cover = affine_cover(3, 2, rng);
  auto c = zero_cochain(cover, 2, 2);
  CHECK(verify_cocycle_deg2(cover, c).ok());
  int b = 1;
  for (auto& [ids, w] : c.forms[1].values) w = Rat(b++) * wedge(RationalForm::dx(2, 0), RationalForm::dx(2, 1));
  auto report = verify_cocycle_deg2(cover, c);
  CHECK_FALSE(report.ok());
  for (const auto& bad : report.failures()) CHECK(bad.name == "dA_ij = B_i - B_j");
  CHECK(report.failures().size() == 3);
  CHECK_THROWS(verify_cocycle_deg1(cover, c));
}
