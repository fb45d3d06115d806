#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "simpkit/subdivision.hpp"

using namespace simpkit;

namespace {

Point pt(std::initializer_list<long> v) {
  Point p;
  for (long x : v) p.emplace_back(x);
  return p;
}

Point mid(const std::vector<Point>& pts) {
  Point b(pts[0].size(), Rat(0));
  for (const auto& p : pts)
    for (std::size_t i = 0; i < p.size(); ++i) b[i] += p[i];
  for (auto& x : b) x /= static_cast<long>(pts.size());
  return b;
}

}  // namespace

TEST_CASE("boundary and cone") {
  auto pool = std::make_shared<PointPool>(2);
  Point y0 = pt({0, 0}), y1 = pt({3, 1}), y2 = pt({1, 5}), b = pt({7, 7});
  auto e = LinearChain::simplex(pool, {y0, y1});
  LinearChain expected(pool, 0);
  expected.add({y1}, 1);
  expected.add({y0}, -1);
  CHECK(boundary(e) == expected);
  CHECK(boundary(LinearChain::simplex(pool, {y0})) == LinearChain::empty_simplex(pool));
  auto tri = LinearChain::simplex(pool, {y0, y1, y2});
  CHECK(boundary(boundary(tri)).is_zero());
  CHECK(cone(b, LinearChain::simplex(pool, {y0})) == LinearChain::simplex(pool, {b, y0}));
  CHECK(cone(b, LinearChain::empty_simplex(pool)) == LinearChain::simplex(pool, {b}));
  CHECK(boundary(cone(b, e)) + cone(b, boundary(e)) == e);
  CHECK(cone(b, LinearChain(pool, 1)).is_zero());
}

TEST_CASE("subdivision of low-dimensional simplices") {
  auto pool = std::make_shared<PointPool>(2);
  Point y0 = pt({0, 0}), y1 = pt({4, 0}), y2 = pt({0, 6});
  CHECK(subdivide(LinearChain::simplex(pool, {y0})) == LinearChain::simplex(pool, {y0}));
  Point b = mid({y0, y1});
  LinearChain edge(pool, 1);
  edge.add({b, y1}, 1);
  edge.add({b, y0}, -1);
  CHECK(subdivide(LinearChain::simplex(pool, {y0, y1})) == edge);

  Point bt = mid({y0, y1, y2}), b0 = mid({y1, y2}), b1 = mid({y0, y2}), b2 = mid({y0, y1});
  LinearChain six(pool, 2);
  six.add({bt, b2, y1}, 1);
  six.add({bt, b2, y0}, -1);
  six.add({bt, b0, y2}, 1);
  six.add({bt, b0, y1}, -1);
  six.add({bt, b1, y2}, -1);
  six.add({bt, b1, y0}, 1);
  CHECK(subdivide(LinearChain::simplex(pool, {y0, y1, y2})) == six);
  CHECK(subdivide(LinearChain::empty_simplex(pool)) == LinearChain::empty_simplex(pool));
}

TEST_CASE("chain homotopy T") {
  auto pool = std::make_shared<PointPool>(1);
  Point y0 = pt({0}), y1 = pt({2});
  CHECK(chain_homotopy_T(LinearChain::simplex(pool, {y0})) == LinearChain::simplex(pool, {y0, y0}));
  Point b = pt({1});
  LinearChain expected(pool, 2);
  expected.add({b, y0, y1}, 1);
  expected.add({b, y1, y1}, -1);
  expected.add({b, y0, y0}, 1);
  CHECK(chain_homotopy_T(LinearChain::simplex(pool, {y0, y1})) == expected);
  CHECK(chain_homotopy_T(LinearChain::empty_simplex(pool)).is_zero());
}

TEST_CASE("iterate") {
  Rng rng(5);
  auto pool = std::make_shared<PointPool>(2);
  LinearChain c = random_chain(rng, pool, 2);
  auto zero = iterate(c, 0);
  CHECK(zero.subdivided == c);
  CHECK(zero.homotopy.is_zero());
  auto one = iterate(c, 1);
  CHECK(one.subdivided == subdivide(c));
  CHECK(one.homotopy == chain_homotopy_T(c));
  auto three = iterate(c, 3);
  CHECK(boundary(three.homotopy) + iterate(boundary(c), 3).homotopy == c - three.subdivided);
  CHECK_THROWS(iterate(c, -1));
}

TEST_CASE("permutations and the Barr-Kock sign identity") {
  auto pool = std::make_shared<PointPool>(2);
  AffineSimplex lam = {pt({0, 0}), pt({5, 1}), pt({2, 7})};
  CHECK(permute(lam, {0, 1, 2}) == std::make_pair(lam, 1));
  auto [swapped, sign] = permute(lam, {0, 2, 1});
  CHECK(swapped == AffineSimplex{lam[0], lam[2], lam[1]});
  CHECK(sign == -1);
  CHECK(subdivide(LinearChain::simplex(pool, swapped)) == sign * subdivide(LinearChain::simplex(pool, lam)));
  CHECK_THROWS(permute(lam, {0, 1}));
  CHECK_THROWS(permute(lam, {0, 0, 1}));

  Rng rng(9);
  for (int k = 0; k <= 3; ++k) {
    auto p = std::make_shared<PointPool>(k + 1);
    AffineSimplex s;
    for (int v = 0; v <= k; ++v) {
      Point q;
      for (int x = 0; x <= k; ++x) q.push_back(rng.rational(9, 5));
      s.push_back(q);
    }
    LinearChain base = subdivide(LinearChain::simplex(p, s));
    std::vector<int> sigma(k + 1);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      auto [moved, sg] = permute(s, sigma);
      CHECK(subdivide(LinearChain::simplex(p, moved)) == sg * base);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
}

TEST_CASE("term count of S on a k-simplex is (k+1)!") {
  for (int k = 0; k <= 4; ++k) CHECK(static_cast<long>(subdivide(standard_simplex_chain(k)).size()) == factorial(k + 1));
}

TEST_CASE("identity corpus on a reduced seed set") {
  auto report = subdivision_selftest(1, 40, 3, 3, 2000);
  for (const auto& t : report.tallies) {
    INFO(t.name);
    CHECK(t.failed == 0);
    CHECK(t.passed > 0);
  }
}
