#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "simpkit/chains.hpp"
#include "simpkit/deligne.hpp"
#include "simpkit/fixtures.hpp"
#include "simpkit/loopgroup.hpp"
#include "simpkit/subdivision.hpp"
#include "simpkit/vanest.hpp"

using namespace simpkit;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs < limit_seconds;
  bool ok = o.ok && in_time;
  if (!ok) ++failures;
  std::printf("%s  %-34s %7.2fs (limit %gs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs, limit_seconds, o.detail.empty() ? "" : "  ",
              o.detail.c_str());
  if (!in_time) std::printf("      over the time limit\n");
  std::fflush(stdout);
}

HomologyGroup z() { return {1, {}}; }
HomologyGroup zero() { return {0, {}}; }
HomologyGroup zmod(long n) { return {0, {Int(n)}}; }

// Simplicial chain complex of an ordered complex, rows and columns labelled by simplex ids.
std::map<std::pair<std::string, std::string>, long> ordered_boundary(const OrderedComplex& k, int n) {
  std::map<std::pair<std::string, std::string>, long> d;
  for (const auto& s : k.simplices(n))
    for (int i = 0; i <= n; ++i) {
      auto f = s;
      f.erase(f.begin() + i);
      d[{OrderedComplex::simplex_id(f), OrderedComplex::simplex_id(s)}] += i % 2 ? -1 : 1;
    }
  std::erase_if(d, [](const auto& e) { return e.second == 0; });
  return d;
}

std::map<std::pair<std::string, std::string>, long> normalized_boundary(const ChainComplex& c, int n) {
  std::map<std::pair<std::string, std::string>, long> d;
  for (int r = 0; r < c.rank(n - 1); ++r)
    for (int col = 0; col < c.rank(n); ++col)
      if (c.boundary(n)(r, col) != 0) d[{c.labels(n - 1)[r], c.labels(n)[col]}] = c.boundary(n)(r, col).get_si();
  return d;
}

bool complexes_agree(const OrderedComplex& k) {
  ChainComplex c = normalized_complex(ordered_to_sset(k, 3), 3);
  for (int n = 0; n <= std::min(k.dim(), 3); ++n) {
    if (c.rank(n) != static_cast<int>(k.simplices(n).size())) return false;
    if (n > 0 && normalized_boundary(c, n) != ordered_boundary(k, n)) return false;
  }
  return true;
}

std::vector<HomologyGroup> homology_through(const FinSimplicialSet& k, int top) {
  ChainComplex c = normalized_complex(k, top + 1);
  std::vector<HomologyGroup> h;
  for (int n = 0; n <= top; ++n) h.push_back(homology(c, n));
  return h;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  criterion("subdivision identities", 10, [] {
    auto report = subdivision_selftest(0, 200, 4, 4, 20000);
    std::string detail;
    for (const auto& t : report.tallies) detail += (detail.empty() ? "" : ", ") + std::to_string(t.passed) + "/" + std::to_string(t.passed + t.failed);
    return Outcome{report.ok(), detail};
  });

  criterion("sign identity under permutations", 5, [] {
    auto t = barr_kock_selftest(0, 3, 3);
    return Outcome{t.failed == 0 && t.passed > 0, std::to_string(t.passed) + " permutations"};
  });

  criterion("homology oracle", 5, [] {
    auto sphere = homology_through(ordered_to_sset(standard_simplex_complex(3, true), 3), 2);
    auto torus = homology_through(ordered_to_sset(torus7(), 3), 2);
    bool ok = sphere == std::vector<HomologyGroup>{z(), zero(), z()} && torus == std::vector<HomologyGroup>{z(), HomologyGroup{2, {}}, z()};
    ok = ok && complexes_agree(standard_simplex_complex(3, true)) && complexes_agree(torus7());
    return Outcome{ok, "torus H_1 = " + torus[1].str()};
  });

  criterion("loop group homotopy versus homology", 30, [] {
    auto circle = boundary_sphere(2, 2);
    auto sphere = boundary_sphere(3, 3);
    auto disk = full_simplex(2, 3);
    HomologyGroup p0 = simplicial_abelian_homotopy(abelianize(loop_group(circle, "0", 1)), 0);
    HomologyGroup p1 = simplicial_abelian_homotopy(abelianize(loop_group(sphere, "0", 2)), 1);
    auto ad = abelianize(loop_group(disk, "0", 2));
    bool ok = p0 == z() && p0 == homology_through(circle, 1)[1] && p1 == z() && p1 == homology_through(sphere, 2)[2];
    ok = ok && simplicial_abelian_homotopy(ad, 0).trivial() && simplicial_abelian_homotopy(ad, 1).trivial();
    return Outcome{ok, "pi_0 = " + p0.str() + ", pi_1 = " + p1.str()};
  });

  criterion("components of the loop group", 5, [] {
    auto circle = pi0_of_group(loop_group(boundary_sphere(2, 2), "0", 1));
    auto disk = pi0_of_group(loop_group(full_simplex(2, 3), "0", 1));
    return Outcome{circle.str() == "Z" && circle.free_rank() == 1 && disk.trivial(), circle.str() + " and " + disk.str()};
  });

  criterion("classifying complex of Z/2", 60, [] {
    auto g = FiniteSimplicialGroup::cyclic(2, 4);
    bool ok = check_principal_fibration(g, 4).ok();
    auto wb = normalized_complex(wbar(g, 4), 4), wt = normalized_complex(w_total(g, 4), 4);
    std::vector<HomologyGroup> expect{zmod(2), zero(), zmod(2)};
    std::string detail;
    for (int i = 1; i <= 3; ++i) {
      auto h = homology(wb, i);
      ok = ok && h == expect[i - 1] && homology(wt, i).trivial();
      detail += (i > 1 ? ", " : "") + h.str();
    }
    return Outcome{ok, detail};
  });

  criterion("van Est inversion", 10, [] {
    Rng rng(7);
    int good = 0;
    for (int t = 0; t < 50; ++t) {
      int m = static_cast<int>(rng.uniform(1, 3)), n = static_cast<int>(rng.uniform(0, m));
      auto w = random_form(rng, m, n, false, 3);
      good += van_est(taylor_antiderivative(w)) == w;
    }
    return Outcome{good == 50, std::to_string(good) + "/50"};
  });

  criterion("Riemann integration", 60, [] {
    auto tri = Triangulation::standard_simplex(2);
    auto w = RationalFunction::variable(2, 0) * wedge(RationalForm::dx(2, 0), RationalForm::dx(2, 1));
    bool exact_ok = true;
    for (int r = 0; r <= 3; ++r) exact_ok = exact_ok && riemann_sum(w, barycentric_refine(tri, r), CochainKind::exact) == Rat(1, 6);
    std::vector<Rat> err;
    Triangulation t = tri;
    for (int r = 0; r <= 6; ++r) {
      if (r > 0) t = barycentric_refine(t);
      if (r >= 2) err.push_back(abs(riemann_sum(w, t, CochainKind::taylor) - Rat(1, 6)));
    }
    bool ratios_ok = true;
    std::string detail = std::string("exact ") + (exact_ok ? "1/6 at r=0..3" : "wrong") + "; taylor errors r=2..6:";
    for (const auto& e : err) detail += " " + e.get_str();
    for (std::size_t i = 1; i < err.size(); ++i) {
      if (err[i - 1] == 0) {
        ratios_ok = false;
        continue;
      }
      double ratio = Rat(err[i] / err[i - 1]).get_d();
      ratios_ok = ratios_ok && ratio >= 0.517 && ratio <= 0.817;
    }
    if (!ratios_ok) detail += "; error ratio undefined or out of range";
    return Outcome{exact_ok && ratios_ok, detail};
  });

  criterion("Faa di Bruno versus direct", 10, [] {
    Rng rng(2024);
    int good = 0;
    for (int t = 0; t < 50; ++t) {
      int n = static_cast<int>(rng.uniform(1, 3)), m = static_cast<int>(rng.uniform(1, 3));
      auto f = random_poly_map(rng, n, m);
      RationalFunction g(random_poly(rng, m, 3, 3));
      MultiIndex beta(n, 0);
      int order = static_cast<int>(rng.uniform(1, 4));
      for (int k = 0; k < order; ++k) ++beta[rng.uniform(0, n - 1)];
      std::vector<Rat> x0;
      for (int i = 0; i < n; ++i) x0.push_back(rng.rational(3, 2));
      good += faa_di_bruno(g, f, beta, x0) == direct_partial(g, f, beta, x0);
    }
    return Outcome{good == 50, std::to_string(good) + "/50"};
  });

  criterion("monopole suite", 30, [] {
    bool ok = true;
    double worst_chern = 0, worst_stokes = 0, worst_gauge = 0;
    for (int k = -2; k <= 2; ++k) {
      auto [cover, c] = monopole(k);
      auto report = verify_cocycle_deg1(cover, c);
      for (const auto& chk : report.checks) ok = ok && chk.ok && chk.mode == "exact";
      auto ch = chern_number(cover, c, {{0, 1}, {0, 0}, 1}, 256);
      worst_chern = std::max(worst_chern, std::abs(ch.raw - k));
      ok = ok && ch.value == k && std::abs(ch.raw - k) <= 1e-6;
      Rng rng(100 + k);
      auto gauged = gauge_transform(cover, c, random_gauge(cover, rng));
      ok = ok && verify_cocycle_deg1(cover, gauged).ok();
      worst_gauge = std::max(worst_gauge, std::abs(holonomy(cover, gauged, equator_path(cover)) - holonomy(cover, c, equator_path(cover))));
      worst_stokes = std::max({worst_stokes, stokes_defect(cover, c, 0, {Rat(1, 3), Rat(-1, 2)}, Rat(1, 2)),
                               stokes_defect(cover, c, 1, {Rat(-1), Rat(1, 4)}, Rat(3, 4))});
    }
    ok = ok && worst_chern <= 1e-6 && worst_gauge <= 1e-6 && worst_stokes <= 1e-6;
    return Outcome{ok, "max |raw-k| " + fmt(worst_chern) + ", gauge " + fmt(worst_gauge) + ", Stokes " + fmt(worst_stokes)};
  });

  criterion("Cech-Deligne algebra", 10, [] {
    Rng rng(11);
    bool ok = true;
    int checked = 0;
    for (int trial = 0; trial < 3; ++trial) {
      Cover cover = affine_cover(4, 2, rng);
      for (int q = 0; q <= 2; ++q) {
        FormCochain f{0, q, {}};
        for (const auto& ids : cover.patches(0)) f.values.emplace(ids, random_form(rng, 2, q, true));
        for (const auto& [ids, w] : cech_delta(cover, cech_delta(cover, f)).values) ok = ok && w.is_zero(), ++checked;
      }
      UnitCochain u = random_gauge(cover, rng);
      auto uu = cech_delta(cover, cech_delta(cover, u));
      for (const auto& [ids, v] : uu.values) {
        auto q = v.representative();
        ok = ok && q.im.is_zero() && (q.re.is_constant() ? q.re.constant_value() > 0 : true), ++checked;
      }
      for (int degree = 0; degree <= 2; ++degree) {
        auto c = random_cochain(cover, degree, 2, rng);
        auto dc = total_differential(cover, c);
        ok = ok && verify_cocycle(cover, dc).ok();
        for (const auto& f : total_differential(cover, dc).forms)
          for (const auto& [ids, w] : f.values) ok = ok && w.is_zero(), ++checked;
      }
      ok = ok && verify_cocycle_deg2(cover, total_differential(cover, random_cochain(cover, 1, 2, rng))).ok();
    }
    return Outcome{ok, std::to_string(checked) + " identities"};
  });

  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
