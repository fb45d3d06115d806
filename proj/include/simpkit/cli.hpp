#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "simpkit/chains.hpp"
#include "simpkit/deligne.hpp"
#include "simpkit/fixtures.hpp"
#include "simpkit/io.hpp"
#include "simpkit/loopgroup.hpp"
#include "simpkit/subdivision.hpp"
#include "simpkit/vanest.hpp"

namespace simpkit::cli {

struct Check {
  Check(std::string name, bool ok, Json witness = nullptr, std::optional<double> residual = std::nullopt, Json detail = nullptr)
      : name(std::move(name)), ok(ok), witness(std::move(witness)), residual(residual), detail(std::move(detail)) {}
  std::string name;
  bool ok;
  Json witness;
  std::optional<double> residual;
  Json detail;
};

class Report {
 public:
  explicit Report(std::vector<std::string> command) : command_(std::move(command)) {}

  Json& result() { return result_; }
  void add(Check c) { checks_.push_back(std::move(c)); }
  int exit_code() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok; }) ? 0 : 1;
  }

  Json json() const {
    Json checks = Json::array();
    for (const auto& c : checks_) {
      Json j = {{"name", c.name}, {"status", c.ok ? "pass" : "fail"}, {"witness", c.witness}};
      j["residual"] = c.residual ? Json(*c.residual) : Json(nullptr);
      if (!c.detail.is_null()) j["detail"] = c.detail;
      checks.push_back(std::move(j));
    }
    return {{"command", command_}, {"status", exit_code() == 0 ? "pass" : "fail"}, {"checks", checks}, {"result", result_}, {"exit_code", exit_code()}};
  }

 private:
  std::vector<std::string> command_;
  std::vector<Check> checks_;
  Json result_ = Json::object();
};

inline Json group_json(int degree, const HomologyGroup& h) {
  Json torsion = Json::array();
  for (const auto& t : h.torsion) torsion.push_back(t.get_si());
  return {{"degree", degree}, {"betti", h.betti.get_si()}, {"torsion", torsion}, {"group", h.str()}};
}

inline io::Node load(const Json& doc, const std::string& path) { return io::Node(doc, path); }

struct Options {
  std::string input, form, triangulation, cochain = "taylor", basepoint, group, loop, path, mode = "auto", fixture, output;
  int max_dim = 2, depth = 2, refine = 0, degree = 1, samples = -1, count = 200, max_r = 4;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool selftest = false, check_kan = false, homology = false, list = false;
};

inline void homology_command(const Options& o, Report& r) {
  if (o.max_dim < 0) throw InputError("--max-dim", "must be nonnegative");
  Json doc = io::read_file(o.input);
  FinSimplicialSet k = io::read_complex(load(doc, o.input), o.max_dim + 1);
  if (o.max_dim + 1 > k.max_degree())
    throw InputError(o.input, "simplicial set is explicit only through degree " + std::to_string(k.max_degree()) + "; homology through " +
                                  std::to_string(o.max_dim) + " needs degree " + std::to_string(o.max_dim + 1));
  ChainComplex c = normalized_complex(k, o.max_dim + 1);
  r.add({"boundary squares to zero", c.boundary_squares_to_zero()});
  Json degrees = Json::array();
  for (int n = 0; n <= o.max_dim; ++n) degrees.push_back(group_json(n, homology(c, n)));
  r.result()["homology"] = degrees;
}

inline void subdivide_command(const Options& o, Report& r) {
  if (!o.selftest) throw InputError("subdivide", "only --selftest is available");
  if (o.count < 1 || o.max_r < 0) throw InputError("subdivide", "--count must be positive and --max-r nonnegative");
  auto report = subdivision_selftest(o.seed, o.count, 4, o.max_r);
  report.tallies.push_back(barr_kock_selftest(o.seed));
  for (const auto& t : report.tallies) r.add({t.name, t.failed == 0, nullptr, std::nullopt, {{"passed", t.passed}, {"failed", t.failed}}});
  r.result()["seed"] = o.seed;
  r.result()["chains"] = o.count;
}

inline void loopgroup_command(const Options& o, Report& r) {
  if (o.depth < 0) throw InputError("--depth", "must be nonnegative");
  Json doc = io::read_file(o.input);
  FinSimplicialSet k = io::read_complex(load(doc, o.input), o.depth + 1);
  std::string base = o.basepoint;
  if (base.empty()) {
    if (k.nondegenerate(0).empty()) throw InputError(o.input, "complex has no vertices");
    base = k.simplex(k.nondegenerate(0)[0]).id;
  }
  if (!k.contains(base) || k.simplex(k.find(base)).dim != 0) throw InputError("--basepoint", "'" + base + "' is not a vertex");
  MaximalTree tree = maximal_tree(k, base);
  SimplicialGroupPresentation g = loop_group(k, tree, o.depth);
  Check identities{"simplicial identities of the loop group", true};
  try {
    g.validate();
  } catch (const std::exception& e) {
    identities.ok = false;
    identities.witness = e.what();
  }
  r.add(identities);
  Json ranks = Json::array(), edges = Json::array();
  for (int n = 0; n <= o.depth; ++n) ranks.push_back(g.rank(n));
  for (int e : tree.edges) edges.push_back(k.simplex(e).id);
  r.result()["basepoint"] = base;
  r.result()["tree_edges"] = edges;
  r.result()["generator_ranks"] = ranks;
  if (o.depth >= 1) r.result()["pi0"] = pi0_of_group(g).str();
  if (!o.check_kan) return;
  SimplicialGroupPresentation a = abelianize(g);
  ChainComplex c = normalized_complex(k, o.depth + 1);
  for (int i = 1; i <= o.depth; ++i) {
    HomologyGroup pi = simplicial_abelian_homotopy(a, i - 1), h = homology(c, i);
    r.add({"pi_" + std::to_string(i - 1) + " of the abelianized loop group equals H_" + std::to_string(i), pi == h, nullptr, std::nullopt,
           {{"pi", pi.str()}, {"H", h.str()}}});
  }
}

inline long parse_group(const std::string& spec) {
  const std::string prefix = "zmod:";
  if (spec.rfind(prefix, 0) != 0) throw InputError("--group", "expected zmod:N, got '" + spec + "'");
  std::string digits = spec.substr(prefix.size());
  if (digits.empty() || digits.size() > 6 || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw InputError("--group", "expected a positive integer order in '" + spec + "'");
  long n = std::stol(digits);
  if (n < 1) throw InputError("--group", "order must be positive");
  return n;
}

inline void wbar_command(const Options& o, Report& r) {
  long order = parse_group(o.group);
  if (o.depth < 1) throw InputError("--depth", "must be at least 1");
  auto g = FiniteSimplicialGroup::cyclic(static_cast<int>(order), o.depth);
  auto fib = check_principal_fibration(g, o.depth);
  for (const auto& d : fib.degrees)
    r.add({"principal fibration in degree " + std::to_string(d.degree), d.ok(), nullptr, std::nullopt,
           {{"free_action", d.free_action}, {"orbit_bijection", d.orbit_bijection}, {"quotient_simplicial", d.quotient_simplicial},
            {"total_cells", d.total_cells}, {"orbits", d.orbits}}});
  r.result()["group"] = "Z/" + std::to_string(order);
  r.result()["depth"] = o.depth;
  if (!o.homology) return;
  auto wb = normalized_complex(wbar(g, o.depth), o.depth);
  auto wt = normalized_complex(w_total(g, o.depth), o.depth);
  Json hb = Json::array(), hw = Json::array();
  for (int i = 1; i < o.depth; ++i) {
    HomologyGroup w = homology(wt, i);
    r.add({"H_" + std::to_string(i) + "(W) = 0", w.trivial()});
    hb.push_back(group_json(i, homology(wb, i)));
    hw.push_back(group_json(i, w));
  }
  r.result()["wbar_homology"] = hb;
  r.result()["w_homology"] = hw;
}

inline void integrate_command(const Options& o, Report& r) {
  if (o.refine < 0 || o.refine > 8) throw InputError("--refine", "must lie in 0..8");
  CochainKind kind;
  try {
    kind = parse_cochain_kind(o.cochain);
  } catch (const std::invalid_argument& e) {
    throw InputError("--cochain", e.what());
  }
  Json fdoc = io::read_file(o.form), tdoc = io::read_file(o.triangulation);
  RationalForm w = io::read_form(load(fdoc, o.form));
  Triangulation t = io::read_triangulation(load(tdoc, o.triangulation));
  if (w.chart_dim() != t.dim() || w.degree() != t.dim())
    throw InputError(o.form, "form must be a top-degree form on the triangulated " + std::to_string(t.dim()) + "-dimensional region");
  Triangulation fine = barycentric_refine(t, o.refine);
  Rat value = riemann_sum(w, fine, kind);
  r.result()["cochain"] = to_string(kind);
  r.result()["refine"] = o.refine;
  r.result()["simplices"] = fine.tops().size();
  r.result()["value"] = io::rat_str(value);
  r.result()["approx"] = value.get_d();
}

inline CheckOptions check_options(const Options& o) {
  CheckOptions c;
  if (o.mode == "auto")
    c.mode = CheckOptions::Mode::automatic;
  else if (o.mode == "exact")
    c.mode = CheckOptions::Mode::exact;
  else if (o.mode == "sampled")
    c.mode = CheckOptions::Mode::sampled;
  else
    throw InputError("--mode", "expected auto, exact or sampled");
  if (o.samples >= 0) c.samples = o.samples;
  if (c.samples < 1) throw InputError("--samples", "must be positive");
  if (!(o.tol > 0)) throw InputError("--tol", "must be positive");
  c.tol = o.tol;
  c.seed = o.seed;
  return c;
}

inline void deligne_verify(const Options& o, Report& r) {
  if (o.degree != 1 && o.degree != 2) throw InputError("--degree", "must be 1 or 2");
  Json doc = io::read_file(o.input);
  auto [cover, c] = io::read_cocycle(load(doc, o.input));
  if (c.degree != o.degree) throw InputError(o.input, "cochain has degree " + std::to_string(c.degree) + ", not " + std::to_string(o.degree));
  for (const auto& f : cover.consistency_failures()) r.add({"inclusions commute: " + f, false});
  auto report = verify_cocycle(cover, c, check_options(o));
  for (const auto& chk : report.checks) {
    Json witness = chk.witness.empty() ? Json(nullptr) : Json(chk.witness);
    r.add({chk.name + " on " + chk.patch, chk.ok, witness, chk.residual, {{"mode", chk.mode}}});
  }
  r.result()["degree"] = c.degree;
  r.result()["identities"] = report.checks.size();
}

inline void deligne_chern(const Options& o, Report& r) {
  Json doc = io::read_file(o.input), ldoc = io::read_file(o.loop);
  auto [cover, c] = io::read_cocycle(load(doc, o.input));
  int samples = 256;
  CircleLoop loop = io::read_loop(load(ldoc, o.loop), cover, samples);
  if (o.samples >= 0) samples = o.samples;
  if (samples < 1) throw InputError("--samples", "must be positive");
  auto ch = chern_number(cover, c, loop, samples);
  r.add({"winding is within 0.01 of an integer", !ch.flagged, nullptr, ch.distance});
  r.result()["chern_number"] = ch.value;
  r.result()["raw"] = ch.raw;
  r.result()["samples"] = samples;
}

inline void deligne_holonomy(const Options& o, Report& r) {
  Json doc = io::read_file(o.input), pdoc = io::read_file(o.path);
  auto [cover, c] = io::read_cocycle(load(doc, o.input));
  QuadratureRule rule;
  auto path = io::read_path(load(pdoc, o.path), cover, rule);
  auto h = holonomy(cover, c, path, rule);
  r.result()["real"] = h.real();
  r.result()["imag"] = h.imag();
  r.result()["abs"] = std::abs(h);
  r.result()["arg"] = std::arg(h);
}

// Runs one command line (without the program name); returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"simpkit: simplicial, Cech-Deligne and van Est computations"};
  app.require_subcommand(1);
  Options o;

  auto* hom = app.add_subcommand("homology", "integer homology of a complex");
  hom->add_option("--input", o.input, "complex JSON")->required();
  hom->add_option("--max-dim", o.max_dim, "highest degree");

  auto* sub = app.add_subcommand("subdivide", "barycentric subdivision identities");
  sub->add_flag("--selftest", o.selftest, "run the identity corpus");
  sub->add_option("--seed", o.seed);
  sub->add_option("--count", o.count, "number of random chains");
  sub->add_option("--max-r", o.max_r, "largest iterate for D_r");

  auto* loop = app.add_subcommand("loopgroup", "Kan loop group presentation");
  loop->add_option("--input", o.input, "complex JSON")->required();
  loop->add_option("--basepoint", o.basepoint);
  loop->add_option("--depth", o.depth);
  loop->add_flag("--check-kan", o.check_kan, "compare homotopy of the abelianization with homology");

  auto* wb = app.add_subcommand("wbar", "classifying complex of a constant group");
  wb->add_option("--group", o.group, "zmod:N")->required();
  wb->add_option("--depth", o.depth);
  wb->add_flag("--homology", o.homology);

  auto* integ = app.add_subcommand("integrate", "Riemann sum of a top form");
  integ->add_option("--form", o.form)->required();
  integ->add_option("--triangulation", o.triangulation)->required();
  integ->add_option("--cochain", o.cochain, "taylor or exact");
  integ->add_option("--refine", o.refine, "barycentric refinements");

  auto* del = app.add_subcommand("deligne", "Cech-Deligne cocycles");
  del->require_subcommand(1);
  auto* verify = del->add_subcommand("verify", "check the cocycle identities");
  verify->add_option("--degree", o.degree)->required();
  verify->add_option("--input", o.input)->required();
  verify->add_option("--samples", o.samples);
  verify->add_option("--tol", o.tol);
  verify->add_option("--seed", o.seed);
  verify->add_option("--mode", o.mode, "auto, exact or sampled");
  auto* chern = del->add_subcommand("chern", "first Chern number from a loop in a double overlap");
  chern->add_option("--input", o.input)->required();
  chern->add_option("--loop", o.loop)->required();
  chern->add_option("--samples", o.samples);
  auto* hol = del->add_subcommand("holonomy", "holonomy along a chart-decomposed loop");
  hol->add_option("--input", o.input)->required();
  hol->add_option("--path", o.path)->required();

  auto* fix = app.add_subcommand("fixtures", "emit a built-in fixture");
  fix->add_option("name", o.fixture);
  fix->add_option("--output", o.output, "write to a file instead of stdout");
  fix->add_flag("--list", o.list);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Report report(args);
  try {
    if (fix->parsed()) {
      if (o.list) {
        out << Json(fixture_names()).dump() << "\n";
        return 0;
      }
      if (o.fixture.empty()) throw InputError("fixtures", "missing fixture name");
      Json doc;
      try {
        doc = fixture(o.fixture);
      } catch (const std::invalid_argument& e) {
        throw InputError("fixtures", e.what());
      }
      if (o.output.empty()) {
        out << doc.dump(2) << "\n";
        return 0;
      }
      std::ofstream f(o.output);
      if (!f || !(f << doc.dump(2) << "\n")) throw InputError(o.output, "cannot write file");
      report.result()["wrote"] = o.output;
    } else if (hom->parsed()) {
      homology_command(o, report);
    } else if (sub->parsed()) {
      subdivide_command(o, report);
    } else if (loop->parsed()) {
      loopgroup_command(o, report);
    } else if (wb->parsed()) {
      wbar_command(o, report);
    } else if (integ->parsed()) {
      integrate_command(o, report);
    } else if (verify->parsed()) {
      deligne_verify(o, report);
    } else if (chern->parsed()) {
      deligne_chern(o, report);
    } else if (hol->parsed()) {
      deligne_holonomy(o, report);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    out << Json{{"command", args}, {"status", "error"}, {"error", e.what()}, {"exit_code", 2}}.dump(2) << "\n";
    return 2;
  }
  out << report.json().dump(2) << "\n";
  return report.exit_code();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace simpkit::cli
