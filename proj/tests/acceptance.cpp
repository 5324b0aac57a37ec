#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "corpus_pairs.hpp"
#include "nccw/approx.hpp"
#include "nccw/check.hpp"
#include "nccw/discretize.hpp"
#include "nccw/nccw.hpp"
#include "nccw/puppe.hpp"
#include "nccw/runner.hpp"

using namespace nccw;
using namespace nccw::expr;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

dsl::Script corpus(const std::string& name) {
  std::ifstream in(std::filesystem::path(NCCW_CORPUS_DIR) / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return dsl::parse_dsl(ss.str());
}

MorphismExpr id_m2() { return identity(finite_dim({2})); }
MorphismExpr nothing() { return zero_morphism(finite_dim({2}), finite_dim({3})); }
MorphismExpr twice() { return block_map(finite_dim({1}), finite_dim({2}), {{2}}); }

MorphismExpr constant_boundary(const AlgebraExpr& cell, int k) {
  return compose(boundary_restrict(interval_tensor(k, cell)), constant_embed(cell, k));
}

cw::Complex circle_complex() {
  const auto c = finite_dim({1});
  return cw::attach_stage(cw::Complex("A0", c), "X1", c, 1, constant_boundary(c, 1));
}

cw::Complex two_cell_complex() {
  const auto m2 = finite_dim({2});
  const cw::Complex x1 = cw::attach_stage(cw::Complex("A0", m2), "X1", m2, 1, constant_boundary(m2, 1));
  return cw::attach_stage(x1, "X2", m2, 2, compose(constant_boundary(m2, 2), *x1.top_stage().pi));
}

cw::Complex point_complex() {
  const auto a0 = finite_dim({2, 3});
  const auto c = finite_dim({1});
  return cw::attach_stage(cw::Complex("P0", a0), "P1", c, 1, zero_morphism(a0, sphere_tensor(0, c)));
}

std::string fail_id(const std::vector<CheckReport>& rs) {
  for (const auto& r : rs)
    if (!r.passed()) return r.id + " " + status_name(r.status);
  return "";
}

Outcome pullback_universal() {
  Outcome o;
  for (const auto& phi : {id_m2(), nothing(), twice()}) {
    for (Mapping kind : {Mapping::Cylinder, Mapping::MappingCone}) {
      const AlgebraExpr x = mapping_construction(kind, phi);
      const auto legs = pullback_legs(x);
      for (int n : {2, 4, 8}) {
        disc::Discretizer d(n);
        const check::PullbackSquare sq{d.morphism(projection_second(x)), d.morphism(projection_first(x)),
                                       d.morphism(legs.first), d.morphism(legs.second)};
        const std::string id = x.to_string() + "@N=" + std::to_string(n);
        const CheckReport r = check::check_pullback_universal(id, sq, 20, 1);
        o.require(r.passed(), id + " " + status_name(r.status));
        o.require(r.witness && r.witness->at("kernel_intersection_rank") == 0, id + " kernel intersection");
        o.require(r.max_residual <= 1e-9, id + " residual");
      }
    }
  }
  return o;
}

Outcome row_exactness() {
  Outcome o;
  int rows = 0;
  for (const auto& x : {point_complex(), circle_complex(), two_cell_complex()}) {
    const auto reports = cw::validate_complex(x, {2, 4, 8});
    o.require(fail_id(reports).empty(), fail_id(reports));
    for (const auto& r : reports) {
      if (r.kind != "exact_row") continue;
      const Json& w = *r.witness;
      ++rows;
      o.require(w.at("dim_A_k").get<long>() == w.at("dim_interior").get<long>() + w.at("dim_A_k_minus_1").get<long>(),
                r.id + " dimension count");
    }
  }
  o.require(rows == 3 * (1 + 1 + 2), "expected one row per stage and resolution, got " + std::to_string(rows));
  return o;
}

Outcome cylinder_retraction() {
  Outcome o;
  for (const auto& phi : {id_m2(), nothing(), twice()}) {
    for (int n : {2, 4, 8}) {
      const auto r = puppe::cyl_retraction("cyl(" + phi.to_string() + ")@N=" + std::to_string(n), phi, n);
      o.require(fail_id(r.reports).empty(), fail_id(r.reports));
      disc::Discretizer d(n);
      const fd::Morphism ps = d.morphism(compose(r.p, r.s));
      o.require(check::map_distance(ps, fd::identity(d.algebra(phi.domain()))) == 0.0, "p o s is not exactly id");
      for (const auto& s : r.sliding.slices) {
        const CheckReport star = check::check_star_hom("slice", s);
        o.require(star.passed() && star.max_residual <= 1e-9, "sliding slice is not a *-hom");
      }
    }
  }
  return o;
}

Outcome puppe_chain() {
  Outcome o;
  const auto chain = puppe::puppe_chain(id_m2(), 8);
  const std::vector<std::string> pattern = {"B",    "A",           "Cyl(phi)",     "Cone(phi)",
                                            "S(A)", "S(Cyl(phi))", "S(Cone(phi))", "S^2(A)"};
  o.require(chain.names == pattern, "term pattern");
  const auto reports = puppe::chain_certificates("chain", chain, 4);
  o.require(fail_id(reports).empty(), fail_id(reports));
  for (const char* id : {"chain/i", "chain/ii", "chain/iii"}) {
    bool found = false;
    for (const auto& r : reports) found = found || (r.id == id && r.passed());
    o.require(found, std::string(id) + " missing");
  }
  return o;
}

Outcome cellular_approximation() {
  Outcome o;
  const cw::Complex x = circle_complex();
  const int n = 8;
  const fd::Morphism f = disc::discretize_morphism(loop_rotation(x.top(), {1, 2}), {n});
  const cw::CellularMap out = cw::cellular_approximate("rot", x, x, f, n);
  o.require(fail_id(out.reports).empty(), fail_id(out.reports));
  for (const char* id : {"rot/property1", "rot/property2", "rot/property3", "rot/property4", "rot/h_is_end"}) {
    bool found = false;
    for (const auto& r : out.reports) found = found || r.id == id;
    o.require(found, std::string(id) + " missing");
  }
  o.require(check::map_distance(out.g.start(), f) <= 1e-9, "homotopy does not start at f");
  o.require(check::map_distance(out.g.end(), out.h) <= 1e-9, "h is not ev(1) o g");
  return o;
}

Outcome functoriality() {
  Outcome o;
  const auto pairs = testing::corpus_pairs();
  o.require(pairs.size() >= 20, "fewer than 20 pairs");
  for (const auto& [f, g] : pairs) {
    for (int n : {2, 4}) {
      const fd::Morphism df = disc::discretize_morphism(f, {n});
      const fd::Morphism dg = disc::discretize_morphism(g, {n});
      const fd::Morphism dfg = disc::discretize_morphism(compose(f, g), {n});
      o.require(max_abs(dfg.dense() - df.dense() * dg.dense()) == 0.0, "D(f o g) for " + f.to_string());
    }
    for (const auto& m : {f, g}) {
      const int n = 2;
      const fd::Morphism rx = disc::restrict_resolution(m.domain(), n);
      const fd::Morphism ry = disc::restrict_resolution(m.codomain(), n);
      const Matrix lhs = ry.dense() * disc::discretize_morphism(m, {2 * n}).dense();
      const Matrix rhs = disc::discretize_morphism(m, {n}).dense() * rx.dense();
      o.require(max_abs(lhs - rhs) <= 1e-12, "restriction for " + m.to_string());
      const fd::Algebra coarse = disc::discretize_algebra(m.domain(), {n});
      o.require(linalg::rank(coarse.basis().adjoint() * rx.on_basis()) == coarse.dim(),
                "restriction rank for " + m.to_string());
    }
  }
  return o;
}

std::string suite_json(std::uint64_t seed) {
  RunConfig cfg;
  cfg.resolutions = {2, 4, 8};
  cfg.seed = seed;
  std::string out;
  for (const char* name : {"circle.nccw", "negative.nccw", "puppe.nccw", "two_cell.nccw"})
    out += run(corpus(name), cfg).document(seed).dump(2);
  return out;
}

Outcome determinism() {
  Outcome o;
  o.require(suite_json(7) == suite_json(7), "JSON differs between runs");
  return o;
}

Outcome negative_controls() {
  Outcome o;
  const RunResult r = run(corpus("negative.nccw"), {});
  o.require(r.reports.size() == 3, "expected three reports");
  const std::vector<std::string> kinds = {"pullback", "pushout", "ndr"};
  for (std::size_t i = 0; i < r.reports.size() && i < kinds.size(); ++i) {
    const CheckReport& rep = r.reports[i];
    o.require(rep.failed(), rep.id + " did not fail");
    o.require(rep.id.rfind(kinds[i], 0) == 0, rep.id + " out of order");
    const Json j = to_json(rep);
    o.require(j.contains("witness") && !j.at("witness").empty(), rep.id + " has no witness");
  }
  return o;
}

struct Criterion {
  int number;
  std::string title;
  double budget_s;  // <= 0: no runtime bound
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "pullback universal property of Cyl and Cone squares", 5.0, pullback_universal},
      {2, "row exactness on the corpus complexes", 5.0, row_exactness},
      {3, "cylinder retraction", 2.0, cylinder_retraction},
      {4, "eight-term chain and its certificates", 5.0, puppe_chain},
      {5, "cellular approximation of the circle rotation", 30.0, cellular_approximation},
      {6, "functoriality and refinement", 5.0, functoriality},
      {7, "determinism of JSON reports", 0.0, determinism},
      {8, "negative controls fail with witnesses", 0.0, negative_controls},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.budget_s > 0 && secs > c.budget_s) {
      o.ok = false;
      o.detail = "over the " + std::to_string(c.budget_s).substr(0, 4) + " s budget";
    }
    all = all && o.ok;
    std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.number, c.title.c_str(), secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  return all ? 0 : 1;
}
