#include "nccw/nccw.hpp"

#include <algorithm>

namespace nccw::cw {

using expr::AlgebraExpr;
using expr::AlgebraKind;
using expr::MorphismExpr;

Complex::Complex(std::string name, AlgebraExpr a0) {
  if (a0.kind() != AlgebraKind::FiniteDim && a0.kind() != AlgebraKind::Zero)
    throw Error("the base stage must be a finite-dimensional algebra, got " + a0.to_string());
  Stage s;
  s.name = std::move(name);
  s.cell = a0;
  s.algebra = a0;
  stages_.push_back(std::move(s));
}

bool Complex::operator==(const Complex& o) const {
  if (stages_.size() != o.stages_.size()) return false;
  for (std::size_t i = 0; i < stages_.size(); ++i)
    if (stages_[i].dim != o.stages_[i].dim || !(stages_[i].algebra == o.stages_[i].algebra)) return false;
  return true;
}

Complex attach_stage(const Complex& x, std::string name, AlgebraExpr cell, int k, const MorphismExpr& sigma,
                     int bound) {
  if (cell.kind() == AlgebraKind::Zero) return x;
  if (cell.kind() != AlgebraKind::FiniteDim) throw Error("cell algebra must be finite-dimensional, got " + cell.to_string());
  if (k < 1 || k > bound)
    throw Error("cell dimension " + std::to_string(k) + " outside 1.." + std::to_string(bound));
  if (!(sigma.domain() == x.top()))
    throw Error("attaching map starts at " + sigma.domain().to_string() + ", expected " + x.top().to_string());
  const AlgebraExpr cube = expr::interval_tensor(k, cell, bound);
  const AlgebraExpr sphere = expr::sphere_tensor(k - 1, cell, bound);
  if (!(sigma.codomain() == sphere))
    throw Error("attaching map lands in " + sigma.codomain().to_string() + ", expected " + sphere.to_string());

  Stage s;
  s.name = std::move(name);
  s.dim = k;
  s.cell = cell;
  s.sigma = sigma;
  s.algebra = expr::pullback_expr(expr::boundary_restrict(cube), sigma);
  const std::string idx = std::to_string(x.stages().size());
  s.rho = expr::user_named("rho" + idx, expr::projection_first(s.algebra));
  s.pi = expr::user_named("pi" + idx, expr::projection_second(s.algebra));
  const AlgebraExpr interior = expr::open_cube_tensor(k, cell, bound);
  s.iota = expr::user_named("iota" + idx, expr::pairing(s.algebra, expr::extend_by_zero(interior, cube),
                                                        expr::zero_morphism(interior, x.top())));
  Complex out = x;
  out.stages_.push_back(std::move(s));
  return out;
}

ConcreteStage build_stage(const AlgebraExpr& cell, int k, const fd::Morphism& sigma, int n) {
  disc::Discretizer d(n);
  const AlgebraExpr cube_e = expr::interval_tensor(k, cell, kMaxCellDim);
  const AlgebraExpr interior_e = expr::open_cube_tensor(k, cell, kMaxCellDim);
  ConcreteStage s;
  s.cube = d.algebra(cube_e);
  s.interior = d.algebra(interior_e);
  s.boundary = d.morphism(expr::boundary_restrict(cube_e));
  s.sigma = sigma;
  auto fp = disc::fiber_product(s.boundary, sigma);
  s.algebra = fp.algebra;
  s.rho = fp.pr1.with_provenance("rho");
  s.pi = fp.pr2.with_provenance("pi");
  const fd::Morphism ext = d.morphism(expr::extend_by_zero(interior_e, cube_e));
  std::vector<fd::Route> routes = ext.routes();
  routes.resize(static_cast<std::size_t>(s.algebra.block_count()));
  s.iota = fd::Morphism(s.interior, s.algebra, std::move(routes), "iota");
  return s;
}

CheckReport stage_row_report(const std::string& id, const ConcreteStage& s, const Tolerances& tol) {
  CheckReport r = check::check_exact_row(id, s.iota, s.pi, tol);
  const int lhs = s.algebra.dim();
  const int rhs = s.interior.dim() + s.pi.codomain().dim();
  (*r.witness)["dim_A_k"] = lhs;
  (*r.witness)["dim_interior"] = s.interior.dim();
  (*r.witness)["dim_A_k_minus_1"] = s.pi.codomain().dim();
  if (lhs != rhs) r.status = Status::Fail;
  return r;
}

std::vector<CheckReport> validate_complex(const Complex& x, const std::vector<int>& resolutions,
                                          const Tolerances& tol) {
  std::vector<CheckReport> out;
  const auto& stages = x.stages();
  {
    const auto& s0 = stages[0];
    Json w{{"dim", expr::linear_dim(s0.algebra, 1)}, {"blocks", expr::finite_blocks(s0.algebra)}};
    out.push_back(residual_report(s0.name + "/stage0", "stage", 0.0, tol.residual, 0, std::move(w)));
  }
  for (std::size_t j = 1; j < stages.size(); ++j) {
    const Stage& st = stages[j];
    for (int n : resolutions) {
      const std::string at = "@N=" + std::to_string(n);
      disc::Discretizer d(n, tol.rank_rel);
      fd::Morphism sigma;
      try {
        sigma = d.morphism(*st.sigma);
      } catch (const Error& e) {
        out.push_back(fail_report(st.name + "/sigma" + at, "star_hom", Json{{"error", e.what()}}, 0.0, tol.residual));
        continue;
      }
      out.push_back(check::check_star_hom(st.name + "/sigma" + at, sigma, tol.residual));
      const ConcreteStage cs = build_stage(st.cell, st.dim, sigma, n);
      CheckReport row = stage_row_report(st.name + "/row" + at, cs, tol);
      const long predicted = expr::linear_dim(st.algebra, n);
      (*row.witness)["closed_form_dim"] = predicted;
      if (predicted != cs.algebra.dim()) row.status = Status::Fail;
      out.push_back(std::move(row));
      if (cs.algebra.dim() <= 120) {
        const double closure = disc::closure_residual(cs.algebra);
        out.push_back(residual_report(st.name + "/closure" + at, "closure", closure, tol.residual, 0,
                                      Json{{"dim", cs.algebra.dim()}}));
      }
      if (std::find(resolutions.begin(), resolutions.end(), 2 * n) != resolutions.end()) {
        disc::Discretizer fine(2 * n, tol.rank_rel);
        const fd::Morphism pi_fine = fine.morphism(*st.pi);
        const fd::Morphism pi_coarse = d.morphism(*st.pi);
        const fd::Morphism r_top = disc::restrict_resolution(st.algebra, n);
        const fd::Morphism r_low = disc::restrict_resolution(stages[j - 1].algebra, n);
        const Matrix lhs = pi_coarse.dense() * r_top.on_basis();
        const Matrix rhs = r_low.dense() * pi_fine.on_basis();
        const double diff = lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
        out.push_back(residual_report(st.name + "/refine" + at, "refinement", diff, tol.residual, 0,
                                      Json{{"fine", 2 * n}, {"coarse", n}}));
      }
    }
  }
  return out;
}

std::vector<CheckReport> validate_mapping_constructions(const std::string& id, const MorphismExpr& f,
                                                        const std::vector<int>& resolutions,
                                                        const Tolerances& tol) {
  std::vector<CheckReport> out;
  const expr::Mapping kinds[] = {expr::Mapping::Cylinder, expr::Mapping::MappingCone};
  for (auto kind : kinds) {
    const AlgebraExpr x = expr::mapping_construction(kind, f);
    const std::string name = kind == expr::Mapping::Cylinder ? "cylinder" : "cone";
    for (int n : resolutions) {
      disc::Discretizer d(n, tol.rank_rel);
      const fd::Algebra& xa = d.algebra(x);
      const fd::Algebra& a = d.algebra(f.domain());
      const fd::Algebra& b = d.algebra(f.codomain());
      const fd::Morphism pr1 = d.morphism(expr::projection_first(x));
      const int free_points = kind == expr::Mapping::Cylinder ? n : n - 1;
      const int expected = a.dim() + free_points * b.dim();
      const int pr1_rank = linalg::rank(pr1.on_basis(), tol.rank_rel);
      const double closure = xa.dim() <= 120 ? disc::closure_residual(xa) : 0.0;
      Json w{{"dim", xa.dim()}, {"expected_dim", expected}, {"pr1_rank", pr1_rank}, {"dim_source", a.dim()}};
      CheckReport r =
          residual_report(id + "/" + name + "@N=" + std::to_string(n), "inheritance", closure, tol.residual, 0, w);
      if (xa.dim() != expected || pr1_rank != a.dim()) r.status = Status::Fail;
      if (r.failed() && !r.witness) r.witness = w;
      out.push_back(std::move(r));
    }
  }
  return out;
}

// --- layout -------------------------------------------------------------------

int Layout::block_index(int stage, int point, int fblock) const {
  if (dims[stage] == 0) return stage_offset[stage] + fblock;
  return stage_offset[stage] + point * fblocks[stage] + fblock;
}

fd::Morphism Layout::project_to(int j) const {
  const fd::Algebra& target = algebras[j];
  std::vector<fd::Route> routes;
  for (int b = 0; b < target.block_count(); ++b) routes.push_back({{{stage_offset[j] + b, 0}}, std::nullopt});
  return fd::Morphism(top(), target, std::move(routes), "proj" + std::to_string(j));
}

Layout make_layout(const Complex& x, int n) {
  Layout l;
  l.n = n;
  disc::Discretizer d(n);
  const auto& stages = x.stages();
  const int m = static_cast<int>(stages.size());
  for (int j = 0; j < m; ++j) {
    l.algebras.push_back(d.algebra(stages[j].algebra));
    l.dims.push_back(stages[j].dim);
    l.fblocks.push_back(static_cast<int>(expr::finite_blocks(stages[j].cell).size()));
    if (j == 0) {
      l.sigma.push_back(fd::identity(l.algebras[0]));
      l.cube_points.push_back({});
      l.sphere_points.push_back({});
    } else {
      l.sigma.push_back(d.morphism(*stages[j].sigma));
      const int k = stages[j].dim;
      l.cube_points.push_back(disc::grid_points(AlgebraKind::IntervalTensor, k, n));
      l.sphere_points.push_back(k == 1 ? std::vector<std::vector<int>>{{0}, {n}}
                                       : disc::grid_points(AlgebraKind::SphereTensor, k - 1, n));
    }
  }
  const int total = l.algebras.back().block_count();
  l.stage_offset.resize(m);
  for (int j = 0; j < m; ++j) l.stage_offset[j] = total - l.algebras[j].block_count();

  l.blocks.resize(total);
  for (int j = 0; j < m; ++j) {
    if (j == 0) {
      for (int b = 0; b < l.fblocks[0]; ++b) l.blocks[l.stage_offset[0] + b] = {0, -1, b, false};
      continue;
    }
    const auto& pts = l.cube_points[j];
    for (std::size_t p = 0; p < pts.size(); ++p) {
      bool bnd = false;
      for (int v : pts[p]) bnd |= (v == 0 || v == n);
      for (int c = 0; c < l.fblocks[j]; ++c)
        l.blocks[l.block_index(j, static_cast<int>(p), c)] = {j, static_cast<int>(p), c, bnd};
    }
  }
  return l;
}

DotGraph complex_dot(const Complex& x) {
  DotGraph g;
  g.name = x.stages().front().name;
  const auto& st = x.stages();
  g.nodes.push_back({st[0].name, st[0].name + " = " + st[0].algebra.to_string()});
  for (std::size_t k = 1; k < st.size(); ++k) {
    const Stage& s = st[k];
    const std::string d = std::to_string(s.dim);
    const std::string cube = "I" + d + "_" + s.name;
    const std::string sphere = "S" + std::to_string(s.dim - 1) + "_" + s.name;
    g.nodes.push_back({s.name, s.name});
    g.nodes.push_back({cube, "I^" + d + " " + s.cell.to_string()});
    g.nodes.push_back({sphere, "S^" + std::to_string(s.dim - 1) + " " + s.cell.to_string()});
    g.edges.push_back({s.name, cube, "rho" + std::to_string(k)});
    g.edges.push_back({cube, sphere, "boundary"});
    g.edges.push_back({st[k - 1].name, sphere, "sigma" + std::to_string(k)});
    g.edges.push_back({s.name, st[k - 1].name, "pi" + std::to_string(k)});
  }
  return g;
}

}  // namespace nccw::cw
