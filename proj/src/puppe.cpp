#include "nccw/puppe.hpp"

#include <algorithm>
#include <set>

namespace nccw::puppe {

using expr::AlgebraExpr;
using expr::Functor;
using expr::Mapping;
using expr::MorphismExpr;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

fd::Route copy_of(int source) { return {{{source, 0}}, std::nullopt}; }

AlgebraExpr suspension(const AlgebraExpr& a) { return expr::apply_functor(Functor::Suspension, a); }

}  // namespace

// --- cylinder -------------------------------------------------------------------

check::Homotopy sliding_homotopy(const fd::Algebra& cyl, int a_blocks, int b_blocks, int n) {
  check::Homotopy h;
  for (int k = 0; k <= n; ++k) {
    std::vector<fd::Route> routes;
    for (int i = 0; i < a_blocks; ++i) routes.push_back(copy_of(i));
    for (int j = 0; j <= n; ++j) {
      const int from = n - k + (k * j) / n;
      for (int c = 0; c < b_blocks; ++c) routes.push_back(copy_of(a_blocks + from * b_blocks + c));
    }
    h.slices.emplace_back(cyl, cyl, std::move(routes), "H@" + std::to_string(k));
  }
  return h;
}

CylinderRetraction cyl_retraction(const std::string& id, const MorphismExpr& phi, int n, double tol) {
  const AlgebraExpr cyl = expr::mapping_construction(Mapping::Cylinder, phi);
  const auto [a, paths] = expr::factors(cyl);
  const AlgebraExpr& b = phi.codomain();
  CylinderRetraction out{expr::user_named("p", expr::projection_first(cyl)),
                         expr::user_named("s", expr::pairing(cyl, expr::identity(a),
                                                             expr::compose(expr::constant_embed(b, 1), phi))),
                         {},
                         {}};

  disc::Discretizer d(n);
  const fd::Algebra& cyl_c = d.algebra(cyl);
  const fd::Morphism p = d.morphism(out.p);
  const fd::Morphism s = d.morphism(out.s);
  const double ps = max_abs(fd::compose(p, s).on_basis() - d.algebra(a).basis());
  out.reports.push_back(residual_report(id + "/p_after_s", "retraction", ps, 0.0, 0,
                                        Json{{"statement", "p o s = id_A, exact"}}));

  out.sliding = sliding_homotopy(cyl_c, d.algebra(a).block_count(), d.algebra(b).block_count(), n);
  CheckReport h = check::check_homotopy(id + "/sliding", out.sliding, fd::compose(s, p), fd::identity(cyl_c), tol);
  h.kind = "retraction";
  out.reports.push_back(std::move(h));

  Json w;
  w["stated"] = "Cyl(phi) ~ B";
  w["verified"] = "Cyl(phi) ~ A through p: (a, g) -> a and s: a -> (a, const phi(a))";
  w["dim_cylinder"] = cyl_c.dim();
  w["dim_A"] = d.algebra(a).dim();
  const bool ok = out.reports[0].passed() && out.reports[1].passed();
  CheckReport st = residual_report(id + "/homotopy_type", "retraction", std::max(ps, out.reports[1].max_residual), tol,
                                   0, std::move(w));
  if (!ok) st.status = Status::Fail;
  out.reports.push_back(std::move(st));
  return out;
}

// --- cone -----------------------------------------------------------------------

check::Homotopy cone_contraction(const fd::Algebra& cone, int a_blocks, int n) {
  check::Homotopy h;
  for (int k = 0; k <= n; ++k) {
    std::vector<fd::Route> routes;
    for (int j = 1; j <= n; ++j) {
      const int from = (k * j) / n;
      for (int c = 0; c < a_blocks; ++c)
        routes.push_back(from == 0 ? fd::Route{} : copy_of((from - 1) * a_blocks + c));
    }
    h.slices.emplace_back(cone, cone, std::move(routes), "h@" + std::to_string(k));
  }
  return h;
}

MorphismExpr ideal_inclusion(const AlgebraExpr& b, const std::vector<int>& ideal_blocks) {
  if (b.kind() != expr::AlgebraKind::FiniteDim) throw Error("block ideals live in finite-dimensional algebras");
  const auto sizes = b.blocks();
  std::set<int> seen;
  std::vector<int> a_sizes;
  for (int blk : ideal_blocks) {
    if (blk < 0 || blk >= static_cast<int>(sizes.size()) || !seen.insert(blk).second)
      throw Error("not a block ideal: block " + std::to_string(blk) + " of " + b.to_string());
    a_sizes.push_back(sizes[blk]);
  }
  const AlgebraExpr a = a_sizes.empty() ? expr::zero_algebra() : expr::finite_dim(a_sizes);
  std::vector<std::vector<int>> mult(sizes.size(), std::vector<int>(a_sizes.size(), 0));
  for (std::size_t i = 0; i < ideal_blocks.size(); ++i) mult[ideal_blocks[i]][i] = 1;
  if (a_sizes.empty()) return expr::zero_morphism(a, b);
  return expr::block_map(a, b, mult);
}

ConeSplit cone_split_equivalence(const std::string& id, const AlgebraExpr& b, const std::vector<int>& ideal_blocks,
                                 int n, double tol) {
  const MorphismExpr iota = ideal_inclusion(b, ideal_blocks);
  const auto sizes = b.blocks();
  std::vector<int> q_sizes, q_index;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (std::find(ideal_blocks.begin(), ideal_blocks.end(), static_cast<int>(c)) == ideal_blocks.end())
      q_sizes.push_back(sizes[c]), q_index.push_back(static_cast<int>(c));
  const AlgebraExpr a = iota.domain();
  const AlgebraExpr q = q_sizes.empty() ? expr::zero_algebra() : expr::finite_dim(q_sizes);
  const AlgebraExpr cone_a = expr::apply_functor(Functor::Cone, a);
  const AlgebraExpr susp_q = suspension(q);
  const AlgebraExpr cone_iota = expr::mapping_construction(Mapping::MappingCone, iota);

  disc::Discretizer d(n);
  const fd::Algebra dom = d.algebra(expr::direct_sum(cone_a, susp_q));
  const fd::Algebra& cod = d.algebra(cone_iota);
  const int na = static_cast<int>(ideal_blocks.size());
  const int nq = static_cast<int>(q_sizes.size());
  const int nb = static_cast<int>(sizes.size());

  std::vector<fd::Route> routes;
  for (int i = 0; i < na; ++i) routes.push_back(copy_of((n - 1) * na + i));
  for (int j = 1; j <= n; ++j) {
    for (int c = 0; c < nb; ++c) {
      auto in_a = std::find(ideal_blocks.begin(), ideal_blocks.end(), c);
      if (in_a != ideal_blocks.end()) {
        routes.push_back(copy_of((j - 1) * na + static_cast<int>(in_a - ideal_blocks.begin())));
        continue;
      }
      const int r = static_cast<int>(std::find(q_index.begin(), q_index.end(), c) - q_index.begin());
      routes.push_back(j < n ? copy_of(n * na + (j - 1) * nq + r) : fd::Route{});
    }
  }
  ConeSplit out{fd::Morphism(dom, cod, std::move(routes), "split"), {}};

  out.reports.push_back(check::check_star_hom(id + "/split_star_hom", out.split, tol));
  const int rank = linalg::rank(cod.basis().adjoint() * out.split.on_basis());
  Json iso{{"dim_source", dom.dim()}, {"dim_cone", cod.dim()}, {"rank", rank}};
  CheckReport r = residual_report(id + "/split_iso", "cone_split", 0.0, tol, 0, iso);
  if (rank != dom.dim() || rank != cod.dim()) r.status = Status::Fail;
  out.reports.push_back(std::move(r));

  const fd::Algebra& cone_a_c = d.algebra(cone_a);
  CheckReport h = check::check_homotopy(id + "/cone_contraction", cone_contraction(cone_a_c, na, n),
                                        fd::zero_map(cone_a_c, cone_a_c), fd::identity(cone_a_c), tol);
  h.kind = "cone_split";
  out.reports.push_back(std::move(h));

  const auto quotient = fd::quotient_by_blocks(d.algebra(b), ideal_blocks);
  Json w;
  w["stated"] = "Cone(iota) ~ B/A";
  w["computed"] = "Cone(iota) = Cone(A) (+) S(B/A); Cone(A) is contractible, so Cone(iota) ~ S(B/A)";
  w["dim_quotient"] = quotient.algebra.dim();
  w["dim_suspended_quotient"] = d.algebra(susp_q).dim();
  CheckReport cmp = residual_report(id + "/homotopy_type", "cone_split", 0.0, tol, 0, std::move(w));
  if (d.algebra(susp_q).dim() != (n - 1) * quotient.algebra.dim()) cmp.status = Status::Fail;
  out.reports.push_back(std::move(cmp));
  return out;
}

// --- chain ----------------------------------------------------------------------

MorphismExpr cone_into_cylinder(const MorphismExpr& phi) {
  const AlgebraExpr cyl = expr::mapping_construction(Mapping::Cylinder, phi);
  const AlgebraExpr cone = expr::mapping_construction(Mapping::MappingCone, phi);
  const auto [a, half_open] = expr::factors(cone);
  const auto [a2, interval] = expr::factors(cyl);
  return expr::pairing(cyl, expr::projection_first(cone),
                       expr::compose(expr::extend_by_zero(half_open, interval), expr::projection_second(cone)));
}

MorphismExpr suspension_into_cone(const MorphismExpr& phi) {
  const AlgebraExpr cone = expr::mapping_construction(Mapping::MappingCone, phi);
  const auto [a, half_open] = expr::factors(cone);
  const MorphismExpr sphi = expr::suspended(phi);
  return expr::pairing(cone, expr::zero_morphism(sphi.domain(), a),
                       expr::compose(expr::extend_by_zero(sphi.codomain(), half_open), sphi));
}

MorphismExpr suspension_into_cone_kernel(const MorphismExpr& phi) {
  const AlgebraExpr cone = expr::mapping_construction(Mapping::MappingCone, phi);
  const auto [a, half_open] = expr::factors(cone);
  const AlgebraExpr sb = suspension(phi.codomain());
  return expr::pairing(cone, expr::zero_morphism(sb, a), expr::extend_by_zero(sb, half_open));
}

namespace {

std::string term_name(int i) {
  if (i == 0) return "B";
  static const char* base[] = {"A", "Cyl(phi)", "Cone(phi)"};
  const int m = (i - 1) / 3;
  const std::string x = base[(i - 1) % 3];
  if (m == 0) return x;
  if (m == 1) return "S(" + x + ")";
  return "S^" + std::to_string(m) + "(" + x + ")";
}

}  // namespace

PuppeChain puppe_chain(const MorphismExpr& phi, int terms) {
  if (terms < 2) throw Error("a chain needs at least 2 terms, got " + std::to_string(terms));
  PuppeChain c{{}, {}, {}, phi};
  for (int i = 0; i < terms; ++i) {
    AlgebraExpr t;
    switch (i) {
      case 0: t = phi.codomain(); break;
      case 1: t = phi.domain(); break;
      case 2: t = expr::mapping_construction(Mapping::Cylinder, phi); break;
      case 3: t = expr::mapping_construction(Mapping::MappingCone, phi); break;
      default: t = suspension(c.terms[i - 3]); break;
    }
    c.terms.push_back(t);
    c.names.push_back(term_name(i));
  }
  for (int i = 0; i + 1 < terms; ++i) {
    switch (i) {
      case 0: c.maps.push_back(phi); break;
      case 1: c.maps.push_back(expr::projection_first(c.terms[2])); break;
      case 2: c.maps.push_back(cone_into_cylinder(phi)); break;
      case 3: c.maps.push_back(suspension_into_cone(phi)); break;
      default: c.maps.push_back(expr::suspended(c.maps[i - 3])); break;
    }
  }
  return c;
}

namespace {

// Slices ev(k/N)∘pr2∘(Cone -> Cyl), k = 0..N, optionally suspended.
check::Homotopy cone_null_homotopy(disc::Discretizer& d, const MorphismExpr& phi, bool suspend) {
  const AlgebraExpr cyl = expr::mapping_construction(Mapping::Cylinder, phi);
  const auto [a, interval] = expr::factors(cyl);
  const MorphismExpr into_cyl = cone_into_cylinder(phi);
  const int n = d.resolution();
  check::Homotopy h;
  for (int k = 0; k <= n; ++k) {
    MorphismExpr slice = expr::compose(expr::evaluation(interval, {k, n}),
                                       expr::compose(expr::projection_second(cyl), into_cyl));
    if (suspend) slice = expr::suspended(slice);
    h.slices.push_back(d.morphism(slice));
  }
  return h;
}

}  // namespace

std::vector<CheckReport> chain_certificates(const std::string& id, const PuppeChain& chain, int n, double tol) {
  std::vector<CheckReport> out;
  {
    Json bad = Json::array();
    for (std::size_t i = 0; i < chain.maps.size(); ++i)
      if (!(chain.maps[i].domain() == chain.terms[i + 1]) || !(chain.maps[i].codomain() == chain.terms[i]))
        bad.push_back(i);
    Json w{{"terms", chain.names}, {"mistyped_maps", bad}};
    CheckReport r = residual_report(id + "/types", "chain", 0.0, tol, 0, std::move(w));
    if (!bad.empty()) r.status = Status::Fail;
    out.push_back(std::move(r));
  }
  if (chain.terms.size() < 4) {
    out.push_back(skip_report(id + "/certificates", "chain", "certificates need the first 4 terms"));
    return out;
  }

  const MorphismExpr& phi = chain.phi;
  const AlgebraExpr cyl = chain.terms[2];
  const AlgebraExpr cone = chain.terms[3];
  disc::Discretizer d(n);

  // (i) The homotopy ev(u)∘pr2 runs from ev(0)∘pr2 to phi∘p on Cyl(phi); on
  // the image of Cone(phi) its start is zero.
  const auto [a, interval] = expr::factors(cyl);
  const MorphismExpr p = expr::projection_first(cyl);
  {
    check::Homotopy on_cyl;
    for (int k = 0; k <= n; ++k)
      on_cyl.slices.push_back(d.morphism(expr::compose(expr::evaluation(interval, {k, n}), expr::projection_second(cyl))));
    const fd::Morphism phi_p = d.morphism(expr::compose(phi, p));
    CheckReport r = check::check_homotopy(id + "/i_cylinder", on_cyl, on_cyl.start(), phi_p, tol);
    (*r.witness)["start_norm"] = max_abs(on_cyl.start().on_basis());
    (*r.witness)["note"] = "on Cyl(phi) the homotopy starts at ev(0) o pr2, which need not vanish";
    r.kind = "chain";
    out.push_back(std::move(r));
  }
  const MorphismExpr into_cyl = chain.maps[2];
  const MorphismExpr composite = expr::compose(phi, expr::compose(p, into_cyl));
  {
    const check::Homotopy h = cone_null_homotopy(d, phi, false);
    const fd::Morphism target = d.morphism(composite);
    CheckReport r = check::check_homotopy(id + "/i", h, fd::zero_map(target.domain(), target.codomain()), target, tol);
    (*r.witness)["statement"] = "Cone(phi) -> Cyl(phi) -> A -> B is null-homotopic via ev(u) o pr2";
    r.kind = "chain";
    out.push_back(std::move(r));
  }

  // (ii) and (iii).
  const MorphismExpr incl = suspension_into_cone_kernel(phi);
  const MorphismExpr q = expr::projection_first(cone);
  const fd::Morphism incl_c = d.morphism(incl);
  const fd::Morphism q_c = d.morphism(q);
  CheckReport row = check::check_exact_row(id + "/ii", incl_c, q_c);
  row.kind = "chain";
  out.push_back(row);
  const double zero = max_abs(fd::compose(q_c, incl_c).on_basis());
  out.push_back(residual_report(id + "/iii", "chain", zero, 0.0, 0, Json{{"statement", "S(B) -> Cone(phi) -> A is 0"}}));

  // (iv) Suspended certificates.
  {
    const fd::Morphism s_incl = d.morphism(expr::suspended(incl));
    const fd::Morphism s_q = d.morphism(expr::suspended(q));
    CheckReport srow = check::check_exact_row(id + "/iv_row", s_incl, s_q);
    srow.kind = "chain";
    const int scale = n - 1;
    const auto& w0 = *row.witness;
    auto& w1 = *srow.witness;
    const bool scaled = w1["dim_K"].get<int>() == scale * w0["dim_K"].get<int>() &&
                        w1["dim_E"].get<int>() == scale * w0["dim_E"].get<int>() &&
                        w1["dim_Q"].get<int>() == scale * w0["dim_Q"].get<int>();
    w1["interior_scaled"] = scaled;
    if (!scaled) srow.status = Status::Fail;
    out.push_back(std::move(srow));

    const double szero = max_abs(fd::compose(s_q, s_incl).on_basis());
    out.push_back(residual_report(id + "/iv_zero", "chain", szero, 0.0, 0,
                                  Json{{"statement", "S(S(B)) -> S(Cone(phi)) -> S(A) is 0"}}));

    const check::Homotopy sh = cone_null_homotopy(d, phi, true);
    const fd::Morphism starget = d.morphism(expr::suspended(composite));
    CheckReport r = check::check_homotopy(id + "/iv_null", sh, fd::zero_map(starget.domain(), starget.codomain()),
                                          starget, tol);
    r.kind = "chain";
    out.push_back(std::move(r));
  }
  return out;
}

DotGraph chain_dot(const PuppeChain& chain) {
  DotGraph g;
  g.name = "puppe";
  for (std::size_t i = 0; i < chain.terms.size(); ++i)
    g.nodes.push_back({"A" + std::to_string(i), "A" + std::to_string(i) + " = " + chain.names[i]});
  for (std::size_t i = 0; i < chain.maps.size(); ++i)
    g.edges.push_back({"A" + std::to_string(i + 1), "A" + std::to_string(i), "phi" + std::to_string(i)});
  return g;
}

}  // namespace nccw::puppe
