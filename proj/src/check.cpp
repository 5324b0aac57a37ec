#include "nccw/check.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "nccw/kernels.hpp"
#include "nccw/random.hpp"

namespace nccw::check {

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

double landing_residual(const fd::Morphism& f) {
  if (!f.codomain().constrained()) return 0.0;
  const Matrix images = f.on_basis();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < images.cols(); ++c)
    worst = std::max(worst, f.codomain().constraint_residual(images.col(c)));
  return worst;
}

struct RandomCone {
  fd::Algebra y;
  Matrix tau;  // ambient X columns, one per basis element of Y
};

// tau: C^m -> X sending each minimal idempotent of C^m to a sum of spectral
// projections of a random self-adjoint element of X. Those projections are
// polynomials without constant term in that element, so they lie in X.
RandomCone random_cone(const fd::Algebra& x, Rng& rng) {
  const Matrix bx = x.basis();
  if (bx.cols() == 0) return {fd::Algebra(std::vector<int>{1}), Matrix::Zero(x.ambient_dim(), 1)};
  Vector h = bx * rng.gaussian(static_cast<int>(bx.cols()), 1);
  h = (h + x.adjoint(h)) / 2.0;

  struct Eig {
    double value;
    int block;
    Vector vec;
  };
  std::vector<Eig> eigs;
  double scale = 0.0;
  for (int b = 0; b < x.block_count(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.block_of(h, b));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      eigs.push_back({es.eigenvalues()[k], b, es.eigenvectors().col(k)});
      scale = std::max(scale, std::abs(es.eigenvalues()[k]));
    }
  }
  std::stable_sort(eigs.begin(), eigs.end(), [](const Eig& a, const Eig& b) { return a.value < b.value; });
  const double gap = 1e-8 * std::max(1.0, scale);

  std::vector<Vector> projections;
  for (std::size_t i = 0; i < eigs.size();) {
    std::size_t j = i;
    Vector p = Vector::Zero(x.ambient_dim());
    while (j < eigs.size() && eigs[j].value - eigs[i].value < gap) {
      const int n = x.block_size(eigs[j].block);
      const Matrix outer = eigs[j].vec * eigs[j].vec.adjoint();
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) p[x.block_offset(eigs[j].block) + r * n + c] += outer(r, c);
      ++j;
    }
    if (std::abs(eigs[i].value) >= gap) projections.push_back(std::move(p));
    i = j;
  }
  const int groups = static_cast<int>(projections.size());
  const int m = groups ? 1 + rng.below(std::min(3, groups)) : 1;
  Matrix tau = Matrix::Zero(x.ambient_dim(), m);
  for (const auto& p : projections) {
    const int k = rng.below(m + 1);
    if (k < m) tau.col(k) += p;
  }
  return {fd::Algebra(std::vector<int>(m, 1)), tau};
}

}  // namespace

Json vector_json(const Vector& v, double drop_below) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > drop_below) out.push_back(Json::array({i, v[i].real(), v[i].imag()}));
  return out;
}

double map_distance(const fd::Morphism& a, const fd::Morphism& b) {
  if (a.codomain().ambient_dim() != b.codomain().ambient_dim() || a.domain().ambient_dim() != b.domain().ambient_dim())
    return std::numeric_limits<double>::infinity();
  return max_abs(a.on_basis() - b.dense() * a.domain().basis());
}

CheckReport check_star_hom(const std::string& id, const fd::Morphism& f, double tol) {
  const auto r = kernels::star_hom_residual_parallel(f);
  const double landing = landing_residual(f);
  const double worst = std::max(r.max_residual, landing);
  std::optional<Json> witness;
  if (worst > tol) {
    Json w;
    w["map"] = f.provenance();
    if (r.max_residual >= landing) {
      w["basis_i"] = r.worst_i;
      if (r.worst_j < 0)
        w["test"] = "adjoint";
      else
        w["basis_j"] = r.worst_j, w["test"] = "product";
    } else {
      w["test"] = "image outside the codomain subalgebra";
    }
    witness = std::move(w);
  }
  return residual_report(id, "star_hom", worst, tol, 0, std::move(witness));
}

// --- pullback / pushout -------------------------------------------------------

CheckReport check_pullback_universal(const std::string& id, const PullbackSquare& sq, int trials,
                                     std::uint64_t seed, const Tolerances& tol) {
  const fd::Algebra& x = sq.gamma.domain();
  const Matrix bx = x.basis();
  const double commute = max_abs(sq.alpha.dense() * sq.delta.on_basis() - sq.beta.dense() * sq.gamma.on_basis());
  if (commute > tol.residual) {
    CheckReport r = skip_report(id, "pullback", "outer square does not commute", commute);
    r.seed = seed;
    return r;
  }

  const Matrix legs = vstack(sq.delta.on_basis(), sq.gamma.on_basis());
  const int nullity = static_cast<int>(bx.cols()) - linalg::rank(legs, tol.rank_rel);
  Json cert;
  cert["dim_X"] = x.dim();
  cert["kernel_intersection_rank"] = nullity;
  if (nullity > 0) {
    const Vector k = bx * linalg::null_space(legs, tol.rank_rel).col(0);
    cert["common_kernel_vector"] = vector_json(k);
    CheckReport r = fail_report(id, "pullback", std::move(cert), 0.0, tol.residual);
    r.seed = seed;
    return r;
  }

  double worst = commute;
  double worst_sigma_vs_tau = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, id + "/cone" + std::to_string(t)));
    RandomCone cone = random_cone(x, rng);
    const Matrix phi = sq.delta.dense() * cone.tau;
    const Matrix psi = sq.gamma.dense() * cone.tau;
    double solve_residual = 0.0;
    const Matrix s = linalg::least_squares(legs, vstack(phi, psi), solve_residual);
    const Matrix sigma = bx * s;
    fd::Morphism sigma_map(cone.y, x, sigma, "sigma");
    const double typing =
        std::max(max_abs(sq.delta.dense() * sigma - phi), max_abs(sq.gamma.dense() * sigma - psi));
    const double star = kernels::star_hom_residual_serial(sigma_map).max_residual;
    const double vs_tau = max_abs(sigma - cone.tau);
    worst_sigma_vs_tau = std::max(worst_sigma_vs_tau, vs_tau);
    worst = std::max({worst, solve_residual, typing, star, vs_tau});
    if (worst > tol.residual) {
      cert["trial"] = t;
      cert["cone_dim"] = cone.y.dim();
      cert["solve_residual"] = solve_residual;
      cert["typing_residual"] = typing;
      cert["sigma_star_hom_residual"] = star;
      break;
    }
  }
  cert["trials"] = trials;
  cert["sigma_vs_tau"] = worst_sigma_vs_tau;
  return residual_report(id, "pullback", worst, tol.residual, seed, std::move(cert));
}

CheckReport check_pushout_universal(const std::string& id, const PushoutSquare& sq, int trials,
                                    std::uint64_t seed, const Tolerances& tol) {
  const fd::Algebra& x = sq.gamma.codomain();
  const Matrix bx = x.basis();
  const double commute = max_abs(sq.gamma.dense() * sq.beta.on_basis() - sq.delta.dense() * sq.alpha.on_basis());
  if (commute > tol.residual) {
    CheckReport r = skip_report(id, "pushout", "square does not commute", commute);
    r.seed = seed;
    return r;
  }

  const Matrix gb = sq.gamma.on_basis();
  const Matrix da = sq.delta.on_basis();
  std::vector<Vector> gens;
  for (Eigen::Index c = 0; c < gb.cols(); ++c) gens.push_back(gb.col(c));
  for (Eigen::Index c = 0; c < da.cols(); ++c) gens.push_back(da.col(c));
  const fd::Generated g = fd::generated_subalgebra(x, gens, tol.rank_rel);

  Json cert;
  cert["dim_X"] = x.dim();
  cert["generated_dim"] = g.dim();
  if (g.dim() != x.dim()) {
    CheckReport r = fail_report(id, "pushout", std::move(cert), 0.0, tol.residual);
    r.seed = seed;
    return r;
  }

  // Spanning vectors in the coordinates of X's basis.
  Matrix w(bx.cols(), static_cast<Eigen::Index>(g.spanning.size()));
  for (std::size_t k = 0; k < g.spanning.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = bx.adjoint() * g.spanning[k];
  const int w_rank = linalg::rank(w, tol.rank_rel);
  cert["spanning_rank"] = w_rank;

  double worst = commute;
  if (x.block_count() > 0) {
    for (int t = 0; t < trials; ++t) {
      const auto tau = fd::random_multiplicity(x.sizes(), derive_seed(seed, id + "/cocone" + std::to_string(t)));
      const fd::Morphism tau_map = tau.concrete();
      const fd::Algebra& y = tau_map.codomain();
      const Matrix tau_amb = tau_map.dense();

      // sigma on each spanning word, from the co-cone data and the word shape
      std::vector<Vector> values;
      for (const auto& word : g.words) {
        switch (word.kind) {
          case fd::Word::Kind::Generator:
            values.push_back(tau_amb * gens[static_cast<std::size_t>(word.left)]);
            break;
          case fd::Word::Kind::Product:
            values.push_back(y.product(values[static_cast<std::size_t>(word.left)],
                                       values[static_cast<std::size_t>(word.right)]));
            break;
          case fd::Word::Kind::Adjoint:
            values.push_back(y.adjoint(values[static_cast<std::size_t>(word.left)]));
            break;
        }
      }
      Matrix v(y.ambient_dim(), static_cast<Eigen::Index>(values.size()));
      for (std::size_t k = 0; k < values.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = values[k];
      double solve_residual = 0.0;
      const Matrix sigma_coords = linalg::least_squares(w.transpose(), v.transpose(), solve_residual).transpose();
      const Matrix sigma_dense = sigma_coords * bx.adjoint();
      fd::Morphism sigma(x, y, sigma_dense, "sigma");
      const double typing =
          std::max(max_abs(sigma_dense * da - tau_amb * da), max_abs(sigma_dense * gb - tau_amb * gb));
      const double star = kernels::star_hom_residual_serial(sigma).max_residual;
      const double vs_tau = max_abs((sigma_dense - tau_amb) * bx);
      worst = std::max({worst, solve_residual, typing, star, vs_tau});
      if (worst > tol.residual) {
        cert["trial"] = t;
        cert["solve_residual"] = solve_residual;
        cert["typing_residual"] = typing;
        break;
      }
    }
  }
  cert["trials"] = trials;
  CheckReport r = residual_report(id, "pushout", worst, tol.residual, seed, std::move(cert));
  if (w_rank != x.dim()) r.status = Status::Fail;
  return r;
}

// --- exact rows ---------------------------------------------------------------

CheckReport check_exact_row(const std::string& id, const fd::Morphism& i, const fd::Morphism& q,
                            const Tolerances& tol) {
  const int dim_k = i.domain().dim();
  const int dim_e = i.codomain().dim();
  const int dim_q = q.codomain().dim();
  const Matrix bq = q.codomain().basis();
  const int rank_i = linalg::rank(i.on_basis(), tol.rank_rel);
  const int rank_q = linalg::rank(bq.adjoint() * q.on_basis(), tol.rank_rel);
  const double composite = max_abs(q.dense() * i.on_basis());
  const double landing = std::max(landing_residual(i), landing_residual(q));

  Json w;
  w["dim_K"] = dim_k;
  w["dim_E"] = dim_e;
  w["dim_Q"] = dim_q;
  w["rank_i"] = rank_i;
  w["rank_q"] = rank_q;
  w["kernel_q"] = dim_e - rank_q;
  const bool ranks_ok = rank_i == dim_k && rank_q == dim_q && dim_e - rank_q == rank_i;
  CheckReport r = residual_report(id, "exact_row", std::max(composite, landing), tol.residual, 0, std::move(w));
  if (!ranks_ok) r.status = Status::Fail;
  return r;
}

// --- homotopies ---------------------------------------------------------------

Homotopy constant_homotopy(const fd::Morphism& f, int steps) {
  return Homotopy{std::vector<fd::Morphism>(static_cast<std::size_t>(steps) + 1, f)};
}

Homotopy homotopy_from_map(const fd::Morphism& phi, const fd::Algebra& b) {
  const int nb = b.block_count();
  const int total = phi.codomain().block_count();
  if (nb == 0 || total % nb != 0) throw Error("homotopy codomain is not a time grid over the given algebra");
  Homotopy h;
  for (int t = 0; t < total / nb; ++t) {
    if (phi.routed()) {
      std::vector<fd::Route> routes(phi.routes().begin() + t * nb, phi.routes().begin() + (t + 1) * nb);
      h.slices.emplace_back(phi.domain(), b, std::move(routes), phi.provenance() + "@" + std::to_string(t));
    } else {
      const int row0 = phi.codomain().block_offset(t * nb);
      h.slices.emplace_back(phi.domain(), b, Matrix(phi.dense().middleRows(row0, b.ambient_dim())),
                            phi.provenance() + "@" + std::to_string(t));
    }
  }
  return h;
}

fd::Morphism homotopy_to_map(const Homotopy& h) {
  const fd::Algebra& b = h.start().codomain();
  const int copies = static_cast<int>(h.slices.size());
  std::vector<fd::Block> blocks;
  for (int t = 0; t < copies; ++t)
    for (const auto& blk : b.blocks()) blocks.push_back({blk.size, "t" + std::to_string(t) + "|" + blk.label});
  std::optional<Matrix> constraint;
  if (b.constrained()) {
    const Matrix base = b.basis();
    Matrix c = Matrix::Zero(base.rows() * copies, base.cols() * copies);
    for (int t = 0; t < copies; ++t) c.block(t * base.rows(), t * base.cols(), base.rows(), base.cols()) = base;
    constraint = std::move(c);
  }
  fd::Algebra cod(std::move(blocks), std::move(constraint));
  const bool routed = std::all_of(h.slices.begin(), h.slices.end(), [](const auto& s) { return s.routed(); });
  if (routed) {
    std::vector<fd::Route> routes;
    for (const auto& s : h.slices) routes.insert(routes.end(), s.routes().begin(), s.routes().end());
    return fd::Morphism(h.start().domain(), cod, std::move(routes), "homotopy");
  }
  Matrix dense(cod.ambient_dim(), h.start().domain().ambient_dim());
  for (int t = 0; t < copies; ++t) dense.middleRows(t * b.ambient_dim(), b.ambient_dim()) = h.slices[t].dense();
  return fd::Morphism(h.start().domain(), cod, dense, "homotopy");
}

Homotopy concatenate(const Homotopy& h, const Homotopy& k) {
  if (h.slices.empty()) return k;
  if (k.slices.empty()) return h;
  if (map_distance(h.end(), k.start()) > 1e-9) throw Error("concatenated homotopies do not meet");
  Homotopy out = h;
  out.slices.insert(out.slices.end(), k.slices.begin() + 1, k.slices.end());
  return out;
}

CheckReport check_homotopy(const std::string& id, const Homotopy& h, const fd::Morphism& phi,
                           const fd::Morphism& psi, double tol) {
  if (h.slices.empty()) return fail_report(id, "homotopy", Json{{"reason", "no time slices"}}, 0.0, tol);
  const double start = map_distance(h.start(), phi);
  const double end = map_distance(h.end(), psi);
  double slice_worst = 0.0;
  int worst_slice = -1;
  for (std::size_t t = 0; t < h.slices.size(); ++t) {
    const double r = std::max(kernels::star_hom_residual_parallel(h.slices[t]).max_residual,
                              landing_residual(h.slices[t]));
    if (r > slice_worst) slice_worst = r, worst_slice = static_cast<int>(t);
  }
  Json w;
  w["steps"] = h.steps();
  w["start_residual"] = start;
  w["end_residual"] = end;
  w["slice_residual"] = slice_worst;
  if (worst_slice >= 0) w["worst_slice"] = worst_slice;
  return residual_report(id, "homotopy", std::max({start, end, slice_worst}), tol, 0, std::move(w));
}

// --- NDR / HEP ----------------------------------------------------------------

fd::Morphism block_projection(const fd::Algebra& b, const std::vector<int>& blocks) {
  std::vector<fd::Route> routes(b.block_count());
  for (int blk : blocks) routes.at(blk) = {{{blk, 0}}, std::nullopt};
  return fd::Morphism(b, b, std::move(routes), "E");
}

fd::Morphism add_maps(const fd::Morphism& a, const fd::Morphism& b) {
  if (a.routed() && b.routed()) {
    bool disjoint = true;
    for (int t = 0; t < a.codomain().block_count(); ++t)
      disjoint &= a.routes()[t].placements.empty() || b.routes()[t].placements.empty();
    if (disjoint) {
      std::vector<fd::Route> routes = a.routes();
      for (int t = 0; t < a.codomain().block_count(); ++t)
        if (routes[t].placements.empty()) routes[t] = b.routes()[t];
      return fd::Morphism(a.domain(), a.codomain(), std::move(routes), a.provenance() + " + " + b.provenance());
    }
  }
  return fd::Morphism(a.domain(), a.codomain(), Matrix(a.dense() + b.dense()),
                      a.provenance() + " + " + b.provenance());
}

namespace {

constexpr const char* kNdrReading =
    "condition 1 read as: the ideal generated by u's image meets A trivially; conditions 2-4 read on the "
    "time slices ev(t)∘phi";

void validate_ideal(const NdrData& d) {
  if (d.b.constrained()) throw Error("NDR pair: B must be an unconstrained block algebra");
  std::set<int> seen;
  for (int blk : d.ideal_blocks) {
    if (blk < 0 || blk >= d.b.block_count() || !seen.insert(blk).second)
      throw Error("NDR pair: A is not a block ideal of B (bad block " + std::to_string(blk) + ")");
  }
  if (d.phi.slices.empty()) throw Error("NDR pair: phi has no time slices");
}

// Ambient matrix units of the listed blocks.
std::vector<Vector> block_units(const fd::Algebra& b, const std::vector<int>& blocks) {
  std::vector<Vector> out;
  for (int blk : blocks) {
    const int n = b.block_size(blk);
    for (int k = 0; k < n * n; ++k) {
      Vector e = Vector::Zero(b.ambient_dim());
      e[b.block_offset(blk) + k] = 1.0;
      out.push_back(std::move(e));
    }
  }
  return out;
}

double outside_blocks(const fd::Algebra& b, const Vector& v, const std::set<int>& inside) {
  double worst = 0.0;
  for (int blk = 0; blk < b.block_count(); ++blk)
    if (!inside.count(blk)) worst = std::max(worst, b.block_of(v, blk).norm());
  return worst;
}

}  // namespace

CheckReport check_ndr_pair(const std::string& id, const NdrData& d, double tol) {
  validate_ideal(d);
  const fd::Algebra& b = d.b;
  const std::set<int> ideal(d.ideal_blocks.begin(), d.ideal_blocks.end());

  // (1)
  const Matrix u_images = d.u.on_basis();
  double c1 = 0.0;
  Json overlap = Json::array();
  for (int blk : d.ideal_blocks) {
    double m = 0.0;
    for (Eigen::Index c = 0; c < u_images.cols(); ++c) m = std::max(m, b.block_of(u_images.col(c), blk).norm());
    if (m > tol) overlap.push_back(blk);
    c1 = std::max(c1, m);
  }

  // (2)
  const double c2 = map_distance(d.phi.start(), fd::identity(b));

  // (3)
  double c3 = 0.0;
  const auto a_units = block_units(b, d.ideal_blocks);
  for (const auto& slice : d.phi.slices)
    for (const auto& e : a_units) c3 = std::max(c3, b.norm(slice.apply(e) - e));

  // (4)
  Json detected = Json::array();
  double c4 = 0.0;
  if (d.u.domain().block_count() > 0) {
    const int last = d.u.domain().block_count() - 1;
    Vector one_at_1 = Vector::Zero(d.u.domain().ambient_dim());
    const int n = d.u.domain().block_size(last);
    for (int k = 0; k < n; ++k) one_at_1[d.u.domain().block_offset(last) + k * n + k] = 1.0;
    const Vector u1 = d.u.apply(one_at_1);
    for (int blk = 0; blk < b.block_count(); ++blk) {
      const Matrix ub = b.block_of(u1, blk);
      if ((ub - Matrix::Identity(ub.rows(), ub.cols())).norm() <= tol) continue;
      detected.push_back(blk);
      for (const auto& e : block_units(b, {blk})) c4 = std::max(c4, outside_blocks(b, d.phi.end().apply(e), ideal));
    }
  }

  Json w;
  w["reading"] = kNdrReading;
  w["conditions"] = Json{{"1", c1}, {"2", c2}, {"3", c3}, {"4", c4}};
  w["u_image_meets_A"] = overlap;
  w["u_detected_blocks"] = detected;
  Json failed = Json::array();
  const double cs[] = {c1, c2, c3, c4};
  for (int k = 0; k < 4; ++k)
    if (cs[k] > tol) failed.push_back(k + 1);
  w["failed_conditions"] = failed;
  return residual_report(id, "ndr", std::max({c1, c2, c3, c4}), tol, 0, std::move(w));
}

HepSolution solve_hep(const std::string& id, const fd::Morphism& f, const Homotopy& phi_t, const NdrData& ndr,
                      double tol) {
  const CheckReport ndr_report = check_ndr_pair(id + "/ndr", ndr, tol);
  if (!ndr_report.passed()) {
    CheckReport r = skip_report(id, "hep", "NDR data failed conditions " + ndr_report.witness->at("failed_conditions").dump(),
                                ndr_report.max_residual);
    return {Homotopy{}, r};
  }
  if (phi_t.steps() != ndr.phi.steps())
    throw Error("HEP: homotopy and NDR data use different time grids");

  std::vector<int> rest;
  for (int blk = 0; blk < ndr.b.block_count(); ++blk)
    if (std::find(ndr.ideal_blocks.begin(), ndr.ideal_blocks.end(), blk) == ndr.ideal_blocks.end()) rest.push_back(blk);
  const fd::Morphism e = block_projection(ndr.b, ndr.ideal_blocks);
  const fd::Morphism not_e = block_projection(ndr.b, rest);

  Homotopy out;
  double extension = 0.0;
  for (int t = 0; t <= phi_t.steps(); ++t) {
    const fd::Morphism moved = fd::compose(not_e, fd::compose(ndr.phi.slices[t], f));
    out.slices.push_back(add_maps(moved, phi_t.slices[t]).with_provenance("h~@" + std::to_string(t)));
    extension = std::max(extension, map_distance(fd::compose(e, out.slices.back()), phi_t.slices[t]));
  }
  const double start = map_distance(out.start(), f);
  double slices = 0.0;
  for (const auto& s : out.slices) slices = std::max(slices, kernels::star_hom_residual_parallel(s).max_residual);

  Json w;
  w["start_residual"] = start;
  w["restriction_residual"] = extension;
  w["slice_residual"] = slices;
  w["steps"] = phi_t.steps();
  return {out, residual_report(id, "hep", std::max({start, extension, slices}), tol, 0, std::move(w))};
}

}  // namespace nccw::check
