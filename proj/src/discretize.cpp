#include "nccw/discretize.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nccw::disc {

using expr::AlgebraExpr;
using expr::AlgebraKind;
using expr::MorphismExpr;
using expr::MorphismKind;

namespace {

void cube_points(int dims, int lo, int hi, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dims) {
    out.push_back(cur);
    return;
  }
  for (int v = lo; v <= hi; ++v) {
    cur.push_back(v);
    cube_points(dims, lo, hi, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> cube(int dims, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (hi >= lo) cube_points(dims, lo, hi, cur, out);
  return out;
}

std::string point_label(const std::vector<int>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

int find_point(const std::vector<std::vector<int>>& pts, const std::vector<int>& p) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == p) return static_cast<int>(i);
  return -1;
}

bool is_grid(AlgebraKind k) {
  return k == AlgebraKind::IntervalTensor || k == AlgebraKind::OpenCubeTensor || k == AlgebraKind::SphereTensor ||
         k == AlgebraKind::HalfOpenTensor;
}

/// Block-diagonal repetition of a base constraint over `copies` grid points.
Matrix repeat_basis(const Matrix& base, int copies) {
  Matrix out = Matrix::Zero(base.rows() * copies, base.cols() * copies);
  for (int c = 0; c < copies; ++c) out.block(c * base.rows(), c * base.cols(), base.rows(), base.cols()) = base;
  return out;
}

Matrix winding_unitary(const expr::Winding& w, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(w.generator);
  const double phase = 2.0 * std::numbers::pi * w.turns * t;
  Eigen::VectorXcd d(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::exp(Complex(0.0, phase * es.eigenvalues()[i]));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Direct sum of two ambient algebras with an optional joint constraint.
fd::Algebra sum_ambient(const fd::Algebra& p, const fd::Algebra& q, std::optional<Matrix> constraint) {
  std::vector<fd::Block> blocks;
  for (const auto& b : p.blocks()) blocks.push_back({b.size, "1:" + b.label});
  for (const auto& b : q.blocks()) blocks.push_back({b.size, "2:" + b.label});
  return fd::Algebra(std::move(blocks), std::move(constraint));
}

std::vector<fd::Route> projection_routes(int offset, int count) {
  std::vector<fd::Route> routes;
  for (int b = 0; b < count; ++b) routes.push_back({{{offset + b, 0}}, std::nullopt});
  return routes;
}

}  // namespace

std::vector<std::vector<int>> grid_points(AlgebraKind kind, int cube_dim, int n) {
  switch (kind) {
    case AlgebraKind::IntervalTensor:
      return cube(cube_dim, 0, n);
    case AlgebraKind::OpenCubeTensor:
      return cube(cube_dim, 1, n - 1);
    case AlgebraKind::HalfOpenTensor:
      return cube(1, 1, n);
    case AlgebraKind::SphereTensor: {
      if (cube_dim == 0) return {{0}, {n}};
      std::vector<std::vector<int>> out;
      for (auto& p : cube(cube_dim + 1, 0, n)) {
        bool on_boundary = false;
        for (int v : p) on_boundary |= (v == 0 || v == n);
        if (on_boundary) out.push_back(std::move(p));
      }
      return out;
    }
    default:
      throw Error("grid_points: not a function-algebra node");
  }
}

double winding_parameter(AlgebraKind kind, int cube_dim, const std::vector<int>& p, int n) {
  if (kind == AlgebraKind::SphereTensor && cube_dim == 1) {
    const int x = p[0], y = p[1];
    double s;
    if (y == 0)
      s = x;
    else if (x == n)
      s = n + y;
    else if (y == n)
      s = 2.0 * n + (n - x);
    else
      s = 3.0 * n + (n - y);
    return s / (4.0 * n);
  }
  return static_cast<double>(p[0]) / n;
}

FiberProduct fiber_product(const fd::Morphism& alpha, const fd::Morphism& beta, double rank_rel) {
  const fd::Algebra& p = alpha.domain();
  const fd::Algebra& q = beta.domain();
  if (alpha.codomain().ambient_dim() != beta.codomain().ambient_dim())
    throw Error("fiber product legs have different codomains");
  const Matrix bp = p.basis();
  const Matrix bq = q.basis();
  Matrix system(alpha.codomain().ambient_dim(), bp.cols() + bq.cols());
  if (bp.cols()) system.leftCols(bp.cols()) = alpha.on_basis();
  if (bq.cols()) system.rightCols(bq.cols()) = -beta.on_basis();
  Matrix kernel = linalg::null_space(system, rank_rel);
  Matrix lift = Matrix::Zero(p.ambient_dim() + q.ambient_dim(), bp.cols() + bq.cols());
  if (bp.cols()) lift.topLeftCorner(p.ambient_dim(), bp.cols()) = bp;
  if (bq.cols()) lift.bottomRightCorner(q.ambient_dim(), bq.cols()) = bq;
  Matrix basis = kernel.cols() ? Matrix(lift * kernel) : Matrix(lift.rows(), 0);

  fd::Algebra x = sum_ambient(p, q, std::move(basis));
  fd::Morphism pr1(x, p, projection_routes(0, p.block_count()), "pr1");
  fd::Morphism pr2(x, q, projection_routes(p.block_count(), q.block_count()), "pr2");
  return {x, pr1, pr2};
}

double closure_residual(const fd::Algebra& a) {
  if (!a.constrained()) return 0.0;
  const Matrix b = a.basis();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    worst = std::max(worst, a.constraint_residual(a.adjoint(b.col(i))));
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      worst = std::max(worst, a.constraint_residual(a.product(b.col(i), b.col(j))));
  }
  return worst;
}

// --- Discretizer ------------------------------------------------------------

Discretizer::Discretizer(int n, double rank_rel) : n_(n), rel_(rank_rel) {
  if (n < 1) throw Error("resolution must be >= 1, got " + std::to_string(n));
}

const fd::Algebra& Discretizer::algebra(const AlgebraExpr& a) {
  auto key = &a.node();
  auto it = algebras_.find(key);
  if (it != algebras_.end()) return it->second.second;
  fd::Algebra built = build(a);
  return algebras_.emplace(key, std::make_pair(a, std::move(built))).first->second.second;
}

fd::Algebra Discretizer::tensor(const AlgebraExpr& a) {
  const fd::Algebra base = algebra(a.base());
  const auto pts = grid_points(a.kind(), a.cube_dim(), n_);
  if (pts.empty())
    warnings_.push_back(a.to_string() + " has no grid points at N=" + std::to_string(n_) + "; treated as 0");
  std::vector<fd::Block> blocks;
  for (const auto& p : pts)
    for (const auto& b : base.blocks()) blocks.push_back({b.size, "t" + point_label(p) + "|" + b.label});
  std::optional<Matrix> constraint;
  if (base.constrained()) constraint = repeat_basis(base.basis(), static_cast<int>(pts.size()));
  return fd::Algebra(std::move(blocks), std::move(constraint));
}

fd::Algebra Discretizer::build(const AlgebraExpr& a) {
  switch (a.kind()) {
    case AlgebraKind::Zero:
      return fd::Algebra();
    case AlgebraKind::FiniteDim: {
      std::vector<fd::Block> blocks;
      for (std::size_t i = 0; i < a.blocks().size(); ++i)
        blocks.push_back({a.blocks()[i], "M" + std::to_string(a.blocks()[i]) + "#" + std::to_string(i)});
      return fd::Algebra(std::move(blocks));
    }
    case AlgebraKind::IntervalTensor:
    case AlgebraKind::OpenCubeTensor:
    case AlgebraKind::SphereTensor:
    case AlgebraKind::HalfOpenTensor:
      return tensor(a);
    case AlgebraKind::DirectSum: {
      const fd::Algebra p = algebra(a.base());
      const fd::Algebra q = algebra(a.right());
      std::optional<Matrix> constraint;
      if (p.constrained() || q.constrained()) {
        Matrix bp = p.basis(), bq = q.basis();
        Matrix c = Matrix::Zero(p.ambient_dim() + q.ambient_dim(), bp.cols() + bq.cols());
        c.topLeftCorner(bp.rows(), bp.cols()) = bp;
        c.bottomRightCorner(bq.rows(), bq.cols()) = bq;
        constraint = std::move(c);
      }
      return sum_ambient(p, q, std::move(constraint));
    }
    case AlgebraKind::Pullback:
    case AlgebraKind::Cylinder:
    case AlgebraKind::MappingCone: {
      auto [alpha, beta] = expr::pullback_legs(a);
      return fiber_product(morphism(alpha), morphism(beta), rel_).algebra;
    }
  }
  throw Error("discretize: unsupported node");
}

fd::Morphism Discretizer::morphism(const MorphismExpr& m) { return build(m); }

fd::Morphism Discretizer::build(const MorphismExpr& m) {
  const auto& node = m.node();
  const fd::Algebra dom = algebra(m.domain());
  const fd::Algebra cod = algebra(m.codomain());
  const std::string prov = m.to_string();

  switch (m.kind()) {
    case MorphismKind::Identity:
      return fd::identity(dom).with_provenance(prov);

    case MorphismKind::Zero:
      return fd::zero_map(dom, cod).with_provenance(prov);

    case MorphismKind::Compose:
      return fd::compose(build(node.children[0]), build(node.children[1]))
          .with_provenance(prov)
          .with_domain(dom)
          .with_codomain(cod);

    case MorphismKind::UserNamed:
      return build(node.children[0]).with_provenance(node.name);

    case MorphismKind::Evaluation: {
      const auto& x = m.domain();
      auto idx = node.point.index_on(n_);
      int pos = -1;
      if (idx) pos = x.kind() == AlgebraKind::HalfOpenTensor ? *idx - 1 : *idx;
      if (!idx || pos < 0) {
        std::string admissible;
        const int first = x.kind() == AlgebraKind::HalfOpenTensor ? 1 : 0;
        for (int k = first; k <= n_; ++k) admissible += (k > first ? ", " : "") + std::to_string(k) + "/" + std::to_string(n_);
        throw Error("evaluation point " + std::to_string(node.point.num) + "/" + std::to_string(node.point.den) +
                    " is off the N=" + std::to_string(n_) + " grid; admissible points: " + admissible);
      }
      const int nb = cod.block_count();
      std::vector<fd::Route> routes;
      for (int b = 0; b < nb; ++b) routes.push_back({{{pos * nb + b, 0}}, std::nullopt});
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::BoundaryRestrict: {
      const auto& x = m.domain();
      const auto cube_pts = grid_points(AlgebraKind::IntervalTensor, x.cube_dim(), n_);
      std::vector<std::vector<int>> sphere_pts;
      if (x.cube_dim() == 1)
        sphere_pts = {{0}, {n_}};
      else
        sphere_pts = grid_points(AlgebraKind::SphereTensor, x.cube_dim() - 1, n_);
      const int nb = algebra(x.base()).block_count();
      std::vector<fd::Route> routes;
      for (const auto& p : sphere_pts) {
        const int at = find_point(cube_pts, p);
        for (int b = 0; b < nb; ++b) routes.push_back({{{at * nb + b, 0}}, std::nullopt});
      }
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::ProjectionFirst: {
      return fd::Morphism(dom, cod, projection_routes(0, cod.block_count()), prov);
    }

    case MorphismKind::ProjectionSecond: {
      const int offset = dom.block_count() - cod.block_count();
      return fd::Morphism(dom, cod, projection_routes(offset, cod.block_count()), prov);
    }

    case MorphismKind::ConstantEmbed: {
      const int nb = dom.block_count();
      const int points = nb ? cod.block_count() / nb : 0;
      std::vector<fd::Route> routes;
      for (int p = 0; p < points; ++p)
        for (int b = 0; b < nb; ++b) routes.push_back({{{b, 0}}, std::nullopt});
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::Suspended: {
      const fd::Morphism inner = build(node.children[0]);
      const int points = n_ - 1;
      const int nd = inner.domain().block_count();
      const int nc = inner.codomain().block_count();
      std::vector<fd::Route> routes;
      for (int p = 0; p < points; ++p)
        for (int b = 0; b < nc; ++b) {
          fd::Route r = inner.routed() ? inner.routes()[b] : throw Error("suspension needs a structural morphism");
          for (auto& pl : r.placements) pl.source += p * nd;
          routes.push_back(std::move(r));
        }
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::BlockMap: {
      const bool pointwise = is_grid(m.domain().kind());
      const auto src = expr::finite_blocks(pointwise ? m.domain().base() : m.domain());
      const auto tgt = expr::finite_blocks(pointwise ? m.codomain().base() : m.codomain());
      Eigen::MatrixXi mult(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
      for (std::size_t j = 0; j < tgt.size(); ++j)
        for (std::size_t i = 0; i < src.size(); ++i) mult(j, i) = node.multiplicity[j][i];
      fd::MultiplicityMorphism mm(src, tgt, mult, node.unital);
      const auto base_routes = mm.routes();
      std::vector<std::vector<int>> pts = {{}};
      if (pointwise) pts = grid_points(m.domain().kind(), m.domain().cube_dim(), n_);
      std::vector<fd::Route> routes;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t j = 0; j < tgt.size(); ++j) {
          fd::Route r = base_routes[j];
          for (auto& pl : r.placements) pl.source += static_cast<int>(p * src.size());
          for (const auto& w : node.windings) {
            if (w.target_block != static_cast<int>(j)) continue;
            const double t =
                pointwise ? winding_parameter(m.domain().kind(), m.domain().cube_dim(), pts[p], n_) : 0.0;
            Matrix u = winding_unitary(w, t);
            r.unitary = r.unitary ? Matrix(u * *r.unitary) : u;
          }
          routes.push_back(std::move(r));
        }
      }
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::Pairing: {
      const fd::Morphism first = build(node.children[0]);
      const fd::Morphism second = build(node.children[1]);
      if (!first.routed() || !second.routed()) throw Error("pairing needs structural components");
      std::vector<fd::Route> routes = first.routes();
      for (const auto& r : second.routes()) routes.push_back(r);
      fd::Morphism out(dom, cod, std::move(routes), prov);
      if (cod.constrained()) {
        const Matrix images = out.on_basis();
        double worst = 0.0;
        for (Eigen::Index c = 0; c < images.cols(); ++c)
          worst = std::max(worst, cod.constraint_residual(images.col(c)));
        if (worst > 1e-9)
          throw Error("pairing " + prov + " does not land in the fiber product (residual " + std::to_string(worst) + ")");
      }
      return out;
    }

    case MorphismKind::ExtendByZero: {
      const auto& s = m.domain();
      const auto& d = m.codomain();
      const auto src_pts = grid_points(s.kind(), s.cube_dim(), n_);
      const auto dst_pts = grid_points(d.kind(), d.cube_dim(), n_);
      const int nb = algebra(s.base()).block_count();
      std::vector<fd::Route> routes;
      for (const auto& p : dst_pts) {
        const int at = find_point(src_pts, p);
        for (int b = 0; b < nb; ++b) {
          fd::Route r;
          if (at >= 0) r.placements.push_back({at * nb + b, 0});
          routes.push_back(std::move(r));
        }
      }
      return fd::Morphism(dom, cod, std::move(routes), prov);
    }

    case MorphismKind::LoopRotation: {
      auto idx = node.point.index_on(n_);
      if (!idx) throw Error("rotation amount is off the N=" + std::to_string(n_) + " grid");
      const int r = *idx % n_;
      if (r == 0) return fd::identity(dom).with_provenance(prov);
      const auto& x = m.domain();
      const fd::Morphism sigma = build(x.second_map());
      const int nf = algebra(x.first_map().domain().base()).block_count();
      const int cell_blocks = (n_ + 1) * nf;
      // Attaching data must be the same block relabeling at both ends.
      const auto& sroutes = sigma.routes();
      std::vector<int> lower_source(nf, -1);
      for (int c = 0; c < nf; ++c) {
        const auto& r0 = sroutes[c];
        const auto& r1 = sroutes[nf + c];
        if (r0.unitary || r1.unitary || r0.placements.size() != 1 || !(r0.placements == r1.placements))
          throw Error("rotation needs the same block relabeling at both ends of the cell");
        lower_source[c] = r0.placements[0].source;
      }
      std::vector<fd::Route> routes(dom.block_count());
      for (int t = 0; t <= n_; ++t) {
        const int from = t == n_ ? r : (t + r) % n_;
        for (int c = 0; c < nf; ++c) routes[t * nf + c] = {{{from * nf + c, 0}}, std::nullopt};
      }
      for (int c = 0; c < nf; ++c) routes[cell_blocks + lower_source[c]] = {{{r * nf + c, 0}}, std::nullopt};
      for (int b = cell_blocks; b < dom.block_count(); ++b)
        if (routes[b].placements.empty() && !routes[b].unitary)
          throw Error("rotation needs every lower block to be hit by the attaching map");
      fd::Morphism out(dom, cod, std::move(routes), prov);
      const Matrix images = out.on_basis();
      for (Eigen::Index c = 0; c < images.cols(); ++c)
        if (cod.constraint_residual(images.col(c)) > 1e-9) throw Error("rotation does not preserve " + x.to_string());
      return out;
    }
  }
  throw Error("discretize: unsupported morphism");
}

fd::Algebra discretize_algebra(const AlgebraExpr& a, Resolution r) {
  Discretizer d(r.n);
  return d.algebra(a);
}

fd::Morphism discretize_morphism(const MorphismExpr& m, Resolution r) {
  Discretizer d(r.n);
  return d.morphism(m);
}

// --- refinement -------------------------------------------------------------

namespace {

// For each ambient block of disc_N(a), the ambient block of disc_2N(a) at
// the same place.
std::vector<int> coarse_to_fine(const AlgebraExpr& a, int n, Discretizer& coarse, Discretizer& fine) {
  switch (a.kind()) {
    case AlgebraKind::Zero:
      return {};
    case AlgebraKind::FiniteDim: {
      std::vector<int> out(a.blocks().size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
      return out;
    }
    case AlgebraKind::IntervalTensor:
    case AlgebraKind::OpenCubeTensor:
    case AlgebraKind::SphereTensor:
    case AlgebraKind::HalfOpenTensor: {
      const auto base_map = coarse_to_fine(a.base(), n, coarse, fine);
      const int nb_fine = fine.algebra(a.base()).block_count();
      const auto cpts = grid_points(a.kind(), a.cube_dim(), n);
      const auto fpts = grid_points(a.kind(), a.cube_dim(), 2 * n);
      std::vector<int> out;
      for (const auto& p : cpts) {
        std::vector<int> q = p;
        for (int& v : q) v *= 2;
        const int at = find_point(fpts, q);
        if (at < 0) throw Error("refinement: coarse grid point missing from fine grid");
        for (int b : base_map) out.push_back(at * nb_fine + b);
      }
      return out;
    }
    case AlgebraKind::DirectSum:
    case AlgebraKind::Pullback:
    case AlgebraKind::Cylinder:
    case AlgebraKind::MappingCone: {
      auto [p, q] = expr::factors(a);
      auto out = coarse_to_fine(p, n, coarse, fine);
      const int shift = fine.algebra(p).block_count();
      for (int b : coarse_to_fine(q, n, coarse, fine)) out.push_back(shift + b);
      return out;
    }
  }
  throw Error("refinement: unsupported node");
}

}  // namespace

fd::Morphism restrict_resolution(const AlgebraExpr& a, int coarse_n) {
  if (coarse_n < 1) throw Error("refinement needs N >= 1");
  Discretizer coarse(coarse_n);
  Discretizer fine(2 * coarse_n);
  const auto map = coarse_to_fine(a, coarse_n, coarse, fine);
  std::vector<fd::Route> routes;
  for (int b : map) routes.push_back({{{b, 0}}, std::nullopt});
  return fd::Morphism(fine.algebra(a), coarse.algebra(a), std::move(routes),
                      "restrict " + std::to_string(2 * coarse_n) + "->" + std::to_string(coarse_n));
}

}  // namespace nccw::disc
