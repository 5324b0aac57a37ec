#include "nccw/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nccw::kernels {

namespace {

// Operator norm of the block-diagonal difference; blocks whose Frobenius
// norm is already negligible skip the SVD.
double block_norm(const fd::Algebra& a, const Vector& x) {
  double best = 0.0;
  for (int b = 0; b < a.block_count(); ++b) {
    Matrix m = a.block_of(x, b);
    double fro = m.norm();
    if (fro < 1e-15 || fro <= best) continue;
    best = std::max(best, linalg::operator_norm(m));
  }
  return best;
}

struct Prepared {
  std::vector<Vector> basis;
  std::vector<Vector> images;
};

Prepared prepare(const fd::Morphism& f) {
  Prepared p;
  Matrix b = f.domain().basis();
  p.basis.reserve(b.cols());
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    p.basis.push_back(b.col(i));
    p.images.push_back(f.apply(p.basis.back()));
  }
  return p;
}

double pair_residual(const fd::Morphism& f, const Prepared& p, int i, int j) {
  const auto& dom = f.domain();
  const auto& cod = f.codomain();
  Vector lhs = f.apply(dom.product(p.basis[i], p.basis[j]));
  Vector rhs = cod.product(p.images[i], p.images[j]);
  return block_norm(cod, lhs - rhs);
}

double adjoint_residual(const fd::Morphism& f, const Prepared& p, int i) {
  Vector lhs = f.apply(f.domain().adjoint(p.basis[i]));
  Vector rhs = f.codomain().adjoint(p.images[i]);
  return block_norm(f.codomain(), lhs - rhs);
}

// Ties keep the lexicographically smallest witness so serial and parallel
// runs agree.
void merge(StarHomResidual& into, const StarHomResidual& other) {
  if (other.max_residual > into.max_residual) {
    into = other;
  } else if (other.max_residual == into.max_residual && other.worst_i >= 0 &&
             (into.worst_i < 0 || other.worst_i < into.worst_i ||
              (other.worst_i == into.worst_i && other.worst_j < into.worst_j))) {
    into = other;
  }
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

StarHomResidual star_hom_residual_serial(const fd::Morphism& f) {
  Prepared p = prepare(f);
  const int d = static_cast<int>(p.basis.size());
  StarHomResidual out;
  for (int i = 0; i < d; ++i) {
    merge(out, {adjoint_residual(f, p, i), i, -1});
    for (int j = 0; j < d; ++j) merge(out, {pair_residual(f, p, i, j), i, j});
  }
  return out;
}

StarHomResidual star_hom_residual_parallel(const fd::Morphism& f) {
  Prepared p = prepare(f);
  const int d = static_cast<int>(p.basis.size());
  std::vector<StarHomResidual> rows(d);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < d; ++i) {
    StarHomResidual local{adjoint_residual(f, p, i), i, -1};
    for (int j = 0; j < d; ++j) merge(local, {pair_residual(f, p, i, j), i, j});
    rows[i] = local;
  }
  StarHomResidual out;
  for (const auto& r : rows) merge(out, r);
  return out;
}

Matrix apply_columns_serial(const fd::Morphism& f, const Matrix& xs) {
  Matrix out(f.codomain().ambient_dim(), xs.cols());
  for (Eigen::Index c = 0; c < xs.cols(); ++c) out.col(c) = f.apply(xs.col(c));
  return out;
}

Matrix apply_columns_parallel(const fd::Morphism& f, const Matrix& xs) {
  Matrix out(f.codomain().ambient_dim(), xs.cols());
  const auto n = static_cast<long>(xs.cols());
#pragma omp parallel for
  for (long c = 0; c < n; ++c) out.col(c) = f.apply(xs.col(c));
  return out;
}

}  // namespace nccw::kernels
