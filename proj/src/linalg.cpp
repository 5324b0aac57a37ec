#include "nccw/linalg.hpp"

#include <algorithm>

namespace nccw::linalg {

namespace {

// Singular values below this are treated as zero even when every singular
// value is tiny (all-zero matrices).
constexpr double kAbsoluteFloor = 1e-12;

int count_above(const Eigen::VectorXd& sv, double rel) {
  if (sv.size() == 0) return 0;
  double top = sv.maxCoeff();
  if (top < kAbsoluteFloor) return 0;
  double cut = std::max(rel * top, kAbsoluteFloor);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++r;
  return r;
}

}  // namespace

int rank(const Matrix& m, double rel) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  return count_above(svd.singularValues(), rel);
}

Matrix null_space(const Matrix& m, double rel) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  int r = count_above(svd.singularValues(), rel);
  // Singular values come sorted in decreasing order; the trailing right
  // singular vectors span the kernel.
  return svd.matrixV().rightCols(n - r);
}

Matrix column_space(const Matrix& m, double rel) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  int r = count_above(svd.singularValues(), rel);
  return svd.matrixU().leftCols(r);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

Matrix least_squares(const Matrix& a, const Matrix& b, double& residual) {
  if (a.cols() == 0) {
    residual = b.size() ? b.norm() : 0.0;
    return Matrix(0, b.cols());
  }
  Matrix x = a.completeOrthogonalDecomposition().solve(b);
  residual = (a * x - b).norm();
  return x;
}

bool span_contains(const Matrix& basis, const Matrix& sub, double rel) {
  if (sub.cols() == 0) return true;
  int r0 = rank(basis, rel);
  return rank(hcat(basis, sub), rel) == r0;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace nccw::linalg
