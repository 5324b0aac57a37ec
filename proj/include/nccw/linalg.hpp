#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nccw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Thresholds shared by every check. Rank decisions compare singular values
/// against `rank_rel * sigma_max`; residual checks compare norms against
/// `residual`.
struct Tolerances {
  double residual = 1e-9;
  double rank_rel = 1e-7;
};

namespace linalg {

/// Numerical rank from singular values with a relative threshold.
int rank(const Matrix& m, double rel = 1e-7);

/// Orthonormal basis (columns) of the null space of `m`.
Matrix null_space(const Matrix& m, double rel = 1e-7);

/// Orthonormal basis (columns) of the column space of `m`.
Matrix column_space(const Matrix& m, double rel = 1e-7);

/// Largest singular value (spectral norm).
double operator_norm(const Matrix& m);

/// Least-squares solve of `a * x = b`; returns x and writes the Frobenius
/// residual of `a * x - b` to `residual`.
Matrix least_squares(const Matrix& a, const Matrix& b, double& residual);

/// True if span(sub) is contained in span(basis) (both given as columns).
bool span_contains(const Matrix& basis, const Matrix& sub, double rel = 1e-7);

/// Horizontal concatenation helper that tolerates empty operands.
Matrix hcat(const Matrix& a, const Matrix& b);

}  // namespace linalg
}  // namespace nccw
