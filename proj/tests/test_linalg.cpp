#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/linalg.hpp"
#include "nccw/random.hpp"

using namespace nccw;

namespace {

Matrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace

TEST_CASE("rank of hand-built matrices") {
  CHECK(linalg::rank(real_matrix({{1, 2}, {2, 4}})) == 1);
  CHECK(linalg::rank(real_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
  CHECK(linalg::rank(Matrix::Zero(3, 4)) == 0);
  CHECK(linalg::rank(Matrix(0, 0)) == 0);
}

TEST_CASE("rank threshold is relative to the largest singular value") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1e6;
  m(1, 1) = 1e-3;
  CHECK(linalg::rank(m) == 1);
  m(1, 1) = 1.0;
  CHECK(linalg::rank(m) == 2);
}

TEST_CASE("null space is orthonormal and annihilated") {
  Rng rng(7);
  const Matrix a = rng.gaussian(3, 5);
  const Matrix k = linalg::null_space(a);
  CHECK(k.cols() == 2);
  CHECK((a * k).norm() < 1e-12);
  CHECK((k.adjoint() * k - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("column space spans the image") {
  const Matrix a = real_matrix({{1, 1}, {1, 1}, {0, 0}});
  const Matrix c = linalg::column_space(a);
  REQUIRE(c.cols() == 1);
  CHECK(std::abs(std::abs(c(0, 0)) - std::sqrt(0.5)) < 1e-12);
  CHECK(linalg::span_contains(c, a));
  CHECK_FALSE(linalg::span_contains(c, real_matrix({{0}, {0}, {1}})));
}

TEST_CASE("operator norm of a diagonal matrix") {
  CHECK(linalg::operator_norm(real_matrix({{3, 0}, {0, -1}})) == doctest::Approx(3.0));
}

TEST_CASE("least squares recovers a consistent solution") {
  Rng rng(11);
  const Matrix a = rng.gaussian(6, 3);
  const Matrix x = rng.gaussian(3, 2);
  double residual = -1.0;
  const Matrix sol = linalg::least_squares(a, a * x, residual);
  CHECK((sol - x).norm() < 1e-10);
  CHECK(residual < 1e-10);
}

TEST_CASE("least squares reports the residual of an inconsistent system") {
  const Matrix a = real_matrix({{1}, {1}});
  const Matrix b = real_matrix({{0}, {2}});
  double residual = 0.0;
  const Matrix sol = linalg::least_squares(a, b, residual);
  CHECK(sol(0, 0).real() == doctest::Approx(1.0));
  CHECK(residual == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("hcat tolerates empty operands") {
  const Matrix a = real_matrix({{1}, {2}});
  CHECK(linalg::hcat(Matrix(), a) == a);
  CHECK(linalg::hcat(a, Matrix()) == a);
  CHECK(linalg::hcat(a, a).cols() == 2);
}

TEST_CASE("rng streams are reproducible and derived seeds differ per id") {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(derive_seed(1, "x") == derive_seed(1, "x"));
  CHECK(derive_seed(1, "x") != derive_seed(1, "y"));
  CHECK(derive_seed(1, "x") != derive_seed(2, "x"));
  Rng r(3);
  const Matrix u = r.unitary(4);
  CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() < 1e-12);
}
