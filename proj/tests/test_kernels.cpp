#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/discretize.hpp"
#include "nccw/kernels.hpp"
#include "nccw/random.hpp"

using namespace nccw;

namespace {

// Transpose on M2, a linear *-anti-homomorphism.
fd::Morphism transpose_m2() {
  const fd::Algebra m2(std::vector<int>{2});
  Matrix t = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t(j * 2 + i, i * 2 + j) = 1.0;
  return fd::Morphism(m2, m2, t, "transpose");
}

fd::Morphism cylinder_leg(int n) {
  const auto m2 = expr::finite_dim({2});
  const auto cyl = expr::mapping_construction(expr::Mapping::Cylinder, expr::identity(m2));
  return disc::discretize_morphism(expr::projection_second(cyl), {n});
}

}  // namespace

TEST_CASE("structural maps have zero residual") {
  fd::MultiplicityMorphism m({1, 2}, {3, 2}, (Eigen::MatrixXi(2, 2) << 1, 1, 0, 1).finished());
  const auto r = kernels::star_hom_residual_serial(m.concrete());
  CHECK(r.max_residual < 1e-14);
}

TEST_CASE("transpose is detected with a product witness") {
  const auto r = kernels::star_hom_residual_serial(transpose_m2());
  // e12 e21 = e11 maps to e11, while e21 e12 = e22: distance 1.
  CHECK(r.max_residual == doctest::Approx(1.0));
  CHECK(r.worst_i >= 0);
  CHECK(r.worst_j >= 0);
}

TEST_CASE("serial and parallel kernels agree exactly") {
  for (int n : {2, 4}) {
    const fd::Morphism f = cylinder_leg(n);
    CHECK(kernels::star_hom_residual_serial(f) == kernels::star_hom_residual_parallel(f));
  }
  CHECK(kernels::star_hom_residual_serial(transpose_m2()) == kernels::star_hom_residual_parallel(transpose_m2()));
}

TEST_CASE("apply_columns matches the dense product") {
  const fd::Morphism f = cylinder_leg(4);
  Rng rng(3);
  const Matrix xs = f.domain().basis() * rng.gaussian(f.domain().dim(), 5);
  const Matrix expected = f.dense() * xs;
  CHECK((kernels::apply_columns_serial(f, xs) - expected).norm() < 1e-12);
  CHECK((kernels::apply_columns_parallel(f, xs) - expected).norm() < 1e-12);
}

TEST_CASE("thread count is positive") { CHECK(kernels::thread_count() >= 1); }
