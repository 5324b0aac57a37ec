#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/fdalg.hpp"
#include "nccw/random.hpp"

using namespace nccw;

namespace {

Vector unit_vector(int dim, int i) {
  Vector v = Vector::Zero(dim);
  v[i] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("block algebra bookkeeping") {
  const fd::Algebra a(std::vector<int>{2, 3});
  CHECK(a.block_count() == 2);
  CHECK(a.ambient_dim() == 13);
  CHECK(a.dim() == 13);
  CHECK(a.block_offset(1) == 4);
  CHECK(a.sizes() == std::vector<int>{2, 3});
  CHECK(a.basis().cols() == 13);
}

TEST_CASE("products agree with blockwise matrix products") {
  const fd::Algebra a(std::vector<int>{2, 3});
  Rng rng(1);
  const Vector x = rng.gaussian(13, 1).col(0);
  const Vector y = rng.gaussian(13, 1).col(0);
  const fd::Element ex = fd::to_element(a, x);
  const fd::Element ey = fd::to_element(a, y);
  const fd::Element prod = fd::to_element(a, a.product(x, y));
  for (int b = 0; b < 2; ++b) CHECK((prod.blocks[b] - ex.blocks[b] * ey.blocks[b]).norm() < 1e-12);
  const fd::Element adj = fd::to_element(a, a.adjoint(x));
  for (int b = 0; b < 2; ++b) CHECK((adj.blocks[b] - ex.blocks[b].adjoint()).norm() < 1e-12);
  CHECK(fd::to_vector(a, ex) == x);
}

TEST_CASE("norm is the largest block operator norm") {
  const fd::Algebra a(std::vector<int>{1, 2});
  Vector x = Vector::Zero(5);
  x[0] = 0.5;
  x[1] = 3.0;  // e11 of the M2 block
  CHECK(a.norm(x) == doctest::Approx(3.0));
}

TEST_CASE("multiplicity morphism places copies on the diagonal") {
  // C + M2 -> M4 with multiplicities (2, 1): lambda + m -> diag(lambda, lambda, m).
  fd::MultiplicityMorphism m({1, 2}, {4}, (Eigen::MatrixXi(1, 2) << 2, 1).finished(), true);
  fd::Element in;
  Matrix lambda(1, 1);
  lambda(0, 0) = 5.0;
  Matrix mm(2, 2);
  mm << 1.0, 2.0, 3.0, 4.0;
  in.blocks = {lambda, mm};
  const fd::Element out = fd::apply(m, in);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 5.0;
  expected(1, 1) = 5.0;
  expected.block(2, 2, 2, 2) = mm;
  CHECK((out.blocks[0] - expected).norm() < 1e-14);
  CHECK(m.total_multiplicity() == 3);
}

TEST_CASE("composed multiplicities multiply") {
  fd::MultiplicityMorphism f({1}, {2, 3}, (Eigen::MatrixXi(2, 1) << 2, 1).finished());
  fd::MultiplicityMorphism g({2, 3}, {7}, (Eigen::MatrixXi(1, 2) << 2, 1).finished());
  const auto gf = fd::compose(g, f);
  CHECK(gf.multiplicity(0, 0) == 5);
  const fd::Morphism dense = fd::compose(g.concrete(), f.concrete());
  CHECK((dense.dense() - gf.concrete().dense()).norm() < 1e-14);
}

TEST_CASE("multiplicity validation") {
  CHECK_THROWS_AS(fd::MultiplicityMorphism({2}, {3}, (Eigen::MatrixXi(1, 1) << 2).finished()), Error);
  CHECK_THROWS_AS(fd::MultiplicityMorphism({1}, {2}, (Eigen::MatrixXi(1, 1) << 1).finished(), true), Error);
  const fd::MultiplicityMorphism fits({1}, {3}, (Eigen::MatrixXi(1, 1) << 3).finished(), true);
  CHECK_NOTHROW(fits.validate());
}

TEST_CASE("generated subalgebras") {
  const fd::Algebra m2(std::vector<int>{2});
  // e12 generates all of M2 through e12 e21 and e21 e12.
  CHECK(fd::generated_subalgebra(m2, {unit_vector(4, 1)}).dim() == 4);
  // A single diagonal projection generates a line (no unit adjoined).
  CHECK(fd::generated_subalgebra(m2, {unit_vector(4, 0)}).dim() == 1);
  // diag(1, 2) generates the diagonal.
  Vector d = Vector::Zero(4);
  d[0] = 1.0;
  d[3] = 2.0;
  CHECK(fd::generated_subalgebra(m2, {d}).dim() == 2);
}

TEST_CASE("quotient by blocks") {
  const fd::Algebra b(std::vector<int>{2, 3});
  const auto q = fd::quotient_by_blocks(b, {0});
  CHECK(q.algebra.dim() == 9);
  CHECK(linalg::rank(q.map.dense()) == 9);
  CHECK(q.map.apply(unit_vector(13, 0)).norm() == 0.0);
}

TEST_CASE("random multiplicity is deterministic and valid") {
  const auto a = fd::random_multiplicity({1, 2}, 42);
  const auto b = fd::random_multiplicity({1, 2}, 42);
  CHECK(a.multiplicity == b.multiplicity);
  CHECK(a.target_sizes == b.target_sizes);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("constrained algebra residuals") {
  const fd::Algebra a(std::vector<int>{1, 1});
  Matrix diag = Matrix::Zero(2, 1);
  diag(0, 0) = diag(1, 0) = std::sqrt(0.5);
  const fd::Algebra c = a.with_constraint(diag);
  CHECK(c.dim() == 1);
  CHECK(c.constraint_residual(a.unit()) < 1e-14);
  CHECK(c.constraint_residual(unit_vector(2, 0)) == doctest::Approx(std::sqrt(0.5)));
}
