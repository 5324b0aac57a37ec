#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corpus_pairs.hpp"
#include "nccw/discretize.hpp"

using namespace nccw;
using namespace nccw::expr;

namespace {

const double kPi = std::acos(-1.0);

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

AlgebraExpr circle() {
  const auto c = finite_dim({1});
  const auto cube = interval_tensor(1, c);
  return pullback_expr(boundary_restrict(cube), compose(boundary_restrict(cube), constant_embed(c, 1)));
}

}  // namespace

TEST_CASE("circle algebra has dimension N") {
  for (int n : {2, 4, 8}) CHECK(disc::discretize_algebra(circle(), {n}).dim() == n);
}

TEST_CASE("circle constraint: g(0) = g(1) = a") {
  const fd::Algebra x = disc::discretize_algebra(circle(), {4});
  // Ambient layout: five grid values, then a.
  REQUIRE(x.ambient_dim() == 6);
  Vector constant = Vector::Ones(6);
  CHECK(x.constraint_residual(constant) < 1e-14);
  Vector interior = Vector::Zero(6);
  interior[2] = 1.0;
  CHECK(x.constraint_residual(interior) < 1e-14);
  Vector end_only = Vector::Zero(6);
  end_only[0] = 1.0;
  CHECK(x.constraint_residual(end_only) > 0.5);
}

TEST_CASE("grid point counts") {
  using disc::grid_points;
  for (int n : {2, 3, 5}) {
    CHECK(grid_points(AlgebraKind::IntervalTensor, 2, n).size() == static_cast<std::size_t>((n + 1) * (n + 1)));
    CHECK(grid_points(AlgebraKind::OpenCubeTensor, 2, n).size() == static_cast<std::size_t>((n - 1) * (n - 1)));
    CHECK(grid_points(AlgebraKind::SphereTensor, 1, n).size() == static_cast<std::size_t>(4 * n));
    CHECK(grid_points(AlgebraKind::SphereTensor, 0, n).size() == 2u);
    CHECK(grid_points(AlgebraKind::HalfOpenTensor, 1, n).size() == static_cast<std::size_t>(n));
  }
  const auto pts = grid_points(AlgebraKind::IntervalTensor, 2, 2);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("functoriality on corpus pairs is entrywise exact") {
  const auto pairs = nccw::testing::corpus_pairs();
  REQUIRE(pairs.size() >= 20);
  for (const auto& [f, g] : pairs) {
    for (int n : {2, 4}) {
      CAPTURE(f.to_string());
      CAPTURE(g.to_string());
      const fd::Morphism df = disc::discretize_morphism(f, {n});
      const fd::Morphism dg = disc::discretize_morphism(g, {n});
      const fd::Morphism dfg = disc::discretize_morphism(compose(f, g), {n});
      CHECK(max_abs(dfg.dense() - df.dense() * dg.dense()) == 0.0);
    }
  }
}

TEST_CASE("restriction 2N -> N commutes with constructors") {
  for (const auto& [f, g] : nccw::testing::corpus_pairs()) {
    for (const auto& m : {f, g}) {
      CAPTURE(m.to_string());
      const int n = 2;
      const fd::Morphism rx = disc::restrict_resolution(m.domain(), n);
      const fd::Morphism ry = disc::restrict_resolution(m.codomain(), n);
      const Matrix lhs = ry.dense() * disc::discretize_morphism(m, {2 * n}).dense();
      const Matrix rhs = disc::discretize_morphism(m, {n}).dense() * rx.dense();
      CHECK(max_abs(lhs - rhs) < 1e-12);
      const fd::Algebra coarse = disc::discretize_algebra(m.domain(), {n});
      CHECK(linalg::rank(coarse.basis().adjoint() * rx.on_basis()) == coarse.dim());
    }
  }
}

TEST_CASE("windings follow exp(2 pi i m t K) around the circle") {
  const auto m2 = finite_dim({2});
  const auto s1 = sphere_tensor(1, m2);
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = -1.0;
  const auto twist = block_map(s1, s1, {{1}}, false, {Winding{0, k, 1}});
  const int n = 4;
  const fd::Morphism d = disc::discretize_morphism(twist, {n});
  const auto pts = disc::grid_points(AlgebraKind::SphereTensor, 1, n);
  REQUIRE(d.routed());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double t = disc::winding_parameter(AlgebraKind::SphereTensor, 1, pts[p], n);
    const auto& u = d.routes()[p].unitary;
    REQUIRE(u.has_value());
    const Complex e = std::exp(Complex(0.0, 2.0 * kPi * t));
    CHECK(std::abs((*u)(0, 0) - e) < 1e-12);
    CHECK(std::abs((*u)(1, 1) - std::conj(e)) < 1e-12);
  }
}

TEST_CASE("off-grid evaluation names the admissible points") {
  const auto cube = interval_tensor(1, finite_dim({1}));
  try {
    disc::discretize_morphism(evaluation(cube, {1, 3}), {4});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1/4") != std::string::npos);
  }
}

TEST_CASE("discretized fiber products are closed") {
  for (const auto& a : {circle(), mapping_construction(Mapping::Cylinder, identity(finite_dim({2}))),
                        mapping_construction(Mapping::MappingCone, block_map(finite_dim({1}), finite_dim({2}), {{2}}))})
    CHECK(disc::closure_residual(disc::discretize_algebra(a, {3})) < 1e-12);
}
