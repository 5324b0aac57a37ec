#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/approx.hpp"
#include "nccw/nccw.hpp"

using namespace nccw;
using namespace nccw::expr;

namespace {

MorphismExpr constant_boundary(const AlgebraExpr& cell, int k) {
  return compose(boundary_restrict(interval_tensor(k, cell)), constant_embed(cell, k));
}

cw::Complex circle_complex() {
  const auto c = finite_dim({1});
  return cw::attach_stage(cw::Complex("A0", c), "X1", c, 1, constant_boundary(c, 1));
}

cw::Complex two_cell_complex() {
  const auto m2 = finite_dim({2});
  const cw::Complex x1 = cw::attach_stage(cw::Complex("A0", m2), "X1", m2, 1, constant_boundary(m2, 1));
  const MorphismExpr s2 = compose(constant_boundary(m2, 2), *x1.top_stage().pi);
  return cw::attach_stage(x1, "X2", m2, 2, s2);
}

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

bool all_pass(const std::vector<CheckReport>& rs) {
  for (const auto& r : rs)
    if (!r.passed()) {
      MESSAGE(r.id << " " << status_name(r.status));
      return false;
    }
  return true;
}

}  // namespace

TEST_CASE("circle complex: dim A1 = N") {
  const cw::Complex x = circle_complex();
  REQUIRE(x.stages().size() == 2);
  for (int n : {2, 4, 8}) CHECK(disc::discretize_algebra(x.top(), {n}).dim() == n);
}

TEST_CASE("row dimensions follow dim A_k = (N-1)^k dim F_k + dim A_(k-1)") {
  const cw::Complex x = two_cell_complex();
  for (int n : {2, 4, 8}) {
    const long a0 = 4;
    const long a1 = ipow(n - 1, 1) * 4 + a0;
    const long a2 = ipow(n - 1, 2) * 4 + a1;
    CHECK(disc::discretize_algebra(x.stages()[1].algebra, {n}).dim() == a1);
    CHECK(disc::discretize_algebra(x.stages()[2].algebra, {n}).dim() == a2);
  }
}

TEST_CASE("validation of the corpus complexes passes") {
  CHECK(all_pass(cw::validate_complex(circle_complex(), {2, 4, 8})));
  CHECK(all_pass(cw::validate_complex(two_cell_complex(), {2, 4})));
}

TEST_CASE("attach_stage typing") {
  const auto c = finite_dim({1});
  const cw::Complex base("A0", c);
  CHECK(cw::attach_stage(base, "same", zero_algebra(), 1, identity(c)) == base);
  CHECK_THROWS_AS(cw::attach_stage(base, "bad", c, 1, identity(c)), Error);
  CHECK_THROWS_AS(cw::attach_stage(base, "high", c, 3, constant_boundary(c, 1)), Error);
  CHECK_THROWS_AS(cw::Complex("loop", interval_tensor(1, c)), Error);
}

TEST_CASE("a corrupted attaching map is caught by the star-hom and closure checks") {
  // sigma(a) = (a, 2a) is linear but not multiplicative.
  const fd::Algebra c(std::vector<int>{1});
  const fd::Algebra s0(std::vector<int>{1, 1});
  Matrix m = Matrix::Zero(2, 1);
  m(0, 0) = 1.0;
  m(1, 0) = 2.0;
  const fd::Morphism sigma(c, s0, m, "corrupt");
  const cw::ConcreteStage st = cw::build_stage(finite_dim({1}), 1, sigma, 4);
  CHECK(check::check_star_hom("sigma", st.sigma).failed());
  CHECK(disc::closure_residual(st.algebra) > 1e-3);
  // The row stays exact: boundary restriction is onto.
  CHECK(cw::stage_row_report("row", st).passed());
}

TEST_CASE("mapping constructions over the circle re-validate") {
  CHECK(all_pass(cw::validate_mapping_constructions("circle", identity(circle_complex().top()), {2, 4})));
}

TEST_CASE("layout bookkeeping") {
  const cw::Layout l = cw::make_layout(two_cell_complex(), 2);
  CHECK(l.stage_count() == 3);
  CHECK(l.top().block_count() == 9 + 3 + 1);
  CHECK(l.block_index(0, -1, 0) == 12);
  CHECK(l.blocks[l.block_index(2, 4, 0)].boundary == false);
  CHECK(l.blocks[l.block_index(2, 0, 0)].boundary == true);
}

TEST_CASE("relative extension with a constant lower homotopy") {
  const cw::Complex x = circle_complex();
  const cw::Layout b = cw::make_layout(x, 4);
  const fd::Morphism id = fd::identity(b.top());
  const check::Homotopy lower = check::constant_homotopy(b.project_to(0), 3);
  const auto res = cw::extend_relative("ext", b, 1, id, lower);
  CHECK(all_pass(res.reports));
  CHECK(res.family.steps() == 3);
}

TEST_CASE("cellular approximation of the half-turn rotation at N = 8") {
  const cw::Complex x = circle_complex();
  const int n = 8;
  const fd::Morphism f = disc::discretize_morphism(loop_rotation(x.top(), {1, 2}), {n});
  const cw::CellularMap out = cw::cellular_approximate("rot", x, x, f, n);
  CHECK(all_pass(out.reports));
  CHECK(out.g.steps() > 0);

  // Oracle: functions vanishing at the base point (supported on interior grid
  // points) have zero base component after h.
  const cw::Layout l = cw::make_layout(x, n);
  const Matrix img = out.h.dense();
  for (int p = 1; p < n; ++p) {
    Vector v = Vector::Zero(l.top().ambient_dim());
    v[l.block_index(1, p, 0)] = 1.0;
    CHECK((img * v)[l.block_index(0, -1, 0)] == Complex(0.0));
  }
  // f itself is not cellular: it carries the midpoint of the cell to the base point.
  Vector mid = Vector::Zero(l.top().ambient_dim());
  mid[l.block_index(1, n / 2, 0)] = 1.0;
  CHECK(std::abs((f.dense() * mid)[l.block_index(0, -1, 0)] - 1.0) < 1e-12);
}

TEST_CASE("identity is already cellular") {
  const cw::Complex x = two_cell_complex();
  const int n = 4;
  const fd::Morphism id = fd::identity(cw::make_layout(x, n).top());
  const cw::CellularMap out = cw::cellular_approximate("id", x, x, id, n);
  CHECK(all_pass(out.reports));
  CHECK(out.g.steps() == 0);
  CHECK(check::map_distance(out.h, id) == 0.0);
}

TEST_CASE("cells above dimension 2 stop the driver") {
  const auto c = finite_dim({1});
  const cw::Complex x3 = cw::attach_stage(cw::Complex("A0", c), "X3", c, 3,
                                          compose(boundary_restrict(interval_tensor(3, c, 3)),
                                                  constant_embed(c, 3, 3)),
                                          3);
  const fd::Morphism id = fd::identity(cw::make_layout(x3, 2).top());
  CHECK_THROWS_AS(cw::cellular_approximate("x3", x3, x3, id, 2), Error);
}

TEST_CASE("stage diagram") {
  const DotGraph g = cw::complex_dot(two_cell_complex());
  CHECK(g.nodes.size() == 7);
  CHECK(g.edges.size() == 8);
  CHECK(to_dot(g).find("sigma2") != std::string::npos);
}
