#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/check.hpp"
#include "nccw/discretize.hpp"

using namespace nccw;
using namespace nccw::expr;

namespace {

fd::Morphism routed_blocks(const std::vector<int>& src, const std::vector<int>& tgt,
                           std::vector<std::vector<int>> mult) {
  Eigen::MatrixXi m(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
  for (std::size_t j = 0; j < tgt.size(); ++j)
    for (std::size_t i = 0; i < src.size(); ++i) m(j, i) = mult[j][i];
  return fd::MultiplicityMorphism(src, tgt, m).concrete();
}

check::PullbackSquare square_of(const AlgebraExpr& x, int n) {
  disc::Discretizer d(n);
  const auto legs = pullback_legs(x);
  return {d.morphism(projection_second(x)), d.morphism(projection_first(x)), d.morphism(legs.first),
          d.morphism(legs.second)};
}

check::NdrData ndr_on_two_points(bool corrupt_start) {
  check::NdrData d;
  d.b = fd::Algebra(std::vector<int>{1, 1});
  d.ideal_blocks = {0};
  // u reads t = 1 into the second block.
  std::vector<fd::Route> u(2);
  u[1].placements = {{2, 0}};
  d.u = fd::Morphism(fd::Algebra(std::vector<int>{1, 1, 1}), d.b, u, "u");
  const fd::Morphism id = fd::identity(d.b);
  const fd::Morphism keep = routed_blocks({1, 1}, {1, 1}, {{1, 0}, {0, 0}});
  d.phi.slices = {corrupt_start ? keep : id, keep};
  return d;
}

}  // namespace

TEST_CASE("star-hom check passes on structural maps and fails on transpose") {
  CHECK(check::check_star_hom("mult", routed_blocks({1, 2}, {4}, {{2, 1}})).passed());
  const fd::Algebra m2(std::vector<int>{2});
  Matrix t = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t(j * 2 + i, i * 2 + j) = 1.0;
  const CheckReport r = check::check_star_hom("transpose", fd::Morphism(m2, m2, t, "T"));
  CHECK(r.failed());
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->contains("basis_i"));
}

TEST_CASE("pullback squares of the mapping constructions are universal") {
  const auto m2 = finite_dim({2});
  const auto twice = block_map(finite_dim({1}), m2, {{2}});
  for (const auto& phi : {identity(m2), twice}) {
    for (auto kind : {Mapping::Cylinder, Mapping::MappingCone}) {
      for (int n : {2, 4}) {
        const auto x = mapping_construction(kind, phi);
        const CheckReport r = check::check_pullback_universal("sq", square_of(x, n), 5, 1);
        CAPTURE(x.to_string());
        CHECK(r.passed());
        CHECK(r.witness->at("kernel_intersection_rank") == 0);
      }
    }
  }
}

TEST_CASE("kernel overlap breaks uniqueness") {
  const fd::Morphism first = routed_blocks({1, 1}, {1}, {{1, 0}});
  const fd::Morphism id = fd::identity(fd::Algebra(std::vector<int>{1}));
  const CheckReport r = check::check_pullback_universal("overlap", {first, first, id, id}, 3, 1);
  CHECK(r.failed());
  CHECK(r.witness->at("kernel_intersection_rank") == 1);
  CHECK(r.witness->contains("common_kernel_vector"));
}

TEST_CASE("non-commuting squares are skipped") {
  const fd::Morphism first = routed_blocks({1, 1}, {1}, {{1, 0}});
  const fd::Morphism second = routed_blocks({1, 1}, {1}, {{0, 1}});
  const fd::Morphism id = fd::identity(fd::Algebra(std::vector<int>{1}));
  CHECK(check::check_pullback_universal("skew", {first, second, id, id}, 3, 1).status == Status::Skip);
}

TEST_CASE("pushout: the sum of two copies of C is generated by its two legs") {
  // C --> C (+) 0 style square: alpha = beta = zero from 0; X = C + C.
  const fd::Algebra zero(std::vector<int>{});
  const fd::Algebra c(std::vector<int>{1});
  const fd::Morphism to_first = routed_blocks({1}, {1, 1}, {{1}, {0}});
  const fd::Morphism to_second = routed_blocks({1}, {1, 1}, {{0}, {1}});
  const check::PushoutSquare sq{fd::zero_map(zero, c), fd::zero_map(zero, c), to_second, to_first};
  const CheckReport good = check::check_pushout_universal("coproduct", sq, 5, 3);
  CHECK(good.passed());
  const check::PushoutSquare bad{fd::identity(c), fd::identity(c), to_first, to_first};
  const CheckReport r = check::check_pushout_universal("missing", bad, 5, 3);
  CHECK(r.failed());
  CHECK(r.witness->at("generated_dim") == 1);
  CHECK(r.witness->at("dim_X") == 2);
}

TEST_CASE("exact rows") {
  const fd::Morphism i = routed_blocks({1}, {1, 1}, {{1}, {0}});
  const fd::Morphism q = routed_blocks({1, 1}, {1}, {{0, 1}});
  CHECK(check::check_exact_row("split", i, q).passed());
  const fd::Morphism wrong = routed_blocks({1, 1}, {1}, {{1, 0}});
  CHECK(check::check_exact_row("wrong", i, wrong).failed());
}

TEST_CASE("homotopy endpoints and slices") {
  const fd::Morphism id = fd::identity(fd::Algebra(std::vector<int>{2}));
  const check::Homotopy h = check::constant_homotopy(id, 3);
  CHECK(h.steps() == 3);
  CHECK(check::check_homotopy("const", h, id, id).passed());
  const fd::Morphism z = fd::zero_map(id.domain(), id.codomain());
  const CheckReport r = check::check_homotopy("wrong_end", h, id, z);
  CHECK(r.failed());
  CHECK(r.witness->at("end_residual").get<double>() > 0.5);
  const check::Homotopy both = check::concatenate(h, h);
  CHECK(both.steps() == 6);
  CHECK(check::homotopy_from_map(check::homotopy_to_map(h), id.codomain()).steps() == 3);
}

TEST_CASE("NDR data: a valid pair and an ev(0) violation") {
  const CheckReport good = check::check_ndr_pair("good", ndr_on_two_points(false));
  CHECK(good.passed());
  const CheckReport bad = check::check_ndr_pair("bad", ndr_on_two_points(true));
  CHECK(bad.failed());
  CHECK(bad.witness->at("failed_conditions") == Json::array({2}));
  CHECK(bad.witness->contains("reading"));
}

TEST_CASE("NDR data needs a block ideal") {
  check::NdrData d = ndr_on_two_points(false);
  d.ideal_blocks = {5};
  CHECK_THROWS_AS(check::check_ndr_pair("bad_ideal", d), Error);
}

TEST_CASE("HEP solution extends the homotopy on the ideal") {
  const check::NdrData ndr = ndr_on_two_points(false);
  const fd::Morphism f = fd::identity(ndr.b);
  const fd::Morphism e = check::block_projection(ndr.b, {0});
  check::Homotopy phi_t;
  phi_t.slices = {e, e};
  const auto sol = check::solve_hep("hep", f, phi_t, ndr);
  CHECK(sol.report.passed());
  CHECK(sol.extension.steps() == 1);
  CHECK(check::map_distance(sol.extension.start(), f) < 1e-12);

  const auto skipped = check::solve_hep("hep_bad", f, phi_t, ndr_on_two_points(true));
  CHECK(skipped.report.status == Status::Skip);
}
