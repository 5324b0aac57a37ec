#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nccw/puppe.hpp"

using namespace nccw;
using namespace nccw::expr;

namespace {

bool all_pass(const std::vector<CheckReport>& rs) {
  for (const auto& r : rs)
    if (!r.passed()) {
      MESSAGE(r.id << " " << status_name(r.status));
      return false;
    }
  return true;
}

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  FAIL("no report " << id);
  return rs.front();
}

MorphismExpr id_m2() { return identity(finite_dim({2})); }
MorphismExpr nothing() { return zero_morphism(finite_dim({2}), finite_dim({3})); }
MorphismExpr twice() { return block_map(finite_dim({1}), finite_dim({2}), {{2}}); }

int dim_at(const AlgebraExpr& a, int n) { return disc::discretize_algebra(a, {n}).dim(); }

}  // namespace

TEST_CASE("cylinder retraction: p o s = id exactly and the sliding homotopy closes") {
  for (const auto& phi : {id_m2(), nothing(), twice()}) {
    for (int n : {2, 4}) {
      const auto r = puppe::cyl_retraction("cyl", phi, n);
      CHECK(all_pass(r.reports));
      disc::Discretizer d(n);
      const fd::Morphism ps = d.morphism(compose(r.p, r.s));
      CHECK(check::map_distance(ps, fd::identity(d.algebra(phi.domain()))) == 0.0);
      CHECK(r.sliding.steps() == n);
    }
  }
}

TEST_CASE("cylinder dimension: dim A + N dim B") {
  // Oracle: (a, g) with g a function on N+1 grid points tied to phi(a) at one end.
  CHECK(dim_at(mapping_construction(Mapping::Cylinder, id_m2()), 4) == 4 + 4 * 4);
  CHECK(dim_at(mapping_construction(Mapping::Cylinder, twice()), 4) == 1 + 4 * 4);
  CHECK(dim_at(mapping_construction(Mapping::Cylinder, nothing()), 4) == 4 + 4 * 9);
}

TEST_CASE("cylinder homotopy type is reported with both statements") {
  const auto r = puppe::cyl_retraction("cyl", twice(), 4);
  const auto& w = *find(r.reports, "cyl/homotopy_type").witness;
  CHECK(w.at("stated").get<std::string>() == "Cyl(phi) ~ B");
  CHECK(w.at("verified").get<std::string>().find("~ A") != std::string::npos);
}

TEST_CASE("chain terms follow the suspension pattern") {
  const auto c5 = puppe::puppe_chain(id_m2(), 5);
  CHECK(c5.names == std::vector<std::string>{"B", "A", "Cyl(phi)", "Cone(phi)", "S(A)"});
  const auto c8 = puppe::puppe_chain(id_m2(), 8);
  CHECK(c8.names == std::vector<std::string>{"B", "A", "Cyl(phi)", "Cone(phi)", "S(A)", "S(Cyl(phi))",
                                             "S(Cone(phi))", "S^2(A)"});
  const auto c2 = puppe::puppe_chain(twice(), 2);
  REQUIRE(c2.maps.size() == 1);
  CHECK(c2.maps[0] == twice());
  CHECK_THROWS_AS(puppe::puppe_chain(twice(), 1), Error);
}

TEST_CASE("longer chains extend shorter ones unchanged, and every map type-checks") {
  for (const auto& phi : {id_m2(), twice(), nothing()}) {
    const auto c11 = puppe::puppe_chain(phi, 11);
    for (int k = 2; k < 11; ++k) {
      const auto ck = puppe::puppe_chain(phi, k);
      for (int i = 0; i < k; ++i) CHECK(ck.terms[i] == c11.terms[i]);
      for (int i = 0; i + 1 < k; ++i) CHECK(ck.maps[i] == c11.maps[i]);
    }
    for (std::size_t i = 0; i < c11.maps.size(); ++i) {
      CHECK(c11.maps[i].domain() == c11.terms[i + 1]);
      CHECK(c11.maps[i].codomain() == c11.terms[i]);
    }
    CHECK(c11.terms[7] == apply_functor(Functor::Suspension, c11.terms[4]));
  }
}

TEST_CASE("chain certificates for id on M2 at N = 4") {
  const auto reports = puppe::chain_certificates("chain", puppe::puppe_chain(id_m2(), 8), 4);
  CHECK(all_pass(reports));
  for (const char* s : {"chain/i", "chain/ii", "chain/iii", "chain/iv_row", "chain/iv_zero", "chain/iv_null"})
    CHECK(find(reports, s).passed());
  CHECK(find(reports, "chain/iii").max_residual == 0.0);
  CHECK(find(reports, "chain/iv_zero").max_residual == 0.0);
}

TEST_CASE("chain certificates for other maps") {
  for (const auto& phi : {twice(), nothing()})
    for (int n : {2, 4}) CHECK(all_pass(puppe::chain_certificates("chain", puppe::puppe_chain(phi, 8), n)));
  const auto few = puppe::chain_certificates("short", puppe::puppe_chain(twice(), 3), 4);
  CHECK(find(few, "short/certificates").status == Status::Skip);
}

TEST_CASE("row dimensions: dim Cone = dim S(B) + dim A") {
  // Oracle: S(B) keeps the N-1 interior points, A adds one copy of itself.
  for (int n : {2, 4, 8}) {
    CHECK(dim_at(mapping_construction(Mapping::MappingCone, id_m2()), n) == (n - 1) * 4 + 4);
    CHECK(dim_at(mapping_construction(Mapping::MappingCone, twice()), n) == (n - 1) * 4 + 1);
    CHECK(dim_at(apply_functor(Functor::Suspension, finite_dim({2})), n) == (n - 1) * 4);
  }
}

TEST_CASE("cone split of a block ideal") {
  const auto b = finite_dim({2, 3});
  const int n = 4;
  const auto s = puppe::cone_split_equivalence("split", b, {0}, n);
  CHECK(all_pass(s.reports));
  // Cone(M2) has N points, S(M3) has N - 1.
  CHECK(s.split.domain().dim() == n * 4 + (n - 1) * 9);
  CHECK(s.split.codomain().dim() == n * 4 + (n - 1) * 9);
  const auto& w = *find(s.reports, "split/homotopy_type").witness;
  CHECK(w.at("stated").get<std::string>() == "Cone(iota) ~ B/A");
}

TEST_CASE("cone split edge cases") {
  const auto b = finite_dim({2, 3});
  const int n = 4;
  const auto whole = puppe::cone_split_equivalence("all", b, {0, 1}, n);
  CHECK(all_pass(whole.reports));
  CHECK(whole.split.domain().dim() == n * 13);
  const auto none = puppe::cone_split_equivalence("none", b, {}, n);
  CHECK(all_pass(none.reports));
  CHECK(none.split.domain().dim() == (n - 1) * 13);
  CHECK(puppe::ideal_inclusion(b, {}).domain() == zero_algebra());
}

TEST_CASE("non-ideals are rejected") {
  CHECK_THROWS_AS(puppe::ideal_inclusion(finite_dim({2, 3}), {2}), Error);
  CHECK_THROWS_AS(puppe::ideal_inclusion(finite_dim({2, 3}), {0, 0}), Error);
  CHECK_THROWS_AS(puppe::ideal_inclusion(apply_functor(Functor::Cone, finite_dim({2})), {0}), Error);
}

TEST_CASE("cone contraction runs from zero to the identity") {
  disc::Discretizer d(4);
  const fd::Algebra& cone = d.algebra(apply_functor(Functor::Cone, finite_dim({2})));
  const auto h = puppe::cone_contraction(cone, 1, 4);
  CHECK(check::map_distance(h.start(), fd::zero_map(cone, cone)) == 0.0);
  CHECK(check::map_distance(h.end(), fd::identity(cone)) == 0.0);
  for (const auto& s : h.slices) CHECK(check::check_star_hom("slice", s).passed());
}

TEST_CASE("chain diagram") {
  const DotGraph g = puppe::chain_dot(puppe::puppe_chain(id_m2(), 8));
  CHECK(g.nodes.size() == 8);
  CHECK(g.edges.size() == 7);
  CHECK(to_dot(g).find("S^2(A)") != std::string::npos);
}
