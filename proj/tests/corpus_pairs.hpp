#pragma once

#include <utility>
#include <vector>

#include "nccw/expr.hpp"

namespace nccw::testing {

using namespace nccw::expr;

// Composable pairs (outer, inner) drawn from the constructions used across
// the toolkit.
inline std::vector<std::pair<MorphismExpr, MorphismExpr>> corpus_pairs() {
  const auto c = finite_dim({1});
  const auto m2 = finite_dim({2});
  const auto b = finite_dim({2, 3});
  const auto twice = block_map(c, m2, {{2}});
  const auto into_b = block_map(m2, b, {{1}, {1}});
  const auto cube = interval_tensor(1, m2);
  const auto ho = half_open_tensor(m2);
  std::vector<std::pair<MorphismExpr, MorphismExpr>> out;
  for (const auto& phi : {identity(m2), zero_morphism(m2, m2), into_b}) {
    const auto cyl = mapping_construction(Mapping::Cylinder, phi);
    const auto s = pairing(cyl, identity(m2), compose(constant_embed(phi.codomain(), 1), phi));
    out.push_back({projection_first(cyl), s});
    out.push_back({projection_second(cyl), s});
    out.push_back({phi, projection_first(cyl)});
    out.push_back({suspended(phi), suspended(identity(m2))});
  }
  out.push_back({twice, identity(c)});
  out.push_back({into_b, twice});
  out.push_back({boundary_restrict(cube), constant_embed(m2, 1)});
  out.push_back({evaluation(cube, {1, 2}), constant_embed(m2, 1)});
  out.push_back({evaluation(ho, {1, 1}), extend_by_zero(apply_functor(Functor::Suspension, m2), ho)});
  out.push_back({extend_by_zero(ho, cube), extend_by_zero(apply_functor(Functor::Suspension, m2), ho)});
  out.push_back({suspended(into_b), suspended(twice)});
  out.push_back({block_map(cube, interval_tensor(1, b), {{1}, {1}}), constant_embed(m2, 1)});
  const auto cone = mapping_construction(Mapping::MappingCone, twice);
  out.push_back({projection_first(cone), pairing(cone, zero_morphism(apply_functor(Functor::Suspension, m2), c),
                                                 extend_by_zero(apply_functor(Functor::Suspension, m2), ho))});
  out.push_back({projection_second(cone), pairing(cone, zero_morphism(apply_functor(Functor::Suspension, m2), c),
                                                  extend_by_zero(apply_functor(Functor::Suspension, m2), ho))});
  return out;
}


}  // namespace nccw::testing
