#include "nccw/expr_json.hpp"

namespace nccw::expr {

namespace {

const char* algebra_kind_name(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::Zero: return "Zero";
    case AlgebraKind::FiniteDim: return "FiniteDim";
    case AlgebraKind::IntervalTensor: return "IntervalTensor";
    case AlgebraKind::OpenCubeTensor: return "OpenCubeTensor";
    case AlgebraKind::SphereTensor: return "SphereTensor";
    case AlgebraKind::HalfOpenTensor: return "HalfOpenTensor";
    case AlgebraKind::DirectSum: return "DirectSum";
    case AlgebraKind::Pullback: return "Pullback";
    case AlgebraKind::Cylinder: return "Cylinder";
    case AlgebraKind::MappingCone: return "MappingCone";
  }
  return "?";
}

const char* morphism_kind_name(MorphismKind k) {
  switch (k) {
    case MorphismKind::Identity: return "Identity";
    case MorphismKind::Zero: return "Zero";
    case MorphismKind::Compose: return "Compose";
    case MorphismKind::Evaluation: return "Evaluation";
    case MorphismKind::BoundaryRestrict: return "BoundaryRestrict";
    case MorphismKind::ProjectionFirst: return "ProjectionFirst";
    case MorphismKind::ProjectionSecond: return "ProjectionSecond";
    case MorphismKind::ConstantEmbed: return "ConstantEmbed";
    case MorphismKind::Suspended: return "Suspended";
    case MorphismKind::BlockMap: return "BlockMap";
    case MorphismKind::UserNamed: return "UserNamed";
    case MorphismKind::Pairing: return "Pairing";
    case MorphismKind::ExtendByZero: return "ExtendByZero";
    case MorphismKind::LoopRotation: return "LoopRotation";
  }
  return "?";
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from(const Json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n ? static_cast<Eigen::Index>(j[0].size()) : 0);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Complex(j[r][c][0].get<double>(), j[r][c][1].get<double>());
  return m;
}

Fraction fraction_from(const Json& j) { return {j[0].get<long>(), j[1].get<long>()}; }

}  // namespace

Json to_json(const AlgebraExpr& a) {
  Json j;
  j["kind"] = algebra_kind_name(a.kind());
  switch (a.kind()) {
    case AlgebraKind::Zero:
      break;
    case AlgebraKind::FiniteDim:
      j["blocks"] = a.blocks();
      break;
    case AlgebraKind::IntervalTensor:
    case AlgebraKind::OpenCubeTensor:
    case AlgebraKind::SphereTensor:
      j["n"] = a.cube_dim();
      j["base"] = to_json(a.base());
      break;
    case AlgebraKind::HalfOpenTensor:
      j["base"] = to_json(a.base());
      break;
    case AlgebraKind::DirectSum:
      j["left"] = to_json(a.base());
      j["right"] = to_json(a.right());
      break;
    case AlgebraKind::Pullback:
      j["alpha"] = to_json(a.first_map());
      j["beta"] = to_json(a.second_map());
      break;
    case AlgebraKind::Cylinder:
    case AlgebraKind::MappingCone:
      j["f"] = to_json(a.first_map());
      break;
  }
  return j;
}

Json to_json(const MorphismExpr& m) {
  const auto& n = m.node();
  Json j;
  j["kind"] = morphism_kind_name(m.kind());
  switch (m.kind()) {
    case MorphismKind::Identity:
    case MorphismKind::BoundaryRestrict:
    case MorphismKind::ProjectionFirst:
    case MorphismKind::ProjectionSecond:
      j["domain"] = to_json(n.domain);
      break;
    case MorphismKind::Zero:
    case MorphismKind::ExtendByZero:
      j["domain"] = to_json(n.domain);
      j["codomain"] = to_json(n.codomain);
      break;
    case MorphismKind::Compose:
      j["g"] = to_json(n.children[0]);
      j["f"] = to_json(n.children[1]);
      break;
    case MorphismKind::Evaluation:
    case MorphismKind::LoopRotation:
      j["domain"] = to_json(n.domain);
      j["point"] = Json::array({n.point.num, n.point.den});
      break;
    case MorphismKind::ConstantEmbed:
      j["domain"] = to_json(n.domain);
      j["n"] = n.codomain.cube_dim();
      break;
    case MorphismKind::Suspended:
      j["f"] = to_json(n.children[0]);
      break;
    case MorphismKind::BlockMap: {
      j["domain"] = to_json(n.domain);
      j["codomain"] = to_json(n.codomain);
      j["multiplicity"] = n.multiplicity;
      j["unital"] = n.unital;
      Json w = Json::array();
      for (const auto& x : n.windings)
        w.push_back(Json{{"target_block", x.target_block}, {"turns", x.turns}, {"generator", matrix_json(x.generator)}});
      j["windings"] = w;
      break;
    }
    case MorphismKind::UserNamed:
      j["name"] = n.name;
      j["target"] = to_json(n.children[0]);
      break;
    case MorphismKind::Pairing:
      j["into"] = to_json(n.codomain);
      j["first"] = to_json(n.children[0]);
      j["second"] = to_json(n.children[1]);
      break;
  }
  return j;
}

AlgebraExpr algebra_from_json(const Json& j) {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "Zero") return zero_algebra();
  if (k == "FiniteDim") return finite_dim(j.at("blocks").get<std::vector<int>>());
  if (k == "IntervalTensor") return interval_tensor(j.at("n").get<int>(), algebra_from_json(j.at("base")), 64);
  if (k == "OpenCubeTensor") return open_cube_tensor(j.at("n").get<int>(), algebra_from_json(j.at("base")), 64);
  if (k == "SphereTensor") return sphere_tensor(j.at("n").get<int>(), algebra_from_json(j.at("base")), 64);
  if (k == "HalfOpenTensor") return half_open_tensor(algebra_from_json(j.at("base")));
  if (k == "DirectSum") return direct_sum(algebra_from_json(j.at("left")), algebra_from_json(j.at("right")));
  if (k == "Pullback") return pullback_expr(morphism_from_json(j.at("alpha")), morphism_from_json(j.at("beta")));
  if (k == "Cylinder") return mapping_construction(Mapping::Cylinder, morphism_from_json(j.at("f")));
  if (k == "MappingCone") return mapping_construction(Mapping::MappingCone, morphism_from_json(j.at("f")));
  throw Error("unknown algebra kind '" + k + "'");
}

MorphismExpr morphism_from_json(const Json& j) {
  const std::string k = j.at("kind").get<std::string>();
  auto dom = [&] { return algebra_from_json(j.at("domain")); };
  if (k == "Identity") return identity(dom());
  if (k == "Zero") return zero_morphism(dom(), algebra_from_json(j.at("codomain")));
  if (k == "Compose") return compose(morphism_from_json(j.at("g")), morphism_from_json(j.at("f")));
  if (k == "Evaluation") return evaluation(dom(), fraction_from(j.at("point")));
  if (k == "BoundaryRestrict") return boundary_restrict(dom());
  if (k == "ProjectionFirst") return projection_first(dom());
  if (k == "ProjectionSecond") return projection_second(dom());
  if (k == "ConstantEmbed") return constant_embed(dom(), j.at("n").get<int>(), 64);
  if (k == "Suspended") return suspended(morphism_from_json(j.at("f")));
  if (k == "BlockMap") {
    std::vector<Winding> ws;
    for (const auto& w : j.at("windings"))
      ws.push_back({w.at("target_block").get<int>(), matrix_from(w.at("generator")), w.at("turns").get<int>()});
    return block_map(dom(), algebra_from_json(j.at("codomain")),
                     j.at("multiplicity").get<std::vector<std::vector<int>>>(), j.at("unital").get<bool>(), ws);
  }
  if (k == "UserNamed") return user_named(j.at("name").get<std::string>(), morphism_from_json(j.at("target")));
  if (k == "Pairing")
    return pairing(algebra_from_json(j.at("into")), morphism_from_json(j.at("first")),
                   morphism_from_json(j.at("second")));
  if (k == "ExtendByZero") return extend_by_zero(dom(), algebra_from_json(j.at("codomain")));
  if (k == "LoopRotation") return loop_rotation(dom(), fraction_from(j.at("point")));
  throw Error("unknown morphism kind '" + k + "'");
}

}  // namespace nccw::expr
