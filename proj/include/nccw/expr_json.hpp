#pragma once

#include <json.hpp>

#include "nccw/expr.hpp"

namespace nccw::expr {

using Json = nlohmann::ordered_json;

/// Nested {"kind": ..., children} form used by the CLI and report files.
Json to_json(const AlgebraExpr& a);
Json to_json(const MorphismExpr& m);
AlgebraExpr algebra_from_json(const Json& j);
MorphismExpr morphism_from_json(const Json& j);

}  // namespace nccw::expr
