#pragma once

#include "nccw/dsl.hpp"

namespace nccw::dsl::detail {

/// Adds the declarations of `s` to `script.bindings`, or its command to
/// `script.commands`. Throws ParseError located at the offending term.
void elaborate(const Statement& s, Script& script);

}  // namespace nccw::dsl::detail
