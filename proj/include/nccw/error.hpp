#pragma once

#include <stdexcept>
#include <string>

namespace nccw {

/// Raised for malformed expressions, shape mismatches and other contract
/// violations that a caller can fix by changing its input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nccw
