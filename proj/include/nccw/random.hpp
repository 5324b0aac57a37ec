#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "nccw/linalg.hpp"

namespace nccw {

/// Seeded generator with distribution code that does not depend on the
/// standard library's (unspecified) distribution algorithms, so reports are
/// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }
  Matrix gaussian(int rows, int cols);
  /// Haar-like random unitary from the QR factor of a Gaussian matrix.
  Matrix unitary(int n);

 private:
  std::mt19937_64 engine_;
};

/// FNV-1a mix of a check id into the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

}  // namespace nccw
