#pragma once

#include "nccw/fdalg.hpp"

// Data-parallel inner loops. Each kernel has a serial reference kept for
// testing and benchmarking; the parallel versions use OpenMP when the build
// enables it and fall back to the serial loop otherwise.

namespace nccw::kernels {

struct StarHomResidual {
  double max_residual = 0.0;
  int worst_i = -1;
  int worst_j = -1;      // -1 when the worst case is the adjoint test
  bool operator==(const StarHomResidual&) const = default;
};

/// max over basis pairs of ||f(e_i e_j) - f(e_i) f(e_j)|| and over basis
/// elements of ||f(e_i*) - f(e_i)*||, in the codomain operator norm.
StarHomResidual star_hom_residual_serial(const fd::Morphism& f);
StarHomResidual star_hom_residual_parallel(const fd::Morphism& f);

/// Applies f to each column of `xs` (ambient domain vectors).
Matrix apply_columns_serial(const fd::Morphism& f, const Matrix& xs);
Matrix apply_columns_parallel(const fd::Morphism& f, const Matrix& xs);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace nccw::kernels
