#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nccw/expr.hpp"
#include "nccw/fdalg.hpp"

// Finite semantics of expressions. At subdivision count N:
//   C(I^n) (x) A     -> one copy of disc(A) per point of {0, 1/N, ..., 1}^n
//   C_0(I_0^n) (x) A -> interior points only (vanishing by omission)
//   C_0((0,1]) (x) A -> points 1/N, ..., 1
//   C(S^n) (x) A     -> boundary points of the (n+1)-cube grid; S^0 = {0, 1}
//   fiber products   -> constraint subspace of the ambient direct sum
// Grid points are enumerated in lexicographic order.

namespace nccw::disc {

using ConcreteAlgebra = fd::Algebra;
using ConcreteMorphism = fd::Morphism;

struct Resolution {
  int n = 1;
};

/// Grid points (integer coordinates in [0, N]) of a tensor node.
std::vector<std::vector<int>> grid_points(expr::AlgebraKind kind, int cube_dim, int n);

/// Parameter in [0, 1] used by windings at a grid point: the first
/// coordinate for cubes and intervals, and the counterclockwise perimeter
/// fraction for the square boundary S^1.
double winding_parameter(expr::AlgebraKind kind, int cube_dim, const std::vector<int>& point, int n);

struct FiberProduct {
  fd::Algebra algebra;
  fd::Morphism pr1;
  fd::Morphism pr2;
};

/// {(x, y) : alpha(x) = beta(y)} inside dom(alpha) (+) dom(beta); basis from
/// the null space of [alpha, -beta] on the admissible subspaces.
FiberProduct fiber_product(const fd::Morphism& alpha, const fd::Morphism& beta, double rank_rel = 1e-7);

/// Memoizing discretizer for one resolution. Not thread-safe for writers;
/// use one instance per thread.
class Discretizer {
 public:
  explicit Discretizer(int n, double rank_rel = 1e-7);

  int resolution() const { return n_; }
  const fd::Algebra& algebra(const expr::AlgebraExpr& a);
  fd::Morphism morphism(const expr::MorphismExpr& m);
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  fd::Algebra build(const expr::AlgebraExpr& a);
  fd::Morphism build(const expr::MorphismExpr& m);
  fd::Algebra tensor(const expr::AlgebraExpr& a);

  int n_;
  double rel_;
  std::map<const expr::AlgebraNode*, std::pair<expr::AlgebraExpr, fd::Algebra>> algebras_;
  std::vector<std::string> warnings_;
};

fd::Algebra discretize_algebra(const expr::AlgebraExpr& a, Resolution r);
fd::Morphism discretize_morphism(const expr::MorphismExpr& m, Resolution r);

/// Surjective restriction from the 2N discretization of `a` to the N one,
/// dropping grid blocks that are not on the coarse grid.
fd::Morphism restrict_resolution(const expr::AlgebraExpr& a, int coarse_n);

/// Max over basis pairs of the distance of products and adjoints from the
/// admissible subspace (0 for unconstrained algebras).
double closure_residual(const fd::Algebra& a);

}  // namespace nccw::disc
