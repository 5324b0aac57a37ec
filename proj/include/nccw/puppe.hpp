#pragma once

#include <string>
#include <vector>

#include "nccw/check.hpp"
#include "nccw/discretize.hpp"
#include "nccw/expr.hpp"
#include "nccw/report.hpp"

// Cylinder retraction, cone splitting for block ideals, and the chain
//   B <- A <- Cyl(phi) <- Cone(phi) <- S(A) <- S(Cyl(phi)) <- S(Cone(phi)) <- S^2(A) <- ...
// with its certificates.

namespace nccw::puppe {

struct CylinderRetraction {
  expr::MorphismExpr p;  // Cyl(phi) -> A, (a, g) -> a
  expr::MorphismExpr s;  // A -> Cyl(phi), a -> (a, constant phi(a))
  check::Homotopy sliding;  // H_u(a, g) = (a, t -> g(1 - u + u t)); H_0 = s∘p, H_1 = id
  std::vector<CheckReport> reports;
};

CylinderRetraction cyl_retraction(const std::string& id, const expr::MorphismExpr& phi, int n, double tol = 1e-9);

/// Sliding homotopy slices on disc(Cyl(phi)): slice k (u = k/N) reads grid
/// index N - k + floor(k j / N) at grid index j.
check::Homotopy sliding_homotopy(const fd::Algebra& cyl, int a_blocks, int b_blocks, int n);

/// Null-homotopy of Cone(A) = C_0((0,1]) (x) A: slice k reads grid index
/// floor(k j / N) at j (index 0 reads zero). Slice 0 is zero, slice N the
/// identity.
check::Homotopy cone_contraction(const fd::Algebra& cone, int a_blocks, int n);

struct ConeSplit {
  fd::Morphism split;  // Cone(A) (+) S(B/A) -> Cone(iota), a basis isomorphism
  std::vector<CheckReport> reports;
};

/// iota: A -> B the inclusion of the listed blocks of a FiniteDim B.
/// Throws Error when the listed blocks are not a block ideal.
ConeSplit cone_split_equivalence(const std::string& id, const expr::AlgebraExpr& b,
                                 const std::vector<int>& ideal_blocks, int n, double tol = 1e-9);

/// The block-ideal inclusion as an expression.
expr::MorphismExpr ideal_inclusion(const expr::AlgebraExpr& b, const std::vector<int>& ideal_blocks);

struct PuppeChain {
  std::vector<expr::AlgebraExpr> terms;  // A_0 = B, A_1 = A, ...
  std::vector<expr::MorphismExpr> maps;  // maps[i]: terms[i+1] -> terms[i]
  std::vector<std::string> names;
  expr::MorphismExpr phi;
};

PuppeChain puppe_chain(const expr::MorphismExpr& phi, int terms);

/// The maps of the chain that are not suspensions.
expr::MorphismExpr cone_into_cylinder(const expr::MorphismExpr& phi);
expr::MorphismExpr suspension_into_cone(const expr::MorphismExpr& phi);
expr::MorphismExpr suspension_into_cone_kernel(const expr::MorphismExpr& phi);  // S(B) -> Cone(phi)

/// (i) null-homotopy of the composite into B, (ii) exact row
/// 0 -> S(B) -> Cone(phi) -> A -> 0, (iii) zero composite S(B) -> Cone -> A,
/// (iv) the suspended versions of (i)-(iii); plus the typing of every map.
std::vector<CheckReport> chain_certificates(const std::string& id, const PuppeChain& chain, int n,
                                            double tol = 1e-9);

DotGraph chain_dot(const PuppeChain& chain);

}  // namespace nccw::puppe
