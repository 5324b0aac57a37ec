#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nccw/check.hpp"
#include "nccw/discretize.hpp"
#include "nccw/expr.hpp"

// NCCW complexes: A_0 finite-dimensional, and
//   A_k = I^k F_k (+)_{S^{k-1} F_k} A_{k-1}
// the pullback of the boundary restriction against the attaching map
// sigma_k: A_{k-1} -> S^{k-1} F_k. Each stage sits in the exact row
//   0 -> I_0^k F_k --iota--> A_k --pi--> A_{k-1} -> 0
// with rho: A_k -> I^k F_k the cube component.

namespace nccw::cw {

inline constexpr int kMaxCellDim = 2;

struct Stage {
  std::string name;
  int dim = 0;                // cell dimension; 0 for the base stage
  expr::AlgebraExpr cell;     // F_k, or A_0 itself for the base stage
  expr::AlgebraExpr algebra;  // A_k
  // Absent on the base stage.
  std::optional<expr::MorphismExpr> sigma;
  std::optional<expr::MorphismExpr> rho;
  std::optional<expr::MorphismExpr> pi;
  std::optional<expr::MorphismExpr> iota;
};

class Complex {
 public:
  /// Base stage; `a0` must be FiniteDim (or Zero).
  Complex(std::string name, expr::AlgebraExpr a0);

  const std::vector<Stage>& stages() const { return stages_; }
  const Stage& top_stage() const { return stages_.back(); }
  const expr::AlgebraExpr& top() const { return stages_.back().algebra; }
  int top_dim() const { return stages_.back().dim; }
  bool operator==(const Complex& o) const;

 private:
  friend Complex attach_stage(const Complex&, std::string, expr::AlgebraExpr, int, const expr::MorphismExpr&, int);
  std::vector<Stage> stages_;
};

/// Appends A_k = Pullback(boundary on C(I^k, F), sigma). A Zero cell algebra
/// returns the complex unchanged. Throws Error on a badly typed sigma or a
/// cell dimension outside 1..bound.
Complex attach_stage(const Complex& x, std::string name, expr::AlgebraExpr cell, int k,
                     const expr::MorphismExpr& sigma, int bound = kMaxCellDim);

/// One stage at a fixed resolution, built from a concrete attaching map.
struct ConcreteStage {
  fd::Algebra interior;  // I_0^k F
  fd::Algebra cube;      // I^k F
  fd::Morphism boundary;
  fd::Morphism sigma;
  fd::Algebra algebra;  // A_k
  fd::Morphism rho;
  fd::Morphism pi;
  fd::Morphism iota;
};

ConcreteStage build_stage(const expr::AlgebraExpr& cell, int k, const fd::Morphism& sigma, int n);

/// Row exactness for a concrete stage, with dim A_k = dim I_0^k F + dim A_{k-1}
/// recorded in the witness.
CheckReport stage_row_report(const std::string& id, const ConcreteStage& s, const Tolerances& tol = {});

/// Per stage and resolution: row exactness, *-hom check of sigma_k, closure
/// of A_k (small stages), refinement consistency of pi_k between N and 2N.
std::vector<CheckReport> validate_complex(const Complex& x, const std::vector<int>& resolutions,
                                          const Tolerances& tol = {});

/// Cylinder(f) and MappingCone(f) as stages over dom(f): closure, surjective
/// first projection, and the dimension count dim A + (free points) dim B.
std::vector<CheckReport> validate_mapping_constructions(const std::string& id, const expr::MorphismExpr& f,
                                                        const std::vector<int>& resolutions,
                                                        const Tolerances& tol = {});

/// Ambient block bookkeeping of the top algebra of a discretized complex.
/// Ambient blocks of A_m are: cell m points (x) F_m blocks, then the blocks
/// of A_{m-1}, down to the blocks of A_0.
struct Layout {
  struct BlockInfo {
    int stage = 0;           // index into Complex::stages()
    int point = -1;          // cube grid point index, -1 on the base stage
    int fblock = 0;          // block of F_k (or of A_0)
    bool boundary = false;   // cube boundary point
  };
  int n = 1;
  std::vector<fd::Algebra> algebras;     // concrete A_j per stage
  std::vector<fd::Morphism> sigma;       // concrete sigma_j (identity placeholder at j = 0)
  std::vector<int> stage_offset;         // first ambient block of stage j inside the top algebra
  std::vector<std::vector<std::vector<int>>> cube_points;    // per stage
  std::vector<std::vector<std::vector<int>>> sphere_points;  // per stage
  std::vector<int> fblocks;              // block count of F_j (of A_0 for j = 0)
  std::vector<int> dims;                 // cell dimension per stage
  std::vector<BlockInfo> blocks;         // per ambient block of the top algebra

  const fd::Algebra& top() const { return algebras.back(); }
  int stage_count() const { return static_cast<int>(algebras.size()); }
  /// Top ambient block of (stage, point, fblock).
  int block_index(int stage, int point, int fblock) const;
  /// Concrete projection A_top -> A_j.
  fd::Morphism project_to(int j) const;
};

Layout make_layout(const Complex& x, int n);

/// Stage diagram: nodes A_k, I^k F_k, S^{k-1} F_k with edges rho, boundary,
/// sigma and pi per attached cell.
DotGraph complex_dot(const Complex& x);

}  // namespace nccw::cw
