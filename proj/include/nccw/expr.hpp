#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nccw/error.hpp"
#include "nccw/linalg.hpp"

// Symbolic C*-algebra and *-homomorphism expressions. Nodes are immutable
// and shared; copying an expression copies a pointer.

namespace nccw::expr {

inline constexpr int kDefaultDimBound = 2;

enum class AlgebraKind {
  Zero,
  FiniteDim,        // M_{n1} + ... + M_{nk}
  IntervalTensor,   // C(I^n) (x) A
  OpenCubeTensor,   // C_0((0,1)^n) (x) A
  SphereTensor,     // C(S^n) (x) A
  HalfOpenTensor,   // C_0((0,1]) (x) A
  DirectSum,
  Pullback,         // {(x, y) : alpha(x) = beta(y)}
  Cylinder,         // {(a, g) in A + C(I, B) : g(1) = f(a)}
  MappingCone,      // {(a, g) in A + C_0((0,1], B) : g(1) = f(a)}
};

enum class MorphismKind {
  Identity,
  Zero,
  Compose,           // children: g, f  (g after f)
  Evaluation,        // ev(t) on IntervalTensor(1, A) or HalfOpenTensor(A)
  BoundaryRestrict,  // C(I^n) (x) A -> C(S^{n-1}) (x) A
  ProjectionFirst,
  ProjectionSecond,
  ConstantEmbed,     // A -> C(I^n) (x) A, constant functions
  Suspended,         // S(f), pointwise on the open interval
  BlockMap,          // multiplicity data, pointwise over matching grids
  UserNamed,
  Pairing,           // <f1, f2> into a Pullback / Cylinder / MappingCone / DirectSum
  ExtendByZero,      // C_0 algebra into a larger function algebra
  LoopRotation,      // rotation of a loop-attached 1-cell, see nccw module
};

/// Rational point of [0, 1].
struct Fraction {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Grid index on the N-subdivision, or nullopt when off-grid.
  std::optional<int> index_on(int n) const;
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
};

/// exp(2*pi*i * turns * t * generator) on one target block.
struct Winding {
  int target_block = 0;
  Matrix generator;  // hermitian
  int turns = 0;
};

class MorphismExpr;
struct AlgebraNode;
struct MorphismNode;

class AlgebraExpr {
 public:
  AlgebraExpr();  // the zero algebra
  explicit AlgebraExpr(std::shared_ptr<const AlgebraNode> node) : node_(std::move(node)) {}

  AlgebraKind kind() const;
  const AlgebraNode& node() const { return *node_; }
  /// Block sizes of a FiniteDim node.
  const std::vector<int>& blocks() const;
  /// Cube / sphere dimension of a tensor node.
  int cube_dim() const;
  /// Tensor base, or the left summand of a DirectSum.
  const AlgebraExpr& base() const;
  const AlgebraExpr& right() const;
  /// Morphism data of Pullback / Cylinder / MappingCone nodes.
  const MorphismExpr& first_map() const;
  const MorphismExpr& second_map() const;

  std::string to_string() const;
  bool operator==(const AlgebraExpr& o) const;

 private:
  std::shared_ptr<const AlgebraNode> node_;
};

class MorphismExpr {
 public:
  explicit MorphismExpr(std::shared_ptr<const MorphismNode> node) : node_(std::move(node)) {}

  MorphismKind kind() const;
  const MorphismNode& node() const { return *node_; }
  const AlgebraExpr& domain() const;
  const AlgebraExpr& codomain() const;

  std::string to_string() const;
  bool operator==(const MorphismExpr& o) const;

 private:
  std::shared_ptr<const MorphismNode> node_;
};

struct AlgebraNode {
  AlgebraKind kind = AlgebraKind::Zero;
  std::vector<int> blocks;
  int n = 0;
  std::vector<AlgebraExpr> children;
  std::vector<MorphismExpr> maps;
};

struct MorphismNode {
  MorphismKind kind = MorphismKind::Identity;
  AlgebraExpr domain;
  AlgebraExpr codomain;
  std::vector<MorphismExpr> children;
  // Evaluation point or rotation amount.
  Fraction point;
  // BlockMap data.
  std::vector<std::vector<int>> multiplicity;  // [target][source]
  bool unital = false;
  std::vector<Winding> windings;
  std::string name;
  // Structural node the Pairing / Rotation lands in, and the ambient grid
  // algebras of ExtendByZero.
  std::optional<AlgebraExpr> target;
};

// --- algebra constructors ---------------------------------------------------

AlgebraExpr zero_algebra();
AlgebraExpr finite_dim(std::vector<int> blocks);
AlgebraExpr interval_tensor(int n, AlgebraExpr base, int bound = kDefaultDimBound);
AlgebraExpr open_cube_tensor(int n, AlgebraExpr base, int bound = kDefaultDimBound);
AlgebraExpr sphere_tensor(int n, AlgebraExpr base, int bound = kDefaultDimBound);
AlgebraExpr half_open_tensor(AlgebraExpr base);
AlgebraExpr direct_sum(AlgebraExpr left, AlgebraExpr right);

enum class Functor { Cone, Suspension, IntervalTensor, OpenCubeTensor, SphereTensor };
/// Cone(A) = C_0((0,1]) (x) A, S(A) = C_0((0,1)) (x) A, and the cube/sphere
/// tensors. `n` is ignored for Cone and Suspension.
AlgebraExpr apply_functor(Functor kind, const AlgebraExpr& a, int n = 1, int bound = kDefaultDimBound);

enum class Mapping { Cylinder, MappingCone };
AlgebraExpr mapping_construction(Mapping kind, const MorphismExpr& f);
/// Throws Error naming both codomains when they differ.
AlgebraExpr pullback_expr(const MorphismExpr& alpha, const MorphismExpr& beta);

/// The two legs (alpha, beta) whose fiber product a Pullback, Cylinder or
/// MappingCone node denotes.
std::pair<MorphismExpr, MorphismExpr> pullback_legs(const AlgebraExpr& x);
/// The factors (P, Q) of the ambient direct sum of a fiber-product or
/// DirectSum node.
std::pair<AlgebraExpr, AlgebraExpr> factors(const AlgebraExpr& x);

// --- morphism constructors --------------------------------------------------

MorphismExpr identity(AlgebraExpr a);
MorphismExpr zero_morphism(AlgebraExpr dom, AlgebraExpr cod);
MorphismExpr compose(MorphismExpr g, MorphismExpr f);
MorphismExpr evaluation(AlgebraExpr x, Fraction t);
MorphismExpr boundary_restrict(AlgebraExpr x);
MorphismExpr projection_first(AlgebraExpr x);
MorphismExpr projection_second(AlgebraExpr x);
MorphismExpr constant_embed(AlgebraExpr a, int n, int bound = kDefaultDimBound);
MorphismExpr suspended(MorphismExpr f);
/// Multiplicity data between FiniteDim nodes, or pointwise between tensor
/// nodes of the same grid kind over FiniteDim bases.
MorphismExpr block_map(AlgebraExpr dom, AlgebraExpr cod, std::vector<std::vector<int>> multiplicity,
                       bool unital = false, std::vector<Winding> windings = {});
MorphismExpr user_named(std::string name, MorphismExpr m);
MorphismExpr pairing(AlgebraExpr target, MorphismExpr first, MorphismExpr second);
MorphismExpr extend_by_zero(AlgebraExpr src, AlgebraExpr dst);
MorphismExpr loop_rotation(AlgebraExpr x, Fraction amount);

/// Block sizes behind a FiniteDim / Zero node (empty for Zero).
std::vector<int> finite_blocks(const AlgebraExpr& a);

/// linear dimension of the discretized algebra at subdivision count N,
/// computed from closed forms. Throws Error for fiber products whose legs
/// are not structurally surjective.
long linear_dim(const AlgebraExpr& a, int resolution);

/// True for morphism kinds known to be onto their codomain.
bool structurally_surjective(const MorphismExpr& m);

}  // namespace nccw::expr
