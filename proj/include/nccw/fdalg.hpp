#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nccw/error.hpp"
#include "nccw/linalg.hpp"

// Finite-dimensional *-algebras: direct sums of complex matrix blocks,
// optionally cut down to a *-closed linear subspace (fiber products).
//
// Elements are stored either blockwise (Element) or as an "ambient" vector
// that concatenates the row-major entries of every block.

namespace nccw::fd {

struct Block {
  int size = 1;
  std::string label;
};

/// A block algebra M_{n_1} + ... + M_{n_k}, possibly restricted to a
/// constraint subspace given by orthonormal ambient columns.
class Algebra {
 public:
  Algebra() = default;
  explicit Algebra(const std::vector<int>& sizes);
  explicit Algebra(std::vector<Block> blocks, std::optional<Matrix> constraint = std::nullopt);

  const std::vector<Block>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_size(int b) const { return blocks_[b].size; }
  int block_offset(int b) const { return offsets_[b]; }
  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return constraint_ ? static_cast<int>(constraint_->cols()) : ambient_dim_; }
  bool constrained() const { return constraint_.has_value(); }
  std::vector<int> sizes() const;

  /// Orthonormal basis of the admissible subspace, one ambient column per
  /// basis element. Matrix units when unconstrained.
  Matrix basis() const;

  /// Ambient block algebra with the constraint dropped.
  Algebra ambient() const { return Algebra(blocks_); }
  Algebra with_constraint(Matrix basis) const;

  Vector product(const Vector& x, const Vector& y) const;
  Vector adjoint(const Vector& x) const;
  /// Max over blocks of the operator norm.
  double norm(const Vector& x) const;
  Matrix block_of(const Vector& x, int b) const;
  /// Unit of the ambient block algebra.
  Vector unit() const;
  /// Distance of x from the admissible subspace.
  double constraint_residual(const Vector& x) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int ambient_dim_ = 0;
  std::optional<Matrix> constraint_;
};

/// An element stored as one matrix per block.
struct Element {
  std::vector<Matrix> blocks;
};

Element to_element(const Algebra& a, const Vector& x);
Vector to_vector(const Algebra& a, const Element& e);

enum class Op { Mul, Add, Adjoint };
Element algebra_op(const Element& x, const Element& y, Op op);
double norm(const Element& x);

/// Where a target block takes its content from: the listed source blocks
/// sit on the diagonal at the given offsets (zero padding elsewhere) and the
/// result is conjugated by `unitary` when present.
struct Placement {
  int source = 0;
  int offset = 0;
  bool operator==(const Placement&) const = default;
};

struct Route {
  std::vector<Placement> placements;
  std::optional<Matrix> unitary;
};

/// A linear map between block algebras. Structural *-homomorphisms keep
/// their routing table; solved maps (mediating morphisms) are dense only.
class Morphism {
 public:
  Morphism() = default;
  Morphism(Algebra domain, Algebra codomain, std::vector<Route> routes, std::string provenance);
  Morphism(Algebra domain, Algebra codomain, Matrix dense, std::string provenance);

  const Algebra& domain() const { return domain_; }
  const Algebra& codomain() const { return codomain_; }
  const std::string& provenance() const { return provenance_; }
  bool routed() const { return routes_.has_value(); }
  const std::vector<Route>& routes() const { return *routes_; }
  /// Ambient matrix, codomain ambient x domain ambient.
  const Matrix& dense() const { return dense_; }

  Vector apply(const Vector& x) const;
  /// Images of the domain basis, as ambient codomain columns.
  Matrix on_basis() const;
  /// The map written in the orthonormal bases of domain and codomain.
  Matrix in_bases() const;

  Morphism with_provenance(std::string p) const;
  Morphism with_codomain(Algebra cod) const;
  Morphism with_domain(Algebra dom) const;

 private:
  Algebra domain_;
  Algebra codomain_;
  std::optional<std::vector<Route>> routes_;
  Matrix dense_;
  std::string provenance_;
};

Morphism compose(const Morphism& g, const Morphism& f);
Morphism identity(const Algebra& a);
Morphism zero_map(const Algebra& dom, const Algebra& cod);

/// Routing for one target block of the composite g∘f.
Route compose_route(const Route& g_route, const std::vector<Route>& f_routes,
                    const Algebra& middle, int target_size);

Matrix route_dense(const std::vector<Route>& routes, const Algebra& dom, const Algebra& cod);
Vector route_apply(const std::vector<Route>& routes, const Algebra& dom, const Algebra& cod,
                   const Vector& x);

/// *-homomorphism between block algebras in structure-theorem form.
struct MultiplicityMorphism {
  std::vector<int> source_sizes;
  std::vector<int> target_sizes;
  Eigen::MatrixXi multiplicity;  // rows: target blocks, cols: source blocks
  std::vector<std::optional<Matrix>> unitaries;
  bool unital = false;

  MultiplicityMorphism() = default;
  MultiplicityMorphism(std::vector<int> src, std::vector<int> tgt, Eigen::MatrixXi mult,
                       bool unital_flag = false);

  /// Throws Error when multiplicities overflow a target block, the unital
  /// flag is violated, or a unitary fails the 1e-12 check.
  void validate() const;
  std::vector<Route> routes() const;
  Morphism concrete() const;
  int total_multiplicity() const { return multiplicity.sum(); }
};

Element apply(const MultiplicityMorphism& m, const Element& a);
MultiplicityMorphism compose(const MultiplicityMorphism& g, const MultiplicityMorphism& f);

/// How a spanning vector of a generated subalgebra arose.
struct Word {
  enum class Kind { Generator, Product, Adjoint } kind = Kind::Generator;
  int left = -1;
  int right = -1;
};

struct Generated {
  Matrix basis;                  // orthonormal ambient columns
  std::vector<Vector> spanning;  // independent spanning vectors
  std::vector<Word> words;       // provenance of each spanning vector
  int dim() const { return static_cast<int>(basis.cols()); }
};

/// Smallest *-closed, product-closed subspace containing gens (no unit
/// adjoined). Span-growth iteration to a fixed point.
Generated generated_subalgebra(const Algebra& a, const std::vector<Vector>& gens,
                               double rel = 1e-7);

struct Quotient {
  Algebra algebra;
  Morphism map;
};

/// Kills the listed blocks; A must be unconstrained.
Quotient quotient_by_blocks(const Algebra& a, const std::vector<int>& ideal_blocks);

/// Random multiplicity morphism out of an ambient block algebra, with
/// random unitaries on each target block. Deterministic in `seed`.
MultiplicityMorphism random_multiplicity(const std::vector<int>& source_sizes, unsigned long long seed,
                                         int max_targets = 2);

}  // namespace nccw::fd
