#include "nccw/fdalg.hpp"

#include <cmath>
#include <numbers>

#include "nccw/random.hpp"

namespace nccw {

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix Rng::gaussian(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::unitary(int n) {
  Matrix g = gaussian(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution does not depend on QR sign
  // conventions.
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h ^ (seed * 0x9E3779B97F4A7C15ULL);
}

}  // namespace nccw

namespace nccw::fd {

Algebra::Algebra(const std::vector<int>& sizes) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < sizes.size(); ++i) blocks.push_back({sizes[i], "M" + std::to_string(sizes[i])});
  *this = Algebra(std::move(blocks));
}

Algebra::Algebra(std::vector<Block> blocks, std::optional<Matrix> constraint)
    : blocks_(std::move(blocks)), constraint_(std::move(constraint)) {
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.size < 1) throw Error("block size must be >= 1, got " + std::to_string(b.size));
    offsets_.push_back(ambient_dim_);
    ambient_dim_ += b.size * b.size;
  }
  if (constraint_ && constraint_->rows() != ambient_dim_)
    throw Error("constraint basis has wrong ambient dimension");
}

std::vector<int> Algebra::sizes() const {
  std::vector<int> s;
  for (const auto& b : blocks_) s.push_back(b.size);
  return s;
}

Matrix Algebra::basis() const {
  if (constraint_) return *constraint_;
  return Matrix::Identity(ambient_dim_, ambient_dim_);
}

Algebra Algebra::with_constraint(Matrix basis) const { return Algebra(blocks_, std::move(basis)); }

Matrix Algebra::block_of(const Vector& x, int b) const {
  const int n = blocks_[b].size;
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = x[offsets_[b] + r * n + c];
  return m;
}

namespace {

void store_block(Vector& x, int offset, const Matrix& m) {
  const auto n = m.rows();
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) x[offset + r * n + c] = m(r, c);
}

}  // namespace

Vector Algebra::product(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(ambient_dim_);
  for (int b = 0; b < block_count(); ++b) store_block(out, offsets_[b], block_of(x, b) * block_of(y, b));
  return out;
}

Vector Algebra::adjoint(const Vector& x) const {
  Vector out = Vector::Zero(ambient_dim_);
  for (int b = 0; b < block_count(); ++b) store_block(out, offsets_[b], block_of(x, b).adjoint());
  return out;
}

double Algebra::norm(const Vector& x) const {
  double best = 0.0;
  for (int b = 0; b < block_count(); ++b) best = std::max(best, linalg::operator_norm(block_of(x, b)));
  return best;
}

Vector Algebra::unit() const {
  Vector out = Vector::Zero(ambient_dim_);
  for (int b = 0; b < block_count(); ++b)
    store_block(out, offsets_[b], Matrix::Identity(blocks_[b].size, blocks_[b].size));
  return out;
}

double Algebra::constraint_residual(const Vector& x) const {
  if (!constraint_) return 0.0;
  return (x - *constraint_ * (constraint_->adjoint() * x)).norm();
}

Element to_element(const Algebra& a, const Vector& x) {
  if (x.size() != a.ambient_dim()) throw Error("vector does not match algebra shape");
  Element e;
  for (int b = 0; b < a.block_count(); ++b) e.blocks.push_back(a.block_of(x, b));
  return e;
}

Vector to_vector(const Algebra& a, const Element& e) {
  if (static_cast<int>(e.blocks.size()) != a.block_count()) throw Error("element has wrong block count");
  Vector x = Vector::Zero(a.ambient_dim());
  for (int b = 0; b < a.block_count(); ++b) {
    if (e.blocks[b].rows() != a.block_size(b) || e.blocks[b].cols() != a.block_size(b))
      throw Error("element block " + std::to_string(b) + " has wrong shape");
    store_block(x, a.block_offset(b), e.blocks[b]);
  }
  return x;
}

Element algebra_op(const Element& x, const Element& y, Op op) {
  if (op == Op::Adjoint) {
    Element out;
    for (const auto& b : x.blocks) out.blocks.push_back(b.adjoint());
    return out;
  }
  if (x.blocks.size() != y.blocks.size()) throw Error("shape mismatch: different block counts");
  Element out;
  for (std::size_t b = 0; b < x.blocks.size(); ++b) {
    if (x.blocks[b].rows() != y.blocks[b].rows())
      throw Error("shape mismatch in block " + std::to_string(b));
    out.blocks.push_back(op == Op::Mul ? Matrix(x.blocks[b] * y.blocks[b]) : Matrix(x.blocks[b] + y.blocks[b]));
  }
  return out;
}

double norm(const Element& x) {
  double best = 0.0;
  for (const auto& b : x.blocks) best = std::max(best, linalg::operator_norm(b));
  return best;
}

// --- routes -----------------------------------------------------------------

namespace {

void check_route(const Route& r, const Algebra& dom, int target_size) {
  for (const auto& p : r.placements) {
    if (p.source < 0 || p.source >= dom.block_count()) throw Error("route references missing source block");
    if (p.offset < 0 || p.offset + dom.block_size(p.source) > target_size)
      throw Error("route placement overflows target block");
  }
  if (r.unitary && (r.unitary->rows() != target_size || r.unitary->cols() != target_size))
    throw Error("route unitary has wrong size");
}

}  // namespace

Matrix route_dense(const std::vector<Route>& routes, const Algebra& dom, const Algebra& cod) {
  Matrix m = Matrix::Zero(cod.ambient_dim(), dom.ambient_dim());
  for (int t = 0; t < cod.block_count(); ++t) {
    const Route& route = routes[t];
    const int size = cod.block_size(t);
    const int row0 = cod.block_offset(t);
    for (const auto& p : route.placements) {
      const int n = dom.block_size(p.source);
      const int col0 = dom.block_offset(p.source);
      if (!route.unitary) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m(row0 + (p.offset + i) * size + p.offset + j, col0 + i * n + j) = 1.0;
        continue;
      }
      const Matrix& u = *route.unitary;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c)
              m(row0 + r * size + c, col0 + i * n + j) += u(r, p.offset + i) * std::conj(u(c, p.offset + j));
    }
  }
  return m;
}

Vector route_apply(const std::vector<Route>& routes, const Algebra& dom, const Algebra& cod,
                   const Vector& x) {
  Vector out = Vector::Zero(cod.ambient_dim());
  for (int t = 0; t < cod.block_count(); ++t) {
    const Route& route = routes[t];
    if (route.placements.empty()) continue;
    const int size = cod.block_size(t);
    Matrix block = Matrix::Zero(size, size);
    for (const auto& p : route.placements) {
      const int n = dom.block_size(p.source);
      block.block(p.offset, p.offset, n, n) = dom.block_of(x, p.source);
    }
    if (route.unitary) block = *route.unitary * block * route.unitary->adjoint();
    store_block(out, cod.block_offset(t), block);
  }
  return out;
}

Route compose_route(const Route& g_route, const std::vector<Route>& f_routes, const Algebra& middle,
                    int target_size) {
  Route out;
  bool any_unitary = g_route.unitary.has_value();
  for (const auto& gp : g_route.placements)
    if (f_routes[gp.source].unitary) any_unitary = true;
  for (const auto& gp : g_route.placements)
    for (const auto& fp : f_routes[gp.source].placements) out.placements.push_back({fp.source, gp.offset + fp.offset});
  if (any_unitary) {
    Matrix w = Matrix::Identity(target_size, target_size);
    for (const auto& gp : g_route.placements) {
      const auto& fr = f_routes[gp.source];
      if (!fr.unitary) continue;
      const int n = middle.block_size(gp.source);
      w.block(gp.offset, gp.offset, n, n) = *fr.unitary;
    }
    out.unitary = g_route.unitary ? Matrix(*g_route.unitary * w) : w;
  }
  return out;
}

// --- morphisms --------------------------------------------------------------

Morphism::Morphism(Algebra domain, Algebra codomain, std::vector<Route> routes, std::string provenance)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), provenance_(std::move(provenance)) {
  if (static_cast<int>(routes.size()) != codomain_.block_count())
    throw Error("routing table size does not match codomain block count");
  for (int t = 0; t < codomain_.block_count(); ++t) check_route(routes[t], domain_, codomain_.block_size(t));
  dense_ = route_dense(routes, domain_, codomain_);
  routes_ = std::move(routes);
}

Morphism::Morphism(Algebra domain, Algebra codomain, Matrix dense, std::string provenance)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), dense_(std::move(dense)),
      provenance_(std::move(provenance)) {
  if (dense_.rows() != codomain_.ambient_dim() || dense_.cols() != domain_.ambient_dim())
    throw Error("dense map has wrong shape");
}

Vector Morphism::apply(const Vector& x) const {
  if (x.size() != domain_.ambient_dim()) throw Error("shape mismatch applying morphism " + provenance_);
  if (routes_) return route_apply(*routes_, domain_, codomain_, x);
  return dense_ * x;
}

Matrix Morphism::on_basis() const { return dense_ * domain_.basis(); }

Matrix Morphism::in_bases() const { return codomain_.basis().adjoint() * on_basis(); }

Morphism Morphism::with_provenance(std::string p) const {
  Morphism m = *this;
  m.provenance_ = std::move(p);
  return m;
}

Morphism Morphism::with_codomain(Algebra cod) const {
  if (cod.ambient_dim() != codomain_.ambient_dim() || cod.block_count() != codomain_.block_count())
    throw Error("codomain replacement changes the ambient shape");
  Morphism m = *this;
  m.codomain_ = std::move(cod);
  return m;
}

Morphism Morphism::with_domain(Algebra dom) const {
  if (dom.ambient_dim() != domain_.ambient_dim() || dom.block_count() != domain_.block_count())
    throw Error("domain replacement changes the ambient shape");
  Morphism m = *this;
  m.domain_ = std::move(dom);
  return m;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (g.domain().ambient_dim() != f.codomain().ambient_dim() ||
      g.domain().block_count() != f.codomain().block_count())
    throw Error("cannot compose " + g.provenance() + " after " + f.provenance() + ": shape mismatch");
  std::string prov = g.provenance() + " . " + f.provenance();
  if (g.routed() && f.routed()) {
    std::vector<Route> routes;
    routes.reserve(g.codomain().block_count());
    for (int t = 0; t < g.codomain().block_count(); ++t)
      routes.push_back(compose_route(g.routes()[t], f.routes(), f.codomain(), g.codomain().block_size(t)));
    return Morphism(f.domain(), g.codomain(), std::move(routes), prov);
  }
  return Morphism(f.domain(), g.codomain(), Matrix(g.dense() * f.dense()), prov);
}

Morphism identity(const Algebra& a) {
  std::vector<Route> routes;
  for (int b = 0; b < a.block_count(); ++b) routes.push_back({{{b, 0}}, std::nullopt});
  return Morphism(a, a, std::move(routes), "id");
}

Morphism zero_map(const Algebra& dom, const Algebra& cod) {
  return Morphism(dom, cod, std::vector<Route>(cod.block_count()), "0");
}

// --- multiplicity morphisms ---------------------------------------------------

MultiplicityMorphism::MultiplicityMorphism(std::vector<int> src, std::vector<int> tgt, Eigen::MatrixXi mult,
                                           bool unital_flag)
    : source_sizes(std::move(src)), target_sizes(std::move(tgt)), multiplicity(std::move(mult)),
      unitaries(target_sizes.size()), unital(unital_flag) {
  validate();
}

void MultiplicityMorphism::validate() const {
  if (multiplicity.rows() != static_cast<int>(target_sizes.size()) ||
      multiplicity.cols() != static_cast<int>(source_sizes.size()))
    throw Error("multiplicity matrix shape does not match block lists");
  if (unitaries.size() != target_sizes.size()) throw Error("one unitary slot per target block required");
  for (std::size_t j = 0; j < target_sizes.size(); ++j) {
    long used = 0;
    for (std::size_t i = 0; i < source_sizes.size(); ++i) {
      int m = multiplicity(static_cast<int>(j), static_cast<int>(i));
      if (m < 0) throw Error("negative multiplicity");
      used += static_cast<long>(m) * source_sizes[i];
    }
    if (used > target_sizes[j])
      throw Error("multiplicities overflow target block " + std::to_string(j) + ": " + std::to_string(used) +
                  " > " + std::to_string(target_sizes[j]));
    if (unital && used != target_sizes[j])
      throw Error("unital morphism must fill target block " + std::to_string(j));
    if (const auto& u = unitaries[j]) {
      if (u->rows() != target_sizes[j] || u->cols() != target_sizes[j]) throw Error("unitary has wrong size");
      double err = (*u * u->adjoint() - Matrix::Identity(u->rows(), u->cols())).norm();
      if (err > 1e-12) throw Error("unitary check failed, residual " + std::to_string(err));
    }
  }
}

std::vector<Route> MultiplicityMorphism::routes() const {
  std::vector<Route> out;
  for (std::size_t j = 0; j < target_sizes.size(); ++j) {
    Route r;
    int offset = 0;
    for (std::size_t i = 0; i < source_sizes.size(); ++i)
      for (int k = 0; k < multiplicity(static_cast<int>(j), static_cast<int>(i)); ++k) {
        r.placements.push_back({static_cast<int>(i), offset});
        offset += source_sizes[i];
      }
    r.unitary = unitaries[j];
    out.push_back(std::move(r));
  }
  return out;
}

Morphism MultiplicityMorphism::concrete() const {
  return Morphism(Algebra(source_sizes), Algebra(target_sizes), routes(), "blocks");
}

Element apply(const MultiplicityMorphism& m, const Element& a) {
  Algebra dom(m.source_sizes);
  Algebra cod(m.target_sizes);
  return to_element(cod, route_apply(m.routes(), dom, cod, to_vector(dom, a)));
}

MultiplicityMorphism compose(const MultiplicityMorphism& g, const MultiplicityMorphism& f) {
  if (g.source_sizes != f.target_sizes) throw Error("cannot compose multiplicity morphisms: block mismatch");
  MultiplicityMorphism out;
  out.source_sizes = f.source_sizes;
  out.target_sizes = g.target_sizes;
  out.multiplicity = g.multiplicity * f.multiplicity;
  out.unital = g.unital && f.unital;
  out.unitaries.resize(g.target_sizes.size());

  Algebra middle(f.target_sizes);
  auto g_routes = g.routes();
  auto f_routes = f.routes();
  auto canonical = out.routes();
  for (std::size_t t = 0; t < g.target_sizes.size(); ++t) {
    const int size = g.target_sizes[t];
    Route actual = compose_route(g_routes[t], f_routes, middle, size);
    // Permutation taking the canonical (grouped by source) layout to the
    // layout produced by composition.
    std::vector<Placement> slots = canonical[t].placements;
    std::vector<bool> taken(slots.size(), false);
    Matrix perm = Matrix::Zero(size, size);
    std::vector<bool> row_used(size, false);
    bool identity_perm = true;
    for (const auto& p : actual.placements) {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (taken[s] || slots[s].source != p.source) continue;
        taken[s] = true;
        const int n = f.source_sizes[p.source];
        if (slots[s].offset != p.offset) identity_perm = false;
        for (int r = 0; r < n; ++r) {
          perm(p.offset + r, slots[s].offset + r) = 1.0;
          row_used[p.offset + r] = true;
        }
        break;
      }
    }
    // Padding rows map to the remaining padding columns in order.
    std::vector<bool> col_used(size, false);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c)
        if (perm(r, c) != 0.0) col_used[c] = true;
    int next_col = 0;
    for (int r = 0; r < size; ++r) {
      if (row_used[r]) continue;
      while (col_used[next_col]) ++next_col;
      perm(r, next_col) = 1.0;
      if (r != next_col) identity_perm = false;
      col_used[next_col] = true;
    }
    if (actual.unitary)
      out.unitaries[t] = Matrix(*actual.unitary * perm);
    else if (!identity_perm)
      out.unitaries[t] = perm;
  }
  return out;
}

MultiplicityMorphism random_multiplicity(const std::vector<int>& source_sizes, unsigned long long seed,
                                         int max_targets) {
  Rng rng(seed);
  const int targets = 1 + rng.below(max_targets);
  const int sources = static_cast<int>(source_sizes.size());
  Eigen::MatrixXi mult = Eigen::MatrixXi::Zero(targets, sources);
  std::vector<int> target_sizes(targets, 0);
  for (int t = 0; t < targets; ++t) {
    for (int s = 0; s < sources; ++s) {
      mult(t, s) = rng.below(2);
      target_sizes[t] += mult(t, s) * source_sizes[s];
    }
    if (target_sizes[t] == 0) {
      mult(t, rng.below(sources)) = 1;
      target_sizes[t] = 0;
      for (int s = 0; s < sources; ++s) target_sizes[t] += mult(t, s) * source_sizes[s];
    }
    target_sizes[t] += rng.below(2);  // optional zero padding
  }
  MultiplicityMorphism m(source_sizes, target_sizes, mult, false);
  for (int t = 0; t < targets; ++t) m.unitaries[t] = rng.unitary(target_sizes[t]);
  m.validate();
  return m;
}

// --- generated subalgebra -----------------------------------------------------

namespace {

struct SpanBuilder {
  Matrix onb;  // orthonormal columns
  double rel;
  int ambient;

  bool try_add(const Vector& v) {
    double scale = v.norm();
    if (scale < 1e-12) return false;
    Vector r = v;
    if (onb.cols()) {
      // Two passes of Gram-Schmidt for stability.
      r -= onb * (onb.adjoint() * r);
      r -= onb * (onb.adjoint() * r);
    }
    if (r.norm() <= rel * scale) return false;
    Matrix next(ambient, onb.cols() + 1);
    if (onb.cols()) next.leftCols(onb.cols()) = onb;
    next.col(onb.cols()) = r / r.norm();
    onb = std::move(next);
    return true;
  }
};

}  // namespace

Generated generated_subalgebra(const Algebra& a, const std::vector<Vector>& gens, double rel) {
  Generated out;
  SpanBuilder span{Matrix(a.ambient_dim(), 0), rel, a.ambient_dim()};
  auto add = [&](Vector v, Word w) {
    if (span.try_add(v)) {
      out.spanning.push_back(std::move(v));
      out.words.push_back(w);
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != a.ambient_dim()) throw Error("generator does not belong to the algebra");
    add(gens[i], {Word::Kind::Generator, static_cast<int>(i), -1});
  }
  // Every pair is multiplied once; newly added vectors are paired with all
  // earlier ones on the next sweep.
  std::size_t done = 0;
  while (done < out.spanning.size()) {
    const std::size_t current = out.spanning.size();
    for (std::size_t i = done; i < current; ++i) {
      add(a.adjoint(out.spanning[i]), {Word::Kind::Adjoint, static_cast<int>(i), -1});
      for (std::size_t j = 0; j <= i; ++j) {
        add(a.product(out.spanning[i], out.spanning[j]),
            {Word::Kind::Product, static_cast<int>(i), static_cast<int>(j)});
        if (i != j)
          add(a.product(out.spanning[j], out.spanning[i]),
              {Word::Kind::Product, static_cast<int>(j), static_cast<int>(i)});
      }
    }
    done = current;
  }
  out.basis = span.onb;
  return out;
}

Quotient quotient_by_blocks(const Algebra& a, const std::vector<int>& ideal_blocks) {
  if (a.constrained()) throw Error("quotient_by_blocks requires an unconstrained block algebra");
  std::vector<bool> killed(a.block_count(), false);
  for (int b : ideal_blocks) {
    if (b < 0 || b >= a.block_count()) throw Error("ideal block index " + std::to_string(b) + " out of range");
    killed[b] = true;
  }
  std::vector<Block> kept;
  std::vector<Route> routes;
  for (int b = 0; b < a.block_count(); ++b) {
    if (killed[b]) continue;
    kept.push_back(a.blocks()[b]);
    routes.push_back({{{b, 0}}, std::nullopt});
  }
  Algebra q(kept);
  return {q, Morphism(a, q, std::move(routes), "quotient")};
}

}  // namespace nccw::fd
