#include "nccw/expr.hpp"

#include <numeric>
#include <sstream>

namespace nccw::expr {

std::optional<int> Fraction::index_on(int n) const {
  if (den <= 0 || num < 0 || num > den) return std::nullopt;
  long scaled = num * static_cast<long>(n);
  if (scaled % den != 0) return std::nullopt;
  return static_cast<int>(scaled / den);
}

namespace {

AlgebraExpr make(AlgebraNode node) { return AlgebraExpr(std::make_shared<const AlgebraNode>(std::move(node))); }
MorphismExpr make(MorphismNode node) { return MorphismExpr(std::make_shared<const MorphismNode>(std::move(node))); }

const AlgebraExpr& zero_singleton() {
  static const AlgebraExpr z = make(AlgebraNode{});
  return z;
}

void check_dim(const char* what, int n, int lo, int bound) {
  if (n < lo || n > bound)
    throw Error(std::string(what) + " dimension " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                std::to_string(bound) + "]");
}

std::string fraction_string(const Fraction& f) {
  long g = std::gcd(f.num, f.den);
  if (g == 0) g = 1;
  long n = f.num / g, d = f.den / g;
  if (d == 1) return std::to_string(n);
  return std::to_string(n) + "/" + std::to_string(d);
}

bool is_grid_kind(AlgebraKind k) {
  return k == AlgebraKind::IntervalTensor || k == AlgebraKind::OpenCubeTensor ||
         k == AlgebraKind::SphereTensor || k == AlgebraKind::HalfOpenTensor;
}

}  // namespace

// --- AlgebraExpr --------------------------------------------------------------

AlgebraExpr::AlgebraExpr() : node_(zero_singleton().node_) {}

AlgebraKind AlgebraExpr::kind() const { return node_->kind; }
const std::vector<int>& AlgebraExpr::blocks() const { return node_->blocks; }
int AlgebraExpr::cube_dim() const { return node_->n; }

const AlgebraExpr& AlgebraExpr::base() const {
  if (node_->children.empty()) throw Error("expression " + to_string() + " has no base");
  return node_->children[0];
}

const AlgebraExpr& AlgebraExpr::right() const {
  if (node_->children.size() < 2) throw Error("expression " + to_string() + " is not a direct sum");
  return node_->children[1];
}

const MorphismExpr& AlgebraExpr::first_map() const {
  if (node_->maps.empty()) throw Error("expression " + to_string() + " carries no morphism");
  return node_->maps[0];
}

const MorphismExpr& AlgebraExpr::second_map() const {
  if (node_->maps.size() < 2) throw Error("expression " + to_string() + " carries no second morphism");
  return node_->maps[1];
}

std::string AlgebraExpr::to_string() const {
  const auto& n = *node_;
  switch (n.kind) {
    case AlgebraKind::Zero:
      return "0";
    case AlgebraKind::FiniteDim: {
      std::string s;
      for (std::size_t i = 0; i < n.blocks.size(); ++i) s += (i ? " + M" : "M") + std::to_string(n.blocks[i]);
      return s;
    }
    case AlgebraKind::IntervalTensor:
      return "C(I^" + std::to_string(n.n) + ", " + n.children[0].to_string() + ")";
    case AlgebraKind::OpenCubeTensor:
      return "C0(I^" + std::to_string(n.n) + ", " + n.children[0].to_string() + ")";
    case AlgebraKind::SphereTensor:
      return "C(S^" + std::to_string(n.n) + ", " + n.children[0].to_string() + ")";
    case AlgebraKind::HalfOpenTensor:
      return "Cone(" + n.children[0].to_string() + ")";
    case AlgebraKind::DirectSum:
      return "(" + n.children[0].to_string() + " (+) " + n.children[1].to_string() + ")";
    case AlgebraKind::Pullback:
      return "Pullback(" + n.maps[0].to_string() + ", " + n.maps[1].to_string() + ")";
    case AlgebraKind::Cylinder:
      return "Cyl(" + n.maps[0].to_string() + ")";
    case AlgebraKind::MappingCone:
      return "MCone(" + n.maps[0].to_string() + ")";
  }
  return "?";
}

bool AlgebraExpr::operator==(const AlgebraExpr& o) const {
  if (node_ == o.node_) return true;
  const auto& a = *node_;
  const auto& b = *o.node_;
  return a.kind == b.kind && a.blocks == b.blocks && a.n == b.n && a.children == b.children && a.maps == b.maps;
}

// --- MorphismExpr -------------------------------------------------------------

MorphismKind MorphismExpr::kind() const { return node_->kind; }
const AlgebraExpr& MorphismExpr::domain() const { return node_->domain; }
const AlgebraExpr& MorphismExpr::codomain() const { return node_->codomain; }

std::string MorphismExpr::to_string() const {
  const auto& n = *node_;
  switch (n.kind) {
    case MorphismKind::Identity:
      return "id(" + n.domain.to_string() + ")";
    case MorphismKind::Zero:
      return "zero(" + n.domain.to_string() + " -> " + n.codomain.to_string() + ")";
    case MorphismKind::Compose:
      return "(" + n.children[0].to_string() + " . " + n.children[1].to_string() + ")";
    case MorphismKind::Evaluation:
      return "ev(" + n.domain.to_string() + ", " + fraction_string(n.point) + ")";
    case MorphismKind::BoundaryRestrict:
      return "bnd(" + n.domain.to_string() + ")";
    case MorphismKind::ProjectionFirst:
      return "pr1(" + n.domain.to_string() + ")";
    case MorphismKind::ProjectionSecond:
      return "pr2(" + n.domain.to_string() + ")";
    case MorphismKind::ConstantEmbed:
      return "const(" + n.domain.to_string() + ", " + std::to_string(n.codomain.cube_dim()) + ")";
    case MorphismKind::Suspended:
      return "susp(" + n.children[0].to_string() + ")";
    case MorphismKind::BlockMap: {
      std::string s = "blocks(" + n.domain.to_string() + " -> " + n.codomain.to_string() + ", [";
      for (std::size_t t = 0; t < n.multiplicity.size(); ++t) {
        s += t ? ", [" : "[";
        for (std::size_t i = 0; i < n.multiplicity[t].size(); ++i)
          s += (i ? ", " : "") + std::to_string(n.multiplicity[t][i]);
        s += "]";
      }
      s += "]";
      if (n.unital) s += ", unital";
      for (const auto& w : n.windings)
        s += ", wind(" + std::to_string(w.target_block) + ", " + std::to_string(w.turns) + ")";
      return s + ")";
    }
    case MorphismKind::UserNamed:
      return n.name;
    case MorphismKind::Pairing:
      return "pair(" + n.children[0].to_string() + ", " + n.children[1].to_string() + ")";
    case MorphismKind::ExtendByZero:
      return "extend(" + n.domain.to_string() + " -> " + n.codomain.to_string() + ")";
    case MorphismKind::LoopRotation:
      return "rotate(" + n.domain.to_string() + ", " + fraction_string(n.point) + ")";
  }
  return "?";
}

bool MorphismExpr::operator==(const MorphismExpr& o) const {
  if (node_ == o.node_) return true;
  const auto& a = *node_;
  const auto& b = *o.node_;
  if (a.kind != b.kind || !(a.domain == b.domain) || !(a.codomain == b.codomain) || !(a.children == b.children))
    return false;
  if (!(a.point == b.point) || a.multiplicity != b.multiplicity || a.unital != b.unital || a.name != b.name)
    return false;
  if (a.windings.size() != b.windings.size()) return false;
  for (std::size_t i = 0; i < a.windings.size(); ++i) {
    const auto& x = a.windings[i];
    const auto& y = b.windings[i];
    if (x.target_block != y.target_block || x.turns != y.turns || x.generator.rows() != y.generator.rows() ||
        x.generator.cols() != y.generator.cols() || x.generator != y.generator)
      return false;
  }
  if (a.target.has_value() != b.target.has_value()) return false;
  return !a.target || *a.target == *b.target;
}

// --- algebra constructors -------------------------------------------------------

AlgebraExpr zero_algebra() { return zero_singleton(); }

AlgebraExpr finite_dim(std::vector<int> blocks) {
  if (blocks.empty()) return zero_algebra();
  for (int b : blocks)
    if (b < 1) throw Error("block sizes must be >= 1, got " + std::to_string(b));
  AlgebraNode n;
  n.kind = AlgebraKind::FiniteDim;
  n.blocks = std::move(blocks);
  return make(std::move(n));
}

namespace {

AlgebraExpr tensor(AlgebraKind kind, int n, AlgebraExpr base) {
  AlgebraNode node;
  node.kind = kind;
  node.n = n;
  node.children = {std::move(base)};
  return make(std::move(node));
}

}  // namespace

AlgebraExpr interval_tensor(int n, AlgebraExpr base, int bound) {
  check_dim("cube", n, 1, bound);
  return tensor(AlgebraKind::IntervalTensor, n, std::move(base));
}

AlgebraExpr open_cube_tensor(int n, AlgebraExpr base, int bound) {
  check_dim("open cube", n, 1, bound);
  return tensor(AlgebraKind::OpenCubeTensor, n, std::move(base));
}

AlgebraExpr sphere_tensor(int n, AlgebraExpr base, int bound) {
  check_dim("sphere", n, 0, bound);
  return tensor(AlgebraKind::SphereTensor, n, std::move(base));
}

AlgebraExpr half_open_tensor(AlgebraExpr base) { return tensor(AlgebraKind::HalfOpenTensor, 1, std::move(base)); }

AlgebraExpr direct_sum(AlgebraExpr left, AlgebraExpr right) {
  AlgebraNode node;
  node.kind = AlgebraKind::DirectSum;
  node.children = {std::move(left), std::move(right)};
  return make(std::move(node));
}

AlgebraExpr apply_functor(Functor kind, const AlgebraExpr& a, int n, int bound) {
  switch (kind) {
    case Functor::Cone:
      return half_open_tensor(a);
    case Functor::Suspension:
      return open_cube_tensor(1, a, bound);
    case Functor::IntervalTensor:
      return interval_tensor(n, a, bound);
    case Functor::OpenCubeTensor:
      return open_cube_tensor(n, a, bound);
    case Functor::SphereTensor:
      return sphere_tensor(n, a, bound);
  }
  throw Error("unknown functor");
}

AlgebraExpr mapping_construction(Mapping kind, const MorphismExpr& f) {
  AlgebraNode node;
  node.kind = kind == Mapping::Cylinder ? AlgebraKind::Cylinder : AlgebraKind::MappingCone;
  node.maps = {f};
  return make(std::move(node));
}

AlgebraExpr pullback_expr(const MorphismExpr& alpha, const MorphismExpr& beta) {
  if (!(alpha.codomain() == beta.codomain()))
    throw Error("pullback legs have different codomains: " + alpha.codomain().to_string() + " vs " +
                beta.codomain().to_string());
  AlgebraNode node;
  node.kind = AlgebraKind::Pullback;
  node.maps = {alpha, beta};
  return make(std::move(node));
}

std::pair<MorphismExpr, MorphismExpr> pullback_legs(const AlgebraExpr& x) {
  switch (x.kind()) {
    case AlgebraKind::Pullback:
      return {x.first_map(), x.second_map()};
    case AlgebraKind::Cylinder: {
      const auto& f = x.first_map();
      return {f, evaluation(interval_tensor(1, f.codomain(), 1), Fraction{1, 1})};
    }
    case AlgebraKind::MappingCone: {
      const auto& f = x.first_map();
      return {f, evaluation(half_open_tensor(f.codomain()), Fraction{1, 1})};
    }
    default:
      throw Error(x.to_string() + " is not a fiber product");
  }
}

std::pair<AlgebraExpr, AlgebraExpr> factors(const AlgebraExpr& x) {
  if (x.kind() == AlgebraKind::DirectSum) return {x.base(), x.right()};
  auto [alpha, beta] = pullback_legs(x);
  return {alpha.domain(), beta.domain()};
}

std::vector<int> finite_blocks(const AlgebraExpr& a) {
  if (a.kind() == AlgebraKind::Zero) return {};
  if (a.kind() != AlgebraKind::FiniteDim) throw Error(a.to_string() + " is not finite-dimensional");
  return a.blocks();
}

// --- morphism constructors --------------------------------------------------------

namespace {

MorphismNode node_of(MorphismKind k, AlgebraExpr dom, AlgebraExpr cod) {
  MorphismNode n;
  n.kind = k;
  n.domain = std::move(dom);
  n.codomain = std::move(cod);
  return n;
}

}  // namespace

MorphismExpr identity(AlgebraExpr a) { return make(node_of(MorphismKind::Identity, a, a)); }

MorphismExpr zero_morphism(AlgebraExpr dom, AlgebraExpr cod) {
  return make(node_of(MorphismKind::Zero, std::move(dom), std::move(cod)));
}

MorphismExpr compose(MorphismExpr g, MorphismExpr f) {
  if (!(g.domain() == f.codomain()))
    throw Error("cannot compose: codomain " + f.codomain().to_string() + " of " + f.to_string() +
                " does not match domain " + g.domain().to_string() + " of " + g.to_string());
  auto n = node_of(MorphismKind::Compose, f.domain(), g.codomain());
  n.children = {std::move(g), std::move(f)};
  return make(std::move(n));
}

MorphismExpr evaluation(AlgebraExpr x, Fraction t) {
  if (t.den <= 0 || t.num < 0 || t.num > t.den) throw Error("evaluation point must lie in [0, 1]");
  if (x.kind() == AlgebraKind::IntervalTensor) {
    if (x.cube_dim() != 1) throw Error("evaluation needs a one-dimensional interval tensor");
  } else if (x.kind() == AlgebraKind::HalfOpenTensor) {
    if (t.num == 0) throw Error("C_0((0,1]) functions are not evaluated at 0");
  } else {
    throw Error("evaluation is defined on C(I, A) and C_0((0,1], A), got " + x.to_string());
  }
  auto n = node_of(MorphismKind::Evaluation, x, x.base());
  n.point = t;
  return make(std::move(n));
}

MorphismExpr boundary_restrict(AlgebraExpr x) {
  if (x.kind() != AlgebraKind::IntervalTensor) throw Error("boundary restriction needs C(I^n, A), got " + x.to_string());
  AlgebraExpr cod = tensor(AlgebraKind::SphereTensor, x.cube_dim() - 1, x.base());
  return make(node_of(MorphismKind::BoundaryRestrict, x, cod));
}

MorphismExpr projection_first(AlgebraExpr x) {
  auto [p, q] = factors(x);
  return make(node_of(MorphismKind::ProjectionFirst, x, p));
}

MorphismExpr projection_second(AlgebraExpr x) {
  auto [p, q] = factors(x);
  return make(node_of(MorphismKind::ProjectionSecond, x, q));
}

MorphismExpr constant_embed(AlgebraExpr a, int n, int bound) {
  AlgebraExpr cod = interval_tensor(n, a, bound);
  return make(node_of(MorphismKind::ConstantEmbed, std::move(a), std::move(cod)));
}

MorphismExpr suspended(MorphismExpr f) {
  auto n = node_of(MorphismKind::Suspended, open_cube_tensor(1, f.domain(), 1), open_cube_tensor(1, f.codomain(), 1));
  n.children = {std::move(f)};
  return make(std::move(n));
}

MorphismExpr block_map(AlgebraExpr dom, AlgebraExpr cod, std::vector<std::vector<int>> multiplicity, bool unital,
                       std::vector<Winding> windings) {
  AlgebraExpr dom_base = dom;
  AlgebraExpr cod_base = cod;
  if (is_grid_kind(dom.kind()) || is_grid_kind(cod.kind())) {
    if (dom.kind() != cod.kind() || dom.cube_dim() != cod.cube_dim())
      throw Error("pointwise block map needs matching grids: " + dom.to_string() + " vs " + cod.to_string());
    dom_base = dom.base();
    cod_base = cod.base();
  }
  auto src = finite_blocks(dom_base);
  auto tgt = finite_blocks(cod_base);
  if (multiplicity.size() != tgt.size()) throw Error("multiplicity needs one row per target block");
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    if (multiplicity[j].size() != src.size()) throw Error("multiplicity needs one column per source block");
    long used = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (multiplicity[j][i] < 0) throw Error("multiplicities must be nonnegative");
      used += static_cast<long>(multiplicity[j][i]) * src[i];
    }
    if (used > tgt[j]) throw Error("multiplicities overflow target block " + std::to_string(j));
    if (unital && used != tgt[j]) throw Error("unital block map must fill target block " + std::to_string(j));
  }
  for (const auto& w : windings) {
    if (w.target_block < 0 || w.target_block >= static_cast<int>(tgt.size()))
      throw Error("winding refers to a missing target block");
    const int size = tgt[w.target_block];
    if (w.generator.rows() != size || w.generator.cols() != size)
      throw Error("winding generator must match the target block size");
    if ((w.generator - w.generator.adjoint()).norm() > 1e-12) throw Error("winding generator must be hermitian");
  }
  auto n = node_of(MorphismKind::BlockMap, std::move(dom), std::move(cod));
  n.multiplicity = std::move(multiplicity);
  n.unital = unital;
  n.windings = std::move(windings);
  return make(std::move(n));
}

MorphismExpr user_named(std::string name, MorphismExpr m) {
  auto n = node_of(MorphismKind::UserNamed, m.domain(), m.codomain());
  n.name = std::move(name);
  n.children = {std::move(m)};
  return make(std::move(n));
}

MorphismExpr pairing(AlgebraExpr target, MorphismExpr first, MorphismExpr second) {
  auto [p, q] = factors(target);
  if (!(first.domain() == second.domain()))
    throw Error("pairing components have different domains: " + first.domain().to_string() + " vs " +
                second.domain().to_string());
  if (!(first.codomain() == p) || !(second.codomain() == q))
    throw Error("pairing components do not land in the factors of " + target.to_string());
  auto n = node_of(MorphismKind::Pairing, first.domain(), target);
  n.children = {std::move(first), std::move(second)};
  return make(std::move(n));
}

MorphismExpr extend_by_zero(AlgebraExpr src, AlgebraExpr dst) {
  bool ok = false;
  if (!(src.base() == dst.base())) throw Error("extension by zero keeps the base algebra");
  if (src.kind() == AlgebraKind::OpenCubeTensor && dst.kind() == AlgebraKind::IntervalTensor)
    ok = src.cube_dim() == dst.cube_dim();
  else if (src.kind() == AlgebraKind::HalfOpenTensor && dst.kind() == AlgebraKind::IntervalTensor)
    ok = dst.cube_dim() == 1;
  else if (src.kind() == AlgebraKind::OpenCubeTensor && dst.kind() == AlgebraKind::HalfOpenTensor)
    ok = src.cube_dim() == 1;
  if (!ok) throw Error("no extension by zero from " + src.to_string() + " to " + dst.to_string());
  return make(node_of(MorphismKind::ExtendByZero, std::move(src), std::move(dst)));
}

MorphismExpr loop_rotation(AlgebraExpr x, Fraction amount) {
  if (x.kind() != AlgebraKind::Pullback) throw Error("rotation acts on an attached 1-cell, got " + x.to_string());
  const auto& cell = x.first_map();
  if (cell.kind() != MorphismKind::BoundaryRestrict || cell.domain().cube_dim() != 1)
    throw Error("rotation needs a 1-cell attached along its boundary");
  if (amount.den <= 0 || amount.num < 0 || amount.num > amount.den) throw Error("rotation amount must lie in [0, 1]");
  auto n = node_of(MorphismKind::LoopRotation, x, x);
  n.point = amount;
  return make(std::move(n));
}

// --- dimensions ---------------------------------------------------------------

namespace {

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

bool structurally_surjective(const MorphismExpr& m) {
  switch (m.kind()) {
    case MorphismKind::Identity:
    case MorphismKind::Evaluation:
    case MorphismKind::BoundaryRestrict:
      return true;
    case MorphismKind::Zero:
      return m.codomain().kind() == AlgebraKind::Zero;
    case MorphismKind::UserNamed:
      return structurally_surjective(m.node().children[0]);
    case MorphismKind::Compose:
      return structurally_surjective(m.node().children[0]) && structurally_surjective(m.node().children[1]);
    default:
      return false;
  }
}

long linear_dim(const AlgebraExpr& a, int resolution) {
  const long n = resolution;
  if (resolution < 1) throw Error("resolution must be >= 1");
  switch (a.kind()) {
    case AlgebraKind::Zero:
      return 0;
    case AlgebraKind::FiniteDim: {
      long d = 0;
      for (int b : a.blocks()) d += static_cast<long>(b) * b;
      return d;
    }
    case AlgebraKind::IntervalTensor:
      return ipow(n + 1, a.cube_dim()) * linear_dim(a.base(), resolution);
    case AlgebraKind::OpenCubeTensor:
      return ipow(n - 1, a.cube_dim()) * linear_dim(a.base(), resolution);
    case AlgebraKind::SphereTensor: {
      long points = a.cube_dim() == 0 ? 2 : ipow(n + 1, a.cube_dim() + 1) - ipow(n - 1, a.cube_dim() + 1);
      return points * linear_dim(a.base(), resolution);
    }
    case AlgebraKind::HalfOpenTensor:
      return n * linear_dim(a.base(), resolution);
    case AlgebraKind::DirectSum:
      return linear_dim(a.base(), resolution) + linear_dim(a.right(), resolution);
    case AlgebraKind::Cylinder:
    case AlgebraKind::MappingCone:
    case AlgebraKind::Pullback: {
      auto [alpha, beta] = pullback_legs(a);
      if (!structurally_surjective(alpha) && !structurally_surjective(beta))
        throw Error("linear_dim: neither leg of " + a.to_string() + " is structurally surjective");
      return linear_dim(alpha.domain(), resolution) + linear_dim(beta.domain(), resolution) -
             linear_dim(alpha.codomain(), resolution);
    }
  }
  throw Error("linear_dim: unsupported node");
}

}  // namespace nccw::expr
