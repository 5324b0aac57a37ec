#include <algorithm>
#include <cmath>
#include <functional>

#include "dsl_internal.hpp"
#include "nccw/puppe.hpp"

namespace nccw::dsl::detail {

using expr::AlgebraExpr;
using expr::AlgebraKind;
using expr::MorphismExpr;

namespace {

[[noreturn]] void error_at(const Term& t, const std::string& message) { throw ParseError(t.loc, message); }

// Runs an expression constructor, relocating its Error to `t`.
template <class F>
auto located(const Term& t, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    error_at(t, e.what());
  }
}

std::optional<int> matrix_size(const std::string& name) {
  if (name == "C") return 1;
  if (name.size() < 2 || name[0] != 'M' || name.size() > 4) return std::nullopt;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  const int k = std::stoi(name.substr(1));
  if (k < 1) return std::nullopt;
  return k;
}

// Positional and keyword arguments of a call, addressed by position or key.
class Args {
 public:
  Args(const Term& call, std::vector<std::string> names) : call_(call), names_(std::move(names)) {
    std::size_t pos = 0;
    bool keyed = false;
    for (const auto& a : call.children) {
      keyed |= !a.key.empty();
      if (a.key.empty()) {
        if (keyed) error_at(a, "positional argument after a keyword argument");
        if (pos >= names_.size()) error_at(a, call.text + " takes at most " + std::to_string(names_.size()) + " arguments");
        by_key_[names_[pos++]] = &a;
        continue;
      }
      if (std::find(names_.begin(), names_.end(), a.key) == names_.end())
        error_at(a, "unknown argument '" + a.key + "' of " + call.text);
      if (by_key_.count(a.key)) error_at(a, "argument '" + a.key + "' given twice");
      by_key_[a.key] = &a;
    }
  }

  const Term* find(const std::string& key) const {
    auto it = by_key_.find(key);
    return it == by_key_.end() ? nullptr : it->second;
  }
  const Term& get(const std::string& key) const {
    if (const Term* t = find(key)) return *t;
    error_at(call_, call_.text + " needs argument '" + key + "'");
  }

 private:
  const Term& call_;
  std::vector<std::string> names_;
  std::map<std::string, const Term*> by_key_;
};

class Elaborator {
 public:
  explicit Elaborator(Script& s) : s_(s) {}

  void statement(const Statement& st);

 private:
  const Binding* lookup(const Term& t) const {
    auto it = s_.bindings.find(t.text);
    return it == s_.bindings.end() ? nullptr : &it->second;
  }

  void declare(const Statement& st, const Term& at, const std::string& name, Binding b) {
    (void)st;
    static const std::vector<std::string> reserved = {"id", "zero", "unital", "_"};
    if (matrix_size(name) || std::find(reserved.begin(), reserved.end(), name) != reserved.end())
      error_at(at, "'" + name + "' is a reserved name");
    if (s_.bindings.count(name)) error_at(at, "'" + name + "' is already defined");
    s_.bindings.emplace(name, std::move(b));
  }

  Term name_term(const Statement& st) const {
    Term t;
    t.text = st.name;
    t.loc = st.loc;
    return t;
  }

  long integer(const Term& t) const {
    if (t.kind != Term::Kind::Number || t.value.imag() != 0.0 || std::floor(t.value.real()) != t.value.real() ||
        std::abs(t.value.real()) > 1e9)
      error_at(t, "expected an integer");
    return static_cast<long>(t.value.real());
  }

  std::complex<double> scalar(const Term& t) const {
    if (t.kind == Term::Kind::Number) return t.value;
    if (t.kind == Term::Kind::Sum) {
      std::complex<double> v = 0.0;
      for (const auto& c : t.children) v += scalar(c);
      return v;
    }
    error_at(t, "expected a number");
  }

  expr::Fraction fraction(const Term& t) const {
    if (t.kind == Term::Kind::Ratio) {
      if (t.den < 0) error_at(t, "negative denominator");
      return {t.num, t.den};
    }
    return {integer(t), 1};
  }

  std::vector<int> int_list(const Term& t) const {
    if (t.kind != Term::Kind::List) error_at(t, "expected a list of integers");
    std::vector<int> out;
    for (const auto& c : t.children) out.push_back(static_cast<int>(integer(c)));
    return out;
  }

  Matrix matrix(const Term& t) const {
    if (t.kind != Term::Kind::List || t.children.empty()) error_at(t, "expected a matrix literal [[...], ...]");
    const auto rows = static_cast<Eigen::Index>(t.children.size());
    Eigen::Index cols = -1;
    Matrix m;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Term& row = t.children[r];
      if (row.kind != Term::Kind::List) error_at(row, "expected a matrix row");
      if (cols < 0) {
        cols = static_cast<Eigen::Index>(row.children.size());
        m = Matrix::Zero(rows, cols);
      }
      if (static_cast<Eigen::Index>(row.children.size()) != cols) error_at(row, "ragged matrix literal");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scalar(row.children[c]);
    }
    return m;
  }

  const cw::Complex& complex(const Term& t) const {
    const Binding* b = t.kind == Term::Kind::Name ? lookup(t) : nullptr;
    if (!b || b->kind != Binding::Kind::Complex) error_at(t, "expected a stage name, got " + print_term(t));
    return *b->complex;
  }

  AlgebraExpr algebra(const Term& t) const;
  MorphismExpr morphism(const Term& t, const std::optional<AlgebraExpr>& dom = std::nullopt,
                        const std::optional<AlgebraExpr>& cod = std::nullopt) const;
  MorphismExpr raw_morphism(const Term& t, const std::optional<AlgebraExpr>& dom,
                            const std::optional<AlgebraExpr>& cod) const;
  MorphismExpr block_map(const Term& t, const std::optional<AlgebraExpr>& dom,
                         const std::optional<AlgebraExpr>& cod) const;

  void stage(const Statement& st);
  Command check(const Term& t) const;
  Command puppe(const Term& t) const;

  Script& s_;
};

AlgebraExpr Elaborator::algebra(const Term& t) const {
  switch (t.kind) {
    case Term::Kind::Number:
      if (t.value == std::complex<double>(0.0, 0.0)) return expr::zero_algebra();
      error_at(t, "the only numeric algebra is 0");
    case Term::Kind::Name: {
      if (auto k = matrix_size(t.text)) return expr::finite_dim({*k});
      const Binding* b = lookup(t);
      if (!b) error_at(t, "unknown name '" + t.text + "'");
      if (b->kind == Binding::Kind::Morphism || b->kind == Binding::Kind::Map)
        error_at(t, "'" + t.text + "' is a morphism, expected an algebra");
      return b->algebra;
    }
    case Term::Kind::Sum: {
      std::vector<AlgebraExpr> parts;
      for (const auto& c : t.children) parts.push_back(algebra(c));
      const bool finite = std::all_of(parts.begin(), parts.end(), [](const AlgebraExpr& a) {
        return a.kind() == AlgebraKind::FiniteDim || a.kind() == AlgebraKind::Zero;
      });
      if (finite) {
        std::vector<int> blocks;
        for (const auto& p : parts)
          for (int b : expr::finite_blocks(p)) blocks.push_back(b);
        return blocks.empty() ? expr::zero_algebra() : expr::finite_dim(blocks);
      }
      AlgebraExpr acc = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) acc = located(t, [&] { return expr::direct_sum(acc, parts[i]); });
      return acc;
    }
    case Term::Kind::Call: {
      const std::string& f = t.text;
      if (f == "cone" || f == "susp") {
        Args a(t, {"of"});
        const AlgebraExpr x = algebra(a.get("of"));
        return located(t, [&] {
          return expr::apply_functor(f == "cone" ? expr::Functor::Cone : expr::Functor::Suspension, x);
        });
      }
      if (f == "cube" || f == "open" || f == "sphere") {
        Args a(t, {"dim", "of"});
        const int k = static_cast<int>(integer(a.get("dim")));
        const AlgebraExpr x = algebra(a.get("of"));
        return located(t, [&] {
          if (f == "cube") return expr::interval_tensor(k, x);
          if (f == "open") return expr::open_cube_tensor(k, x);
          return expr::sphere_tensor(k, x);
        });
      }
      if (f == "sum") {
        Args a(t, {"left", "right"});
        const AlgebraExpr l = algebra(a.get("left"));
        const AlgebraExpr r = algebra(a.get("right"));
        return located(t, [&] { return expr::direct_sum(l, r); });
      }
      if (f == "cyl" || f == "mcone") {
        Args a(t, {"map"});
        const MorphismExpr m = morphism(a.get("map"));
        return located(t, [&] {
          return expr::mapping_construction(f == "cyl" ? expr::Mapping::Cylinder : expr::Mapping::MappingCone, m);
        });
      }
      if (f == "pullback") {
        Args a(t, {"alpha", "beta"});
        const MorphismExpr al = morphism(a.get("alpha"));
        const MorphismExpr be = morphism(a.get("beta"));
        return located(t, [&] { return expr::pullback_expr(al, be); });
      }
      error_at(t, "unknown algebra constructor '" + f + "'");
    }
    default: error_at(t, "expected an algebra, got " + print_term(t));
  }
}

MorphismExpr Elaborator::morphism(const Term& t, const std::optional<AlgebraExpr>& dom,
                                  const std::optional<AlgebraExpr>& cod) const {
  MorphismExpr m = raw_morphism(t, dom, cod);
  if ((dom && !(m.domain() == *dom)) || (cod && !(m.codomain() == *cod))) {
    const std::string want = (dom ? dom->to_string() : "?") + " -> " + (cod ? cod->to_string() : "?");
    error_at(t, print_term(t) + " has type " + m.domain().to_string() + " -> " + m.codomain().to_string() +
                    ", expected " + want);
  }
  return m;
}

MorphismExpr Elaborator::block_map(const Term& t, const std::optional<AlgebraExpr>& dom,
                                   const std::optional<AlgebraExpr>& cod) const {
  if (!dom || !cod) error_at(t, "blocks(...) needs a declared signature");
  if (t.children.empty() || t.children[0].kind != Term::Kind::List) error_at(t, "blocks needs a multiplicity matrix");
  std::vector<std::vector<int>> mult;
  for (const auto& row : t.children[0].children) mult.push_back(int_list(row));
  bool unital = false;
  std::vector<expr::Winding> windings;
  for (std::size_t i = 1; i < t.children.size(); ++i) {
    const Term& a = t.children[i];
    if (a.kind == Term::Kind::Name && a.text == "unital" && a.key.empty()) {
      unital = true;
      continue;
    }
    if (a.kind == Term::Kind::Call && a.text == "wind" && a.key.empty()) {
      Args w(a, {"generator", "turns", "at"});
      expr::Winding wd;
      wd.generator = matrix(w.get("generator"));
      wd.turns = static_cast<int>(integer(w.get("turns")));
      wd.target_block = w.find("at") ? static_cast<int>(integer(*w.find("at"))) : 0;
      windings.push_back(std::move(wd));
      continue;
    }
    error_at(a, "expected 'unital' or wind(K, m)");
  }
  return located(t, [&] { return expr::block_map(*dom, *cod, mult, unital, windings); });
}

MorphismExpr Elaborator::raw_morphism(const Term& t, const std::optional<AlgebraExpr>& dom,
                                      const std::optional<AlgebraExpr>& cod) const {
  if (t.kind == Term::Kind::Name) {
    if (t.text == "id") {
      if (!dom && !cod) error_at(t, "id needs a declared signature; write id(A)");
      return expr::identity(dom ? *dom : *cod);
    }
    if (t.text == "zero") {
      if (!dom || !cod) error_at(t, "zero needs a declared signature; write zero(A, B)");
      return expr::zero_morphism(*dom, *cod);
    }
    const Binding* b = lookup(t);
    if (!b) error_at(t, "unknown name '" + t.text + "'");
    if (!b->morphism) error_at(t, "'" + t.text + "' is an algebra, expected a morphism");
    return *b->morphism;
  }
  if (t.kind != Term::Kind::Call) error_at(t, "expected a morphism, got " + print_term(t));
  const std::string& f = t.text;
  if (f == "blocks") return block_map(t, dom, cod);
  if (f == "compose") {
    if (t.children.size() < 2) error_at(t, "compose needs at least two maps");
    for (const auto& c : t.children)
      if (!c.key.empty()) error_at(c, "compose takes positional arguments");
    MorphismExpr acc = morphism(t.children.back());
    for (std::size_t i = t.children.size() - 1; i-- > 0;) {
      const MorphismExpr g = morphism(t.children[i]);
      acc = located(t.children[i], [&] { return expr::compose(g, acc); });
    }
    return acc;
  }
  if (f == "id") {
    Args a(t, {"of"});
    return expr::identity(algebra(a.get("of")));
  }
  if (f == "zero") {
    Args a(t, {"from", "to"});
    return expr::zero_morphism(algebra(a.get("from")), algebra(a.get("to")));
  }
  if (f == "ev" || f == "rotate") {
    Args a(t, {"on", "at"});
    const AlgebraExpr x = algebra(a.get("on"));
    const expr::Fraction p = fraction(a.get("at"));
    return located(t, [&] { return f == "ev" ? expr::evaluation(x, p) : expr::loop_rotation(x, p); });
  }
  if (f == "boundary" || f == "pr1" || f == "pr2") {
    Args a(t, {"of"});
    const AlgebraExpr x = algebra(a.get("of"));
    return located(t, [&] {
      if (f == "boundary") return expr::boundary_restrict(x);
      return f == "pr1" ? expr::projection_first(x) : expr::projection_second(x);
    });
  }
  if (f == "const") {
    Args a(t, {"of", "dim"});
    const AlgebraExpr x = algebra(a.get("of"));
    const int k = static_cast<int>(integer(a.get("dim")));
    return located(t, [&] { return expr::constant_embed(x, k); });
  }
  if (f == "susp") {
    Args a(t, {"map"});
    const MorphismExpr m = morphism(a.get("map"));
    return located(t, [&] { return expr::suspended(m); });
  }
  if (f == "pair") {
    Args a(t, {"into", "first", "second"});
    const AlgebraExpr x = algebra(a.get("into"));
    const MorphismExpr p = morphism(a.get("first"));
    const MorphismExpr q = morphism(a.get("second"));
    return located(t, [&] { return expr::pairing(x, p, q); });
  }
  if (f == "extend") {
    Args a(t, {"from", "to"});
    const AlgebraExpr x = algebra(a.get("from"));
    const AlgebraExpr y = algebra(a.get("to"));
    return located(t, [&] { return expr::extend_by_zero(x, y); });
  }
  if (f == "rho" || f == "pi" || f == "iota" || f == "sigma") {
    Args a(t, {"stage"});
    const cw::Stage& st = complex(a.get("stage")).top_stage();
    if (!st.sigma) error_at(t, print_term(t) + ": the base stage has no attaching data");
    if (f == "rho") return *st.rho;
    if (f == "pi") return *st.pi;
    if (f == "iota") return *st.iota;
    return *st.sigma;
  }
  error_at(t, "unknown morphism constructor '" + f + "'");
}

void Elaborator::stage(const Statement& st) {
  const Term& t = st.body;
  if (t.kind != Term::Kind::Call || t.text != "attach") error_at(t, "a stage is attach(base, cell F, dim=k, via=sigma)");
  Args a(t, {"base", "cell", "dim", "via"});
  const Term& base = a.get("base");
  std::optional<cw::Complex> x;
  const Binding* b = base.kind == Term::Kind::Name ? lookup(base) : nullptr;
  if (b && b->kind == Binding::Kind::Complex) {
    x = *b->complex;
  } else {
    const AlgebraExpr a0 = algebra(base);
    x = located(base, [&] { return cw::Complex(print_term(base), a0); });
  }
  const Term& cell_term = a.get("cell");
  AlgebraExpr cell;
  if (cell_term.kind == Term::Kind::Cell) {
    Term at = cell_term;
    at.text = cell_term.text;
    if (!cell_term.children.empty()) {
      cell = algebra(cell_term.children[0]);
      if (cell.kind() != AlgebraKind::FiniteDim && cell.kind() != AlgebraKind::Zero)
        error_at(cell_term.children[0], "cell algebras are finite-dimensional");
      Binding cb;
      cb.kind = Binding::Kind::Cell;
      cb.algebra = cell;
      declare(st, cell_term, cell_term.text, std::move(cb));
    } else {
      const Binding* cb = lookup(at);
      if (!cb || cb->kind != Binding::Kind::Cell) error_at(cell_term, "'" + cell_term.text + "' is not a declared cell");
      cell = cb->algebra;
    }
  } else {
    cell = algebra(cell_term);
  }
  const int k = static_cast<int>(integer(a.get("dim")));
  if (k < 1) error_at(a.get("dim"), "cell dimension must be at least 1");
  const AlgebraExpr sphere = located(a.get("dim"), [&] { return expr::sphere_tensor(k - 1, cell, std::max(k, 2)); });
  const MorphismExpr via = morphism(a.get("via"), x->top(), sphere);
  Binding out;
  out.kind = Binding::Kind::Complex;
  out.complex = located(t, [&] { return cw::attach_stage(*x, st.name, cell, k, via, std::max(k, cw::kMaxCellDim)); });
  out.algebra = out.complex->top();
  declare(st, name_term(st), st.name, std::move(out));
}

Command Elaborator::check(const Term& t) const {
  if (t.kind != Term::Kind::Call) error_at(t, "expected a check such as star(f) or pullback(X)");
  Command c;
  c.id = print_term(t);
  c.loc = t.loc;
  const std::string& f = t.text;
  auto trials = [&](const Args& a) {
    if (const Term* tr = a.find("trials")) {
      c.trials = static_cast<int>(integer(*tr));
      if (c.trials < 1) error_at(*tr, "trials must be positive");
    }
  };
  if (f == "star" || f == "mapping" || f == "refine") {
    Args a(t, {"map"});
    c.kind = f == "star" ? Command::Kind::StarHom : f == "mapping" ? Command::Kind::Mapping : Command::Kind::Refine;
    c.maps.push_back(morphism(a.get("map")));
    return c;
  }
  if (f == "complex") {
    Args a(t, {"stage"});
    c.kind = Command::Kind::Complex;
    c.complexes.push_back(complex(a.get("stage")));
    return c;
  }
  if (f == "functor") {
    Args a(t, {"outer", "inner"});
    c.kind = Command::Kind::Functor;
    c.maps = {morphism(a.get("outer")), morphism(a.get("inner"))};
    if (!(c.maps[0].domain() == c.maps[1].codomain())) error_at(t, "functor(f, g) needs f after g to be composable");
    return c;
  }
  if (f == "pullback") {
    c.kind = Command::Kind::Pullback;
    int positional = 0;
    for (const auto& ch : t.children) positional += ch.key.empty();
    if (positional == 1) {
      Args a(t, {"of", "trials"});
      trials(a);
      const AlgebraExpr x = algebra(a.get("of"));
      const auto legs = located(t, [&] { return expr::pullback_legs(x); });
      c.maps = {expr::projection_second(x), expr::projection_first(x), legs.first, legs.second};
      c.algebras.push_back(x);
      return c;
    }
    Args a(t, {"gamma", "delta", "alpha", "beta", "trials"});
    trials(a);
    c.maps = {morphism(a.get("gamma")), morphism(a.get("delta")), morphism(a.get("alpha")), morphism(a.get("beta"))};
    const auto& [g, d, al, be] = std::tie(c.maps[0], c.maps[1], c.maps[2], c.maps[3]);
    if (!(g.domain() == d.domain()) || !(d.codomain() == al.domain()) || !(g.codomain() == be.domain()) ||
        !(al.codomain() == be.codomain()))
      error_at(t, "pullback(gamma, delta, alpha, beta) needs gamma: X -> B, delta: X -> A, alpha: A -> C, beta: B -> C");
    return c;
  }
  if (f == "pushout") {
    c.kind = Command::Kind::Pushout;
    Args a(t, {"alpha", "beta", "gamma", "delta", "trials"});
    trials(a);
    c.maps = {morphism(a.get("alpha")), morphism(a.get("beta")), morphism(a.get("gamma")), morphism(a.get("delta"))};
    const auto& [al, be, g, d] = std::tie(c.maps[0], c.maps[1], c.maps[2], c.maps[3]);
    if (!(al.domain() == be.domain()) || !(be.codomain() == g.domain()) || !(al.codomain() == d.domain()) ||
        !(g.codomain() == d.codomain()))
      error_at(t, "pushout(alpha, beta, gamma, delta) needs alpha: C -> A, beta: C -> B, gamma: B -> X, delta: A -> X");
    return c;
  }
  if (f == "ndr") {
    c.kind = Command::Kind::Ndr;
    Args a(t, {"algebra", "ideal", "u", "phi"});
    const AlgebraExpr b = algebra(a.get("algebra"));
    if (b.kind() != AlgebraKind::FiniteDim) error_at(a.get("algebra"), "NDR data live on a finite-dimensional algebra");
    c.algebras.push_back(b);
    c.ints = int_list(a.get("ideal"));
    const Term& u = a.get("u");
    if (u.kind != Term::Kind::List || u.children.size() != b.blocks().size())
      error_at(u, "u lists one grid point (or _) per block of " + b.to_string());
    for (const auto& p : u.children) {
      if (p.kind == Term::Kind::Name && p.text == "_")
        c.points.push_back(std::nullopt);
      else
        c.points.push_back(fraction(p));
    }
    const Term& phi = a.get("phi");
    if (phi.kind != Term::Kind::List || phi.children.size() < 2) error_at(phi, "phi lists at least two time slices");
    for (const auto& s : phi.children) c.maps.push_back(morphism(s, b, b));
    return c;
  }
  error_at(t, "unknown check '" + f + "'");
}

Command Elaborator::puppe(const Term& t) const {
  if (t.kind != Term::Kind::Call) error_at(t, "expected chain(f, k), cylinder(f) or split(B, ideal=[...])");
  Command c;
  c.id = print_term(t);
  c.loc = t.loc;
  if (t.text == "chain") {
    Args a(t, {"map", "terms"});
    c.kind = Command::Kind::PuppeChain;
    c.maps.push_back(morphism(a.get("map")));
    c.ints.push_back(static_cast<int>(integer(a.get("terms"))));
    if (c.ints[0] < 2) error_at(a.get("terms"), "a chain needs at least 2 terms");
    return c;
  }
  if (t.text == "cylinder") {
    Args a(t, {"map"});
    c.kind = Command::Kind::PuppeCylinder;
    c.maps.push_back(morphism(a.get("map")));
    return c;
  }
  if (t.text == "split") {
    Args a(t, {"algebra", "ideal"});
    c.kind = Command::Kind::PuppeSplit;
    c.algebras.push_back(algebra(a.get("algebra")));
    c.ints = int_list(a.get("ideal"));
    located(t, [&] { return puppe::ideal_inclusion(c.algebras[0], c.ints); });
    return c;
  }
  error_at(t, "unknown puppe construction '" + t.text + "'");
}

void Elaborator::statement(const Statement& st) {
  switch (st.kind) {
    case Statement::Kind::Algebra:
    case Statement::Kind::Cell: {
      Binding b;
      b.kind = st.kind == Statement::Kind::Cell ? Binding::Kind::Cell : Binding::Kind::Algebra;
      b.algebra = algebra(st.body);
      if (b.kind == Binding::Kind::Cell && b.algebra.kind() != AlgebraKind::FiniteDim &&
          b.algebra.kind() != AlgebraKind::Zero)
        error_at(st.body, "cell algebras are finite-dimensional");
      declare(st, name_term(st), st.name, std::move(b));
      return;
    }
    case Statement::Kind::Morphism: {
      const AlgebraExpr src = algebra(*st.source);
      const AlgebraExpr dst = algebra(*st.target);
      Binding b;
      b.kind = Binding::Kind::Morphism;
      b.morphism = expr::user_named(st.name, morphism(st.body, src, dst));
      declare(st, name_term(st), st.name, std::move(b));
      return;
    }
    case Statement::Kind::Map: {
      const cw::Complex& x = complex(*st.source);
      const cw::Complex& y = complex(*st.target);
      Binding b;
      b.kind = Binding::Kind::Map;
      b.morphism = expr::user_named(st.name, morphism(st.body, x.top(), y.top()));
      b.source_complex = st.source->text;
      b.target_complex = st.target->text;
      declare(st, name_term(st), st.name, std::move(b));
      return;
    }
    case Statement::Kind::Stage: stage(st); return;
    case Statement::Kind::Check: s_.commands.push_back(check(st.body)); return;
    case Statement::Kind::Puppe: s_.commands.push_back(puppe(st.body)); return;
    case Statement::Kind::Approx: {
      const Binding* b = st.body.kind == Term::Kind::Name ? lookup(st.body) : nullptr;
      if (!b || b->kind != Binding::Kind::Map) error_at(st.body, "approx needs a map between stages");
      Command c;
      c.kind = Command::Kind::Approx;
      c.id = "approx(" + st.body.text + ")";
      c.loc = st.body.loc;
      c.maps.push_back(*b->morphism);
      c.complexes = {*s_.bindings.at(b->source_complex).complex, *s_.bindings.at(b->target_complex).complex};
      s_.commands.push_back(std::move(c));
      return;
    }
    case Statement::Kind::Discretize: {
      Command c;
      c.kind = Command::Kind::Discretize;
      c.id = "discretize(" + print_term(st.body) + ")";
      c.loc = st.body.loc;
      c.algebras.push_back(algebra(st.body));
      s_.commands.push_back(std::move(c));
      return;
    }
    case Statement::Kind::Emit: {
      if (st.name != "dot") error_at(name_term(st), "unknown output format '" + st.name + "'; expected dot");
      const Term& t = st.body;
      Command c;
      c.id = "emit(" + print_term(t) + ")";
      c.loc = t.loc;
      if (t.kind == Term::Kind::Call && t.text == "complex") {
        Args a(t, {"stage"});
        c.kind = Command::Kind::EmitComplex;
        c.complexes.push_back(complex(a.get("stage")));
      } else if (t.kind == Term::Kind::Call && t.text == "chain") {
        Args a(t, {"map", "terms"});
        c.kind = Command::Kind::EmitChain;
        c.maps.push_back(morphism(a.get("map")));
        c.ints.push_back(static_cast<int>(integer(a.get("terms"))));
        if (c.ints[0] < 2) error_at(a.get("terms"), "a chain needs at least 2 terms");
      } else {
        error_at(t, "emit dot takes complex(X) or chain(f, k)");
      }
      s_.commands.push_back(std::move(c));
      return;
    }
  }
}

}  // namespace

void elaborate(const Statement& s, Script& script) { Elaborator(script).statement(s); }

}  // namespace nccw::dsl::detail
