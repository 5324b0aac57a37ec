#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nccw/expr.hpp"
#include "nccw/nccw.hpp"

// The .nccw script language. Statements end with ';', '#' and '//' start
// comments:
//
//   algebra A0 = M1;
//   cell F1 = M1;
//   morphism s1 : A0 -> sphere(0, F1) = compose(boundary(cube(1, F1)), const(F1, 1));
//   stage X1 = attach(A0, cell F1, dim=1, via=s1);
//   map r : X1 -> X1 = rotate(X1, 1/4);
//   check complex(X1);
//   approx r;
//   puppe chain(id(M2), 8);
//   emit dot complex(X1);

namespace nccw::dsl {

struct Location {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(Location loc, const std::string& message, std::vector<std::string> expected = {});

  Location location() const { return loc_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Location loc_;
  std::string message_;
  std::vector<std::string> expected_;
};

struct Term {
  enum class Kind { Name, Number, Ratio, List, Call, Sum, Cell };
  Kind kind = Kind::Name;
  std::string text;                  // name, callee, or declared cell name
  std::complex<double> value;        // Number
  long num = 0, den = 1;             // Ratio
  std::string key;                   // keyword of a call argument, or empty
  std::vector<Term> children;        // list items, call arguments, summands, cell body
  Location loc;

  bool operator==(const Term& o) const;  // ignores locations
};

struct Statement {
  enum class Kind { Algebra, Cell, Morphism, Map, Stage, Check, Puppe, Approx, Discretize, Emit };
  Kind kind = Kind::Algebra;
  std::string name;                      // declarations; output format for emit
  std::optional<Term> source, target;    // morphism and map signatures
  Term body;
  Location loc;

  bool operator==(const Statement& o) const;
};

struct Binding {
  enum class Kind { Algebra, Cell, Morphism, Map, Complex };
  Kind kind = Kind::Algebra;
  expr::AlgebraExpr algebra;                // algebras, cells, complex tops
  std::optional<expr::MorphismExpr> morphism;
  std::optional<cw::Complex> complex;
  std::string source_complex, target_complex;  // maps
};

struct Command {
  enum class Kind {
    StarHom,
    Complex,
    Mapping,
    Pullback,
    Pushout,
    Ndr,
    Functor,
    Refine,
    Discretize,
    PuppeChain,
    PuppeCylinder,
    PuppeSplit,
    Approx,
    EmitComplex,
    EmitChain,
  };
  Kind kind = Kind::StarHom;
  std::string id;  // printed command term
  Location loc;
  std::vector<expr::MorphismExpr> maps;
  std::vector<expr::AlgebraExpr> algebras;
  std::vector<cw::Complex> complexes;
  std::vector<int> ints;                              // ideal blocks, chain length
  std::vector<std::optional<expr::Fraction>> points;  // NDR u: grid point per block
  int trials = 20;
};

struct Script {
  std::vector<Statement> statements;
  std::map<std::string, Binding> bindings;
  std::vector<Command> commands;

  /// Structural equality of the statements.
  bool operator==(const Script& o) const { return statements == o.statements; }
};

/// Single pass; declarations are elaborated as they are read, so type and
/// name errors carry the location of the offending term. Parsing is bounded
/// by a fuel counter proportional to the input length.
Script parse_dsl(std::string_view text);

std::string print_term(const Term& t);
std::string print_statement(const Statement& s);
/// Canonical text; parse_dsl(print_script(s)) == s.
std::string print_script(const Script& s);

}  // namespace nccw::dsl
