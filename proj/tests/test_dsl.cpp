#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nccw/dsl.hpp"

using namespace nccw;
using namespace nccw::dsl;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(NCCW_CORPUS_DIR))
    if (e.path().extension() == ".nccw") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

ParseError parse_error(const std::string& text) {
  try {
    parse_dsl(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError({}, "");
}

bool expects(const ParseError& e, const std::string& tok) {
  return std::find(e.expected().begin(), e.expected().end(), tok) != e.expected().end();
}

}  // namespace

TEST_CASE("a sum of matrix algebras binds a finite-dimensional algebra") {
  const Script s = parse_dsl("algebra A0 = M2 + M3;");
  REQUIRE(s.bindings.count("A0") == 1);
  const Binding& b = s.bindings.at("A0");
  CHECK(b.kind == Binding::Kind::Algebra);
  CHECK(b.algebra == expr::finite_dim({2, 3}));
  CHECK(s.commands.empty());
}

TEST_CASE("a stage statement attaches a cell") {
  const Script s = parse_dsl(
      "algebra A0 = M2 + M3;\n"
      "morphism s1 : A0 -> sphere(0, M1) = zero;\n"
      "stage A1 = attach(A0, cell F1=M1, dim=1, via=s1);\n");
  const Binding& b = s.bindings.at("A1");
  REQUIRE(b.kind == Binding::Kind::Complex);
  REQUIRE(b.complex);
  CHECK(b.complex->stages().size() == 2);
  CHECK(b.complex->top_dim() == 1);
  CHECK(b.complex->top_stage().cell == expr::finite_dim({1}));
  CHECK(s.bindings.at("F1").kind == Binding::Kind::Cell);
}

TEST_CASE("statement locations") {
  const Script s = parse_dsl("algebra A = C;\n\n  cell F = M2;\n");
  REQUIRE(s.statements.size() == 2);
  CHECK(s.statements[1].loc.line == 3);
  CHECK(s.statements[1].loc.column == 3);
}

TEST_CASE("parse, print, parse round trip on the corpus") {
  const auto files = corpus_files();
  REQUIRE(files.size() >= 4);
  for (const auto& f : files) {
    INFO(f.string());
    const Script a = parse_dsl(slurp(f));
    const std::string printed = print_script(a);
    const Script b = parse_dsl(printed);
    CHECK(a == b);
    CHECK(print_script(b) == printed);
    CHECK(a.commands.size() == b.commands.size());
  }
}

TEST_CASE("numbers and ratios print canonically") {
  Term t;
  t.kind = Term::Kind::Ratio;
  t.num = 3;
  t.den = 4;
  CHECK(print_term(t) == "3/4");
  Term z;
  z.kind = Term::Kind::Number;
  z.value = {0.0, 2.5};
  CHECK(print_term(z) == "2.5i");
}

TEST_CASE("a missing semicolon reports line, column and the expected set") {
  const ParseError e = parse_error("algebra A0 = M2\nalgebra A1 = C;");
  CHECK(e.location().line == 2);
  CHECK(e.location().column == 1);
  CHECK(expects(e, "';'"));
  CHECK(expects(e, "'+'"));
  CHECK(std::string(e.what()).rfind("line 2, column 1:", 0) == 0);
}

TEST_CASE("lexical errors") {
  const ParseError e = parse_error("algebra A = C $;");
  CHECK(e.location().column == 15);
  CHECK(parse_error("algebra A = 1234567890123456;").message().find("too long") != std::string::npos);
  CHECK(parse_error("check star(f, 1/0);").message() == "zero denominator");
}

TEST_CASE("unknown statements list the keywords") {
  const ParseError e = parse_error("algebra A = C;\nfrobnicate A;");
  CHECK(e.location().line == 2);
  CHECK(expects(e, "'algebra'"));
}

TEST_CASE("name resolution errors are located at the offending term") {
  const ParseError u = parse_error("algebra A = C;\nalgebra B = A + Q;");
  CHECK(u.location().line == 2);
  CHECK(u.location().column == 17);
  CHECK(u.message().find("Q") != std::string::npos);

  const ParseError r = parse_error("algebra A = C;\nalgebra A = M2;");
  CHECK(r.location().line == 2);
  CHECK(r.message().find("A") != std::string::npos);

  CHECK_THROWS_AS(parse_dsl("algebra M4 = C;"), ParseError);
  CHECK_THROWS_AS(parse_dsl("check star(f);"), ParseError);
}

TEST_CASE("type errors in morphisms are located") {
  const ParseError e = parse_error("algebra A = C;\nalgebra B = M2;\nmorphism f : A -> B = id;");
  CHECK(e.location().line == 3);
  CHECK_THROWS_AS(parse_dsl("algebra A = M2; algebra B = C; morphism f : A -> B = blocks([[1]]);"), ParseError);
}

TEST_CASE("deep nesting is rejected without exhausting the stack") {
  std::string deep = "algebra A = ";
  for (int i = 0; i < 5000; ++i) deep += "cone(";
  deep += "C";
  for (int i = 0; i < 5000; ++i) deep += ")";
  deep += ";";
  CHECK(parse_error(deep).message().find("nested") != std::string::npos);

  std::string ok = "algebra A = ";
  for (int i = 0; i < 20; ++i) ok += "susp(";
  ok += "C";
  for (int i = 0; i < 20; ++i) ok += ")";
  ok += ";";
  CHECK_NOTHROW(parse_dsl(ok));
}

TEST_CASE("fuzzed input either parses or raises a located parse error") {
  const std::vector<std::string> pieces = {"algebra", "cell",  "morphism", "stage", "map", "check", "puppe",
                                           "approx",  "emit",  "A",        "B",     "C",   "M2",    "M3",
                                           "id",      "zero",  "cone",     "susp",  "cube", "attach", "star",
                                           "=",       ";",     ":",        "->",    ",",   "(",     ")",
                                           "[",       "]",     "+",        "-",     "/",   "1",     "2",
                                           "0.5",     "1e3",   "2i",       "#",     "\n",  "dim",   "via"};
  std::mt19937 rng(7);
  const auto start = std::chrono::steady_clock::now();
  int parsed = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) {
      if (trial % 3 == 0)
        text += static_cast<char>(rng() % 96 + 32);
      else
        text += pieces[rng() % pieces.size()] + " ";
    }
    try {
      parse_dsl(text);
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.location().line >= 1);
      CHECK(e.location().column >= 1);
    } catch (const std::exception& e) {
      FAIL("non-parse exception on '" << text << "': " << e.what());
    }
  }
  CHECK(parsed > 0);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
}

TEST_CASE("commands carry their printed term as id") {
  const Script s = parse_dsl(
      "algebra A = M2;\n"
      "morphism f : A -> A = id;\n"
      "puppe chain(f, 8);\n"
      "check star(f);\n"
      "discretize cone(A);\n");
  REQUIRE(s.commands.size() == 3);
  CHECK(s.commands[0].kind == Command::Kind::PuppeChain);
  CHECK(s.commands[0].ints == std::vector<int>{8});
  CHECK(s.commands[1].id == "star(f)");
  CHECK(s.commands[2].id == "discretize(cone(A))");
}
