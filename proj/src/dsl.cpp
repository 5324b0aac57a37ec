#include "nccw/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <set>
#include <sstream>

#include "dsl_internal.hpp"

namespace nccw::dsl {

namespace {

std::string located(Location loc, const std::string& message, const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "line " << loc.line << ", column " << loc.column << ": " << message;
  if (!expected.empty()) {
    os << "; expected ";
    if (expected.size() > 1) os << "one of ";
    for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(Location loc, const std::string& message, std::vector<std::string> expected)
    : Error(located(loc, message, expected)), loc_(loc), message_(message), expected_(std::move(expected)) {}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && text == o.text && value == o.value && num == o.num && den == o.den && key == o.key &&
         children == o.children;
}

bool Statement::operator==(const Statement& o) const {
  return kind == o.kind && name == o.name && source == o.source && target == o.target && body == o.body;
}

// --- lexer ----------------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  bool integer = false;
  bool imaginary = false;
  double value = 0.0;
  Location loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Number: return "number " + t.text;
    case Tok::Punct: return "'" + t.text + "'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  Location loc;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = loc;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.integer = true;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        t.integer = false;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          t.integer = false;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (res.ec != std::errc()) throw ParseError(loc, "number out of range: " + t.text);
      if (t.integer && t.text.size() > 15) throw ParseError(loc, "integer literal too long: " + t.text);
      if (j < src.size() && src[j] == 'i' &&
          !(j + 1 < src.size() && (std::isalnum(static_cast<unsigned char>(src[j + 1])) || src[j + 1] == '_'))) {
        t.imaginary = true;
        t.integer = false;
        ++j;
        t.text += "i";
      }
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Tok::Punct;
      t.text = "->";
      advance(2);
    } else if (std::string_view(";:=,()[]+-/").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(loc, std::string("unexpected character '") + c + "'",
                       {"identifier", "number", "punctuation ; : -> = , ( ) [ ] + - /"});
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.loc = loc;
  out.push_back(end);
  return out;
}

// --- parser ---------------------------------------------------------------------

const std::vector<std::string> kKeywords = {"algebra", "cell",       "morphism", "map",  "stage",
                                            "check",   "puppe",      "approx",   "discretize", "emit"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)), fuel_(32 * static_cast<long>(toks_.size()) + 256) {}

  Script run() {
    Script s;
    while (peek().kind != Tok::End) {
      Statement st = statement();
      detail::elaborate(st, s);
      s.statements.push_back(std::move(st));
    }
    return s;
  }

 private:
  const Token& peek() {
    if (--fuel_ < 0) throw ParseError(toks_[pos_].loc, "parser fuel exhausted");
    return toks_[pos_];
  }
  const Token& peek_at(std::size_t ahead) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  Token take() {
    Token t = peek();
    if (t.kind != Tok::End) ++pos_;
    expected_.clear();
    return t;
  }

  bool at_punct(const std::string& p) {
    expected_.insert("'" + p + "'");
    return peek().kind == Tok::Punct && peek().text == p;
  }
  bool at_ident(const std::string& name) {
    expected_.insert("'" + name + "'");
    return peek().kind == Tok::Ident && peek().text == name;
  }

  [[noreturn]] void fail(const std::string& what = "") {
    const Token& t = toks_[pos_];
    throw ParseError(t.loc, what.empty() ? "unexpected " + describe(t) : what,
                     std::vector<std::string>(expected_.begin(), expected_.end()));
  }

  void expect(const std::string& p) {
    if (!at_punct(p)) fail();
    take();
  }

  Token identifier() {
    expected_.insert("identifier");
    if (peek().kind != Tok::Ident) fail();
    return take();
  }

  Statement statement() {
    Statement s;
    s.loc = peek().loc;
    for (const auto& k : kKeywords) expected_.insert("'" + k + "'");
    if (peek().kind != Tok::Ident) fail();
    const std::string kw = peek().text;
    const auto it = std::find(kKeywords.begin(), kKeywords.end(), kw);
    if (it == kKeywords.end()) fail("unknown statement '" + kw + "'");
    take();
    static const Statement::Kind kinds[] = {Statement::Kind::Algebra, Statement::Kind::Cell,  Statement::Kind::Morphism,
                                            Statement::Kind::Map,     Statement::Kind::Stage, Statement::Kind::Check,
                                            Statement::Kind::Puppe,   Statement::Kind::Approx,
                                            Statement::Kind::Discretize, Statement::Kind::Emit};
    s.kind = kinds[it - kKeywords.begin()];
    switch (s.kind) {
      case Statement::Kind::Algebra:
      case Statement::Kind::Cell:
      case Statement::Kind::Stage:
        s.name = identifier().text;
        expect("=");
        s.body = term();
        break;
      case Statement::Kind::Morphism:
      case Statement::Kind::Map:
        s.name = identifier().text;
        expect(":");
        s.source = term();
        expect("->");
        s.target = term();
        expect("=");
        s.body = term();
        break;
      case Statement::Kind::Emit:
        s.name = identifier().text;
        s.body = term();
        break;
      default:
        s.body = term();
        break;
    }
    expect(";");
    return s;
  }

  struct Depth {
    explicit Depth(Parser& p) : p_(p) {
      if (++p_.depth_ > 200) p_.fail("expression nested too deeply");
    }
    ~Depth() { --p_.depth_; }
    Parser& p_;
  };

  Term term() {
    Depth guard(*this);
    Term first = unary();
    if (!at_punct("+")) return first;
    Term sum;
    sum.kind = Term::Kind::Sum;
    sum.loc = first.loc;
    sum.children.push_back(std::move(first));
    while (at_punct("+")) {
      take();
      sum.children.push_back(unary());
    }
    return sum;
  }

  Term unary() {
    if (at_punct("-")) {
      const Location loc = take().loc;
      expected_.insert("number");
      if (peek().kind != Tok::Number) fail("expected a number after '-'");
      Term t = number();
      t.loc = loc;
      if (t.kind == Term::Kind::Ratio)
        t.num = -t.num;
      else
        t.value = -t.value;
      return t;
    }
    return primary();
  }

  Term number() {
    const Token t = take();
    Term out;
    out.loc = t.loc;
    if (t.integer && at_punct("/")) {
      take();
      expected_.insert("integer");
      if (peek().kind != Tok::Number || !peek().integer) fail("expected an integer denominator");
      const Token d = take();
      out.kind = Term::Kind::Ratio;
      out.num = std::stol(t.text);
      out.den = std::stol(d.text);
      if (out.den == 0) throw ParseError(d.loc, "zero denominator");
      return out;
    }
    out.kind = Term::Kind::Number;
    out.value = t.imaginary ? std::complex<double>(0.0, t.value) : std::complex<double>(t.value, 0.0);
    return out;
  }

  Term primary() {
    expected_.insert("identifier");
    expected_.insert("number");
    expected_.insert("'['");
    const Token& t = peek();
    if (t.kind == Tok::Number) return number();
    if (t.kind == Tok::Punct && t.text == "[") {
      Term list;
      list.kind = Term::Kind::List;
      list.loc = take().loc;
      if (!at_punct("]")) {
        list.children.push_back(term());
        while (at_punct(",")) {
          take();
          list.children.push_back(term());
        }
      }
      expect("]");
      return list;
    }
    if (t.kind != Tok::Ident) fail();
    if (t.text == "cell" && peek_at(1).kind == Tok::Ident) {
      Term cell;
      cell.kind = Term::Kind::Cell;
      cell.loc = take().loc;
      cell.text = identifier().text;
      if (at_punct("=")) {
        take();
        cell.children.push_back(term());
      }
      return cell;
    }
    Term out;
    out.loc = t.loc;
    out.text = take().text;
    if (!at_punct("(")) return out;
    take();
    out.kind = Term::Kind::Call;
    if (!at_punct(")")) {
      out.children.push_back(argument());
      while (at_punct(",")) {
        take();
        out.children.push_back(argument());
      }
    }
    expect(")");
    return out;
  }

  Term argument() {
    if (peek().kind == Tok::Ident && peek_at(1).kind == Tok::Punct && peek_at(1).text == "=") {
      const std::string key = take().text;
      take();
      Term t = term();
      t.key = key;
      return t;
    }
    return term();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  long fuel_;
  int depth_ = 0;
  std::set<std::string> expected_;
};

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return s;
}

}  // namespace

Script parse_dsl(std::string_view text) { return Parser(lex(text)).run(); }

// --- printer --------------------------------------------------------------------

std::string print_term(const Term& t) {
  std::string out = t.key.empty() ? "" : t.key + "=";
  auto join = [](const std::vector<Term>& items, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? sep : "") + print_term(items[i]);
    return s;
  };
  switch (t.kind) {
    case Term::Kind::Name: return out + t.text;
    case Term::Kind::Number:
      if (t.value.imag() != 0.0 && t.value.real() == 0.0) return out + number_text(t.value.imag()) + "i";
      return out + number_text(t.value.real());
    case Term::Kind::Ratio: return out + std::to_string(t.num) + "/" + std::to_string(t.den);
    case Term::Kind::List: return out + "[" + join(t.children, ", ") + "]";
    case Term::Kind::Call: return out + t.text + "(" + join(t.children, ", ") + ")";
    case Term::Kind::Sum: return out + join(t.children, " + ");
    case Term::Kind::Cell: return out + "cell " + t.text + (t.children.empty() ? "" : " = " + print_term(t.children[0]));
  }
  return out;
}

std::string print_statement(const Statement& s) {
  switch (s.kind) {
    case Statement::Kind::Algebra: return "algebra " + s.name + " = " + print_term(s.body) + ";";
    case Statement::Kind::Cell: return "cell " + s.name + " = " + print_term(s.body) + ";";
    case Statement::Kind::Stage: return "stage " + s.name + " = " + print_term(s.body) + ";";
    case Statement::Kind::Morphism:
    case Statement::Kind::Map:
      return std::string(s.kind == Statement::Kind::Map ? "map " : "morphism ") + s.name + " : " +
             print_term(*s.source) + " -> " + print_term(*s.target) + " = " + print_term(s.body) + ";";
    case Statement::Kind::Check: return "check " + print_term(s.body) + ";";
    case Statement::Kind::Puppe: return "puppe " + print_term(s.body) + ";";
    case Statement::Kind::Approx: return "approx " + print_term(s.body) + ";";
    case Statement::Kind::Discretize: return "discretize " + print_term(s.body) + ";";
    case Statement::Kind::Emit: return "emit " + s.name + " " + print_term(s.body) + ";";
  }
  return "";
}

std::string print_script(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print_statement(st) + "\n";
  return out;
}

}  // namespace nccw::dsl
