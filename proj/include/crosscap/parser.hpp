#ifndef CROSSCAP_PARSER_HPP
#define CROSSCAP_PARSER_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "crosscap/errors.hpp"
#include "crosscap/polynomial.hpp"

namespace crosscap {

namespace detail {

// Grammar:
//   expr     := ('+'|'-')? term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' nat)?
//   base     := var | rational | '(' expr ')'
//   rational := int ('/' posint)?
// Juxtaposition ("2x", "x y", "2(x+1)") is rejected.
class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, VariableList vars) : text_(text), vars_(std::move(vars)) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) {
      if (starts_operand()) fail("implicit multiplication is not allowed");
      fail(std::string("unexpected character '") + text_[pos_] + "'");
    }
    return p;
  }

 private:
  static constexpr unsigned kMaxExponent = 1000;

  Polynomial expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial rhs = term();
      acc = c == '+' ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor();
      } else if (starts_operand()) {
        fail("implicit multiplication is not allowed");
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial factor() {
    Polynomial b = base();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
      std::size_t start = pos_;
      mpz_class e = digits();
      if (e > kMaxExponent) {
        pos_ = start;
        fail("exponent too large");
      }
      b = b.pow(static_cast<unsigned>(e.get_ui()));
    }
    return b;
  }

  Polynomial base() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = digits();
      mpz_class den = 1;
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        std::size_t start = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator");
        den = digits();
        if (den == 0) {
          pos_ = start;
          fail("zero denominator");
        }
      }
      Rational q(num, den);
      q.canonicalize();
      return Polynomial::constant(vars_, q);
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (!at_end() && is_ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return Polynomial::variable(vars_, i);
      throw UnknownVariable(name, start);
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  mpz_class digits() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  bool starts_operand() const {
    char c = peek();
    return c == '(' || is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::string_view text_;
  VariableList vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const VariableList& variables) {
  return detail::PolynomialParser(text, variables).parse();
}

inline Polynomial parse_polynomial(std::string_view text, std::vector<std::string> variables) {
  return parse_polynomial(text, make_variables(std::move(variables)));
}

inline PolynomialMap parse_map(const std::vector<std::string>& components,
                               const VariableList& variables) {
  PolynomialMap f{variables, {}};
  for (const auto& c : components) f.components.push_back(parse_polynomial(c, variables));
  return f;
}

}  // namespace crosscap

#endif  // CROSSCAP_PARSER_HPP
