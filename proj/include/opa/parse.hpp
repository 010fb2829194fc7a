#pragma once

// Recursive-descent parser for function expressions:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' uint)?
//   base   := number | 'z' | '(' expr ')' | 'blaschke(' list ';' expr ')'
//   number := decimal literal with optional exponent, optional 'i' suffix
//
// Blaschke arguments are constant subexpressions, so "blaschke(-0.5, 0.2+0.1i; 1)"
// is accepted.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "opa/error.hpp"
#include "opa/functions.hpp"

namespace opa {

namespace detail {

inline bool is_constant_polynomial(const HardyFunction& f) {
  const Coeffs* c = f.polynomial_coeffs();
  if (!c) return false;
  for (std::size_t k = 1; k < c->size(); ++k) {
    if ((*c)[k] != cd{0.0, 0.0}) return false;
  }
  return true;
}

inline HardyFunction scale_function(cd s, const HardyFunction& f) {
  if (const Coeffs* c = f.polynomial_coeffs()) return HardyFunction::polynomial(poly::scale(*c, s));
  return HardyFunction::scaled(s, f);
}

inline HardyFunction add_functions(const HardyFunction& a, const HardyFunction& b) {
  const Coeffs* ca = a.polynomial_coeffs();
  const Coeffs* cb = b.polynomial_coeffs();
  if (ca && cb) return HardyFunction::polynomial(poly::add(*ca, *cb));
  return HardyFunction::sum(a, b);
}

inline HardyFunction multiply_functions(const HardyFunction& a, const HardyFunction& b) {
  const Coeffs* ca = a.polynomial_coeffs();
  const Coeffs* cb = b.polynomial_coeffs();
  if (ca && cb) return HardyFunction::polynomial(poly::mul(*ca, *cb));
  if (is_constant_polynomial(a)) return scale_function((*ca)[0], b);
  if (is_constant_polynomial(b)) return scale_function((*cb)[0], a);
  return HardyFunction::product(a, b);
}

inline HardyFunction divide_functions(const HardyFunction& a, const HardyFunction& b) {
  if (is_constant_polynomial(b)) {
    const cd c = (*b.polynomial_coeffs())[0];
    if (c == cd{0.0, 0.0}) throw InvalidArgument("division by zero");
    return scale_function(1.0 / c, a);
  }
  const Coeffs* ca = a.polynomial_coeffs();
  const Coeffs* cb = b.polynomial_coeffs();
  if (ca && cb) return HardyFunction::rational(*ca, *cb);
  const RationalForm rb = b.to_rational();
  const HardyFunction reciprocal = HardyFunction::rational(rb.denominator, rb.numerator);
  return multiply_functions(a, reciprocal);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  HardyFunction parse() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    HardyFunction f = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return f;
  }

 private:
  HardyFunction expr() {
    HardyFunction acc = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        acc = add_functions(acc, term());
      } else if (accept('-')) {
        acc = add_functions(acc, scale_function(-1.0, term()));
      } else {
        return acc;
      }
    }
  }

  HardyFunction term() {
    HardyFunction acc = factor();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        acc = multiply_functions(acc, factor());
      } else if (accept('/')) {
        HardyFunction rhs = factor();
        try {
          acc = divide_functions(acc, rhs);
        } catch (const ParseError&) {
          throw;
        } catch (const InvalidArgument& e) {
          throw ParseError(e.what(), at);
        }
      } else {
        return acc;
      }
    }
  }

  HardyFunction factor() {
    skip_ws();
    if (accept('-')) return scale_function(-1.0, factor());
    HardyFunction b = base();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      unsigned k = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), k);
      if (ec != std::errc{} || ptr == s_.data() + pos_) throw ParseError("expected unsigned integer exponent", at);
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      if (k > 64) throw ParseError("exponent too large", at);
      HardyFunction acc = HardyFunction::constant(1.0);
      for (unsigned i = 0; i < k; ++i) acc = multiply_functions(acc, b);
      return acc;
    }
    return b;
  }

  HardyFunction base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (accept('(')) {
      HardyFunction inner = expr();
      skip_ws();
      expect(')');
      return inner;
    }
    if (s_.substr(pos_, 8) == "blaschke") {
      pos_ += 8;
      return blaschke();
    }
    if (c == 'z') {
      ++pos_;
      return HardyFunction::polynomial({cd{0.0, 0.0}, cd{1.0, 0.0}});
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'i') return HardyFunction::constant(number());
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  HardyFunction blaschke() {
    skip_ws();
    expect('(');
    std::vector<cd> zeros;
    skip_ws();
    if (!accept(';')) {
      for (;;) {
        zeros.push_back(constant_expr());
        skip_ws();
        if (accept(',')) continue;
        expect(';');
        break;
      }
    }
    const std::size_t at = pos_;
    const cd c = constant_expr();
    skip_ws();
    expect(')');
    try {
      return HardyFunction::blaschke(FiniteBlaschke(std::move(zeros), c));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), at);
    }
  }

  cd constant_expr() {
    skip_ws();
    const std::size_t at = pos_;
    HardyFunction f = expr();
    if (!is_constant_polynomial(f)) throw ParseError("expected a constant", at);
    return (*f.polynomial_coeffs())[0];
  }

  cd number() {
    const std::size_t at = pos_;
    if (s_[pos_] == 'i') {
      ++pos_;
      return {0.0, 1.0};
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) throw ParseError("malformed number", at);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return {0.0, v};
    }
    return {v, 0.0};
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a function expression; throws ParseError with the offending offset.
inline HardyFunction parse_function(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace opa
