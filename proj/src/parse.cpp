#include "gl2ode/parse.hpp"

#include <cctype>
#include <limits>

namespace gl2ode {

namespace {

class Parser {
 public:
  Parser(std::string_view text, bool internal) : text_(text), internal_(internal) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        acc = acc / factor();
      } else {
        break;
      }
    }
    return acc;
  }

  Expr factor() {
    if (accept('-')) return -factor();
    Expr b = base();
    if (accept('^')) return pow(b, exponent());
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return symbol();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    Rational value(0);
    bool any_digit = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * Rational(10) + Rational(text_[pos_] - '0');
      any_digit = true;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      Rational scale(1, 10);
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value += scale * Rational(text_[pos_] - '0');
        scale /= Rational(10);
        any_digit = true;
        ++pos_;
      }
    }
    if (!any_digit) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr(value);
  }

  Expr symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    auto s = internal_ ? symbol_from_name(name) : coordinate_from_name(name);
    if (!s) {
      pos_ = start;
      fail("unknown symbol '" + std::string(name) + "'");
    }
    return Expr::symbol(*s);
  }

  std::int64_t integer() {
    skip_ws();
    const std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) fail("exponent too large");
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("malformed exponent: expected integer");
    return v;
  }

  Rational exponent() {
    if (accept('(')) {
      const bool neg = accept('-');
      std::int64_t n = integer();
      std::int64_t d = 1;
      if (accept('/')) {
        d = integer();
        if (d == 0) fail("malformed exponent: zero denominator");
      }
      expect(')');
      return Rational(neg ? -n : n, d);
    }
    const bool neg = accept('-');
    const std::int64_t n = integer();
    return Rational(neg ? -n : n);
  }

  std::string_view text_;
  bool internal_ = false;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text, false).run(); }

Expr parse_internal(std::string_view text) { return Parser(text, true).run(); }

}  // namespace gl2ode
