#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gl2ode/expr.hpp"

namespace gl2ode {

/// Syntax error, unknown symbol, or malformed exponent at a byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses an expression over the jet and fiber coordinates.
///
///   expr     := term (('+'|'-') term)*
///   term     := factor (('*'|'/') factor)*
///   factor   := '-' factor | base ('^' exponent)?
///   base     := number | symbol | '(' expr ')'
///   exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
///   symbol   := x | y | y1 | y2 | y3 | a10 | a11 | a44
///
/// Numbers may carry a decimal fraction ("0.25"); they are read as exact
/// rationals. Unary minus is accepted in addition to the binary operators.
Expr parse(std::string_view text);

/// Same grammar, also accepting the internal symbols (z, q, qp, w, w0..w3,
/// w13, ew).
Expr parse_internal(std::string_view text);

}  // namespace gl2ode
