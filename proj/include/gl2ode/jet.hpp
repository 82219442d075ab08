#pragma once

#include <map>
#include <string>
#include <string_view>

#include "gl2ode/expr.hpp"

namespace gl2ode {

/// Named derivatives of F, built on demand and cached.
///
/// Names follow the usual subscript notation: "F3" = dF/dy3, "F23y" =
/// d^3F/dy2 dy3 dy, "DF33" = D(F33), "D2F3" = D(D(F3)). Subscripts are
/// 'x', 'y', '1', '2', '3' and may appear in any order. Every entry is
/// simplified once when first requested.
class JetDerivatives {
 public:
  explicit JetDerivatives(Expr F) : F_(std::move(F)) {}

  const Expr& F() const { return F_; }
  const Expr& get(std::string_view name);
  Expr total(const Expr& e) const { return total_derivative(e, F_); }

 private:
  const Expr& partial_of(const std::string& subscripts);

  Expr F_;
  std::map<std::string, Expr, std::less<>> cache_;
};

}  // namespace gl2ode
