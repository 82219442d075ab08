#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gl2ode/expr.hpp"
#include "gl2ode/jet.hpp"

namespace gl2ode {

/// c * prod(name^power) over named derivatives of F.
struct FormulaTerm {
  Rational coeff;
  std::vector<std::pair<std::string, int>> factors;
};

/// A transcribed coefficient: scale * sum(terms). Each long coefficient is
/// entered once as text and kept as data so single terms can be perturbed.
struct Formula {
  std::string label;
  Rational scale;
  std::vector<FormulaTerm> terms;
};

/// Multiplies the coefficient of one term of one formula.
struct Mutation {
  std::string label;
  std::size_t term = 0;
  Rational factor{2};
};

/// Parses "c1*A*B^2 - c2*C + ..." where A, B, C are derivative names
/// understood by JetDerivatives; a bare integer is a constant term.
Formula make_formula(std::string label, Rational scale, std::string_view text);

Expr build(const Formula& f, JetDerivatives& jet, const Mutation* mutation = nullptr);

}  // namespace gl2ode
