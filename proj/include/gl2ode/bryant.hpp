#pragma once

#include <vector>

#include "gl2ode/expr.hpp"
#include "gl2ode/jet.hpp"
#include "gl2ode/report.hpp"

namespace gl2ode {

/// The two contact-invariant conditions on F, as expressions whose vanishing
/// is the condition:
///
///   r1 = 4D^2F3 - 8DF2 + 8F1 - 6 DF3 F3 + 4F2 F3 + F3^3
///   r2 = 160D^2F2 - 640DF1 + 144(DF3)^2 - 352 DF3 F2 + 144F2^2 - 80 DF2 F3
///        + 160F1 F3 - 72 DF3 F3^2 + 88F2 F3^2 + 9F3^4 + 1600Fy
///
/// The published r2 carries 16000Fy; y-dependent point transforms of
/// y^(4) = 0 only satisfy it with 1600. Printed selects the published constant.
enum class FyCoefficient { Corrected, Printed };

struct BryantResiduals {
  Expr r1;
  Expr r2;
};

BryantResiduals bryant_residuals(const Expr& F, FyCoefficient fy = FyCoefficient::Corrected);
BryantResiduals bryant_residuals(JetDerivatives& jet, FyCoefficient fy = FyCoefficient::Corrected);

struct BryantReport {
  ResidualReport r1;
  ResidualReport r2;
  bool pass() const { return r1.pass && r2.pass; }
  double max_residual() const;
};

/// Evaluates |r1|, |r2| at each sample. Samples where evaluation hits a
/// domain error are skipped and logged; throws std::domain_error if every
/// sample is skipped.
BryantReport check_bryant(const Expr& F, const std::vector<Binding>& samples, double tol,
                          FyCoefficient fy = FyCoefficient::Corrected);
BryantReport check_bryant(const BryantResiduals& r, const std::vector<Binding>& samples, double tol);

}  // namespace gl2ode
