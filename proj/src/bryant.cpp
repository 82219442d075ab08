#include "gl2ode/bryant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gl2ode/formula.hpp"
#include "gl2ode/sampling.hpp"

namespace gl2ode {

namespace {

const Formula& r1_formula() {
  static const Formula f = make_formula("bryant.r1", Rational(1), "4*D2F3 - 8*DF2 + 8*F1 - 6*DF3*F3 + 4*F2*F3 + F3^3");
  return f;
}

const char* const kR2Head =
    "160*D2F2 - 640*DF1 + 144*DF3^2 - 352*DF3*F2 + 144*F2^2 - 80*DF2*F3"
    " + 160*F1*F3 - 72*DF3*F3^2 + 88*F2*F3^2 + 9*F3^4";

const Formula& r2_formula(FyCoefficient fy) {
  static const Formula corrected = make_formula("bryant.r2", Rational(1), std::string(kR2Head) + " + 1600*Fy");
  static const Formula printed = make_formula("bryant.r2", Rational(1), std::string(kR2Head) + " + 16000*Fy");
  return fy == FyCoefficient::Printed ? printed : corrected;
}

}  // namespace

BryantResiduals bryant_residuals(JetDerivatives& jet, FyCoefficient fy) {
  // simplified so that algebraic cancellation is exact rather than left to rounding
  return {simplify(build(r1_formula(), jet)), simplify(build(r2_formula(fy), jet))};
}

BryantResiduals bryant_residuals(const Expr& F, FyCoefficient fy) {
  JetDerivatives jet(F);
  return bryant_residuals(jet, fy);
}

double BryantReport::max_residual() const { return std::max(r1.max_residual, r2.max_residual); }

BryantReport check_bryant(const BryantResiduals& r, const std::vector<Binding>& samples, double tol) {
  BryantReport out;
  out.r1.label = "bryant.r1";
  out.r2.label = "bryant.r2";
  out.r1.tolerance = out.r2.tolerance = tol;
  for (const auto& b : samples) {
    double v1 = 0, v2 = 0;
    try {
      Evaluator ev(b);
      v1 = std::abs(ev(r.r1));
      v2 = std::abs(ev(r.r2));
    } catch (const EvalError& e) {
      ++out.r1.skipped;
      ++out.r2.skipped;
      out.r1.messages.push_back(std::string("skipped sample: ") + e.what());
      continue;
    }
    const auto point = describe(b);
    out.r1.observe(v1, point);
    out.r2.observe(v2, point);
  }
  if (out.r1.samples == 0) throw std::domain_error("check_bryant: every sample hit an evaluation domain error");
  out.r1.finish();
  out.r2.finish();
  return out;
}

BryantReport check_bryant(const Expr& F, const std::vector<Binding>& samples, double tol, FyCoefficient fy) {
  return check_bryant(bryant_residuals(F, fy), samples, tol);
}

}  // namespace gl2ode
