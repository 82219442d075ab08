#include <algorithm>
#include <cmath>
#include <string>

#include "gl2ode/jet.hpp"
#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

namespace gl2ode {

namespace {

// Fiber point with a2 -> 8 eps1 and a1 -> 0 for a given a44.
FiberPoint section_point(const CurvatureCoefficients<double>& c, int eps1, double a44) {
  const double root = std::sqrt(std::abs(c.a2));
  return {3 * std::sqrt(2.0) / 4 * eps1 * a44 * c.a1 / root, std::sqrt(2.0) / 4 * a44 * root, a44};
}

}  // namespace

NormalizedModel normalize_section(const Expr& F, const Binding& jet, double a44, double zero_tol) {
  JetDerivatives derivatives(F);
  Evaluator ev(jet);
  const auto base = evaluate(base_coefficients(derivatives), ev);
  NormalizedModel model;
  model.base = base;
  model.I2 = invariant_I2(base);
  const double scale = std::max({1.0, std::abs(base.a0), std::abs(base.a1), std::abs(base.a2)});
  if (!(std::abs(base.a2) > zero_tol * scale)) throw NotNormalizable("normalize_section: a2 vanishes at this point");
  model.eps1 = base.a2 > 0 ? 1 : -1;
  if (std::abs(model.I2) > zero_tol * scale * scale) {
    // a0 scales as 1/a44^2 along the section; pick a44 with |a0| = 8.
    const double a0 = transformed_coefficients(base, section_point(base, model.eps1, 1)).a0;
    model.eps2 = a0 > 0 ? 1 : -1;
    a44 = std::sqrt(std::abs(a0) / 8);
  }
  model.fiber = section_point(base, model.eps1, a44);
  model.normalized = transformed_coefficients(base, model.fiber);
  return model;
}

std::map<Sym, Expr> normalization_section(const CurvatureCoefficients<Expr>& base, int eps1) {
  if (eps1 != 1 && eps1 != -1) throw std::invalid_argument("normalization_section: eps1 must be +1 or -1");
  const Expr sqrt2 = pow(Expr(2), Rational(1, 2));
  const Expr root = pow(Expr(eps1) * base.a2, Rational(1, 2));
  const Expr a44 = sym(Sym::A44);
  return {{Sym::A11, Expr(Rational(1, 4)) * sqrt2 * a44 * root},
          {Sym::A10, Expr(Rational(3 * eps1, 4)) * sqrt2 * a44 * base.a1 / root}};
}

std::vector<ResidualReport> street_model_check(const std::vector<Binding>& samples, double tol) {
  const Expr F = parse("(4/3)*y3^2/y2");
  JetDerivatives jet(F);
  const CoframeSet lifted = lift_coframe(base_coframe(jet));
  const ChartPtr chart = Chart::coordinates({Sym::X, Sym::Y, Sym::Y1, Sym::Y2, Sym::Y3, Sym::A44});
  const auto section = normalization_section(base_coefficients(jet), 1);
  std::array<KForm, 8> f;
  for (std::size_t i = 0; i < 8; ++i) f[i] = pullback(lifted.forms[i], chart, section);
  const KForm &t0 = f[0], &t1 = f[1], &t2 = f[2], &t3 = f[3];
  const KForm &op = f[4], &om = f[5], &o0 = f[6], &o = f[7];
  const Expr r2 = pow(Expr(2), Rational(1, 2));
  const Expr h = Expr(Rational(1, 2)) * r2;

  const std::pair<const char*, KForm> checks[] = {
      {"d theta0", d(t0) - (Expr(12) * wedge(o, t0) - Expr(3) * wedge(op, t1) + Expr(3) * h * wedge(t0, t2))},
      {"d theta1",
       d(t1) - (Expr(6) * wedge(o, t1) - Expr(2) * wedge(op, t2) + h * (wedge(t0, t3) + wedge(t1, t2)))},
      {"d theta2", d(t2) - (-wedge(op, t3) + r2 * wedge(t1, t3))},
      {"d theta3", d(t3) - (Expr(-6) * wedge(o, t3) + Expr(3) * r2 * wedge(t2, t3))},
      {"d Omega+",
       d(op) - (Expr(6) * wedge(o, op) + r2 * wedge(op, t2) + wedge(t0, t3) - Expr(5) * wedge(t1, t2))},
      {"d Omega", d(o)},
      {"Omega-", om - h * t3},
      {"Omega0", o0 - (Expr(3) * o - h * t2)},
  };
  std::vector<ResidualReport> reports;
  for (const auto& [label, form] : checks) {
    ResidualReport r;
    r.label = std::string("street ") + label;
    r.tolerance = tol;
    for (const Binding& b : samples) {
      try {
        const NumericForm v = eval_form(form, b);
        r.observe(v.max_abs(), describe(b), key_to_string(chart, v.argmax()));
      } catch (const std::domain_error& e) {
        ++r.skipped;
        r.messages.push_back(std::string("skipped sample: ") + e.what());
      }
    }
    reports.push_back(std::move(r.finish()));
  }
  return reports;
}

}  // namespace gl2ode
