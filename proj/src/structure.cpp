#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

namespace gl2ode {

StructureSystem structure_system(JetDerivatives& jet, const Mutation* mutation) {
  StructureSystem sys;
  sys.coframe = lift_coframe(base_coframe(jet, mutation));
  for (std::size_t i = 0; i < 8; ++i) sys.derivatives[i] = d(sys.coframe.forms[i]);
  sys.base = base_coefficients(jet, mutation);
  return sys;
}

std::array<NumericForm, 8> structure_rhs(const std::array<NumericForm, 8>& f, const CurvatureCoefficients<double>& c) {
  const NumericForm& op = f[4];
  const NumericForm& om = f[5];
  const NumericForm& o0 = f[6];
  const NumericForm& o = f[7];
  // Gamma = Omega- E- + Omega+ E+ + Omega0 E0 + Omega E; d theta = -Gamma ^ theta.
  const auto& g = gl2_generators();
  const std::array<const NumericForm*, 4> comp{&om, &op, &o0, &o};
  std::array<NumericForm, 8> rhs;
  for (int i = 0; i < 4; ++i) {
    NumericForm acc{2, {}};
    for (int j = 0; j < 4; ++j)
      for (std::size_t x = 0; x < 4; ++x) {
        const Rational& e = g[kGenerators[x]][i][j];
        if (!e.is_zero()) acc = acc - e.to_double() * wedge(*comp[x], f[j]);
      }
    rhs[i] = acc;
  }
  const CurvatureBlocks<double> blocks = curvature_blocks(c);
  auto curvature = [&](Gen x) {
    NumericForm acc{2, {}};
    const auto& blk = blocks[static_cast<std::size_t>(x)];
    for (int j = 0; j < 4; ++j)
      for (int l = j + 1; l < 4; ++l)
        if (blk[j][l] != 0) acc = acc + blk[j][l] * wedge(f[j], f[l]);
    return acc;
  };
  rhs[4] = 2.0 * wedge(o0, op) + curvature(Gen::Plus);
  rhs[5] = -2.0 * wedge(o0, om) + curvature(Gen::Minus);
  rhs[6] = wedge(op, om) + curvature(Gen::Zero);
  rhs[7] = curvature(Gen::Scale);
  return rhs;
}

std::vector<ResidualReport> structure_residuals(const StructureSystem& sys, const std::vector<Binding>& samples,
                                                double tol) {
  std::vector<ResidualReport> reports(8);
  for (std::size_t i = 0; i < 8; ++i) {
    reports[i].label = kStructureLabels[i];
    reports[i].tolerance = tol;
  }
  const ChartPtr& P = sys.coframe.chart();
  for (const Binding& b : samples) {
    std::array<NumericForm, 8> f, df;
    CurvatureCoefficients<double> c;
    try {
      Evaluator ev(b);
      for (std::size_t i = 0; i < 8; ++i) {
        f[i] = eval_form(sys.coframe.forms[i], ev);
        df[i] = eval_form(sys.derivatives[i], ev);
      }
      c = transformed_coefficients(evaluate(sys.base, ev),
                                   FiberPoint{b.get(Sym::A10), b.get(Sym::A11), b.get(Sym::A44)});
    } catch (const std::domain_error& e) {
      for (auto& r : reports) ++r.skipped;
      reports[0].messages.push_back(std::string("skipped sample: ") + e.what());
      continue;
    }
    const auto rhs = structure_rhs(f, c);
    const auto point = describe(b);
    for (std::size_t i = 0; i < 8; ++i) {
      const NumericForm diff = df[i] - rhs[i];
      reports[i].observe(diff.max_abs(), point, key_to_string(P, diff.argmax()));
    }
  }
  if (!samples.empty() && reports[0].samples == 0)
    throw std::domain_error("structure_residuals: every sample hit an evaluation domain error");
  for (auto& r : reports) r.finish();
  return reports;
}

std::vector<ResidualReport> structure_residuals(const Expr& F, const std::vector<Binding>& samples, double tol,
                                                const Mutation* mutation) {
  JetDerivatives jet(F);
  return structure_residuals(structure_system(jet, mutation), samples, tol);
}

WeylData weyl_data(const StructureSystem& sys, const std::vector<Binding>& samples, double tol) {
  WeylData w;
  w.A = Expr(-12) * sys.coframe[Slot::Omega];
  const KForm dA = d(w.A);
  for (const Binding& b : samples) {
    Evaluator ev(b);
    std::array<NumericForm, 8> f;
    for (std::size_t i = 0; i < 8; ++i) f[i] = eval_form(sys.coframe.forms[i], ev);
    const auto c = transformed_coefficients(evaluate(sys.base, ev),
                                            FiberPoint{b.get(Sym::A10), b.get(Sym::A11), b.get(Sym::A44)});
    const NumericForm expected = -12.0 * structure_rhs(f, c)[7];
    w.dA_mismatch = std::max(w.dA_mismatch, (eval_form(dA, ev) - expected).max_abs());
    for (double v : {c.b0, c.b1, c.b2, c.b3, c.b4}) w.b_max = std::max(w.b_max, std::abs(v));
    ++w.samples;
  }
  if (w.dA_mismatch > 1e-8)
    throw std::runtime_error("weyl_data: d(-12 Omega) disagrees with -12 dOmega by " + std::to_string(w.dA_mismatch));
  w.maxwell_flat = w.b_max < tol;
  return w;
}

double coframe_determinant(const CoframeSet& coframe, const Binding& b) {
  const std::size_t n = coframe.chart()->dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(coframe.forms.size()), static_cast<Eigen::Index>(n));
  Evaluator ev(b);
  for (std::size_t i = 0; i < coframe.forms.size(); ++i)
    for (const auto& [key, v] : eval_form(coframe.forms[i], ev).entries)
      m(static_cast<Eigen::Index>(i), key[0]) = v;
  return m.rows() == m.cols() ? m.determinant() : 0.0;
}

}  // namespace gl2ode
