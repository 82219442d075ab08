#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

namespace gl2ode {

namespace {

// Reduced system on the frame (sigma0..sigma3, Omega+). Sign placeholders:
// {ee} = eps1 eps2, {e1}, {e2}. In the dw equations {e1}/{e2} only occur on
// e^{-2w} terms, which is where the Swapped variant exchanges them.
const char* const kOmegaZero[4] = {"w0", "-(w1 + 4*{ee}*w3)", "4*{ee}*w0 + w2", "-w3"};
// Omega- = -{ee} Omega+ + sum_i c_i sigma^i
const char* const kOmegaMinus[4] = {"-2*({ee}*w1 + 2*w3)", "2*w0", "2*{ee}*w3", "-2*(2*{ee}*w0 + w2)"};

// Coefficients on (sigma0, sigma1, sigma2, sigma3, Omega+).
struct ScalarEquation {
  Sym target;
  const char* coeffs[5];
};

const ScalarEquation kScalarEquations[] = {
    {Sym::W0,
     {"(1/4)*(-{e2}*ew + 4*w0^2 + 16*w1*w3 + 32*{ee}*w3^2)", "3*w0*w1",
      "-(-{ee}*w13 - 11*w0*w2 - 4*{ee}*w2^2 + 5*{ee}*w1*w3 + 12*w3^2)", "(11*w0 + 4*{ee}*w2)*w3", "-{ee}*w1"}},
    {Sym::W1,
     {"-3*w0*w1 - 4*{ee}*w1*w2 - 12*{ee}*w0*w3 - 8*w2*w3",
      "-(1/4)*(3*{e1}*ew + 24*{ee}*w0^2 - 20*w1^2 + 8*{ee}*w13 + 64*w0*w2 + 32*{ee}*w2^2 - 120*{ee}*w1*w3"
      " - 192*w3^2)",
      "-(12*w0*w1*{ee} + w1*w2 + 30*w0*w3 + 4*{ee}*w2*w3)", "w13", "3*w0 - 2*{ee}*w2"}},
    {Sym::W2,
     {"(1/2)*(24*{ee}*w0^2 + 2*{ee}*w13 + 30*w0*w2 + 8*{ee}*w2^2 - 26*{ee}*w1*w3 - 48*w3^2)",
      "-(8*{ee}*w0*w1 + w1*w2 + 24*w0*w3 + 12*{ee}*w2*w3)",
      "(1/4)*(-3*{e2}*ew + 96*w0^2 - 8*w13 - 12*w2^2 + 40*w1*w3 + 96*{ee}*w3^2)", "-3*(8*{ee}*w0 + 3*w2)*w3",
      "2*w1 - 3*{ee}*w3"}},
    {Sym::W3,
     {"4*{ee}*w0*w1 + 2*w1*w2 + 11*w0*w3 + 4*{ee}*w2*w3",
      "w13 + 8*{ee}*w0*w2 + 4*w2^2 - 4*w1*w3 - 12*{ee}*w3^2", "w2*w3",
      "(1/4)*(-{e1}*ew + 32*{ee}*w0^2 + 32*w0*w2 + 8*{ee}*w2^2 + 4*w3^2)", "w2"}},
    {Sym::W13,
     {"(1/2)*(-6*{e2}*w0*ew - 240*w0^3 + 40*{ee}*w0*w1^2 - 16*w0*w13 + 5*{e1}*w2*ew - 472*{ee}*w0^2*w2"
      " + 20*w1^2*w2 - 16*{ee}*w13*w2 - 304*w0*w2^2 - 64*{ee}*w2^3 + 384*w0*w1*w3 + 192*{ee}*w1*w2*w3"
      " + 552*{ee}*w0*w3^2 + 272*w2*w3^2)",
      "-(1/4)*(20*{e2}*w1*ew - 256*w0^2*w1 - 28*w1*w13 - 416*{ee}*w0*w1*w2 - 144*w1*w2^2 + 15*{e1}*w3*ew"
      " - 840*{ee}*w0^2*w3 + 20*w1^2*w3 - 24*{ee}*w13*w3 - 1440*w0*w2*w3 - 480*{ee}*w2^2*w3"
      " - 40*{ee}*w1*w3^2 - 192*w3^3)",
      "-(1/2)*(-15*{e1}*w0*ew + 480*{ee}*w0^3 - 24*{ee}*w0*w13 - 2*{e2}*w2*ew + 544*w0^2*w2 - 16*w13*w2"
      " + 184*{ee}*w0*w2^2 + 16*w2^3 + 240*{ee}*w0*w1*w3 + 80*w1*w2*w3 + 588*w0*w3^2 + 184*{ee}*w2*w3^2)",
      "-(1/4)*(5*{e1}*w1*ew - 160*{ee}*w0^2*w1 - 160*w0*w1*w2 - 40*{ee}*w1*w2^2 + 36*{e2}*w3*ew"
      " - 1152*w0^2*w3 - 28*w13*w3 - 1152*{ee}*w0*w2*w3 - 288*w2^2*w3 + 20*w1*w3^2)",
      "-12*{ee}*w0*w1 - w1*w2 + 45*w0*w3 + 30*{ee}*w2*w3"}},
};

std::string with_signs(std::string text, int e1, int e2) {
  const std::pair<std::string, int> subs[] = {{"{ee}", e1 * e2}, {"{e1}", e1}, {"{e2}", e2}};
  for (const auto& [token, v] : subs) {
    const std::string repl = v > 0 ? "(1)" : "(-1)";
    for (std::size_t pos; (pos = text.find(token)) != std::string::npos;) text.replace(pos, token.size(), repl);
  }
  return text;
}

// Exterior calculus on the abstract frame with scalar symbols.
struct FrameSystem {
  ChartPtr chart;
  std::array<KForm, 5> basis;
  std::array<KForm, 5> dbasis;
  std::map<Sym, KForm> dscalar;
  KForm omega_zero, omega_minus;
  KForm d_omega_zero, d_omega_minus;  // the stated right-hand sides

  KForm d_function(const Expr& f) const {
    KForm out(chart, 1);
    for (const auto& [s, ds] : dscalar) {
      const Expr c = partial(f, s);
      if (!c.is_zero()) out += c * ds;
    }
    return out;
  }

  KForm d(const KForm& a) const {
    KForm out(chart, a.degree() + 1);
    for (const auto& [key, c] : a.terms()) {
      KForm mono(chart, a.degree());
      mono.add(key, Expr(1));
      out += wedge(d_function(c), mono);
      for (std::size_t pos = 0; pos < key.size(); ++pos) {
        KForm pre = KForm::function(chart, Expr(1)), post = KForm::function(chart, Expr(1));
        for (std::size_t q = 0; q < pos; ++q) pre = wedge(pre, basis[key[q]]);
        for (std::size_t q = pos + 1; q < key.size(); ++q) post = wedge(post, basis[key[q]]);
        const KForm term = wedge(wedge(pre, dbasis[key[pos]]), post);
        out += (pos % 2 ? Expr(-1) : Expr(1)) * c * term;
      }
    }
    return out;
  }
};

FrameSystem build_system(int e1, int e2, EdsVariant variant) {
  FrameSystem sys;
  sys.chart = Chart::frame({"sigma0", "sigma1", "sigma2", "sigma3", "Omega+"});
  for (std::size_t i = 0; i < 5; ++i) sys.basis[i] = KForm::basis(sys.chart, i);
  const auto& s = sys.basis;
  const KForm& op = s[4];
  auto P = [&](const char* text) { return parse_internal(with_signs(text, e1, e2)); };
  const Expr ew = sym(Sym::EW);
  const int ee = e1 * e2;

  sys.omega_zero = KForm(sys.chart, 1);
  sys.omega_minus = Expr(-ee) * op;
  for (int i = 0; i < 4; ++i) {
    sys.omega_zero += P(kOmegaZero[i]) * s[i];
    sys.omega_minus += P(kOmegaMinus[i]) * s[i];
  }
  const KForm& o0 = sys.omega_zero;
  const KForm& om = sys.omega_minus;
  sys.dbasis[0] = Expr(3) * wedge(o0, s[0]) - Expr(3) * wedge(op, s[1]);
  sys.dbasis[1] = -wedge(om, s[0]) + wedge(o0, s[1]) - Expr(2) * wedge(op, s[2]);
  sys.dbasis[2] = Expr(-2) * wedge(om, s[1]) - wedge(o0, s[2]) - wedge(op, s[3]);
  sys.dbasis[3] = Expr(-3) * wedge(om, s[2]) - Expr(3) * wedge(o0, s[3]);
  sys.dbasis[4] = Expr(2) * wedge(o0, op) +
                  ew * (Expr(-2 * e2) * wedge(s[0], s[1]) + Expr(e1) * (wedge(s[0], s[3]) - Expr(5) * wedge(s[1], s[2])));
  sys.d_omega_minus = Expr(-2) * wedge(o0, om) +
                      ew * (Expr(e2) * (Expr(-1) * wedge(s[0], s[3]) + Expr(5) * wedge(s[1], s[2])) +
                            Expr(2 * e1) * wedge(s[2], s[3]));
  sys.d_omega_zero = wedge(op, om) - ew * (Expr(e2) * wedge(s[0], s[2]) + Expr(e1) * wedge(s[1], s[3]));

  KForm dw(sys.chart, 1);
  const Sym ws[] = {Sym::W0, Sym::W1, Sym::W2, Sym::W3};
  for (int i = 0; i < 4; ++i) dw += sym(ws[i]) * s[i];
  sys.dscalar[Sym::W] = dw;
  sys.dscalar[Sym::EW] = Expr(-2) * ew * dw;
  const int se1 = variant == EdsVariant::Swapped ? e2 : e1;
  const int se2 = variant == EdsVariant::Swapped ? e1 : e2;
  for (const auto& eq : kScalarEquations) {
    KForm f(sys.chart, 1);
    for (int i = 0; i < 5; ++i) f += parse_internal(with_signs(eq.coeffs[i], se1, se2)) * s[i];
    sys.dscalar[eq.target] = f;
  }
  return sys;
}

struct Check {
  std::string label;
  KForm form;
};

std::vector<Check> closure_checks(const FrameSystem& sys) {
  std::vector<Check> out;
  const char* names[] = {"d2 sigma0", "d2 sigma1", "d2 sigma2", "d2 sigma3", "d2 Omega+"};
  for (std::size_t i = 0; i < 5; ++i) out.push_back({names[i], sys.d(sys.dbasis[i])});
  const std::pair<Sym, const char*> scalars[] = {{Sym::W, "d2 w"},   {Sym::W0, "d2 w0"}, {Sym::W1, "d2 w1"},
                                                 {Sym::W2, "d2 w2"}, {Sym::W3, "d2 w3"}, {Sym::W13, "d2 w13"}};
  for (const auto& [s, name] : scalars) out.push_back({name, sys.d(sys.dscalar.at(s))});
  out.push_back({"d Omega0", sys.d(sys.omega_zero) - sys.d_omega_zero});
  out.push_back({"d Omega-", sys.d(sys.omega_minus) - sys.d_omega_minus});
  return out;
}

}  // namespace

ResidualReport eds_closure_check(int eps1, int eps2, std::size_t trials, std::uint64_t seed, double tol,
                                 EdsVariant variant) {
  if ((eps1 != 1 && eps1 != -1) || (eps2 != 1 && eps2 != -1))
    throw std::invalid_argument("eds_closure_check: eps1, eps2 must be +1 or -1");
  const FrameSystem sys = build_system(eps1, eps2, variant);
  const auto checks = closure_checks(sys);
  ResidualReport report;
  report.label = std::string("eds closure (") + (variant == EdsVariant::Printed ? "printed" : "swapped") +
                 ", eps1=" + std::to_string(eps1) + ", eps2=" + std::to_string(eps2) + ")";
  report.tolerance = tol;
  std::vector<double> per_check(checks.size(), 0.0);
  Sampler sampler(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Binding b;
    for (Sym s : {Sym::W, Sym::W0, Sym::W1, Sym::W2, Sym::W3, Sym::W13}) b.set(s, sampler.uniform(-1.5, 1.5));
    b.set(Sym::EW, sampler.uniform(0.2, 2));
    Evaluator ev(b);
    double worst = 0;
    std::string where;
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const double v = eval_form(checks[k].form, ev).max_abs();
      per_check[k] = std::max(per_check[k], v);
      if (v > worst || where.empty()) {
        worst = v;
        where = checks[k].label;
      }
    }
    report.observe(worst, describe(b), where);
  }
  for (std::size_t k = 0; k < checks.size(); ++k)
    if (per_check[k] > tol) report.messages.push_back(checks[k].label + ": " + std::to_string(per_check[k]));
  report.finish();
  return report;
}

double eds_constancy_obstruction(int eps1, int eps2, EdsVariant variant) {
  const FrameSystem sys = build_system(eps1, eps2, variant);
  // Constant w forces dw = 0, i.e. w0 = w1 = w2 = w3 = 0; every remaining
  // coefficient of dw0..dw13 must then vanish. Coefficients free of w13 that
  // reduce to a nonzero multiple of e^{-2w} cannot.
  const std::map<Sym, Expr> zeros{{Sym::W0, Expr(0)}, {Sym::W1, Expr(0)}, {Sym::W2, Expr(0)}, {Sym::W3, Expr(0)}};
  Binding b;
  b.set(Sym::EW, 1).set(Sym::W, 0);
  double worst = 0;
  for (Sym s : {Sym::W0, Sym::W1, Sym::W2, Sym::W3, Sym::W13})
    for (const auto& [key, c] : sys.dscalar.at(s).terms()) {
      const Expr e = simplify(substitute(c, zeros));
      if (e.is_zero() || depends_on(e, Sym::W13)) continue;
      worst = std::max(worst, std::abs(eval(e, b)));
    }
  return worst;
}

}  // namespace gl2ode
