#include "gl2ode/family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "gl2ode/bryant.hpp"
#include "gl2ode/coframe.hpp"
#include "gl2ode/curvature.hpp"
#include "gl2ode/jet.hpp"
#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"

namespace gl2ode {

namespace {

constexpr int kMaxClosureOrder = 8;

struct Closure {
  std::array<Expr, kMaxClosureOrder + 1> orders;  // q^{(k)} for k >= 2
};

Closure make_closure(Branch branch) {
  const char* const rest = branch == Branch::A ? "3*z*qp^2 - 6*q*qp + 4*q" : "3*z*qp^2 - 6*q*qp + 14*q - 15*z";
  const Expr g = -parse_internal(rest) / parse_internal("6*z*(3*z - 2*q)");
  Closure c;
  c.orders[2] = g;
  for (int k = 3; k <= kMaxClosureOrder; ++k) {
    const Expr& prev = c.orders[k - 1];
    c.orders[k] = partial(prev, Sym::Z) + sym(Sym::QP) * partial(prev, Sym::Q) + g * partial(prev, Sym::QP);
  }
  return c;
}

const Closure& closure(Branch branch) {
  static std::once_flag flags[2];
  static Closure cache[2];
  const int i = branch == Branch::A ? 0 : 1;
  std::call_once(flags[i], [&] { cache[i] = make_closure(branch); });
  return cache[i];
}

double second_derivative(Branch branch, double z, double q, double qp) {
  const double rest = 3 * z * qp * qp - 6 * q * qp + (branch == Branch::A ? 4 * q : 14 * q - 15 * z);
  return -rest / (6 * z * (3 * z - 2 * q));
}

// Cubic Hermite on [z0, z1] with values f and slopes df.
double hermite(double t, double h, double f0, double f1, double d0, double d1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

}  // namespace

const char* branch_name(Branch b) { return b == Branch::A ? "a" : "b"; }

Branch parse_branch(std::string_view name) {
  if (name == "a") return Branch::A;
  if (name == "b") return Branch::B;
  throw std::invalid_argument("branch must be 'a' or 'b', got '" + std::string(name) + "'");
}

double q_residual(Branch branch, double z, double q, double qp, double qpp) {
  const double tail = branch == Branch::A ? 4 * q : 14 * q - 15 * z;
  return 6 * z * (3 * z - 2 * q) * qpp + 3 * z * qp * qp - 6 * q * qp + tail;
}

std::array<Rational, 3> linear_residual_polynomial(Branch branch) {
  // q = cz: 3z c^2 - 6 c^2 z + {4cz | 14cz - 15z}
  return branch == Branch::A ? std::array<Rational, 3>{Rational(-3), Rational(4), Rational(0)}
                             : std::array<Rational, 3>{Rational(-3), Rational(14), Rational(-15)};
}

std::vector<Rational> linear_roots(Branch branch) {
  // Rational root theorem on the integer quadratic a c^2 + b c + k.
  const auto p = linear_residual_polynomial(branch);
  auto value = [&](const Rational& c) { return p[0] * c * c + p[1] * c + p[2]; };
  std::vector<Rational> roots;
  const std::int64_t lead = std::abs(p[0].num()), constant = std::abs(p[2].num());
  if (constant == 0) roots.emplace_back(0);
  std::vector<std::int64_t> num_divisors, den_divisors;
  const std::int64_t c_for_divisors = constant == 0 ? std::abs(p[1].num()) : constant;
  for (std::int64_t d = 1; d <= c_for_divisors; ++d)
    if (c_for_divisors % d == 0) num_divisors.push_back(d);
  for (std::int64_t d = 1; d <= lead; ++d)
    if (lead % d == 0) den_divisors.push_back(d);
  for (std::int64_t n : num_divisors)
    for (std::int64_t d : den_divisors)
      for (std::int64_t s : {1, -1}) {
        const Rational c(s * n, d);
        if (value(c).is_zero() && std::find(roots.begin(), roots.end(), c) == roots.end()) roots.push_back(c);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

const Expr& q_closure(Branch branch, int k) {
  if (k < 2 || k > kMaxClosureOrder)
    throw std::out_of_range("q_closure: order " + std::to_string(k) + " outside [2, " +
                            std::to_string(kMaxClosureOrder) + "]");
  return closure(branch).orders[static_cast<std::size_t>(k)];
}

bool near_singular(double z, double q) {
  const double guard = 1e-4 * (1 + std::abs(z));
  return !(std::abs(3 * z - 2 * q) >= guard && std::abs(z) >= guard);
}

double QSolution::value(int order, double at) const {
  if (z.empty() || !(at >= z.front() && at <= z.back()))
    throw SingularPoint("q: z = " + std::to_string(at) + " outside the integrated grid");
  const auto it = std::upper_bound(z.begin(), z.end(), at);
  const std::size_t i = it == z.end() ? z.size() - 2 : static_cast<std::size_t>(it - z.begin()) - 1;
  const double h = z[i + 1] - z[i], t = (at - z[i]) / h;
  const double qv = hermite(t, h, q[i], q[i + 1], qp[i], qp[i + 1]);
  if (order == 0) return qv;
  const double qpv = hermite(t, h, qp[i], qp[i + 1], qpp[i], qpp[i + 1]);
  if (order == 1) return qpv;
  if (near_singular(at, qv)) throw SingularPoint("q: z = " + std::to_string(at) + " is near the singular locus");
  Binding b;
  b.set(Sym::Z, at).set(Sym::Q, qv).set(Sym::QP, qpv);
  return eval(q_closure(branch, order), b);
}

QSolution integrate_q(Branch branch, double z0, double q0, double qp0, double step, std::size_t nodes) {
  if (!std::isfinite(z0) || !std::isfinite(q0) || !std::isfinite(qp0) || !std::isfinite(step) || step == 0)
    throw std::invalid_argument("integrate_q: initial data and step must be finite, step nonzero");
  if (near_singular(z0, q0)) throw SingularPoint("integrate_q: singular initial condition (z(3z - 2q) = 0)");
  QSolution s;
  s.branch = branch;
  s.z0 = z0, s.q0 = q0, s.qp0 = qp0, s.step = step, s.requested_nodes = nodes;
  auto push = [&](double z, double q, double qp) {
    s.z.push_back(z);
    s.q.push_back(q);
    s.qp.push_back(qp);
    s.qpp.push_back(second_derivative(branch, z, q, qp));
  };
  push(z0, q0, qp0);
  double z = z0, q = q0, qp = qp0;
  auto f = [&](double zz, double qq, double pp, double& dq, double& dp) {
    if (near_singular(zz, qq)) return false;
    dq = pp;
    dp = second_derivative(branch, zz, qq, pp);
    return true;
  };
  for (std::size_t n = 0; n < nodes; ++n) {
    const double h = step;
    double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
    const bool ok = f(z, q, qp, k1q, k1p) && f(z + h / 2, q + h / 2 * k1q, qp + h / 2 * k1p, k2q, k2p) &&
                    f(z + h / 2, q + h / 2 * k2q, qp + h / 2 * k2p, k3q, k3p) &&
                    f(z + h, q + h * k3q, qp + h * k3p, k4q, k4p);
    const double qn = q + h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    const double pn = qp + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (!ok || near_singular(z + h, qn) || !std::isfinite(qn) || !std::isfinite(pn)) {
      s.truncated = true;
      break;
    }
    z = z0 + static_cast<double>(n + 1) * h;
    q = qn;
    qp = pn;
    push(z, q, qp);
  }
  if (s.z.size() < 2) throw SingularPoint("integrate_q: singular locus reached before the first step");
  if (step < 0) {
    std::reverse(s.z.begin(), s.z.end());
    std::reverse(s.q.begin(), s.q.end());
    std::reverse(s.qp.begin(), s.qp.end());
    std::reverse(s.qpp.begin(), s.qpp.end());
  }
  for (std::size_t i = 0; i < s.z.size(); ++i)
    s.max_node_residual = std::max(s.max_node_residual, std::abs(q_residual(branch, s.z[i], s.q[i], s.qp[i], s.qpp[i])));
  return s;
}

Expr ansatz_F() {
  const Expr y2 = sym(Sym::Y2), y3 = sym(Sym::Y3);
  return pow(y2, Rational(2)) * Expr::function("q", 0, pow(y3, Rational(2)) * pow(y2, Rational(-3)));
}

Binding& bind_solution(Binding& b, const std::shared_ptr<const QSolution>& sol) {
  return b.set_function("q", [sol](int order, double z) { return sol->value(order, z); });
}

std::vector<Binding> family_samples(const std::shared_ptr<const QSolution>& sol, std::size_t n, std::uint64_t seed) {
  const double lo = sol->z_min(), hi = sol->z_max(), margin = 0.1 * (hi - lo);
  if (lo + margin <= 0) throw std::domain_error("family_samples: the ansatz needs z > 0 on the grid");
  Sampler s(seed);
  std::vector<Binding> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.uniform(-1, 1), y = s.uniform(0.5, 2), y1 = s.uniform(-1, 1), y2 = s.uniform(0.5, 2);
    const double z = s.uniform(lo + margin, hi - margin);
    Binding b;
    b.set(Sym::X, x).set(Sym::Y, y).set(Sym::Y1, y1).set(Sym::Y2, y2).set(Sym::Y3, std::sqrt(z * y2 * y2 * y2));
    out.push_back(std::move(bind_solution(b, sol)));
  }
  return out;
}

std::optional<Rational> homogeneous_special(const QSolution& sol) {
  for (const Rational& c : linear_roots(sol.branch)) {
    const double cv = c.to_double();
    bool match = true;
    for (std::size_t i = 0; i < sol.z.size() && match; ++i)
      match = std::abs(sol.q[i] - cv * sol.z[i]) < 1e-8 * (1 + std::abs(sol.q[i]));
    if (match) return c;
  }
  return std::nullopt;
}

FamilyReport scan_family(const std::shared_ptr<const QSolution>& sol, const std::vector<Binding>& samples,
                         double flat_tol) {
  const Expr F = ansatz_F();
  JetDerivatives jet(F);
  const BryantResiduals bryant = bryant_residuals(jet);
  const CurvatureCoefficients<Expr> base = base_coefficients(jet);
  const CoframeSet coframe = base_coframe(jet);
  FamilyReport r;
  r.special = homogeneous_special(*sol);
  for (const Binding& b : samples) {
    Evaluator ev(b);
    r.bryant_max = std::max({r.bryant_max, std::abs(ev(bryant.r1)), std::abs(ev(bryant.r2))});
    const CurvatureCoefficients<double> c = evaluate(base, ev);
    const double bscale = std::max({1.0, std::abs(c.b0), std::abs(c.b1), std::abs(c.b2), std::abs(c.b3), std::abs(c.b4)});
    r.I2_max = std::max(r.I2_max, std::abs(invariant_I2(c)));
    r.I3_max = std::max(r.I3_max, std::abs(invariant_I3(c)) / (bscale * bscale));
    r.cubic_max = std::max(r.cubic_max, std::abs(quartic_cubic_invariant(c)) / (bscale * bscale * bscale));
    r.a2_max = std::max(r.a2_max, std::abs(c.a2));
    r.b4_max = std::max(r.b4_max, std::abs(c.b4));
    for (double v : {c.b0, c.b1, c.b2, c.b3, c.b4})
      if (std::abs(v) >= flat_tol) r.maxwell_flat = false;
    // theta-quartic on each coordinate direction of the jet chart
    std::array<NumericForm, 4> theta;
    double tscale = 0;
    for (int i = 0; i < 4; ++i) {
      theta[i] = eval_form(coframe.theta(i), ev);
      tscale = std::max(tscale, theta[i].max_abs());
    }
    for (std::uint8_t k = 0; k < 5; ++k) {
      std::array<double, 4> t;
      for (int i = 0; i < 4; ++i) t[i] = theta[i].at({k});
      r.I4_max = std::max(r.I4_max, std::abs(quartic_I4(t)) / std::pow(std::max(tscale, 1e-300), 4));
    }
    ++r.samples;
  }
  return r;
}

}  // namespace gl2ode
