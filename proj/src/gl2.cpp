#include "gl2ode/gl2.hpp"

#include <cmath>
#include <string>

#include "gl2ode/parse.hpp"

namespace gl2ode {

const Mat4<Rational>& Gl2Generators::operator[](Gen g) const {
  switch (g) {
    case Gen::Minus: return minus;
    case Gen::Plus: return plus;
    case Gen::Zero: return zero;
    case Gen::Scale: return scale;
  }
  return scale;
}

const Gl2Generators& gl2_generators() {
  static const Gl2Generators g = [] {
    Gl2Generators out{zero_matrix<Rational>(), zero_matrix<Rational>(), zero_matrix<Rational>(),
                      zero_matrix<Rational>()};
    for (int i = 0; i < 3; ++i) {
      out.plus[i][i + 1] = Rational(3 - i);
      out.minus[i + 1][i] = Rational(i + 1);
    }
    for (int i = 0; i < 4; ++i) {
      out.zero[i][i] = Rational(2 * i - 3);
      out.scale[i][i] = Rational(-3);
    }
    return out;
  }();
  return g;
}

void validate(const FiberPoint& p) {
  auto bad = [](double v) { return v == 0 || !std::isfinite(v); };
  if (bad(p.a11) || bad(p.a44) || !std::isfinite(p.a10))
    throw SingularFiber("fiber point requires finite a10 and nonzero finite a11, a44 (got a10=" +
                        std::to_string(p.a10) + ", a11=" + std::to_string(p.a11) +
                        ", a44=" + std::to_string(p.a44) + ")");
}

namespace {

Mat4<Expr> build_symbolic_m() {
  static const char* const entries[4][4] = {
      {"a11*a44", "0", "0", "0"},
      {"-a10/3", "a11", "0", "0"},
      {"a10^2/(9*a11*a44)", "-2*a10/(3*a44)", "a11/a44", "0"},
      {"-a10^3/(27*(a11*a44)^2)", "a10^2/(3*a11*a44^2)", "-a10/a44^2", "a11/a44^2"},
  };
  Mat4<Expr> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = simplify(parse(entries[i][j]));
  return m;
}

// Forward substitution for a lower-triangular matrix.
template <class T, class Simplify>
Mat4<T> lower_inverse(const Mat4<T>& m, Simplify simp) {
  Mat4<T> inv = zero_matrix<T>();
  for (int i = 0; i < 4; ++i) {
    inv[i][i] = simp(detail::from_rational<T>(Rational(1)) / m[i][i]);
    for (int j = 0; j < i; ++j) {
      T acc = detail::from_rational<T>(Rational(0));
      for (int k = j; k < i; ++k) acc = acc + m[i][k] * inv[k][j];
      inv[i][j] = simp(-acc / m[i][i]);
    }
  }
  return inv;
}

}  // namespace

const Mat4<Expr>& gauge_matrix_symbolic() {
  static const Mat4<Expr> m = build_symbolic_m();
  return m;
}

const Mat4<Expr>& gauge_inverse_symbolic() {
  static const Mat4<Expr> inv = lower_inverse(gauge_matrix_symbolic(), [](const Expr& e) { return simplify(e); });
  return inv;
}

GaugeMatrix gauge_matrix(const FiberPoint& p) {
  validate(p);
  const double a = p.a10, b = p.a11, c = p.a44;
  GaugeMatrix g;
  g.m = {{{b * c, 0, 0, 0},
          {-a / 3, b, 0, 0},
          {a * a / (9 * b * c), -2 * a / (3 * c), b / c, 0},
          {-a * a * a / (27 * (b * c) * (b * c)), a * a / (3 * b * c * c), -a / (c * c), b / (c * c)}}};
  g.inverse = lower_inverse(g.m, [](double v) { return v; });
  const Mat4<double> id = matmul(g.m, g.inverse);
  double scale = 0, err = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      scale = std::max({scale, std::abs(g.m[i][j]), std::abs(g.inverse[i][j])});
      err = std::max(err, std::abs(id[i][j] - (i == j ? 1.0 : 0.0)));
    }
  if (!(err <= 1e-12 * std::max(1.0, scale * scale)))
    throw SingularFiber("gauge matrix inverse check failed (residual " + std::to_string(err) + ")");
  return g;
}

}  // namespace gl2ode
