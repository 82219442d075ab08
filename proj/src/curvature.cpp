#include "gl2ode/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace gl2ode {

namespace {

struct Entry {
  const char* label;
  Rational scale;
  const char* text;
};

const Entry kCoefficientEntries[] = {
    {"a0", Rational(1, 4050),
     "-180*DF223 + 288*DF33^2 - 4860*F123 + 2520*F222 - 378*DF33*F23 + 1782*F23^2 + 810*DF3*F233"
     " - 2700*F2*F233 - 180*DF233*F3 - 2430*F133*F3 + 2880*F223*F3 - 45*DF333*F3^2 + 435*F233*F3^2"
     " + 810*DF23*F33 + 810*F13*F33 - 2520*F22*F33 + 408*DF33*F3*F33 - 594*F23*F3*F33 + 810*F2*F33^2"
     " + 122*F3^2*F33^2 - 270*DF2*F333 + 1080*F1*F333 + 270*DF3*F3*F333 - 1080*F2*F3*F333"
     " - 135*F3^3*F333 + 2700*F33y"},
    {"a1", Rational(1, 540),
     "-72*DF233 - 432*F133 + 216*F223 - 36*DF333*F3 + 96*F233*F3 + 48*DF33*F33 + 16*F3*F33^2"
     " + 108*DF3*F333 - 324*F2*F333 - 81*F3^2*F333"},
    {"a2", Rational(1, 45), "-18*DF333 - 24*F233 - 4*F33^2 - 27*F3*F333"},
    {"b0", Rational(1, 129600),
     "-8640*DF233*DF3 - 12960*DF23*DF33 - 4320*DF2*DF333 + 43200*DF33y + 17280*DF333*F1 + 129600*F113"
     " - 64800*F122 - 34560*DF33*F13 - 86400*DF3*F133 + 12960*DF233*F2 + 194400*F133*F2 + 30240*DF33*F22"
     " + 32400*DF3*F223 - 64800*F2*F223 + 6480*DF23*F23 - 25920*F13*F23 - 15120*F22*F23 + 2160*DF2*F233"
     " - 8640*F1*F233 - 64800*F23y - 6480*DF33^2*F3 - 6480*DF3*DF333*F3 - 21600*F123*F3"
     " + 10800*DF333*F2*F3 - 10800*F222*F3 + 25560*DF33*F23*F3 - 18360*F23^2*F3 + 13320*DF3*F233*F3"
     " - 25920*F2*F233*F3 + 3960*DF233*F3^2 + 50400*F133*F3^2 - 28800*F223*F3^2 + 2820*DF333*F3^3"
     " - 10980*F233*F3^3 - 18000*DF22*F33 + 6480*DF3*DF33*F33 + 86400*F12*F33 - 28080*DF33*F2*F33"
     " - 11880*DF3*F23*F33 + 10800*F2*F23*F33 - 19080*DF23*F3*F33 + 18720*F13*F3*F33"
     " + 16920*F22*F3*F33 - 8100*DF33*F3^2*F33 + 7200*F23*F3^2*F33 + 7560*DF2*F33^2"
     " - 30240*F1*F33^2 - 11520*F2*F3*F33^2 - 1620*F3^3*F33^2 + 11664*DF3^2*F333"
     " - 63072*DF3*F2*F333 + 76464*F2^2*F333 - 2520*DF2*F3*F333 + 10080*F1*F3*F333"
     " - 17712*DF3*F3^2*F333 + 42768*F2*F3^2*F333 + 5299*F3^4*F333 - 18000*F3*F33y"
     " - 75600*F33*F3y + 43200*F333*Fy"},
    {"b1", Rational(1, 1080),
     "-180*DF223 - 540*F123 + 360*F222 - 90*DF33*F23 + 270*F23^2 + 90*DF3*F233 - 540*F2*F233"
     " - 180*DF233*F3 - 270*F133*F3 + 360*F223*F3 - 45*DF333*F3^2 - 45*F233*F3^2 + 90*DF23*F33"
     " + 90*F13*F33 - 360*F22*F33 - 90*F23*F3*F33 + 90*F2*F33^2 + 18*DF2*F333 - 72*F1*F333"
     " + 54*DF3*F3*F333 - 288*F2*F3*F333 - 71*F3^3*F333 - 180*F33y"},
    {"b2", Rational(1, 360),
     "120*DF233 + 240*F133 - 120*F223 + 60*DF333*F3 - 36*DF3*F333 + 204*F2*F333 + 79*F3^2*F333"},
    {"b3", Rational(1, 12), "-6*DF333 - 5*F3*F333"},
    {"b4", Rational(-2), "F333"},
};

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

std::array<Rational, 8> w(std::initializer_list<std::pair<int, Rational>> items) {
  std::array<Rational, 8> out;
  out.fill(Rational(0));
  for (const auto& [k, v] : items) out[static_cast<std::size_t>(k)] = v;
  return out;
}

enum { A0, A1, A2, B0, B1, B2, B3, B4 };

}  // namespace

const std::vector<Formula>& curvature_formulas() {
  static const std::vector<Formula> formulas = [] {
    std::vector<Formula> out;
    for (const auto& e : kCoefficientEntries) out.push_back(make_formula(e.label, e.scale, e.text));
    return out;
  }();
  return formulas;
}

CurvatureCoefficients<Expr> base_coefficients(JetDerivatives& jet, const Mutation* mutation) {
  std::array<Expr, 8> v;
  const auto& fs = curvature_formulas();
  for (std::size_t k = 0; k < 8; ++k) v[k] = build(fs[k], jet, mutation);
  return CurvatureCoefficients<Expr>::from_array(v);
}

CurvatureCoefficients<Expr> base_coefficients(const Expr& F) {
  JetDerivatives jet(F);
  return base_coefficients(jet);
}

CurvatureCoefficients<double> evaluate(const CurvatureCoefficients<Expr>& c, Evaluator& ev) {
  const auto v = c.to_array();
  std::array<double, 8> out;
  for (std::size_t k = 0; k < 8; ++k) out[k] = ev(v[k]);
  return CurvatureCoefficients<double>::from_array(out);
}

const std::vector<CurvatureEntry>& curvature_entries() {
  static const std::vector<CurvatureEntry> entries = {
      {Gen::Plus, 0, 1, w({{A0, r(-1, 4)}, {B1, r(1, 3)}})},
      {Gen::Plus, 0, 2, w({{A1, r(1, 4)}, {B2, r(1, 2)}})},
      {Gen::Plus, 0, 3, w({{A2, r(1, 8)}, {B3, r(1, 6)}})},
      {Gen::Plus, 1, 2, w({{A2, r(-5, 8)}, {B3, r(1, 2)}})},
      {Gen::Plus, 1, 3, w({{B4, r(1, 6)}})},
      {Gen::Minus, 0, 2, w({{B0, r(1, 6)}})},
      {Gen::Minus, 0, 3, w({{A0, r(-1, 8)}, {B1, r(1, 6)}})},
      {Gen::Minus, 1, 2, w({{A0, r(5, 8)}, {B1, r(1, 2)}})},
      {Gen::Minus, 1, 3, w({{A1, r(-1, 4)}, {B2, r(1, 2)}})},
      {Gen::Minus, 2, 3, w({{A2, r(1, 4)}, {B3, r(1, 3)}})},
      {Gen::Zero, 0, 1, w({{B0, r(-1, 6)}})},
      {Gen::Zero, 0, 2, w({{A0, r(-1, 8)}, {B1, r(-1, 6)}})},
      {Gen::Zero, 0, 3, w({{A1, r(1, 4)}})},
      {Gen::Zero, 1, 2, w({{A1, r(-1, 4)}})},
      {Gen::Zero, 1, 3, w({{A2, r(-1, 8)}, {B3, r(1, 6)}})},
      {Gen::Zero, 2, 3, w({{B4, r(1, 6)}})},
      {Gen::Scale, 0, 1, w({{B0, r(-1, 6)}})},
      {Gen::Scale, 0, 2, w({{B1, r(-1, 3)}})},
      {Gen::Scale, 0, 3, w({{B2, r(-1, 6)}})},
      {Gen::Scale, 1, 2, w({{B2, r(-1, 2)}})},
      {Gen::Scale, 1, 3, w({{B3, r(-1, 3)}})},
      {Gen::Scale, 2, 3, w({{B4, r(-1, 6)}})},
  };
  return entries;
}

CurvatureCoefficients<double> extract_coefficients(const Mat4<double>& rm, double* off_pattern) {
  const Mat4<double> s = symmetric_part(rm), a = antisymmetric_part(rm);
  CurvatureCoefficients<double> c;
  c.a0 = s[0][2];
  c.a1 = s[1][2];
  c.a2 = s[1][3];
  c.b0 = a[0][1];
  c.b1 = a[0][2] / 2;
  c.b2 = a[0][3];
  c.b3 = a[1][3] / 2;
  c.b4 = a[2][3];
  if (off_pattern) {
    const double checks[] = {s[0][0], s[3][3], s[0][1], s[2][3], s[1][1] + 2 * s[0][2], s[2][2] + 2 * s[1][3],
                             s[0][3] + s[1][2], a[1][2] - 3 * a[0][3]};
    double worst = 0;
    for (double v : checks) worst = std::max(worst, std::abs(v));
    *off_pattern = worst;
  }
  return c;
}

Mat4<double> transform_ricci(const Mat4<double>& r0, const FiberPoint& p) {
  const GaugeMatrix g = gauge_matrix(p);
  return matmul(matmul(transpose(g.inverse), r0), g.inverse);
}

CurvatureCoefficients<double> transformed_coefficients(const CurvatureCoefficients<double>& base, const FiberPoint& p,
                                                       double tol) {
  const Mat4<double> rm = transform_ricci(ricci(base), p);
  double off = 0, scale = 1;
  for (const auto& row : rm)
    for (double v : row) scale = std::max(scale, std::abs(v));
  const auto c = extract_coefficients(rm, &off);
  if (!(off <= tol * scale))
    throw PatternError("transformed Ricci matrix leaves the curvature pattern by " + std::to_string(off));
  return c;
}

CurvatureCoefficients<double> rule_transformed_coefficients(const CurvatureCoefficients<double>& o, const FiberPoint& p,
                                                            GaugeRule rule) {
  validate(p);
  const double a = p.a10, b = p.a11, c = p.a44;
  const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b, b6 = b5 * b;
  CurvatureCoefficients<double> t;
  t.b4 = c * c * c / b2 * o.b4;
  t.b3 = c * c / b2 * o.b3 + a * c * c / (3 * b3) * o.b4;
  t.b2 = c / b2 * o.b2 + 2 * a * c / (3 * b3) * o.b3 + a * a * c / (9 * b4) * o.b4;
  const double b1_b3_denominator = rule == GaugeRule::Printed ? std::pow(3 * b, 4) : 3 * b4;
  t.b1 = o.b1 / b2 + a / b3 * o.b2 + a * a / b1_b3_denominator * o.b3 + a * a * a / (27 * b5) * o.b4;
  t.b0 = o.b0 / (b2 * c) + 4 * a / (3 * b3 * c) * o.b1 + 2 * a * a / (3 * b4 * c) * o.b2 +
         4 * a * a * a / (27 * b5 * c) * o.b3 + a * a * a * a / (81 * b6 * c) * o.b4;
  t.a2 = c * c / b2 * o.a2;
  t.a1 = c / b2 * o.a1 - a * c / (3 * b3) * o.a2;
  t.a0 = o.a0 / b2 - 2 * a / (3 * b3) * o.a1 + a * a / (9 * b4) * o.a2;
  return t;
}

double quartic_I4(const std::array<double, 4>& t) {
  const double t0 = t[0], t1 = t[1], t2 = t[2], t3 = t[3];
  return -3 * t1 * t1 * t2 * t2 + 4 * t0 * t2 * t2 * t2 + 4 * t1 * t1 * t1 * t3 - 6 * t0 * t1 * t2 * t3 +
         t0 * t0 * t3 * t3;
}

double determinant(const Mat4<double>& m) {
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m[i][j];
  return e.determinant();
}

}  // namespace gl2ode
