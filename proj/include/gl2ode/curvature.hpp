#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "gl2ode/formula.hpp"
#include "gl2ode/gl2.hpp"
#include "gl2ode/jet.hpp"

namespace gl2ode {

/// The eight free curvature coefficients, in the order (a0, a1, a2, b0, .., b4).
template <class T>
struct CurvatureCoefficients {
  T a0{}, a1{}, a2{}, b0{}, b1{}, b2{}, b3{}, b4{};

  std::array<T, 8> to_array() const { return {a0, a1, a2, b0, b1, b2, b3, b4}; }
  static CurvatureCoefficients from_array(const std::array<T, 8>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  }
};

inline constexpr std::array<const char*, 8> kCoefficientNames{"a0", "a1", "a2", "b0", "b1", "b2", "b3", "b4"};

/// Transcribed base-section coefficients a^0_i, b^0_i, labelled "a0".."b4".
const std::vector<Formula>& curvature_formulas();

CurvatureCoefficients<Expr> base_coefficients(JetDerivatives& jet, const Mutation* mutation = nullptr);
CurvatureCoefficients<Expr> base_coefficients(const Expr& F);
CurvatureCoefficients<double> evaluate(const CurvatureCoefficients<Expr>& c, Evaluator& ev);

/// Ricci matrix R_jl of the connection:
///   [[0, b0, a0+2b1, -a1+b2], [-b0, -2a0, a1+3b2, a2+2b3],
///    [a0-2b1, a1-3b2, -2a2, b4], [-a1-b2, a2-2b3, -b4, 0]]
template <class T>
Mat4<T> ricci(const CurvatureCoefficients<T>& c) {
  const T two = detail::from_rational<T>(Rational(2)), three = detail::from_rational<T>(Rational(3));
  const T zero = detail::from_rational<T>(Rational(0));
  return {{{zero, c.b0, c.a0 + two * c.b1, c.b2 - c.a1},
           {zero - c.b0, zero - two * c.a0, c.a1 + three * c.b2, c.a2 + two * c.b3},
           {c.a0 - two * c.b1, c.a1 - three * c.b2, zero - two * c.a2, c.b4},
           {zero - c.a1 - c.b2, c.a2 - two * c.b3, zero - c.b4, zero}}};
}

template <class T>
Mat4<T> symmetric_part(const Mat4<T>& r) {
  const T half = detail::from_rational<T>(Rational(1, 2));
  Mat4<T> s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s[i][j] = half * (r[i][j] + r[j][i]);
  return s;
}

template <class T>
Mat4<T> antisymmetric_part(const Mat4<T>& r) {
  const T half = detail::from_rational<T>(Rational(1, 2));
  Mat4<T> s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s[i][j] = half * (r[i][j] - r[j][i]);
  return s;
}

class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads the eight coefficients off a Ricci matrix. `off_pattern` receives
/// the largest violation of the redundant slots (R00, R33, R(01), R(23),
/// R(11)+2R(02), R(22)+2R(13), R(03)+R(12), R[12]-3R[03]).
CurvatureCoefficients<double> extract_coefficients(const Mat4<double>& r, double* off_pattern = nullptr);

/// R_ij = R0_kl (m^-1)^k_i (m^-1)^l_j.
Mat4<double> transform_ricci(const Mat4<double>& r0, const FiberPoint& p);

/// Coefficients at fiber point p from those at (0,1,1), via the Ricci
/// transformation and extraction. Throws PatternError when the transformed
/// matrix leaves the pattern by more than `tol` (relative to its size).
CurvatureCoefficients<double> transformed_coefficients(const CurvatureCoefficients<double>& base, const FiberPoint& p,
                                                       double tol = 1e-10);

/// The closed-form gauge rules for the a- and b-coefficients. Printed keeps
/// the published b1 line, whose a10^2 b3 term has denominator (3 a11)^4;
/// Corrected uses 3 a11^4, which is what the Ricci transformation gives.
enum class GaugeRule { Corrected, Printed };
CurvatureCoefficients<double> rule_transformed_coefficients(const CurvatureCoefficients<double>& base,
                                                            const FiberPoint& p, GaugeRule rule = GaugeRule::Corrected);

/// Curvature 2-forms: blocks[X][j][l] is the theta^j ^ theta^l coefficient
/// (j < l, antisymmetric) of the curvature along generator X.
template <class T>
using CurvatureBlocks = std::array<Mat4<T>, 4>;

/// Linear coefficient tables of the curvature 2-forms in (a0..b4).
struct CurvatureEntry {
  Gen gen;
  int j, l;
  std::array<Rational, 8> weights;
};
const std::vector<CurvatureEntry>& curvature_entries();

template <class T>
CurvatureBlocks<T> curvature_blocks(const CurvatureCoefficients<T>& c) {
  CurvatureBlocks<T> out;
  for (auto& b : out) b = zero_matrix<T>();
  const auto v = c.to_array();
  for (const auto& e : curvature_entries()) {
    T acc = detail::from_rational<T>(Rational(0));
    for (std::size_t k = 0; k < 8; ++k)
      if (!e.weights[k].is_zero()) acc = acc + detail::from_rational<T>(e.weights[k]) * v[k];
    auto& blk = out[static_cast<std::size_t>(e.gen)];
    blk[e.j][e.l] = acc;
    blk[e.l][e.j] = detail::from_rational<T>(Rational(0)) - acc;
  }
  return out;
}

/// R^i_{kjl}, antisymmetric in (j, l).
template <class T>
struct CurvatureTensor {
  std::array<T, 256> v{};
  T& operator()(int i, int k, int j, int l) { return v[((i * 4 + k) * 4 + j) * 4 + l]; }
  const T& operator()(int i, int k, int j, int l) const { return v[((i * 4 + k) * 4 + j) * 4 + l]; }
};

/// R^i_{kjl} = sum_X blocks[X][j][l] (E_X)^i_k.
template <class T>
CurvatureTensor<T> assemble_curvature(const CurvatureCoefficients<T>& c) {
  const auto blocks = curvature_blocks(c);
  const auto& g = gl2_generators();
  CurvatureTensor<T> out;
  out.v.fill(detail::from_rational<T>(Rational(0)));
  for (std::size_t x = 0; x < 4; ++x) {
    const auto& e = g[kGenerators[x]];
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        if (e[i][k].is_zero()) continue;
        const T w = detail::from_rational<T>(e[i][k]);
        for (int j = 0; j < 4; ++j)
          for (int l = 0; l < 4; ++l) out(i, k, j, l) = out(i, k, j, l) + w * blocks[x][j][l];
      }
  }
  return out;
}

/// R_jl = R^i_{jil}.
template <class T>
Mat4<T> ricci_contraction(const CurvatureTensor<T>& r) {
  Mat4<T> out = zero_matrix<T>();
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i) out[j][l] = out[j][l] + r(i, j, i, l);
  return out;
}

/// R^i_{ikl}.
template <class T>
Mat4<T> trace_contraction(const CurvatureTensor<T>& r) {
  Mat4<T> out = zero_matrix<T>();
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i) out[k][l] = out[k][l] + r(i, i, k, l);
  return out;
}

/// I2 = a1^2 - a0 a2.
template <class T>
T invariant_I2(const CurvatureCoefficients<T>& c) {
  return c.a1 * c.a1 - c.a0 * c.a2;
}

/// I3 = 3 b2^2 - 4 b1 b3 + b0 b4.
template <class T>
T invariant_I3(const CurvatureCoefficients<T>& c) {
  const T three = detail::from_rational<T>(Rational(3)), four = detail::from_rational<T>(Rational(4));
  return three * c.b2 * c.b2 - four * c.b1 * c.b3 + c.b0 * c.b4;
}

/// Cubic invariant of the b-quartic, det [[b0,b1,b2],[b1,b2,b3],[b2,b3,b4]].
/// Together with I3 it vanishes exactly when the quartic has a root of
/// multiplicity at least three.
template <class T>
T quartic_cubic_invariant(const CurvatureCoefficients<T>& c) {
  const T two = detail::from_rational<T>(Rational(2));
  return c.b0 * c.b2 * c.b4 + two * c.b1 * c.b2 * c.b3 - c.b2 * c.b2 * c.b2 - c.b0 * c.b3 * c.b3 -
         c.b1 * c.b1 * c.b4;
}

/// I4 = -3 t1^2 t2^2 + 4 t0 t2^3 + 4 t1^3 t3 - 6 t0 t1 t2 t3 + t0^2 t3^2.
double quartic_I4(const std::array<double, 4>& t);

double determinant(const Mat4<double>& m);

}  // namespace gl2ode
