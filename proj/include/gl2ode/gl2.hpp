#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <type_traits>

#include "gl2ode/expr.hpp"
#include "gl2ode/rational.hpp"

namespace gl2ode {

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

/// Generator slots, in the order used by every 4-component decomposition.
enum class Gen : std::uint8_t { Minus, Plus, Zero, Scale };
inline constexpr std::array<Gen, 4> kGenerators{Gen::Minus, Gen::Plus, Gen::Zero, Gen::Scale};

/// gl(2,R) in its irreducible 4-dimensional representation:
/// E+ raises (superdiagonal 3,2,1), E- lowers (subdiagonal 1,2,3),
/// E0 = diag(-3,-1,1,3), E = -3 I.
struct Gl2Generators {
  Mat4<Rational> minus, plus, zero, scale;
  const Mat4<Rational>& operator[](Gen g) const;
};

const Gl2Generators& gl2_generators();

namespace detail {
template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, double>) return q.to_double();
  else return T(q);
}
}  // namespace detail

template <class T>
Mat4<T> zero_matrix() {
  Mat4<T> m;
  for (auto& row : m) row.fill(detail::from_rational<T>(Rational(0)));
  return m;
}

template <class T>
Mat4<T> identity_matrix() {
  Mat4<T> m = zero_matrix<T>();
  for (int i = 0; i < 4; ++i) m[i][i] = detail::from_rational<T>(Rational(1));
  return m;
}

template <class T>
Mat4<T> convert(const Mat4<Rational>& a) {
  Mat4<T> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = detail::from_rational<T>(a[i][j]);
  return out;
}

template <class T>
Mat4<T> matmul(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> out = zero_matrix<T>();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] = out[i][j] + a[i][k] * b[k][j];
  return out;
}

template <class T>
Mat4<T> transpose(const Mat4<T>& a) {
  Mat4<T> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = a[j][i];
  return out;
}

template <class T>
Mat4<T> commutator(const Mat4<T>& a, const Mat4<T>& b) {
  const Mat4<T> ab = matmul(a, b), ba = matmul(b, a);
  Mat4<T> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = ab[i][j] - ba[i][j];
  return out;
}

/// sum_X c[X] E_X.
template <class T>
Mat4<T> compose(const std::array<T, 4>& c) {
  const auto& g = gl2_generators();
  Mat4<T> out = zero_matrix<T>();
  for (std::size_t x = 0; x < 4; ++x) {
    const Mat4<Rational>& e = g[kGenerators[x]];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!e[i][j].is_zero()) out[i][j] = out[i][j] + detail::from_rational<T>(e[i][j]) * c[x];
  }
  return out;
}

/// Coefficients (c-, c+, c0, c) of a matrix in the generator basis, read off
/// four entries. Callers that need exactness compare compose(result) with
/// the input.
template <class T>
std::array<T, 4> decompose(const Mat4<T>& g) {
  using detail::from_rational;
  return {g[1][0], from_rational<T>(Rational(1, 3)) * g[0][1],
          from_rational<T>(Rational(1, 6)) * (g[3][3] - g[0][0]),
          from_rational<T>(Rational(-1, 6)) * (g[0][0] + g[3][3])};
}

/// Group parameters (alpha^1_0, alpha^1_1, alpha^4_4) of a fiber point.
struct FiberPoint {
  double a10 = 0;
  double a11 = 1;
  double a44 = 1;
};

class SingularFiber : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SingularFiber unless a11 and a44 are nonzero and finite.
void validate(const FiberPoint& p);

struct GaugeMatrix {
  Mat4<double> m;
  Mat4<double> inverse;
};

/// Lower-triangular m(a10, a11, a44) with det m = a11^4 / a44^2; the inverse
/// is checked against the identity to 1e-12 (relative).
GaugeMatrix gauge_matrix(const FiberPoint& p);

/// m and m^-1 with entries in the fiber symbols a10, a11, a44.
const Mat4<Expr>& gauge_matrix_symbolic();
const Mat4<Expr>& gauge_inverse_symbolic();

}  // namespace gl2ode
