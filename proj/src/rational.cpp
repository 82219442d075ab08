#include "gl2ode/rational.hpp"

#include <limits>

namespace gl2ode {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::pow(std::int64_t e) const {
  Rational base = e < 0 ? Rational(1) / *this : *this;
  if (e < 0) e = -e;
  Rational acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return acc;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace gl2ode
