#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gl2ode/expr.hpp"

namespace gl2ode {

namespace {

// Past this many terms a product is no longer distributed; the factor is kept
// as an opaque sum instead.
constexpr std::size_t kMaxExpandedTerms = 20000;

// A monomial is a sorted list of (base, exponent) pairs. Bases are symbols,
// reals, functions, rational constants with a fractional exponent, or sums
// that could not be distributed.
using Factor = std::pair<Expr, Rational>;
using Monomial = std::vector<Factor>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = compare(a[i].first, b[i].first)) return c < 0;
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  }
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

void add_term(Poly& p, Monomial m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

Poly constant_poly(const Rational& c) {
  Poly p;
  add_term(p, {}, c);
  return p;
}

Poly atom_poly(const Expr& base, const Rational& e) {
  Poly p;
  if (base.is_rational()) {
    // rational base with fractional exponent
    p.emplace(Monomial{{base, e}}, Rational(1));
    return p;
  }
  p.emplace(Monomial{{base, e}}, Rational(1));
  return p;
}

// Multiply two monomials, merging equal bases. Rational-constant bases whose
// exponent becomes integral are folded into the returned coefficient.
std::pair<Monomial, Rational> multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  Rational coeff(1);
  std::size_t i = 0, j = 0;
  auto push = [&](const Expr& base, const Rational& e) {
    if (e.is_zero()) return;
    if (base.is_rational() && e.is_integer()) {
      coeff *= base.rational().pow(e.num());
      return;
    }
    out.emplace_back(base, e);
  };
  while (i < a.size() && j < b.size()) {
    const int c = compare(a[i].first, b[j].first);
    if (c < 0) {
      push(a[i].first, a[i].second);
      ++i;
    } else if (c > 0) {
      push(b[j].first, b[j].second);
      ++j;
    } else {
      push(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) push(a[i].first, a[i].second);
  for (; j < b.size(); ++j) push(b[j].first, b[j].second);
  return {std::move(out), coeff};
}

Expr rebuild(const Poly& p);

std::optional<Poly> multiply(const Poly& a, const Poly& b) {
  if (a.size() * b.size() > kMaxExpandedTerms) return std::nullopt;
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      auto [m, c] = multiply(ma, mb);
      add_term(out, std::move(m), ca * cb * c);
    }
  return out;
}

Poly multiply_or_wrap(const Poly& a, const Poly& b) {
  if (auto r = multiply(a, b)) return std::move(*r);
  // too large: keep the larger factor as an opaque sum
  if (a.size() >= b.size()) return *multiply(atom_poly(rebuild(a), Rational(1)), b);
  return *multiply(a, atom_poly(rebuild(b), Rational(1)));
}

Poly expand(const Expr& e);

// c^r for rational c, split into a rational part and a leftover atom.
Poly rational_power(const Rational& c, const Rational& r) {
  if (r.is_integer()) {
    if (c.is_zero() && r.sign() < 0) return atom_poly(Expr(c), r);
    return constant_poly(c.pow(r.num()));
  }
  Expr folded = pow(Expr(c), r);
  if (folded.is_rational()) return constant_poly(folded.rational());
  return atom_poly(Expr(c), r);
}

Poly expand_power(const Expr& e) {
  const Rational& r = e.exponent();
  Poly base = expand(e.base());
  if (base.empty()) {
    if (r.sign() > 0) return Poly{};
    return atom_poly(Expr(0), r);
  }
  if (base.size() == 1) {
    const auto& [mono, coeff] = *base.begin();
    bool distributable = r.is_integer();
    if (!distributable) {
      distributable = coeff.sign() > 0;
      for (const auto& [b, ex] : mono)
        if (ex.num() % 2 == 0) distributable = false;
    }
    if (distributable) {
      Poly out = rational_power(coeff, r);
      for (const auto& [b, ex] : mono) out = multiply_or_wrap(out, atom_poly(b, ex * r));
      return out;
    }
    return atom_poly(rebuild(base), r);
  }
  if (r.is_integer() && r.sign() > 0 && r.num() <= 8) {
    Poly out = constant_poly(Rational(1));
    for (std::int64_t k = 0; k < r.num(); ++k) {
      auto next = multiply(out, base);
      if (!next) return atom_poly(rebuild(base), r);
      out = std::move(*next);
    }
    return out;
  }
  return atom_poly(rebuild(base), r);
}

Poly expand(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Rational:
      return constant_poly(e.rational());
    case ExprKind::Real:
    case ExprKind::Symbol:
      return atom_poly(e, Rational(1));
    case ExprKind::Function:
      return atom_poly(Expr::function(e.function_name(), e.order(), simplify(e.operands()[0])), Rational(1));
    case ExprKind::Sum: {
      Poly out;
      for (const auto& t : e.operands())
        for (auto& [m, c] : expand(t)) add_term(out, m, c);
      return out;
    }
    case ExprKind::Product: {
      Poly out = constant_poly(Rational(1));
      for (const auto& f : e.operands()) {
        out = multiply_or_wrap(out, expand(f));
        if (out.empty()) break;
      }
      return out;
    }
    case ExprKind::Power:
      return expand_power(e);
  }
  return Poly{};
}

Expr rebuild(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& [mono, coeff] : p) {
    std::vector<Expr> factors;
    factors.reserve(mono.size() + 1);
    factors.emplace_back(coeff);
    for (const auto& [b, ex] : mono) factors.push_back(pow(b, ex));
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Rational:
    case ExprKind::Real:
    case ExprKind::Symbol:
      return e;
    default:
      return rebuild(expand(e));
  }
}

}  // namespace gl2ode
