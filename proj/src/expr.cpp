#include "gl2ode/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gl2ode {

namespace detail {

struct Node {
  ExprKind kind = ExprKind::Rational;
  Rational value;     // Rational constant, or Power exponent
  double real = 0.0;
  Sym sym = Sym::X;
  std::string fname;
  int order = 0;
  std::vector<Expr> ops;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

constexpr std::array<std::string_view, kSymbolCount> kNames = {
    "x", "y", "y1", "y2", "y3", "a10", "a11", "a44", "z", "q", "qp",
    "w", "w0", "w1", "w2", "w3", "w13", "ew"};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t compute_hash(const detail::Node& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case ExprKind::Rational:
      h = mix(h, std::hash<std::int64_t>{}(n.value.num()));
      h = mix(h, std::hash<std::int64_t>{}(n.value.den()));
      break;
    case ExprKind::Real:
      h = mix(h, std::hash<double>{}(n.real));
      break;
    case ExprKind::Symbol:
      h = mix(h, static_cast<std::size_t>(n.sym));
      break;
    case ExprKind::Power:
      h = mix(h, std::hash<std::int64_t>{}(n.value.num()));
      h = mix(h, std::hash<std::int64_t>{}(n.value.den()));
      break;
    case ExprKind::Function:
      h = mix(h, std::hash<std::string>{}(n.fname));
      h = mix(h, static_cast<std::size_t>(n.order));
      break;
    default:
      break;
  }
  for (const auto& o : n.ops) h = mix(h, o.hash());
  return h;
}

// Exact integer k-th root of a non-negative value, if it exists.
std::optional<std::int64_t> exact_root(std::int64_t v, std::int64_t k) {
  if (v < 0) return std::nullopt;
  if (v <= 1) return v;
  const auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / static_cast<double>(k))));
  for (std::int64_t c = std::max<std::int64_t>(guess - 1, 0); c <= guess + 1; ++c) {
    __int128 p = 1;
    for (std::int64_t i = 0; i < k && p <= v; ++i) p *= c;
    if (p == v) return c;
  }
  return std::nullopt;
}

// c^(p/q) for rational c > 0 when the result is again rational.
std::optional<Rational> exact_rational_power(const Rational& c, const Rational& e) {
  if (e.is_integer()) {
    if (c.is_zero() && e.sign() < 0) return std::nullopt;
    return c.pow(e.num());
  }
  if (c.sign() <= 0) return std::nullopt;
  const auto rn = exact_root(c.num(), e.den());
  const auto rd = exact_root(c.den(), e.den());
  if (!rn || !rd) return std::nullopt;
  return Rational(*rn, *rd).pow(e.num());
}

}  // namespace

Expr make_node(detail::Node&& n) {
  n.hash = compute_hash(n);
  return Expr(std::make_shared<const detail::Node>(std::move(n)));
}

std::string_view symbol_name(Sym s) { return kNames[static_cast<std::size_t>(s)]; }

std::optional<Sym> symbol_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSymbolCount; ++i)
    if (kNames[i] == name) return static_cast<Sym>(i);
  return std::nullopt;
}

std::optional<Sym> coordinate_from_name(std::string_view name) {
  auto s = symbol_from_name(name);
  if (s && static_cast<std::size_t>(*s) <= static_cast<std::size_t>(Sym::A44)) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(Rational q) {
  detail::Node n;
  n.kind = ExprKind::Rational;
  n.value = q;
  *this = make_node(std::move(n));
}

Expr Expr::real(double v) {
  detail::Node n;
  n.kind = ExprKind::Real;
  n.real = v;
  return make_node(std::move(n));
}

Expr Expr::symbol(Sym s) {
  detail::Node n;
  n.kind = ExprKind::Symbol;
  n.sym = s;
  return make_node(std::move(n));
}

Expr Expr::function(std::string name, int order, Expr arg) {
  detail::Node n;
  n.kind = ExprKind::Function;
  n.fname = std::move(name);
  n.order = order;
  n.ops.push_back(std::move(arg));
  return make_node(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  Rational constant(0);
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (const auto& u : t.operands()) {
        if (u.is_rational())
          constant += u.rational();
        else
          flat.push_back(u);
      }
    } else if (t.is_rational()) {
      constant += t.rational();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (!constant.is_zero()) flat.emplace_back(constant);
  if (flat.empty()) return Expr(Rational(0));
  if (flat.size() == 1) return flat.front();
  detail::Node n;
  n.kind = ExprKind::Sum;
  n.ops = std::move(flat);
  return make_node(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size() + 1);
  Rational coeff(1);
  auto absorb = [&](const Expr& f) {
    if (f.is_rational())
      coeff *= f.rational();
    else
      flat.push_back(f);
  };
  for (const auto& f : factors) {
    if (f.kind() == ExprKind::Product) {
      for (const auto& u : f.operands()) absorb(u);
    } else {
      absorb(f);
    }
  }
  if (coeff.is_zero()) return Expr(Rational(0));
  if (flat.empty()) return Expr(coeff);
  if (coeff.is_one() && flat.size() == 1) return flat.front();
  if (!coeff.is_one()) flat.insert(flat.begin(), Expr(coeff));
  detail::Node n;
  n.kind = ExprKind::Product;
  n.ops = std::move(flat);
  return make_node(std::move(n));
}

Expr pow(const Expr& base, const Rational& exponent) {
  if (exponent.is_zero()) return Expr(1);
  if (exponent.is_one()) return base;
  if (base.is_rational()) {
    if (auto r = exact_rational_power(base.rational(), exponent)) return Expr(*r);
  }
  if (base.is_one()) return base;
  if (base.kind() == ExprKind::Power && exponent.is_integer())
    return pow(base.base(), base.exponent() * exponent);
  detail::Node n;
  n.kind = ExprKind::Power;
  n.value = exponent;
  n.ops.push_back(base);
  return make_node(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, pow(b, Rational(-1))}); }

// ---------------------------------------------------------------------------
// Accessors

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::rational() const { return node_->value; }
double Expr::real_value() const { return node_->real; }
Sym Expr::symbol() const { return node_->sym; }
const Rational& Expr::exponent() const { return node_->value; }
const std::string& Expr::function_name() const { return node_->fname; }
int Expr::order() const { return node_->order; }
std::span<const Expr> Expr::operands() const { return node_->ops; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return is_rational() && node_->value.is_zero(); }
bool Expr::is_one() const { return is_rational() && node_->value.is_one(); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  auto cmp_rat = [](const Rational& x, const Rational& y) {
    if (x == y) return 0;
    return x < y ? -1 : 1;
  };
  switch (a.kind()) {
    case ExprKind::Rational:
      return cmp_rat(a.rational(), b.rational());
    case ExprKind::Real:
      if (a.real_value() == b.real_value()) return 0;
      return a.real_value() < b.real_value() ? -1 : 1;
    case ExprKind::Symbol:
      if (a.symbol() == b.symbol()) return 0;
      return a.symbol() < b.symbol() ? -1 : 1;
    case ExprKind::Power:
      if (int c = cmp_rat(a.exponent(), b.exponent())) return c;
      break;
    case ExprKind::Function:
      if (a.function_name() != b.function_name()) return a.function_name() < b.function_name() ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      break;
    default:
      break;
  }
  const auto oa = a.operands();
  const auto ob = b.operands();
  const std::size_t n = std::min(oa.size(), ob.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(oa[i], ob[i])) return c;
  if (oa.size() != ob.size()) return oa.size() < ob.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string rational_text(const Rational& r) { return r.to_string(); }

std::string exponent_text(const Rational& r) {
  if (r.is_integer() && r.sign() >= 0) return r.to_string();
  return "(" + r.to_string() + ")";
}

bool is_atom_text(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Symbol:
    case ExprKind::Function:
      return true;
    case ExprKind::Rational:
      return e.rational().is_integer() && e.rational().sign() >= 0;
    default:
      return false;
  }
}

void print(const Expr& e, std::ostringstream& os);

// Factor of a product: sums need parentheses, everything else binds tighter.
void print_factor(const Expr& e, std::ostringstream& os) {
  if (e.kind() == ExprKind::Sum) {
    os << '(';
    print(e, os);
    os << ')';
  } else {
    print(e, os);
  }
}

// Sign-flipped term, for printing "a - b" inside sums.
Expr negated(const Expr& e) { return -e; }

bool has_negative_sign(const Expr& e) {
  if (e.is_rational()) return e.rational().sign() < 0;
  if (e.kind() == ExprKind::Product) {
    const auto& f = e.operands().front();
    return f.is_rational() && f.rational().sign() < 0;
  }
  return false;
}

void print(const Expr& e, std::ostringstream& os) {
  switch (e.kind()) {
    case ExprKind::Rational:
      os << rational_text(e.rational());
      return;
    case ExprKind::Real: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.real_value());
      os << buf;
      return;
    }
    case ExprKind::Symbol:
      os << symbol_name(e.symbol());
      return;
    case ExprKind::Function:
      os << e.function_name();
      if (e.order() > 0) os << '_' << e.order();
      os << '(';
      print(e.operands()[0], os);
      os << ')';
      return;
    case ExprKind::Power: {
      const Expr& b = e.base();
      if (is_atom_text(b)) {
        print(b, os);
      } else {
        os << '(';
        print(b, os);
        os << ')';
      }
      os << '^' << exponent_text(e.exponent());
      return;
    }
    case ExprKind::Product: {
      const auto ops = e.operands();
      std::size_t i = 0;
      if (ops[0].is_rational()) {
        const Rational& c = ops[0].rational();
        if (c == Rational(-1)) {
          os << '-';
          i = 1;
        }
      }
      for (bool first = true; i < ops.size(); ++i, first = false) {
        if (!first) os << '*';
        print_factor(ops[i], os);
      }
      return;
    }
    case ExprKind::Sum: {
      const auto ops = e.operands();
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i == 0) {
          print(ops[i], os);
        } else if (has_negative_sign(ops[i])) {
          os << " - ";
          print_factor(negated(ops[i]), os);
        } else {
          os << " + ";
          print(ops[i], os);
        }
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, os);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

// Memoized on node identity so shared subtrees are differentiated once.
using ExprMemo = std::unordered_map<const void*, Expr>;

Expr partial_rec(const Expr& e, Sym v, ExprMemo& memo);

Expr partial_node(const Expr& e, Sym v, ExprMemo& memo) {
  switch (e.kind()) {
    case ExprKind::Rational:
    case ExprKind::Real:
      return Expr(0);
    case ExprKind::Symbol:
      return Expr(e.symbol() == v ? 1 : 0);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const auto& t : e.operands()) {
        Expr d = partial_rec(t, v, memo);
        if (!d.is_zero()) terms.push_back(std::move(d));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Product: {
      const auto ops = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr d = partial_rec(ops[i], v, memo);
        if (d.is_zero()) continue;
        std::vector<Expr> factors(ops.begin(), ops.end());
        factors[i] = std::move(d);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Power: {
      Expr db = partial_rec(e.base(), v, memo);
      if (db.is_zero()) return Expr(0);
      const Rational& r = e.exponent();
      return Expr::product({Expr(r), pow(e.base(), r - Rational(1)), db});
    }
    case ExprKind::Function: {
      Expr da = partial_rec(e.operands()[0], v, memo);
      if (da.is_zero()) return Expr(0);
      return Expr::function(e.function_name(), e.order() + 1, e.operands()[0]) * da;
    }
  }
  return Expr(0);
}

Expr partial_rec(const Expr& e, Sym v, ExprMemo& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr r = partial_node(e, v, memo);
  memo.emplace(e.id(), r);
  return r;
}

Expr substitute_rec(const Expr& e, const std::map<Sym, Expr>& values, ExprMemo& memo);

Expr substitute_node(const Expr& e, const std::map<Sym, Expr>& values, ExprMemo& memo) {
  switch (e.kind()) {
    case ExprKind::Rational:
    case ExprKind::Real:
      return e;
    case ExprKind::Symbol: {
      auto it = values.find(e.symbol());
      return it == values.end() ? e : it->second;
    }
    case ExprKind::Sum:
    case ExprKind::Product: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& o : e.operands()) ops.push_back(substitute_rec(o, values, memo));
      return e.kind() == ExprKind::Sum ? Expr::sum(std::move(ops)) : Expr::product(std::move(ops));
    }
    case ExprKind::Power:
      return pow(substitute_rec(e.base(), values, memo), e.exponent());
    case ExprKind::Function:
      return Expr::function(e.function_name(), e.order(), substitute_rec(e.operands()[0], values, memo));
  }
  return e;
}

Expr substitute_rec(const Expr& e, const std::map<Sym, Expr>& values, ExprMemo& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr r = substitute_node(e, values, memo);
  memo.emplace(e.id(), r);
  return r;
}

}  // namespace

Expr partial(const Expr& e, Sym v) {
  ExprMemo memo;
  return partial_rec(e, v, memo);
}

Expr total_derivative(const Expr& e, const Expr& F) {
  const Expr y1 = sym(Sym::Y1), y2 = sym(Sym::Y2), y3 = sym(Sym::Y3);
  return Expr::sum({partial(e, Sym::X), y1 * partial(e, Sym::Y), y2 * partial(e, Sym::Y1),
                    y3 * partial(e, Sym::Y2), F * partial(e, Sym::Y3)});
}

Expr substitute(const Expr& e, const std::map<Sym, Expr>& values) {
  ExprMemo memo;
  return substitute_rec(e, values, memo);
}

bool depends_on(const Expr& e, Sym s) {
  if (e.kind() == ExprKind::Symbol) return e.symbol() == s;
  for (const auto& o : e.operands())
    if (depends_on(o, s)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

double Binding::get(Sym s) const {
  if (!has(s))
    throw EvalError(EvalError::Reason::MissingSymbol, std::string(symbol_name(s)),
                    "no value bound for symbol " + std::string(symbol_name(s)));
  return values_[static_cast<std::size_t>(s)];
}

const FunctionTable* Binding::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

double Evaluator::operator()(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Rational:
      return e.rational().to_double();
    case ExprKind::Real:
      return e.real_value();
    case ExprKind::Symbol:
      return binding_.get(e.symbol());
    default:
      break;
  }
  if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
  double result = 0.0;
  switch (e.kind()) {
    case ExprKind::Sum:
      for (const auto& t : e.operands()) result += (*this)(t);
      break;
    case ExprKind::Product:
      result = 1.0;
      for (const auto& f : e.operands()) result *= (*this)(f);
      break;
    case ExprKind::Power: {
      const double b = (*this)(e.base());
      const Rational& r = e.exponent();
      if (b == 0.0 && r.sign() < 0)
        throw EvalError(EvalError::Reason::Pole, to_string(e), "pole: zero base with negative exponent in " + to_string(e));
      if (r.is_integer()) {
        result = std::pow(b, static_cast<double>(r.num()));
      } else {
        if (b < 0.0)
          throw EvalError(EvalError::Reason::NegativeBase, to_string(e),
                          "fractional power of a negative value in " + to_string(e));
        result = std::pow(b, r.to_double());
      }
      break;
    }
    case ExprKind::Function: {
      const FunctionTable* f = binding_.function(e.function_name());
      if (f == nullptr)
        throw EvalError(EvalError::Reason::MissingFunction, to_string(e),
                        "no table bound for function " + e.function_name());
      result = (*f)(e.order(), (*this)(e.operands()[0]));
      break;
    }
    default:
      break;
  }
  memo_.emplace(e.id(), result);
  pinned_.push_back(e);
  return result;
}

double eval(const Expr& e, const Binding& b) {
  Evaluator ev(b);
  return ev(e);
}

}  // namespace gl2ode
