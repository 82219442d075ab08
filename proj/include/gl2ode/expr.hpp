#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gl2ode/rational.hpp"

namespace gl2ode {

/// Coordinates and auxiliary scalars an expression may depend on.
///
/// The first eight are the jet coordinates (x, y, y1, y2, y3) and the fiber
/// coordinates (a10, a11, a44); only these are accepted by the parser. The
/// rest are internal: (z, q, qp) carry the q(z) ODE closure of the family
/// module and (w .. w13, ew = e^{-2w}) the scalars of the reduced exterior
/// system.
enum class Sym : std::uint8_t {
  X, Y, Y1, Y2, Y3, A10, A11, A44,
  Z, Q, QP,
  W, W0, W1, W2, W3, W13, EW,
};

inline constexpr std::size_t kSymbolCount = 18;

std::string_view symbol_name(Sym s);
/// Any known symbol, including internal ones.
std::optional<Sym> symbol_from_name(std::string_view name);
/// Only the eight jet/fiber coordinates accepted by the parser.
std::optional<Sym> coordinate_from_name(std::string_view name);

enum class ExprKind : std::uint8_t { Rational, Real, Symbol, Sum, Product, Power, Function };

namespace detail {
struct Node;
}

/// Immutable symbolic expression. Copies share the underlying tree.
///
/// Constructors perform only light canonicalization: nested sums/products
/// are flattened, rational constants folded, and 0/1 identities applied.
/// Full collection of like terms is the job of simplify().
class Expr {
 public:
  Expr();  // the rational constant 0
  Expr(Rational q);  // NOLINT(implicit)
  Expr(std::int64_t n) : Expr(Rational(n)) {}  // NOLINT(implicit)
  Expr(int n) : Expr(Rational(n)) {}  // NOLINT(implicit)

  static Expr real(double v);
  static Expr symbol(Sym s);
  /// Opaque unary function `name` differentiated `order` times, applied to `arg`.
  static Expr function(std::string name, int order, Expr arg);

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);

  ExprKind kind() const;
  const Rational& rational() const;  // Rational nodes
  double real_value() const;         // Real nodes
  Sym symbol() const;                // Symbol nodes
  const Rational& exponent() const;  // Power nodes
  const std::string& function_name() const;
  int order() const;                 // Function nodes
  /// Sum terms, product factors, {base} of a power, {arg} of a function.
  std::span<const Expr> operands() const;
  const Expr& base() const { return operands()[0]; }

  bool is_rational() const { return kind() == ExprKind::Rational; }
  bool is_zero() const;
  bool is_one() const;
  std::size_t hash() const;
  /// Node identity; stable for the lifetime of any copy.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  friend struct detail::Node;
  friend Expr make_node(detail::Node&&);
  std::shared_ptr<const detail::Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
inline Expr sym(Sym s) { return Expr::symbol(s); }

/// Total order on expressions (by kind, then payload, then operands).
int compare(const Expr& a, const Expr& b);

/// Text form; reparses to a structurally equal tree when the expression only
/// uses grammar constructs (no Real or Function nodes).
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Exact partial derivative. Function nodes advance their order tag.
Expr partial(const Expr& e, Sym v);

/// D e = e_x + y1 e_y + y2 e_y1 + y3 e_y2 + F e_y3.
Expr total_derivative(const Expr& e, const Expr& F);

/// Canonical expanded form: sums of monomials with exact rational
/// coefficients, like terms collected and equal bases merged. A zero result
/// certifies symbolic vanishing; a nonzero one does not certify anything.
Expr simplify(const Expr& e);

/// Replace symbols by expressions.
Expr substitute(const Expr& e, const std::map<Sym, Expr>& values);

/// Whether `s` occurs anywhere in `e`.
bool depends_on(const Expr& e, Sym s);

// ---------------------------------------------------------------------------
// Evaluation

/// q^{(order)}(arg) for an opaque function.
using FunctionTable = std::function<double(int order, double arg)>;

/// Numeric values of the symbols (and opaque functions) at one point.
class Binding {
 public:
  Binding() = default;
  Binding& set(Sym s, double v) {
    values_[static_cast<std::size_t>(s)] = v;
    present_.set(static_cast<std::size_t>(s));
    return *this;
  }
  bool has(Sym s) const { return present_.test(static_cast<std::size_t>(s)); }
  double get(Sym s) const;
  Binding& set_function(const std::string& name, FunctionTable f) {
    functions_[name] = std::move(f);
    return *this;
  }
  const FunctionTable* function(const std::string& name) const;

 private:
  std::array<double, kSymbolCount> values_{};
  std::bitset<kSymbolCount> present_;
  std::map<std::string, FunctionTable> functions_;
};

/// Raised for a missing symbol, pole, or fractional power of a negative.
class EvalError : public std::domain_error {
 public:
  enum class Reason { MissingSymbol, MissingFunction, Pole, NegativeBase };
  EvalError(Reason reason, std::string subtree, const std::string& what)
      : std::domain_error(what), reason_(reason), subtree_(std::move(subtree)) {}
  Reason reason() const { return reason_; }
  const std::string& subtree() const { return subtree_; }

 private:
  Reason reason_;
  std::string subtree_;
};

/// Evaluates expressions at one binding, sharing results for common subtrees.
class Evaluator {
 public:
  explicit Evaluator(const Binding& b) : binding_(b) {}
  double operator()(const Expr& e);

 private:
  const Binding& binding_;
  std::unordered_map<const void*, double> memo_;
  std::vector<Expr> pinned_;  // keeps memo keys alive
};

double eval(const Expr& e, const Binding& b);

}  // namespace gl2ode

template <>
struct std::hash<gl2ode::Expr> {
  std::size_t operator()(const gl2ode::Expr& e) const noexcept { return e.hash(); }
};
