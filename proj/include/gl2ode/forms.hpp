#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2ode/expr.hpp"

namespace gl2ode {

/// Ordered cobasis of a chart. Coordinate charts attach a symbol to each
/// slot (slot i is d(coords[i])); abstract frames only carry labels.
class Chart {
 public:
  static std::shared_ptr<const Chart> coordinates(std::vector<Sym> coords);
  static std::shared_ptr<const Chart> frame(std::vector<std::string> labels);

  std::size_t dim() const { return labels_.size(); }
  bool is_coordinate() const { return !coords_.empty() || labels_.empty(); }
  const std::vector<Sym>& coords() const { return coords_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(Sym s) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<Sym> coords_;
  std::vector<std::string> labels_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// (x, y, y1, y2, y3)
const ChartPtr& jet_chart();
/// (x, y, y1, y2, y3, a10, a11, a44)
const ChartPtr& bundle_chart();

class ChartMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strictly increasing cobasis indices.
using FormKey = std::vector<std::uint8_t>;

/// Degree-k exterior form with symbolic coefficients.
class KForm {
 public:
  KForm() = default;
  KForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {}

  static KForm function(ChartPtr chart, Expr f);
  /// The basis 1-form in slot `i`.
  static KForm basis(ChartPtr chart, std::size_t i);
  /// d(s) for a coordinate symbol of the chart.
  static KForm differential(ChartPtr chart, Sym s);
  /// Sum of coeffs[i] * basis(i).
  static KForm one_form(ChartPtr chart, const std::vector<Expr>& coeffs);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<FormKey, Expr>& terms() const { return terms_; }
  Expr coefficient(const FormKey& key) const;
  bool empty() const { return terms_.empty(); }

  /// Adds c to the coefficient of an arbitrary (unsorted) index tuple.
  void add(const FormKey& key, const Expr& c);

  KForm& operator+=(const KForm& o);
  KForm& operator-=(const KForm& o);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(const Expr& c, const KForm& f);
  friend KForm operator-(const KForm& f) { return Expr(-1) * f; }

  /// Coefficients simplified; zero entries pruned.
  KForm simplified() const;
  /// Same form expressed on another coordinate chart containing every
  /// coordinate this one uses.
  KForm on_chart(const ChartPtr& other) const;

 private:
  ChartPtr chart_;
  int degree_ = 0;
  std::map<FormKey, Expr> terms_;
};

KForm wedge(const KForm& a, const KForm& b);

/// Coordinate exterior derivative; requires a coordinate chart.
KForm exterior_derivative(const KForm& a);
inline KForm d(const KForm& a) { return exterior_derivative(a); }
/// df for a function on a coordinate chart.
KForm d(const ChartPtr& chart, const Expr& f);

/// Numeric coefficients of a form at one point, in key order.
struct NumericForm {
  int degree = 0;
  std::vector<std::pair<FormKey, double>> entries;

  double at(const FormKey& key) const;
  double max_abs() const;
  /// Key with the largest |coefficient| (empty when all vanish).
  FormKey argmax() const;
};

/// Raised when a coefficient cannot be evaluated; names the offending key.
class FormEvalError : public std::domain_error {
 public:
  FormEvalError(FormKey key, const EvalError& cause);
  const FormKey& key() const { return key_; }

 private:
  FormKey key_;
};

NumericForm eval_form(const KForm& a, const Binding& b);
NumericForm eval_form(const KForm& a, Evaluator& ev);

std::string key_to_string(const ChartPtr& chart, const FormKey& key);

// Numeric form algebra, for assembling right-hand sides at a point.
NumericForm operator+(const NumericForm& a, const NumericForm& b);
NumericForm operator-(const NumericForm& a, const NumericForm& b);
NumericForm operator*(double c, const NumericForm& a);
NumericForm wedge(const NumericForm& a, const NumericForm& b);

/// Pullback along a section s -> (coords of `form`'s chart): every coordinate
/// of the source chart is either a coordinate of `target` or is replaced by an
/// expression on `target`, whose differential replaces d(coordinate).
KForm pullback(const KForm& form, const ChartPtr& target, const std::map<Sym, Expr>& section);

}  // namespace gl2ode
