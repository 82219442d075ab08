#include "gl2ode/forms.hpp"

#include <algorithm>
#include <cmath>

namespace gl2ode {

namespace {

// Sorts `key` in place; returns the permutation sign, or 0 if an index repeats.
int sort_key(FormKey& key) {
  int sign = 1;
  for (std::size_t i = 1; i < key.size(); ++i) {
    for (std::size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
      if (key[j - 1] == key[j]) return 0;
      std::swap(key[j - 1], key[j]);
      sign = -sign;
    }
  }
  return sign;
}

void require_same_chart(const KForm& a, const KForm& b) {
  if (a.chart() != b.chart() && !(*a.chart() == *b.chart()))
    throw ChartMismatch("forms live on different charts");
}

}  // namespace

std::shared_ptr<const Chart> Chart::coordinates(std::vector<Sym> coords) {
  auto c = std::make_shared<Chart>();
  for (Sym s : coords) c->labels_.emplace_back(symbol_name(s));
  c->coords_ = std::move(coords);
  return c;
}

std::shared_ptr<const Chart> Chart::frame(std::vector<std::string> labels) {
  auto c = std::make_shared<Chart>();
  c->labels_ = std::move(labels);
  return c;
}

std::optional<std::size_t> Chart::index_of(Sym s) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == s) return i;
  return std::nullopt;
}

const ChartPtr& jet_chart() {
  static const ChartPtr chart = Chart::coordinates({Sym::X, Sym::Y, Sym::Y1, Sym::Y2, Sym::Y3});
  return chart;
}

const ChartPtr& bundle_chart() {
  static const ChartPtr chart =
      Chart::coordinates({Sym::X, Sym::Y, Sym::Y1, Sym::Y2, Sym::Y3, Sym::A10, Sym::A11, Sym::A44});
  return chart;
}

// ---------------------------------------------------------------------------

KForm KForm::function(ChartPtr chart, Expr f) {
  KForm out(std::move(chart), 0);
  out.add({}, f);
  return out;
}

KForm KForm::basis(ChartPtr chart, std::size_t i) {
  if (i >= chart->dim()) throw std::out_of_range("basis index outside chart");
  KForm out(std::move(chart), 1);
  out.add({static_cast<std::uint8_t>(i)}, Expr(1));
  return out;
}

KForm KForm::differential(ChartPtr chart, Sym s) {
  auto i = chart->index_of(s);
  if (!i) throw ChartMismatch("symbol " + std::string(symbol_name(s)) + " is not a chart coordinate");
  return basis(std::move(chart), *i);
}

KForm KForm::one_form(ChartPtr chart, const std::vector<Expr>& coeffs) {
  if (coeffs.size() > chart->dim()) throw std::out_of_range("too many coefficients for chart");
  KForm out(std::move(chart), 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.add({static_cast<std::uint8_t>(i)}, coeffs[i]);
  return out;
}

Expr KForm::coefficient(const FormKey& key) const {
  FormKey k = key;
  const int s = sort_key(k);
  if (s == 0) return Expr(0);
  auto it = terms_.find(k);
  if (it == terms_.end()) return Expr(0);
  return s > 0 ? it->second : -it->second;
}

void KForm::add(const FormKey& key, const Expr& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(key.size()) != degree_) throw std::invalid_argument("key length differs from form degree");
  FormKey k = key;
  for (auto i : k)
    if (i >= chart_->dim()) throw std::out_of_range("form index outside chart");
  const int s = sort_key(k);
  if (s == 0) return;
  const Expr term = s > 0 ? c : -c;
  auto [it, inserted] = terms_.try_emplace(std::move(k), term);
  if (!inserted) {
    it->second = it->second + term;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

KForm& KForm::operator+=(const KForm& o) {
  require_same_chart(*this, o);
  if (o.degree_ != degree_) throw std::invalid_argument("adding forms of different degree");
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

KForm& KForm::operator-=(const KForm& o) { return *this += -o; }

KForm operator*(const Expr& c, const KForm& f) {
  KForm out(f.chart_, f.degree_);
  if (c.is_zero()) return out;
  for (const auto& [k, v] : f.terms_) {
    Expr p = c * v;
    if (!p.is_zero()) out.terms_.emplace(k, std::move(p));
  }
  return out;
}

KForm KForm::simplified() const {
  KForm out(chart_, degree_);
  for (const auto& [k, v] : terms_) {
    Expr s = simplify(v);
    if (!s.is_zero()) out.terms_.emplace(k, std::move(s));
  }
  return out;
}

KForm KForm::on_chart(const ChartPtr& other) const {
  if (!chart_->is_coordinate() || !other->is_coordinate())
    throw ChartMismatch("re-indexing needs coordinate charts");
  std::vector<std::uint8_t> map(chart_->dim());
  for (std::size_t i = 0; i < chart_->dim(); ++i) {
    auto j = other->index_of(chart_->coords()[i]);
    if (!j) throw ChartMismatch("target chart lacks coordinate " + std::string(symbol_name(chart_->coords()[i])));
    map[i] = static_cast<std::uint8_t>(*j);
  }
  KForm out(other, degree_);
  for (const auto& [k, v] : terms_) {
    FormKey nk;
    for (auto i : k) nk.push_back(map[i]);
    out.add(nk, v);
  }
  return out;
}

// ---------------------------------------------------------------------------

KForm wedge(const KForm& a, const KForm& b) {
  require_same_chart(a, b);
  KForm out(a.chart(), a.degree() + b.degree());
  if (out.degree() > static_cast<int>(a.chart()->dim())) return out;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      FormKey k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      out.add(k, ca * cb);
    }
  }
  return out;
}

KForm exterior_derivative(const KForm& a) {
  const auto& chart = a.chart();
  if (!chart->is_coordinate()) throw ChartMismatch("exterior_derivative needs a coordinate chart");
  KForm out(chart, a.degree() + 1);
  if (out.degree() > static_cast<int>(chart->dim())) return out;
  for (const auto& [k, c] : a.terms()) {
    for (std::size_t i = 0; i < chart->dim(); ++i) {
      if (std::find(k.begin(), k.end(), i) != k.end()) continue;
      Expr dc = partial(c, chart->coords()[i]);
      if (dc.is_zero()) continue;
      FormKey nk;
      nk.reserve(k.size() + 1);
      nk.push_back(static_cast<std::uint8_t>(i));
      nk.insert(nk.end(), k.begin(), k.end());
      out.add(nk, dc);
    }
  }
  return out;
}

KForm d(const ChartPtr& chart, const Expr& f) { return exterior_derivative(KForm::function(chart, f)); }

// ---------------------------------------------------------------------------

double NumericForm::at(const FormKey& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return 0.0;
}

double NumericForm::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : entries) m = std::max(m, std::abs(v));
  return m;
}

FormKey NumericForm::argmax() const {
  FormKey best;
  double m = 0.0;
  for (const auto& [k, v] : entries)
    if (std::abs(v) > m) {
      m = std::abs(v);
      best = k;
    }
  return best;
}

FormEvalError::FormEvalError(FormKey key, const EvalError& cause)
    : std::domain_error(std::string("coefficient evaluation failed: ") + cause.what()), key_(std::move(key)) {}

NumericForm eval_form(const KForm& a, Evaluator& ev) {
  NumericForm out;
  out.degree = a.degree();
  out.entries.reserve(a.terms().size());
  for (const auto& [k, c] : a.terms()) {
    try {
      out.entries.emplace_back(k, ev(c));
    } catch (const EvalError& e) {
      throw FormEvalError(k, e);
    }
  }
  return out;
}

NumericForm eval_form(const KForm& a, const Binding& b) {
  Evaluator ev(b);
  return eval_form(a, ev);
}

std::string key_to_string(const ChartPtr& chart, const FormKey& key) {
  if (key.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) s += "^";
    s += "d" + chart->label(key[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

NumericForm from_map(int degree, const std::map<FormKey, double>& m) {
  NumericForm out;
  out.degree = degree;
  for (const auto& [k, v] : m)
    if (v != 0.0) out.entries.emplace_back(k, v);
  return out;
}

std::map<FormKey, double> to_map(const NumericForm& a) { return {a.entries.begin(), a.entries.end()}; }

}  // namespace

NumericForm operator+(const NumericForm& a, const NumericForm& b) {
  if (a.entries.empty()) return b;
  if (b.entries.empty()) return a;
  if (a.degree != b.degree) throw std::invalid_argument("adding numeric forms of different degree");
  auto m = to_map(a);
  for (const auto& [k, v] : b.entries) m[k] += v;
  return from_map(a.degree, m);
}

NumericForm operator-(const NumericForm& a, const NumericForm& b) { return a + (-1.0) * b; }

NumericForm operator*(double c, const NumericForm& a) {
  NumericForm out = a;
  for (auto& e : out.entries) e.second *= c;
  return out;
}

NumericForm wedge(const NumericForm& a, const NumericForm& b) {
  std::map<FormKey, double> m;
  for (const auto& [ka, va] : a.entries)
    for (const auto& [kb, vb] : b.entries) {
      FormKey k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      const int s = sort_key(k);
      if (s != 0) m[k] += s * va * vb;
    }
  return from_map(a.degree + b.degree, m);
}

KForm pullback(const KForm& form, const ChartPtr& target, const std::map<Sym, Expr>& section) {
  const auto& src = form.chart();
  if (!src->is_coordinate() || !target->is_coordinate()) throw ChartMismatch("pullback needs coordinate charts");
  std::vector<KForm> images;
  images.reserve(src->dim());
  for (Sym s : src->coords()) {
    auto it = section.find(s);
    if (it != section.end()) {
      images.push_back(d(target, it->second));
    } else if (target->index_of(s)) {
      images.push_back(KForm::differential(target, s));
    } else {
      throw ChartMismatch("section does not determine coordinate " + std::string(symbol_name(s)));
    }
  }
  KForm out(target, form.degree());
  for (const auto& [k, c] : form.terms()) {
    KForm term = KForm::function(target, substitute(c, section));
    for (auto i : k) term = wedge(term, images[i]);
    out += term;
  }
  return out;
}

}  // namespace gl2ode
