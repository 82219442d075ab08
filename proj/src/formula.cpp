#include "gl2ode/formula.hpp"

#include <cctype>
#include <stdexcept>

namespace gl2ode {

namespace {

class TermParser {
 public:
  TermParser(std::string_view label, std::string_view text) : label_(label), text_(text) {}

  std::vector<FormulaTerm> run() {
    std::vector<FormulaTerm> out;
    bool negative = false;
    skip();
    if (accept('-')) negative = true;
    else accept('+');
    for (;;) {
      out.push_back(term(negative));
      skip();
      if (pos_ >= text_.size()) break;
      if (accept('+')) negative = false;
      else if (accept('-')) negative = true;
      else fail("expected '+' or '-'");
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("formula " + std::string(label_) + ": " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::int64_t integer() {
    skip();
    std::int64_t v = 0;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) v = v * 10 + (text_[pos_++] - '0');
    if (pos_ == start) fail("expected integer");
    return v;
  }

  FormulaTerm term(bool negative) {
    FormulaTerm t{Rational(negative ? -1 : 1), {}};
    skip();
    bool first = true;
    do {
      skip();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        if (!first) fail("numeric factor must lead the term");
        t.coeff *= Rational(integer());
      } else {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected factor");
        std::string name(text_.substr(start, pos_ - start));
        int power = 1;
        if (accept('^')) power = static_cast<int>(integer());
        t.factors.emplace_back(std::move(name), power);
      }
      first = false;
    } while (accept('*'));
    return t;
  }

  std::string_view label_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula make_formula(std::string label, Rational scale, std::string_view text) {
  auto terms = TermParser(label, text).run();
  return Formula{std::move(label), scale, std::move(terms)};
}

Expr build(const Formula& f, JetDerivatives& jet, const Mutation* mutation) {
  std::vector<Expr> terms;
  terms.reserve(f.terms.size());
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    const auto& t = f.terms[i];
    Rational c = t.coeff * f.scale;
    if (mutation && mutation->label == f.label && mutation->term == i) c *= mutation->factor;
    std::vector<Expr> factors{Expr(c)};
    for (const auto& [name, power] : t.factors) factors.push_back(pow(jet.get(name), Rational(power)));
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace gl2ode
