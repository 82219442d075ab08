// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "gl2ode/bryant.hpp"
#include "gl2ode/curvature.hpp"
#include "gl2ode/family.hpp"
#include "gl2ode/gl2.hpp"
#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

using namespace gl2ode;

namespace {

const char* const kCatalogue[] = {"0", "y3^(4/3)", "(4/3)*y3^2/y2", "3*y3^2/y2", "(5/3)*y3^2/y2"};
const char* const kTransformed = "((2*y*y3 + 6*y1*y2 + 60*x^2)^(4/3) - 6*y2^2 - 8*y1*y3 - 120*x)/(2*y)";

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

double worst(const std::vector<ResidualReport>& reports) {
  double w = 0;
  for (const auto& r : reports) w = std::max(w, r.max_residual);
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

void criterion1(Outcome& o) {
  double max_pos = 0;
  for (const char* F : kCatalogue) {
    const BryantReport r = check_bryant(parse(F), draw_samples(SampleBox::jet(), 100, 1), 1e-9);
    o.require(r.pass(), std::string("check_bryant ") + F);
    max_pos = std::max(max_pos, r.max_residual());
  }
  Binding b;
  b.set(Sym::X, 0.3).set(Sym::Y, 1.1).set(Sym::Y1, -0.2).set(Sym::Y2, 0.8).set(Sym::Y3, 1);
  const BryantResiduals sq = bryant_residuals(parse("y3^2"));
  const double r2 = eval(sq.r2, b);
  o.require(r2 == 144, "y3^2 r2 at y3 = 1");
  o.require(!check_bryant(parse("y3^2"), draw_samples(SampleBox::jet(), 100, 1), 1e-9).pass(), "y3^2 rejected");
  o.note << "catalogue max residual " << max_pos << "; y3^2 r2(y3=1) = " << r2;
}

void criterion2(Outcome& o) {
  const auto c = base_coefficients(parse("0"));
  for (const Expr& e : c.to_array()) o.require(simplify(e) == Expr(0), "coefficient simplifies to 0");
  const double w = worst(structure_residuals(parse("0"), draw_samples(SampleBox::bundle(), 20, 2), 1e-12));
  o.require(w < 1e-12, "structure residuals");
  o.note << "8 coefficients exactly 0; structure max " << w;
}

void criterion3(Outcome& o) {
  double w = 0;
  for (const char* F : {"y3^(4/3)", "(4/3)*y3^2/y2"}) {
    const auto reports = structure_residuals(parse(F), draw_samples(SampleBox::bundle(), 20, 3), 1e-8);
    o.require(all_pass(reports), std::string("structure ") + F);
    w = std::max(w, worst(reports));
  }
  // mutations on an x,y-dependent F so every transcribed term matters
  const Expr F = parse(kTransformed);
  const auto samples = draw_samples(SampleBox::bundle().set("x=0.5:1").set("y1=0.5:1"), 4, 11);
  std::size_t count = 0, missed = 0;
  double weakest = INFINITY;
  std::vector<const Formula*> formulas;
  for (const auto& f : coframe_formulas()) formulas.push_back(&f);
  for (const auto& f : curvature_formulas()) formulas.push_back(&f);
  for (const Formula* f : formulas)
    for (std::size_t k = 0; k < f->terms.size(); ++k, ++count) {
      const Mutation m{f->label, k, Rational(2)};
      const double r = worst(structure_residuals(F, samples, 1e-8, &m));
      weakest = std::min(weakest, r);
      if (r <= 1e-3) ++missed;
    }
  o.require(missed == 0, std::to_string(missed) + " mutations undetected");
  o.note << "max residual " << w << "; " << count << " single-term mutations, smallest trip " << weakest;
}

void criterion4(Outcome& o) {
  std::mt19937_64 g(4);
  for (int n = 0; n < 1000; ++n) {
    std::array<Rational, 8> v;
    for (auto& x : v) x = Rational(static_cast<std::int64_t>(g() % 41) - 20, static_cast<std::int64_t>(g() % 9) + 1);
    const auto c = CurvatureCoefficients<Rational>::from_array(v);
    const auto R = assemble_curvature(c);
    const auto ric = ricci(c);
    if (!(ricci_contraction(R) == ric)) {
      o.require(false, "contraction");
      break;
    }
    auto two_anti = antisymmetric_part(ric);
    for (auto& row : two_anti)
      for (auto& e : row) e *= Rational(2);
    if (!(trace_contraction(R) == two_anti)) {
      o.require(false, "trace contraction");
      break;
    }
  }
  Sampler s(4);
  double worst_det = 0;
  for (int n = 0; n < 1000; ++n) {
    std::array<double, 8> v;
    for (auto& x : v) x = s.uniform(-2, 2);
    const auto c = CurvatureCoefficients<double>::from_array(v);
    const auto r = ricci(c);
    worst_det = std::max({worst_det, rel(determinant(symmetric_part(r)), std::pow(invariant_I2(c), 2)),
                          rel(determinant(antisymmetric_part(r)), std::pow(invariant_I3(c), 2))});
  }
  o.require(worst_det < 1e-9, "determinant identities");
  o.note << "1000 exact contractions; det identity worst rel " << worst_det;
}

void criterion5(Outcome& o) {
  Sampler s(5);
  double off_max = 0, weight_max = 0, aline_max = 0, b1_max = 0;
  for (int n = 0; n < 200; ++n) {
    std::array<double, 8> v;
    for (auto& x : v) x = s.uniform(-2, 2);
    const auto base = CurvatureCoefficients<double>::from_array(v);
    const FiberPoint p{s.uniform(-1, 1), s.uniform(0.5, 2) * (n % 2 ? -1 : 1), s.uniform(0.5, 2)};
    double off = 0;
    extract_coefficients(transform_ricci(ricci(base), p), &off);
    off_max = std::max(off_max, off);
    const auto t = transformed_coefficients(base, p);
    weight_max = std::max(weight_max, rel(invariant_I2(t), std::pow(p.a44 / (p.a11 * p.a11), 2) * invariant_I2(base)));
    const auto printed = rule_transformed_coefficients(base, p, GaugeRule::Printed);
    aline_max = std::max({aline_max, rel(printed.a0, t.a0), rel(printed.a1, t.a1), rel(printed.a2, t.a2)});
    b1_max = std::max(b1_max, rel(printed.b1, t.b1));
  }
  o.require(off_max < 1e-10, "off-pattern residual");
  o.require(weight_max < 1e-9, "I2 weight");
  o.require(aline_max < 1e-9, "printed a-lines");
  o.note << "off-pattern " << off_max << ", I2 weight rel " << weight_max << ", printed a-lines rel " << aline_max
         << "; printed b1 line differs (rel " << b1_max << "), see DEVIATIONS.md";
}

void criterion6(Outcome& o) {
  // t = theta0(v) at a jet point; the lifted theta on the same vector is m t.
  Sampler s(6);
  double spread = 0;
  for (const char* F : kCatalogue) {
    const CoframeSet base = base_coframe(parse(F));
    const CoframeSet lifted = lift_coframe(base);
    for (int k = 0; k < 10; ++k) {
      Binding b = s.draw(SampleBox::bundle());
      b.set(Sym::A11, b.get(Sym::A11) * (k % 2 ? -1 : 1));
      std::array<NumericForm, 4> t0, t1;
      for (int i = 0; i < 4; ++i) {
        t0[i] = eval_form(base.theta(i), b);
        t1[i] = eval_form(lifted.theta(i), b);
      }
      double first = 0;
      for (int n = 0; n < 50; ++n) {
        std::array<double, 5> v;
        for (auto& x : v) x = s.uniform(-1, 1);
        std::array<double, 4> a{}, m{};
        for (int i = 0; i < 4; ++i)
          for (std::uint8_t j = 0; j < 5; ++j) {
            a[i] += t0[i].at({j}) * v[j];
            m[i] += t1[i].at({j}) * v[j];
          }
        const double i4 = quartic_I4(a);
        if (std::abs(i4) < 1e-8) continue;
        const double ratio = quartic_I4(m) / i4;
        if (first == 0) first = ratio;
        spread = std::max(spread, std::abs(ratio - first) / std::abs(first));
      }
    }
  }
  o.require(spread < 1e-9, "ratio spread");
  o.note << "5 F x 10 fibers x 50 vectors, ratio spread rel " << spread;
}

void criterion7(Outcome& o) {
  auto box = SampleBox::jet();
  box.set(Sym::A44, {0.5, 2});
  const auto reports = street_model_check(draw_samples(box, 20, 7), 1e-8);
  o.require(all_pass(reports), "street equations");
  o.note << "six equations plus Omega-, Omega0 relations, max " << worst(reports) << " (d Omega max "
         << reports[5].max_residual << ")";
}

void criterion8(Outcome& o) {
  double printed_equal = 0, printed_mixed = INFINITY, swapped = 0;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      const double p = eds_closure_check(e1, e2, 50, 8, 1e-9, EdsVariant::Printed).max_residual;
      if (e1 == e2)
        printed_equal = std::max(printed_equal, p);
      else
        printed_mixed = std::min(printed_mixed, p);
      swapped = std::max(swapped, eds_closure_check(e1, e2, 50, 8, 1e-9, EdsVariant::Swapped).max_residual);
    }
  o.require(printed_equal < 1e-9, "printed system, eps1 = eps2");
  o.require(swapped < 1e-9, "sign-swapped system, all sign pairs");
  o.note << "printed: eps1 = eps2 max " << printed_equal << ", mixed signs >= " << printed_mixed
         << " (failing e^{-2w} sign documented in DEVIATIONS.md); swapped: all four pairs max " << swapped;
}

void criterion9(Outcome& o) {
  o.require(linear_roots(Branch::A) == std::vector<Rational>{Rational(0), Rational(4, 3)}, "branch a roots");
  o.require(linear_roots(Branch::B) == std::vector<Rational>{Rational(5, 3), Rational(3)}, "branch b roots");
  double factor_min = INFINITY, factor_max = 0;
  struct Member {
    Branch b;
    double z0, q0, qp0;
  };
  const Member members[] = {{Branch::A, 1, 1, 1}, {Branch::A, 1, 0.5, -0.3}, {Branch::B, 1, 2, 1}, {Branch::B, 1, 4, 2}};
  double bryant = 0, i2 = 0, i3 = 0, theta_i4 = 0, a2_min = INFINITY, b4_min = INFINITY;
  bool any_flat = false;
  for (const Member& m : members) {
    auto end_value = [&](double h) { return integrate_q(m.b, m.z0, m.q0, m.qp0, h, std::size_t(0.5 / h)).q.back(); };
    const double a = end_value(0.05), b = end_value(0.025), c = end_value(0.0125);
    const double factor = std::abs(a - b) / std::abs(b - c);
    factor_min = std::min(factor_min, factor);
    factor_max = std::max(factor_max, factor);
    const auto sol = std::make_shared<const QSolution>(integrate_q(m.b, m.z0, m.q0, m.qp0, 1e-3, 500));
    const FamilyReport r = scan_family(sol, family_samples(sol, 20, 9));
    bryant = std::max(bryant, r.bryant_max);
    i2 = std::max(i2, r.I2_max);
    i3 = std::max(i3, r.I3_max);
    theta_i4 = std::max(theta_i4, r.I4_max);
    a2_min = std::min(a2_min, r.a2_max);
    b4_min = std::min(b4_min, r.b4_max);
    any_flat = any_flat || r.maxwell_flat;
  }
  o.require(factor_min >= 12 && factor_max <= 20, "RK4 order");
  o.require(bryant < 1e-6, "Bryant residuals");
  o.require(i3 < 1e-6, "I3");
  o.require(i2 < 1e-6, "I2 (read for the vanishing 'I4')");
  o.require(a2_min > 1e-6 && b4_min > 1e-6, "a2, b4 nonzero");
  o.require(!any_flat, "maxwell_flat false");
  o.note << "roots {0,4/3} {5/3,3}; RK4 factor " << factor_min << ".." << factor_max << "; 4 members: bryant " << bryant
         << ", I2 " << i2 << ", I3 " << i3 << ", min max|a2| " << a2_min << ", min max|b4| " << b4_min
         << "; the vanishing 'I4' is read as I2, the literal theta-quartic is " << theta_i4
         << " (nonzero for every F, see DEVIATIONS.md)";
}

void criterion10(Outcome& o) {
  const auto& g = gl2_generators();
  auto scaled = [](Mat4<Rational> m, Rational c) {
    for (auto& row : m)
      for (auto& e : row) e *= c;
    return m;
  };
  o.require(commutator(g.zero, g.plus) == scaled(g.plus, Rational(-2)), "[E0, E+]");
  o.require(commutator(g.zero, g.minus) == scaled(g.minus, Rational(2)), "[E0, E-]");
  o.require(commutator(g.plus, g.minus) == scaled(g.zero, Rational(-1)), "[E+, E-]");
  o.note << "three brackets exact in rational arithmetic";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"Bryant positives and y3^2 rejection", criterion1},
      {"flat case", criterion2},
      {"structure equations and mutation sweep", criterion3},
      {"Ricci contraction and determinant identities", criterion4},
      {"gauge equivariance", criterion5},
      {"I4 equivariance", criterion6},
      {"street model", criterion7},
      {"EDS closure", criterion8},
      {"inhomogeneous family", criterion9},
      {"gl(2,R) brackets", criterion10},
  };
  bool all = true;
  const auto start = std::chrono::steady_clock::now();
  int n = 0;
  for (const auto& [title, run] : criteria) {
    ++n;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s (%.2fs) %s\n", n, o.pass ? "PASS" : "FAIL", title, secs, o.note.str().c_str());
    all = all && o.pass;
  }
  std::printf("total %.2fs\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return all ? 0 : 1;
}
