#include <gtest/gtest.h>

#include <cmath>

#include "gl2ode/coframe.hpp"
#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

using namespace gl2ode;

namespace {

const char* const kCatalogue[] = {"0", "y3^(4/3)", "(4/3)*y3^2/y2", "3*y3^2/y2", "(5/3)*y3^2/y2"};

Mat4<Rational> scaled(const Mat4<Rational>& m, Rational c) {
  Mat4<Rational> out = m;
  for (auto& row : out)
    for (auto& e : row) e *= c;
  return out;
}

Binding bundle_point(double a10, double a11, double a44, double y3 = 1) {
  Binding b;
  b.set(Sym::X, 0.3).set(Sym::Y, 1.2).set(Sym::Y1, -0.4).set(Sym::Y2, 0.9).set(Sym::Y3, y3);
  b.set(Sym::A10, a10).set(Sym::A11, a11).set(Sym::A44, a44);
  return b;
}

double max_diff(const KForm& a, const KForm& b, const Binding& p) { return eval_form(a - b, p).max_abs(); }

}  // namespace

TEST(Generators, CommutationRelations) {
  const auto& g = gl2_generators();
  EXPECT_EQ(commutator(g.zero, g.plus), scaled(g.plus, Rational(-2)));
  EXPECT_EQ(commutator(g.zero, g.minus), scaled(g.minus, Rational(2)));
  EXPECT_EQ(commutator(g.plus, g.minus), scaled(g.zero, Rational(-1)));
  EXPECT_EQ(g.scale, scaled(identity_matrix<Rational>(), Rational(-3)));
  for (Gen x : kGenerators) EXPECT_EQ(commutator(g.scale, g[x]), zero_matrix<Rational>());
}

TEST(Generators, DecomposeComposeRoundTrip) {
  const std::array<Rational, 4> c{Rational(2), Rational(-1, 3), Rational(5, 7), Rational(1, 2)};
  EXPECT_EQ(decompose(compose(c)), c);
}

TEST(GaugeMatrix, Examples) {
  const GaugeMatrix id = gauge_matrix({0, 1, 1});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(id.m[i][j], i == j ? 1.0 : 0.0);
  const GaugeMatrix two = gauge_matrix({0, 2, 1});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(two.m[i][j], i == j ? 2.0 : 0.0);
  EXPECT_DOUBLE_EQ(gauge_matrix({3, 1, 1}).m[1][0], -1.0);
}

TEST(GaugeMatrix, DeterminantInverseAndTriangularity) {
  Sampler s(21);
  for (int n = 0; n < 50; ++n) {
    const FiberPoint p{s.uniform(-2, 2), s.uniform(0.5, 2) * (n % 2 ? -1 : 1), s.uniform(0.5, 2)};
    const GaugeMatrix g = gauge_matrix(p);
    EXPECT_NEAR(determinant(g.m), std::pow(p.a11, 4) / (p.a44 * p.a44), 1e-12 * std::pow(p.a11, 4) / (p.a44 * p.a44));
    const auto prod = matmul(g.m, g.inverse);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(prod[i][j], i == j ? 1.0 : 0.0, 1e-12);
        if (j > i) EXPECT_EQ(g.m[i][j], 0.0);
      }
  }
}

TEST(GaugeMatrix, RejectsSingularParameters) {
  EXPECT_THROW(gauge_matrix({0, 0, 1}), SingularFiber);
  EXPECT_THROW(gauge_matrix({0, 1, 0}), SingularFiber);
  EXPECT_THROW(gauge_matrix({NAN, 1, 1}), SingularFiber);
}

TEST(GaugeMatrix, SymbolicMatchesNumeric) {
  const Binding b = bundle_point(0.7, -1.3, 0.6);
  const GaugeMatrix g = gauge_matrix({0.7, -1.3, 0.6});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(eval(gauge_matrix_symbolic()[i][j], b), g.m[i][j], 1e-13);
      EXPECT_NEAR(eval(gauge_inverse_symbolic()[i][j], b), g.inverse[i][j], 1e-12);
    }
}

TEST(BaseCoframe, FlatExamples) {
  const CoframeSet c = base_coframe(parse("0"));
  const KForm dx = KForm::differential(jet_chart(), Sym::X);
  const KForm expected_t2 = Expr(Rational(-1, 2)) * (KForm::differential(jet_chart(), Sym::Y2) - sym(Sym::Y3) * dx);
  EXPECT_TRUE((c[Slot::Theta2] - expected_t2).simplified().empty());
  EXPECT_TRUE((c[Slot::OmegaPlus] - dx).simplified().empty());
  EXPECT_TRUE(c[Slot::Omega].simplified().empty());
}

TEST(BaseCoframe, OmegaPlusCoefficientForPowerExample) {
  const CoframeSet c = base_coframe(parse("y3^(4/3)"));
  Binding b;
  b.set(Sym::X, 0).set(Sym::Y, 0).set(Sym::Y1, 0).set(Sym::Y2, 0).set(Sym::Y3, 1);
  // dy1 is slot 2 of the jet chart; only omega^1 contributes there
  EXPECT_NEAR(eval_form(c[Slot::OmegaPlus], b).at({2}), 2.0 / 27, 1e-15);
}

TEST(Lift, AdjointAndMaurerCartanAreExact) {
  EXPECT_NO_THROW(gauge_adjoint());
  EXPECT_NO_THROW(gauge_maurer_cartan());
  // m dm^-1 is lower triangular, so it has no E+ component
  EXPECT_TRUE(gauge_maurer_cartan()[static_cast<std::size_t>(Gen::Plus)].simplified().empty());
}

TEST(Lift, IdentityFiberReproducesBase) {
  for (const char* F : kCatalogue) {
    const CoframeSet base = base_coframe(parse(F));
    const CoframeSet lifted = lift_coframe(base);
    const Binding p = bundle_point(0, 1, 1);
    for (std::size_t i = 0; i < 8; ++i) {
      const NumericForm l = eval_form(lifted.forms[i], p), b = eval_form(base.forms[i].on_chart(bundle_chart()), p);
      // jet-slot components agree; the fiber slots carry dm^-1 terms
      for (const auto& [key, v] : b.entries) EXPECT_NEAR(l.at(key), v, 1e-13) << F << " " << kSlotNames[i];
      for (const auto& [key, v] : l.entries)
        if (key[0] < 5) EXPECT_NEAR(v, b.at(key), 1e-13) << F << " " << kSlotNames[i];
    }
  }
}

TEST(Lift, FlatCaseAtIdentityFiber) {
  const CoframeSet lifted = lift_coframe(base_coframe(parse("0")));
  const NumericForm omega = eval_form(lifted[Slot::Omega], bundle_point(0, 1, 1));
  for (const auto& [key, v] : omega.entries)
    if (key[0] < 5) EXPECT_EQ(v, 0.0);
  const NumericForm plus = eval_form(lifted[Slot::OmegaPlus], bundle_point(0, 1, 1));
  EXPECT_EQ(plus.at({0}), 1.0);
  EXPECT_EQ(plus.max_abs(), 1.0);
}

TEST(Lift, OmegaPlusScalesWithA44) {
  const CoframeSet base = base_coframe(parse("y3^(4/3)"));
  const CoframeSet lifted = lift_coframe(base);
  const KForm diff = lifted[Slot::OmegaPlus] - sym(Sym::A44) * base[Slot::OmegaPlus].on_chart(bundle_chart());
  EXPECT_TRUE(diff.simplified().empty());
}

TEST(AlphaTable, Examples) {
  const AlphaTable flat = alpha_table(parse("0"));
  EXPECT_EQ(simplify(flat(4, 1)), Expr(0));
  const Binding p = bundle_point(0.4, 1, 1);
  EXPECT_DOUBLE_EQ(eval(flat(2, 2), p), -0.5);
  const AlphaTable power = alpha_table(parse("y3^(4/3)"));
  EXPECT_NEAR(eval(power(4, 1), bundle_point(0, 1, 1, 1)), 2.0 / 27, 1e-15);
  EXPECT_DOUBLE_EQ(eval(power(0, 0), bundle_point(0, 2, 3)), -18.0);
}

TEST(AlphaTable, AgreesWithLiftedCoframe) {
  for (const char* F : kCatalogue) {
    const Expr f = parse(F);
    const CoframeSet lifted = lift_coframe(base_coframe(f));
    const auto alpha = alpha_forms(alpha_table(f), f);
    for (const Binding& p : draw_samples(SampleBox::bundle(), 20, 5)) {
      for (int i = 0; i < 4; ++i) EXPECT_LT(max_diff(lifted.theta(i), alpha[i], p), 1e-10) << F << " theta" << i;
      EXPECT_LT(max_diff(lifted[Slot::OmegaPlus], alpha[4], p), 1e-10) << F;
    }
  }
}

TEST(AlphaTable, SquareReadingOfThetaThreeDisagrees) {
  // The base theta3 with -7F3^2 in place of -7F3^3 is not what the table gives.
  const Expr F = parse("y3^(4/3)");
  JetDerivatives jet(F);
  CoframeSet base = base_coframe(jet);
  const auto w = contact_forms(F);
  const Expr f3 = jet.get("F3");
  base[Slot::Theta3] += Expr(Rational(-7, 720)) * (f3 * f3 - f3 * f3 * f3) * w[0];
  const CoframeSet lifted = lift_coframe(base);
  const auto alpha = alpha_forms(alpha_table(F), F);
  EXPECT_GT(max_diff(lifted.theta(3), alpha[3], bundle_point(0.2, 1.1, 0.9, 1.7)), 1e-3);
}

TEST(Coframe, HasFullRank) {
  for (const char* F : kCatalogue) {
    const CoframeSet lifted = lift_coframe(base_coframe(parse(F)));
    for (const Binding& p : draw_samples(SampleBox::bundle(), 20, 9))
      EXPECT_GT(std::abs(coframe_determinant(lifted, p)), 1e-8) << F;
  }
}
