#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gl2ode/parse.hpp"
#include "gl2ode/sampling.hpp"
#include "gl2ode/verify.hpp"

using namespace gl2ode;

namespace {

const char* const kTransformed = "((2*y*y3 + 6*y1*y2 + 60*x^2)^(4/3) - 6*y2^2 - 8*y1*y3 - 120*x)/(2*y)";

SampleBox positive_box() { return SampleBox::bundle().set("x=0.5:1").set("y1=0.5:1"); }

double worst(const std::vector<ResidualReport>& reports) {
  double w = 0;
  for (const auto& r : reports) w = std::max(w, r.max_residual);
  return w;
}

Binding jet_point() {
  Binding b;
  b.set(Sym::X, 0.1).set(Sym::Y, 1).set(Sym::Y1, 0.2).set(Sym::Y2, 1.3).set(Sym::Y3, 0.7);
  return b;
}

}  // namespace

TEST(Structure, FlatCase) {
  const auto reports = structure_residuals(parse("0"), draw_samples(SampleBox::bundle(), 20, 1), 1e-12);
  EXPECT_TRUE(all_pass(reports));
  EXPECT_LT(worst(reports), 1e-12);
}

TEST(Structure, CatalogueExamples) {
  for (const char* F : {"y3^(4/3)", "(4/3)*y3^2/y2"}) {
    const auto reports = structure_residuals(parse(F), draw_samples(SampleBox::bundle(), 20, 2), 1e-8);
    for (const auto& r : reports) EXPECT_TRUE(r.pass) << F << " " << r.label << " " << r.max_residual;
  }
}

TEST(Structure, PointTransformedExample) {
  const auto reports = structure_residuals(parse(kTransformed), draw_samples(positive_box(), 20, 3), 1e-8);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.label << " " << r.max_residual;
}

TEST(Structure, NonBryantFunctionFails) {
  const auto reports = structure_residuals(parse("y3^2"), draw_samples(SampleBox::bundle(), 10, 4), 1e-8);
  EXPECT_FALSE(all_pass(reports));
}

TEST(Structure, EverySingleTermMutationIsDetected) {
  const Expr F = parse(kTransformed);
  const auto samples = draw_samples(positive_box(), 4, 11);
  std::vector<const Formula*> formulas;
  for (const auto& f : coframe_formulas()) formulas.push_back(&f);
  for (const auto& f : curvature_formulas()) formulas.push_back(&f);
  std::size_t count = 0;
  for (const Formula* f : formulas)
    for (std::size_t k = 0; k < f->terms.size(); ++k, ++count) {
      const Mutation m{f->label, k, Rational(2)};
      EXPECT_GT(worst(structure_residuals(F, samples, 1e-8, &m)), 1e-3) << f->label << " term " << k;
    }
  EXPECT_GT(count, 100u);
}

TEST(Structure, DoubledB4BreaksDOmega) {
  const Mutation m{"b4", 0, Rational(2)};
  const auto reports = structure_residuals(parse("y3^(4/3)"), draw_samples(SampleBox::bundle(), 10, 5), 1e-8, &m);
  EXPECT_GT(reports[7].max_residual, 1e-3);
  EXPECT_FALSE(reports[7].pass);
}

TEST(Structure, AllSamplesOutOfDomainThrows) {
  auto box = SampleBox::bundle().set("y3=-2:-1");
  EXPECT_THROW(structure_residuals(parse("y3^(4/3)"), draw_samples(box, 3, 6), 1e-8), std::domain_error);
}

TEST(Normalization, ZeroI2Examples) {
  for (const char* F : {"(4/3)*y3^2/y2", "y3^(4/3)", kTransformed}) {
    const NormalizedModel m = normalize_section(parse(F), jet_point(), 1.7);
    EXPECT_EQ(m.eps1, 1) << F;
    EXPECT_FALSE(m.eps2.has_value()) << F;
    EXPECT_NEAR(m.fiber.a44, 1.7, 0) << F;
    EXPECT_NEAR(m.normalized.a2, 8, 1e-10) << F;
    EXPECT_NEAR(m.normalized.a1, 0, 1e-10) << F;
    EXPECT_NEAR(m.normalized.a0, 0, 1e-10) << F;
  }
}

TEST(Normalization, NonzeroI2FixesA44) {
  const NormalizedModel m = normalize_section(parse("y3^(3/2) + y2^3"), jet_point());
  ASSERT_TRUE(m.eps2.has_value());
  EXPECT_NEAR(m.normalized.a2, 8.0 * m.eps1, 1e-9);
  EXPECT_NEAR(m.normalized.a1, 0, 1e-9);
  EXPECT_NEAR(m.normalized.a0, 8.0 * *m.eps2, 1e-9);
  EXPECT_EQ(*m.eps2, m.I2 * m.eps1 < 0 ? 1 : -1);
  const auto& c = m.base;
  const double closed_form = std::sqrt(m.eps1 * *m.eps2 * (c.a0 * c.a2 - c.a1 * c.a1) / (c.a2 * c.a2));
  EXPECT_NEAR(m.fiber.a44, closed_form, 1e-12 * closed_form);
}

TEST(Normalization, VanishingA2IsRejected) {
  EXPECT_THROW(normalize_section(parse("0"), jet_point()), NotNormalizable);
  EXPECT_THROW(normalize_section(parse("3*y3^2/y2"), jet_point()), NotNormalizable);
}

TEST(Normalization, SymbolicSectionMatchesNumeric) {
  const Expr F = parse(kTransformed);
  JetDerivatives jet(F);
  const auto section = normalization_section(base_coefficients(jet), 1);
  Binding b = jet_point();
  b.set(Sym::X, 0.7).set(Sym::Y1, 0.8).set(Sym::A44, 1.3);
  const NormalizedModel m = normalize_section(F, b, 1.3);
  EXPECT_NEAR(eval(section.at(Sym::A10), b), m.fiber.a10, 1e-10);
  EXPECT_NEAR(eval(section.at(Sym::A11), b), m.fiber.a11, 1e-10);
}

TEST(StreetModel, ClosedEquationsHold) {
  auto box = SampleBox::jet();
  box.set(Sym::A44, {0.5, 2});
  const auto reports = street_model_check(draw_samples(box, 20, 7), 1e-9);
  ASSERT_EQ(reports.size(), 8u);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.label << " " << r.max_residual;
}

TEST(Eds, PrintedSystemClosesOnlyForEqualSigns) {
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      const ResidualReport r = eds_closure_check(e1, e2, 5, 1, 1e-9, EdsVariant::Printed);
      EXPECT_EQ(r.pass, e1 == e2) << r.label << " " << r.max_residual;
      if (e1 != e2) EXPECT_GT(r.max_residual, 1.0);
    }
}

TEST(Eds, SwappedSystemClosesForAllSigns) {
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      const ResidualReport r = eds_closure_check(e1, e2, 5, 2, 1e-9, EdsVariant::Swapped);
      EXPECT_TRUE(r.pass) << r.label << " " << r.max_residual;
    }
}

TEST(Eds, ConstantScalarsAreInconsistent) {
  for (auto v : {EdsVariant::Printed, EdsVariant::Swapped})
    for (int e1 : {1, -1})
      for (int e2 : {1, -1}) EXPECT_NEAR(eds_constancy_obstruction(e1, e2, v), 0.25, 1e-15);
}

TEST(Eds, RejectsInvalidSigns) { EXPECT_THROW(eds_closure_check(2, 1, 1, 1, 1e-9), std::invalid_argument); }

TEST(Weyl, FlatAndStreetCases) {
  for (const char* F : {"0", "(4/3)*y3^2/y2"}) {
    JetDerivatives jet(parse(F));
    const StructureSystem sys = structure_system(jet);
    const WeylData w = weyl_data(sys, draw_samples(SampleBox::bundle(), 10, 12), 1e-9);
    EXPECT_TRUE(w.maxwell_flat) << F;
    EXPECT_LT(w.dA_mismatch, 1e-10) << F;
    // for F = 0, A only carries fiber differentials
    if (std::string(F) == "0") {
      const KForm a = w.A.simplified();
      for (const auto& [key, c] : a.terms()) EXPECT_GE(key[0], 5);
    }
  }
}

TEST(Weyl, PowerExampleIsNotFlat) {
  JetDerivatives jet(parse("y3^(4/3)"));
  const WeylData w = weyl_data(structure_system(jet), draw_samples(SampleBox::bundle(), 10, 13), 1e-9);
  EXPECT_FALSE(w.maxwell_flat);
}
