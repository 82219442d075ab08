#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gl2ode/coframe.hpp"
#include "gl2ode/curvature.hpp"
#include "gl2ode/report.hpp"

namespace gl2ode {

inline constexpr std::array<const char*, 8> kStructureLabels{"d theta0", "d theta1", "d theta2", "d theta3",
                                                             "d Omega+", "d Omega-", "d Omega0", "d Omega"};

/// Everything the structure equations need for one F: the lifted coframe,
/// its exterior derivatives, and the base curvature coefficients.
struct StructureSystem {
  CoframeSet coframe;                 // on the bundle chart
  std::array<KForm, 8> derivatives;   // d of each coframe member
  CurvatureCoefficients<Expr> base;   // a^0_i, b^0_i
};

StructureSystem structure_system(JetDerivatives& jet, const Mutation* mutation = nullptr);

/// Numeric right-hand sides of the eight structure equations at a point,
/// given the evaluated coframe and the curvature coefficients there.
std::array<NumericForm, 8> structure_rhs(const std::array<NumericForm, 8>& coframe,
                                         const CurvatureCoefficients<double>& c);

/// For each of the eight equations, the max |coefficient| of lhs - rhs over
/// the samples (bundle-chart bindings). Samples that hit domain errors are
/// skipped and logged.
std::vector<ResidualReport> structure_residuals(const Expr& F, const std::vector<Binding>& samples, double tol,
                                                const Mutation* mutation = nullptr);
std::vector<ResidualReport> structure_residuals(const StructureSystem& sys, const std::vector<Binding>& samples,
                                                double tol);

/// Lifted coframe members must be independent: |det| of the 8x8 coefficient
/// matrix at a bundle point.
double coframe_determinant(const CoframeSet& coframe, const Binding& b);

/// A = -12 Omega and its differential computed two ways: d of A, and -12
/// times the dOmega right-hand side. maxwell_flat when every b_i stays below
/// tol at the samples.
struct WeylData {
  KForm A;
  double dA_mismatch = 0;
  double b_max = 0;
  bool maxwell_flat = true;
  std::size_t samples = 0;
};

/// Throws std::runtime_error when the two dA computations differ by more
/// than 1e-8.
WeylData weyl_data(const StructureSystem& sys, const std::vector<Binding>& samples, double tol);

// ---------------------------------------------------------------------------
// Normalization

class NotNormalizable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fiber section normalizing a2 = 8 eps1 and a1 = 0 (and a0 = 8 eps2 when
/// I2 != 0) at one jet point.
struct NormalizedModel {
  int eps1 = 1;
  std::optional<int> eps2;  // set when I2 != 0
  FiberPoint fiber;
  CurvatureCoefficients<double> base;
  CurvatureCoefficients<double> normalized;
  double I2 = 0;
};

/// `a44` is used as given when I2 vanishes (it is then a free parameter).
/// Throws NotNormalizable when a^0_2 vanishes (relative threshold `zero_tol`).
NormalizedModel normalize_section(const Expr& F, const Binding& jet, double a44 = 1, double zero_tol = 1e-12);

/// Symbolic version of the I2 = 0 section for an F with a^0_2 of fixed sign
/// eps1: a11 = (sqrt2/4) a44 sqrt|a^0_2|, a10 = (3 sqrt2/4) eps1 a44 a^0_1 / sqrt|a^0_2|.
std::map<Sym, Expr> normalization_section(const CurvatureCoefficients<Expr>& base, int eps1);

/// The six closed structure equations of the normalized model with I2 = 0
/// and a2 = 8 (F = (4/3) y3^2 / y2), plus Omega- = (sqrt2/2) theta3 and
/// Omega0 = 3 Omega - (sqrt2/2) theta2, on the 6-dimensional section
/// (x, y, y1, y2, y3, a44).
std::vector<ResidualReport> street_model_check(const std::vector<Binding>& samples, double tol);

// ---------------------------------------------------------------------------
// Reduced exterior differential system

/// Printed: the published e^{-2w} terms. Swapped: eps1 and eps2 exchanged in
/// every e^{-2w} term of the dw0..dw13 equations.
enum class EdsVariant { Printed, Swapped };

/// d^2 of sigma^0..sigma^3, Omega+, w, w0..w3, w13 on random assignments of
/// (w, .., w13, e^{-2w}); the max coefficient is the residual.
ResidualReport eds_closure_check(int eps1, int eps2, std::size_t trials, std::uint64_t seed, double tol,
                                 EdsVariant variant = EdsVariant::Printed);

/// With every w-scalar constant, the dw-equations become algebraic; returns
/// the largest forced coefficient that cannot vanish (0 would mean the
/// constant case is consistent).
double eds_constancy_obstruction(int eps1, int eps2, EdsVariant variant = EdsVariant::Printed);

}  // namespace gl2ode
