#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "gl2ode/formula.hpp"
#include "gl2ode/forms.hpp"
#include "gl2ode/gl2.hpp"
#include "gl2ode/jet.hpp"

namespace gl2ode {

/// Slots of the invariant coframe (theta^0..theta^3, Omega+, Omega-, Omega0, Omega).
enum class Slot : std::uint8_t { Theta0, Theta1, Theta2, Theta3, OmegaPlus, OmegaMinus, OmegaZero, Omega };
inline constexpr std::array<std::string_view, 8> kSlotNames{"theta0", "theta1", "theta2", "theta3",
                                                            "Omega+", "Omega-", "Omega0", "Omega"};

struct CoframeSet {
  std::array<KForm, 8> forms;

  const KForm& operator[](Slot s) const { return forms[static_cast<std::size_t>(s)]; }
  KForm& operator[](Slot s) { return forms[static_cast<std::size_t>(s)]; }
  const KForm& theta(int i) const { return forms[static_cast<std::size_t>(i)]; }
  /// Connection component along a generator.
  const KForm& connection(Gen g) const;
  const ChartPtr& chart() const { return forms[0].chart(); }
};

/// Contact forms omega^0..omega^3 and w+ = dx on the jet chart.
std::array<KForm, 5> contact_forms(const Expr& F);

/// Transcribed coefficients of the base section (fiber point (0,1,1)), one
/// Formula per coefficient. Labels look like "theta2.w0" (coefficient of
/// omega^0 in theta^2) or "Omega0.t4" (coefficient of Omega+ in Omega0).
const std::vector<Formula>& coframe_formulas();

/// The coframe restricted to the section a10 = 0, a11 = a44 = 1, on the jet
/// chart. With a mutation, the named formula term is rescaled.
CoframeSet base_coframe(JetDerivatives& jet, const Mutation* mutation = nullptr);
CoframeSet base_coframe(const Expr& F);

/// Coefficients of m E_X m^-1 in the generator basis: adjoint[X][Y] is the
/// E_Y-component. Exact; throws std::logic_error if the decomposition leaves
/// a remainder.
const std::array<std::array<Expr, 4>, 4>& gauge_adjoint();

/// Components of the Maurer-Cartan term m dm^-1 on the bundle chart.
const std::array<KForm, 4>& gauge_maurer_cartan();

/// theta = m theta_0 and Gamma = m Gamma_0 m^-1 + m dm^-1 on the bundle chart.
CoframeSet lift_coframe(const CoframeSet& base);

/// Entries alpha^i_j of the group parameters defining (theta, Omega+) in
/// terms of (omega^0..omega^3, w+), as expressions in jet and fiber symbols.
/// Rows/columns 0..4; absent entries are zero.
struct AlphaTable {
  std::array<std::array<Expr, 5>, 5> entries;
  const Expr& operator()(int i, int j) const { return entries[i][j]; }
};

/// Independent transcription of the alpha-table.
AlphaTable alpha_table(JetDerivatives& jet);
AlphaTable alpha_table(const Expr& F);

/// (theta^0..theta^3, Omega+) assembled from the alpha-table on the bundle chart.
std::array<KForm, 5> alpha_forms(const AlphaTable& alpha, const Expr& F);

}  // namespace gl2ode
