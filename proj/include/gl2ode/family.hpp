#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gl2ode/expr.hpp"
#include "gl2ode/rational.hpp"

namespace gl2ode {

/// The two scalar ODEs on q(z) for which F = y2^2 q(y3^2 / y2^3) satisfies
/// Bryant's conditions:
///   a: 6z(3z - 2q)q'' + 3zq'^2 - 6qq' + 4q = 0
///   b: 6z(3z - 2q)q'' + 3zq'^2 - 6qq' + 14q - 15z = 0
enum class Branch { A, B };

const char* branch_name(Branch b);
/// "a" or "b"; anything else throws std::invalid_argument.
Branch parse_branch(std::string_view name);

double q_residual(Branch branch, double z, double q, double qp, double qpp);

/// Coefficients of c^2, c, 1 in the residual of q = cz divided by z.
std::array<Rational, 3> linear_residual_polynomial(Branch branch);
/// Rational roots of that quadratic, ascending.
std::vector<Rational> linear_roots(Branch branch);

/// q^{(k)} as an expression in (Z, Q, QP) obtained from the ODE and its
/// derivatives; k >= 2.
const Expr& q_closure(Branch branch, int k);

class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Distance guard: |3z - 2q| and |z| must exceed 1e-4 (1 + |z|).
bool near_singular(double z, double q);

/// Tabulated solution with (q, q', q'') at every node, ascending in z.
struct QSolution {
  Branch branch = Branch::A;
  double z0 = 0, q0 = 0, qp0 = 0, step = 0;
  std::size_t requested_nodes = 0;
  std::vector<double> z, q, qp, qpp;
  bool truncated = false;  // integration stopped at the singular guard
  double max_node_residual = 0;

  double z_min() const { return z.front(); }
  double z_max() const { return z.back(); }
  /// q^{(order)}(at). Orders 0 and 1 use cubic Hermite interpolation between
  /// nodes; higher orders come from the ODE closure at the interpolated
  /// (z, q, q'). Throws SingularPoint outside the grid or near the singular
  /// locus.
  double value(int order, double at) const;
};

/// Classical RK4 on (q, q') from z0 with signed `step` for `nodes` steps.
/// Throws SingularPoint when the initial condition is singular.
QSolution integrate_q(Branch branch, double z0, double q0, double qp0, double step, std::size_t nodes);

/// F = y2^2 q(y3^2/y2^3) with q an opaque function named "q".
Expr ansatz_F();

/// Installs the solution as the "q" function of a binding.
Binding& bind_solution(Binding& b, const std::shared_ptr<const QSolution>& sol);

/// Jet points (y2, y3 > 0) whose z = y3^2/y2^3 lies in the inner part of
/// the grid, each carrying the solution as "q".
std::vector<Binding> family_samples(const std::shared_ptr<const QSolution>& sol, std::size_t n, std::uint64_t seed);

/// The special solution q = cz the grid reproduces, if any (c one of the
/// linear roots of its branch, to 1e-8).
std::optional<Rational> homogeneous_special(const QSolution& sol);

struct FamilyReport {
  std::size_t samples = 0;
  double bryant_max = 0;      // max |r1|, |r2|
  double I2_max = 0;          // max |I2| of the base coefficients
  double I3_max = 0;          // max |I3| / b-scale^2
  double cubic_max = 0;       // max |det Hankel(b)| / b-scale^3
  double I4_max = 0;          // max over coordinate directions of |I4(theta)| / theta-scale^4
  double a2_max = 0;          // max |a2|
  double b4_max = 0;          // max |b4|
  bool maxwell_flat = true;   // all b_i below tolerance at every sample
  std::optional<Rational> special;
};

FamilyReport scan_family(const std::shared_ptr<const QSolution>& sol, const std::vector<Binding>& samples,
                         double flat_tol = 1e-6);

}  // namespace gl2ode
