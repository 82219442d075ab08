#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace gl2ode {

/// Outcome of one residual suite over a set of sample points.
struct ResidualReport {
  std::string label;
  std::size_t samples = 0;  // points actually evaluated
  std::size_t skipped = 0;  // points lost to evaluation domain errors
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> worst_point;
  std::string detail;                 // e.g. the worst coefficient key
  std::vector<std::string> messages;  // skipped-sample reasons, findings

  /// Folds one residual in, remembering where the maximum occurred.
  void observe(double residual, const std::vector<std::pair<std::string, double>>& point, std::string where = {});
  /// pass = at least one sample evaluated and max residual within tolerance.
  ResidualReport& finish();
};

bool all_pass(const std::vector<ResidualReport>& reports);

}  // namespace gl2ode
