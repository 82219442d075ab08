#include "gl2ode/report.hpp"

#include <algorithm>
#include <cmath>

namespace gl2ode {

void ResidualReport::observe(double residual, const std::vector<std::pair<std::string, double>>& point,
                             std::string where) {
  ++samples;
  // NaN must count as a failure, so compare with !(a <= b)
  if (samples == 1 || !(residual <= max_residual)) {
    max_residual = std::isnan(residual) ? residual : std::max(max_residual, residual);
    worst_point = point;
    detail = std::move(where);
  }
}

ResidualReport& ResidualReport::finish() {
  pass = samples > 0 && max_residual <= tolerance;
  return *this;
}

bool all_pass(const std::vector<ResidualReport>& reports) {
  return !reports.empty() && std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

}  // namespace gl2ode
