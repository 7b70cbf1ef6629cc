#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qrlab {

// One row of a per-radius verdict: slack = rhs - lhs (>= -tolerance passes
// for inequalities; |slack| <= tolerance for identities).
struct RadiusCheck {
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::optional<double> abs_form_slack;
};

struct CheckReport {
  std::string check;
  std::vector<RadiusCheck> per_radius;
  double worst_slack = 0.0;  // most negative slack among evaluated rows
  bool pass = true;
  std::string diagnostic;
};

}  // namespace qrlab
