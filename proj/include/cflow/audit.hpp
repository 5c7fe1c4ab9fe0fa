#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cflow/eligibility.hpp"

namespace cflow {

struct AuditCheck {
  std::string name;
  long checked = 0;
  long violations = 0;
};

/// Outcome of one or more invariant audits. Zero violations means every
/// listed inequality held at every audited point within the stated
/// tolerances.
struct AuditReport {
  std::vector<AuditCheck> checks;
  long points = 0;                    // audited states
  std::string first_violation;       // empty when clean
  std::vector<std::string> flags;    // non-fatal observations
  double flow_tol = 0.0;
  double weight_slack = 0.0;

  long violations() const;
  bool clean() const { return violations() == 0; }
  AuditCheck& at(const std::string& name);
  void merge(const AuditReport& other, const std::string& context = "");
};

/// Evaluates the rule set's invariants plus capacity bounds, conservation,
/// zero source potential, and grid membership of the potentials.
/// Comparisons are exact on the grid for the linear rule sets and allow a
/// small gradient slack for concave evaluations. Violations become report
/// entries, never exceptions.
AuditReport check_invariants(const Network& net, const FlowState& state);

/// Both sides of the reduced-weight identity: (sum w_e x_e,
/// sum w^p_e x_e). Requires linear weights, a conserving flow, and equal
/// terminal potentials (violations of these are errors, not inequalities).
/// The two values agree exactly for grid inputs.
std::pair<double, double> reduced_cost_identity(
    const Network& net, const std::vector<double>& flow,
    const std::vector<double>& potential);

}  // namespace cflow
