#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "nif/evaluate.hpp"
#include "nif/instance.hpp"

namespace nif {

struct CheckConfig {
  /// Flows above this count as used paths.
  double flow_floor = 1e-9;
  /// Tolerance for detecting tight rate inequalities.
  double tight_tol = 1e-6;
};

/// Condition-by-condition residuals for the four-part local optimality /
/// equilibrium systems. Residuals are the worst signed violation of each
/// condition: equalities contribute absolute deviation, inequalities
/// contribute lhs - rhs (negative = satisfied with slack). A residual of
/// +inf marks a comparison whose divergent (limit-mode) parts already
/// violate the inequality.
struct ConditionReport {
  std::array<double, 4> residual{0, 0, 0, 0};
  std::array<bool, 4> pass{true, true, true, true};
  double tolerance = 0.0;
  double social_cost = 0.0;
  Eigen::VectorXd terminal_costs;

  /// Number of qualifying (i, j) pairs examined by condition 4 (diagonal
  /// pairs excluded); 0 means the condition was vacuous.
  int condition4_pairs = 0;
  /// min over qualifying off-diagonal comparisons of
  /// (lhs marginal)/(rhs marginal), taken at the limit when divergent.
  double condition4_min_ratio = std::numeric_limits<double>::quiet_NaN();
  /// Condition-4 residual restricted to i == j pairs (equals the
  /// condition-3 residual by construction of the condition system).
  double condition4_diagonal_residual = 0.0;

  bool passed() const { return pass[0] && pass[1] && pass[2] && pass[3]; }
};

/// The social-optimality conditions: flows cover rates exactly, rates sum
/// to the total entropy, used paths minimize the differential cost within
/// their source, and the differential-plus-source-derivative exchange
/// inequality over tight-set-qualified source pairs.
ConditionReport check_opt_conditions(const Instance& inst, const FlowRate& fr,
                                     double tol,
                                     const CheckConfig& cfg = {});

/// Same system with the terminal-perceived quantities: marginal path costs
/// and split source marginals (local equilibrium of the cost-splitting
/// game under partial information).
ConditionReport check_wardrop_conditions(const Instance& inst,
                                         const FlowRate& fr, double tol,
                                         const CheckConfig& cfg = {});

/// Same system with exact partial derivatives of each terminal's own edge
/// cost (full-information equilibrium).
ConditionReport check_nash_conditions(const Instance& inst,
                                      const FlowRate& fr, double tol,
                                      const CheckConfig& cfg = {});

}  // namespace nif
