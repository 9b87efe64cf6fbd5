#pragma once

#include <Eigen/Dense>

#include "nif/instance.hpp"

namespace nif {

/// x_{e,t}: per-edge, per-terminal load implied by the path flows.
Eigen::MatrixXd edge_loads(const Instance& inst, const FlowRate& fr);

/// L_n aggregate of one load vector (or exact max in limit mode),
/// evaluated scale-normalized so large exponents do not overflow.
double aggregate(const Eigen::VectorXd& loads, Exponent exp);

/// Total cost: sum_e c_e(z_e) + sum_s d_s(y_s).
double social_cost(const Instance& inst, const FlowRate& fr);
/// Same with the aggregation exponents forced to the exact-max limit.
double social_cost_limit(const Instance& inst, const FlowRate& fr);

/// A marginal that may diverge as the limit-mode exponent grows: the
/// represented quantity is value + slope * exponent. slope is nonzero only
/// in limit mode where the power-weighted split makes the derivative grow
/// linearly in the exponent (tied aggregates).
struct Marginal {
  double value = 0.0;
  double slope = 0.0;

  bool divergent() const { return slope != 0.0; }
  Marginal operator+(const Marginal& o) const {
    return {value + o.value, slope + o.slope};
  }
};

/// lhs - rhs at the limit: +/-inf when the slopes differ (the divergent
/// part dominates), else the difference of finite parts.
double marginal_difference(const Marginal& lhs, const Marginal& rhs,
                           double slope_tol = 1e-12);
/// lhs / rhs at the limit: ratio of slopes when either side diverges.
double marginal_ratio(const Marginal& lhs, const Marginal& rhs);

/// Gradient of the social cost along path P for terminal t:
/// sum_{e in P} c_e'(z_e) dz_e/dx_{e,t}. Zero-load edges use the
/// all-equal-direction limit over the edge's structural users.
double differential_path_cost(const Instance& inst,
                              const Eigen::MatrixXd& loads, int path_id);
double differential_path_cost(const Instance& inst, const FlowRate& fr,
                              int path_id);

/// c_e'(z_e) dz_e/dx_{e,t} for every (edge, terminal); differential path
/// costs are sums of these along the path.
Eigen::MatrixXd differential_term_matrix(const Instance& inst,
                                         const Eigen::MatrixXd& loads);
/// d_s'(y_s) dy_s/dR_{s,t} for every (source, terminal).
Eigen::MatrixXd source_derivative_matrix(const Instance& inst,
                                         const Eigen::MatrixXd& rates);
/// Social cost from precomputed edge loads and a rate matrix (the solver's
/// line search blends loads linearly).
double cost_from_loads(const Instance& inst, const Eigen::MatrixXd& loads,
                       const Eigen::MatrixXd& rates);

/// Per-unit cost terminal t perceives on path P under the power-weighted
/// edge split: sum_{e in P} c_e(z_e) Psi_{e,t} / x_{e,t}, with zero-load
/// edges evaluated as the all-equal-direction limit.
double marginal_path_cost(const Instance& inst, const Eigen::MatrixXd& loads,
                          int path_id);
double marginal_path_cost(const Instance& inst, const FlowRate& fr,
                          int path_id);

/// dC_S^{(t)}/dR_{s,t} under the configured source split. Uniform split:
/// (1/N_T) d'(y) dy/dR. Power split: d'(y)(y/R)Phi^2 + m (d/R) Phi(1-Phi);
/// in limit mode the second term is the slope.
Marginal source_marginal(const Instance& inst, const FlowRate& fr, int s,
                         int t);

/// d_s'(y_s) dy_s/dR_{s,t}, the raw objective derivative (no splitting);
/// this is what the optimality conditions and the solver gradient use.
double source_derivative(const Instance& inst, const FlowRate& fr, int s,
                         int t);

/// dC_E^{(t)}/df_P for the power-weighted edge split: per edge,
/// c'(z) z'_t Psi_t + n c(z) Psi_t (1 - Psi_t) / x_t; the second term is
/// the slope in limit mode when the edge maximum is tied.
Marginal nash_edge_marginal(const Instance& inst, const Eigen::MatrixXd& loads,
                            int path_id);

/// c_e(z_e) Psi_{e,t} summed over edges plus d_s(y_s) Phi_{s,t} over
/// sources; these sum to the social cost across terminals.
double terminal_cost(const Instance& inst, const FlowRate& fr, int t);
/// The edge part alone, C_E^{(t)}.
double terminal_edge_cost(const Instance& inst, const FlowRate& fr, int t);

/// Nonnegative flows, path flows covering every requested rate, and each
/// terminal's rate vector inside the Slepian-Wolf polytope.
bool is_feasible(const Instance& inst, const FlowRate& fr, double tol = 1e-9);

}  // namespace nif
