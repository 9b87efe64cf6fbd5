#pragma once

#include "nif/conditions.hpp"
#include "nif/solve.hpp"

namespace nif {

struct UnsupportedConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Computes a Wardrop flow-rate by reduction: solve the social optimum of
/// the instance with every edge cost transformed (a x^k -> (N_T/k) a x^k)
/// and return that point unchanged. Requires the canonical splitting
/// (power-weighted edges, uniform sources) and monomial edge costs.
/// The returned cost/gap describe the transformed solve; evaluate the
/// original instance's social cost on .flow_rate as needed.
SolveResult solve_wardrop(const Instance& inst, const SolverConfig& config = {});

/// Central finite difference of C_E^{(t)} with respect to f_P, the
/// cross-check for the analytic Nash edge marginal. Flows on P must stay
/// positive at the step.
double nash_edge_marginal_fd(const Instance& inst, const FlowRate& fr,
                             int path_id, double step);

}  // namespace nif
