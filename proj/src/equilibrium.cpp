#include "nif/equilibrium.hpp"

namespace nif {

SolveResult solve_wardrop(const Instance& inst, const SolverConfig& config) {
  if (inst.splitting.source != SourceSplit::Uniform)
    throw UnsupportedConfig(
        "solve_wardrop: the cost-transformation reduction requires the "
        "uniform source split; use the condition checkers directly");
  const Instance transformed = inst.with_transformed_edge_costs();
  return solve_opt(transformed, config);
}

double nash_edge_marginal_fd(const Instance& inst, const FlowRate& fr,
                             int path_id, double step) {
  const int t = inst.paths.path(path_id).terminal;
  FlowRate hi = fr;
  FlowRate lo = fr;
  hi.path_flows[path_id] += step;
  lo.path_flows[path_id] -= step;
  return (terminal_edge_cost(inst, hi, t) - terminal_edge_cost(inst, lo, t)) /
         (2.0 * step);
}

}  // namespace nif
