#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "nif/evaluate.hpp"
#include "nif/instance.hpp"

namespace nif {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StepRule { Diminishing, LineSearch };

struct SolverConfig {
  int max_iterations = 20000;
  /// Convergence when the duality gap falls below this times (1 + |cost|).
  double gap_tolerance = 1e-8;
  StepRule step_rule = StepRule::LineSearch;
  /// Record a trace row every this many iterations (0 = off).
  int trace_stride = 0;
};

struct TraceRow {
  int iteration = 0;
  double cost = 0.0;
  double gap = 0.0;
};

struct Gradient {
  Eigen::VectorXd flow;   // per path
  Eigen::MatrixXd rate;   // N_S x N_T
};

/// Objective gradient at a point (zero-load conventions as in evaluate).
Gradient social_gradient(const Instance& inst, const FlowRate& fr);

/// Exact minimizer of a nonnegative linear function over the feasible
/// set, per terminal: route each source's rate on its cheapest path
/// (lowest path id on ties), rates from the greedy base vertex under the
/// effective weights (cheapest path cost + rate gradient).
FlowRate linear_oracle(const Instance& inst, const Gradient& grad);

struct SolveResult {
  FlowRate flow_rate;
  double cost = 0.0;  // objective at the returned point
  double gap = 0.0;   // Frank-Wolfe duality gap at the returned point
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

/// Frank-Wolfe on the convex program, starting from the oracle vertex at
/// the zero point's gradient. Under the line-search rule each iteration is
/// followed by pairwise vertex-exchange sweeps (worst-to-best path within
/// a pair, and rate mass between sources bounded by the polytope slacks),
/// which remove the flow dust plain conditional gradients leave behind.
/// Smooth finite exponents only: limit-mode aggregators are rejected;
/// solve at finite n,m and evaluate limits afterwards. Deterministic.
SolveResult solve_opt(const Instance& inst, const SolverConfig& config = {});

}  // namespace nif
