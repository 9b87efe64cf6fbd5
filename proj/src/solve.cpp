#include "nif/solve.hpp"

#include <algorithm>
#include <cmath>

#include "nif/polytope.hpp"

namespace nif {

namespace {

void require_solvable(const Instance& inst) {
  if (inst.aggregator.edge.is_limit || inst.aggregator.source.is_limit)
    throw std::invalid_argument(
        "solve: limit-mode aggregators are non-smooth; solve at finite "
        "exponents and evaluate limits on the result");
  for (int s = 0; s < inst.num_sources(); ++s)
    for (int t = 0; t < inst.num_terminals(); ++t)
      if (inst.paths.by_pair(s, t).empty())
        throw SolverError("solve: no path from source " + std::to_string(s + 1) +
                          " to terminal " + std::to_string(t + 1));
}

// Directional derivative of the cost along (loads_v - loads_x, rates_v -
// rates_x) at the blend point gamma.
double blend_derivative(const Instance& inst, const Eigen::MatrixXd& lx,
                        const Eigen::MatrixXd& lv, const Eigen::MatrixXd& rx,
                        const Eigen::MatrixXd& rv, double gamma) {
  const Eigen::MatrixXd loads = (1.0 - gamma) * lx + gamma * lv;
  const Eigen::MatrixXd rates = (1.0 - gamma) * rx + gamma * rv;
  const Eigen::MatrixXd dterm = differential_term_matrix(inst, loads);
  const Eigen::MatrixXd sterm = source_derivative_matrix(inst, rates);
  return dterm.cwiseProduct(lv - lx).sum() + sterm.cwiseProduct(rv - rx).sum();
}

double line_search(const Instance& inst, const Eigen::MatrixXd& lx,
                   const Eigen::MatrixXd& lv, const Eigen::MatrixXd& rx,
                   const Eigen::MatrixXd& rv) {
  if (blend_derivative(inst, lx, lv, rx, rv, 1.0) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (blend_derivative(inst, lx, lv, rx, rv, mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Exact minimizer over [0, budget] of a convex move given its directional
// derivative as a function of the amount moved.
template <typename Deriv>
double move_line_search(Deriv&& derivative, double budget) {
  if (derivative(budget) <= 0.0) return budget;
  double lo = 0.0, hi = budget;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (derivative(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Vertex-exchange sweep over the per-pair flow simplexes: move flow from
// the costliest used path onto the cheapest path of the same (source,
// terminal) pair. Plain conditional gradient steps leave slowly-decaying
// flow dust on abandoned paths; these pairwise moves remove it
// geometrically while never increasing the cost.
void pairwise_flow_sweep(const Instance& inst, FlowRate& x,
                         Eigen::MatrixXd& loads) {
  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  Eigen::MatrixXd scratch = loads;
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      const auto& ids = inst.paths.by_pair(s, t);
      if (ids.size() < 2) continue;
      int best = -1, worst = -1;
      double best_cost = std::numeric_limits<double>::infinity();
      double worst_cost = -std::numeric_limits<double>::infinity();
      for (int p : ids) {
        const double sum = differential_path_cost(inst, loads, p);
        if (sum < best_cost) {
          best_cost = sum;
          best = p;
        }
        if (x.path_flows[p] > 0.0 && sum > worst_cost) {
          worst_cost = sum;
          worst = p;
        }
      }
      if (best < 0 || worst < 0 || best == worst) continue;
      if (worst_cost - best_cost <= 0.0) continue;
      const double budget = x.path_flows[worst];
      const auto deriv = [&](double delta) {
        for (int e : inst.paths.path(best).edges)
          scratch(e, t) = loads(e, t) + delta;
        for (int e : inst.paths.path(worst).edges) scratch(e, t) -= delta;
        const double d = differential_path_cost(inst, scratch, best) -
                         differential_path_cost(inst, scratch, worst);
        for (int e : inst.paths.path(best).edges) scratch(e, t) = loads(e, t);
        for (int e : inst.paths.path(worst).edges) scratch(e, t) = loads(e, t);
        return d;
      };
      const double moved = move_line_search(deriv, budget);
      if (moved <= 0.0) continue;
      x.path_flows[worst] -= moved;
      x.path_flows[best] += moved;
      if (moved >= budget) x.path_flows[worst] = 0.0;
      for (int e : inst.paths.path(best).edges) loads(e, t) += moved;
      for (int e : inst.paths.path(worst).edges) loads(e, t) -= moved;
      scratch = loads;
    }
  }
}

// The companion exchange on the rate side: shift rate mass between two
// sources of one terminal (with the covering flow moving along), bounded
// by the slack of every rate inequality separating the pair. This is the
// move the fourth optimality condition prices; without it the conditional
// gradient zig-zags across the base polytope instead of settling into
// mid-face optima.
void pairwise_rate_sweep(const Instance& inst, FlowRate& x,
                         Eigen::MatrixXd& loads) {
  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  if (ns < 2) return;
  const int n = inst.entropy.num_sources();
  Eigen::MatrixXd scratch = loads;
  for (int t = 0; t < nt; ++t) {
    // Per-source entry and exit prices at the current point.
    const Eigen::MatrixXd sterm = source_derivative_matrix(inst, x.rates);
    std::vector<int> out_path(ns, -1), in_path(ns, -1);
    std::vector<double> out_price(ns), in_price(ns);
    for (int s = 0; s < ns; ++s) {
      double best = std::numeric_limits<double>::infinity();
      double worst = -std::numeric_limits<double>::infinity();
      for (int p : inst.paths.by_pair(s, t)) {
        const double sum = differential_path_cost(inst, loads, p);
        if (sum < best) {
          best = sum;
          in_path[s] = p;
        }
        if (x.path_flows[p] > 0.0 && sum > worst) {
          worst = sum;
          out_path[s] = p;
        }
      }
      in_price[s] = best + sterm(s, t);
      out_price[s] = worst + sterm(s, t);
    }
    // Most profitable exchange with a positive feasible budget.
    int from = -1, to = -1;
    double score = 0.0, budget = 0.0;
    for (int i = 0; i < ns; ++i) {
      if (out_path[i] < 0) continue;
      for (int j = 0; j < ns; ++j) {
        if (j == i || in_path[j] < 0) continue;
        const double gain = out_price[i] - in_price[j];
        if (gain <= score) continue;
        // Largest movable amount: slack of the tightest inequality that
        // contains i but not j, capped by the flow leaving i's path.
        double slack = x.path_flows[out_path[i]];
        for (Subset a = 1; a < subset_count(n) && slack > 0.0; ++a) {
          if (!contains(a, i) || contains(a, j)) continue;
          double sum = 0.0;
          for (int l = 0; l < ns; ++l)
            if (contains(a, l)) sum += x.rates(l, t);
          slack = std::min(slack, sum - inst.entropy.conditional_entropy(a));
        }
        if (slack <= 0.0) continue;
        score = gain;
        from = i;
        to = j;
        budget = slack;
      }
    }
    if (from < 0) continue;
    const int p_out = out_path[from];
    const int p_in = in_path[to];
    const auto deriv = [&](double delta) {
      for (int e : inst.paths.path(p_in).edges)
        scratch(e, t) = loads(e, t) + delta;
      for (int e : inst.paths.path(p_out).edges) scratch(e, t) -= delta;
      Eigen::MatrixXd rates = x.rates;
      rates(from, t) -= delta;
      rates(to, t) += delta;
      const Eigen::MatrixXd st = source_derivative_matrix(inst, rates);
      const double d = differential_path_cost(inst, scratch, p_in) +
                       st(to, t) - differential_path_cost(inst, scratch, p_out) -
                       st(from, t);
      for (int e : inst.paths.path(p_in).edges) scratch(e, t) = loads(e, t);
      for (int e : inst.paths.path(p_out).edges) scratch(e, t) = loads(e, t);
      return d;
    };
    const double moved = move_line_search(deriv, budget);
    if (moved <= 0.0) continue;
    x.rates(from, t) -= moved;
    x.rates(to, t) += moved;
    x.path_flows[p_out] -= moved;
    x.path_flows[p_in] += moved;
    if (x.path_flows[p_out] < 0.0) x.path_flows[p_out] = 0.0;
    for (int e : inst.paths.path(p_in).edges) loads(e, t) += moved;
    for (int e : inst.paths.path(p_out).edges) loads(e, t) -= moved;
    scratch = loads;
  }
}

}  // namespace

Gradient social_gradient(const Instance& inst, const FlowRate& fr) {
  const Eigen::MatrixXd loads = edge_loads(inst, fr);
  const Eigen::MatrixXd dterm = differential_term_matrix(inst, loads);
  Gradient g;
  g.flow.resize(inst.paths.num_paths());
  for (int p = 0; p < inst.paths.num_paths(); ++p) {
    const Path& path = inst.paths.path(p);
    double sum = 0.0;
    for (int e : path.edges) sum += dterm(e, path.terminal);
    g.flow[p] = sum;
  }
  g.rate = source_derivative_matrix(inst, fr.rates);
  return g;
}

FlowRate linear_oracle(const Instance& inst, const Gradient& grad) {
  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  FlowRate v = zero_flow_rate(inst);
  for (int t = 0; t < nt; ++t) {
    Eigen::VectorXd weights(ns);
    std::vector<int> best_path(ns, -1);
    for (int s = 0; s < ns; ++s) {
      const auto& ids = inst.paths.by_pair(s, t);
      if (ids.empty())
        throw SolverError("linear_oracle: no path for a source-terminal pair");
      double best = std::numeric_limits<double>::infinity();
      for (int p : ids) {
        if (grad.flow[p] < best) {
          best = grad.flow[p];
          best_path[s] = p;
        }
      }
      // Monotone costs keep gradients nonnegative; absorb float dust.
      weights[s] = std::max(0.0, best + grad.rate(s, t));
    }
    const Eigen::VectorXd rates_t = linear_minimize(inst.entropy, weights);
    for (int s = 0; s < ns; ++s) {
      v.rates(s, t) = rates_t[s];
      v.path_flows[best_path[s]] += rates_t[s];
    }
  }
  return v;
}

SolveResult solve_opt(const Instance& inst, const SolverConfig& config) {
  require_solvable(inst);
  if (config.max_iterations < 1)
    throw std::invalid_argument("solve: max_iterations must be >= 1");
  if (!(config.gap_tolerance > 0.0))
    throw std::invalid_argument("solve: gap tolerance must be positive");

  SolveResult res;
  FlowRate x = linear_oracle(inst, social_gradient(inst, zero_flow_rate(inst)));
  Eigen::MatrixXd loads_x = edge_loads(inst, x);

  double gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    const Gradient g = social_gradient(inst, x);
    const FlowRate v = linear_oracle(inst, g);
    gap = g.flow.dot(x.path_flows - v.path_flows) +
          g.rate.cwiseProduct(x.rates - v.rates).sum();
    gap = std::max(gap, 0.0);
    const double cost_now = cost_from_loads(inst, loads_x, x.rates);
    if (config.trace_stride > 0 && iter % config.trace_stride == 0)
      res.trace.push_back({iter, cost_now, gap});
    // Tolerance scales with the objective: gap <= tol * (1 + |C|).
    if (gap <= config.gap_tolerance * (1.0 + std::abs(cost_now))) {
      res.converged = true;
      break;
    }
    const Eigen::MatrixXd loads_v = edge_loads(inst, v);
    double gamma;
    if (config.step_rule == StepRule::Diminishing)
      gamma = 2.0 / (iter + 2.0);
    else
      gamma = line_search(inst, loads_x, loads_v, x.rates, v.rates);
    if (gamma <= 0.0) break;
    x.path_flows = (1.0 - gamma) * x.path_flows + gamma * v.path_flows;
    x.rates = (1.0 - gamma) * x.rates + gamma * v.rates;
    loads_x = (1.0 - gamma) * loads_x + gamma * loads_v;
    if (config.step_rule == StepRule::LineSearch) {
      pairwise_flow_sweep(inst, x, loads_x);
      pairwise_rate_sweep(inst, x, loads_x);
    }
  }
  res.flow_rate = std::move(x);
  res.cost = social_cost(inst, res.flow_rate);
  res.gap = gap;
  res.iterations = iter;
  if (config.trace_stride > 0)
    res.trace.push_back({iter, res.cost, gap});
  return res;
}

}  // namespace nif
