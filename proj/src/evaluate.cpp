#include "nif/evaluate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nif/polytope.hpp"

namespace nif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scale-normalized view of one aggregated load vector: z = xmax * S^{1/n}
// with S = sum_j (x_j/xmax)^n, so large exponents never overflow.
struct AggInfo {
  double xmax = 0.0;
  double sum_scaled = 0.0;  // S (finite mode)
  double z = 0.0;
  int ties = 0;  // limit mode: coordinates attaining the max
};

template <typename Derived>
AggInfo agg_info(const Eigen::MatrixBase<Derived>& x, Exponent exp) {
  AggInfo info;
  info.xmax = x.size() ? x.maxCoeff() : 0.0;
  if (info.xmax <= 0.0) return info;
  if (exp.is_limit) {
    info.z = info.xmax;
    const double eps = 1e-12 * std::max(1.0, info.xmax);
    for (int j = 0; j < x.size(); ++j)
      if (x(j) >= info.xmax - eps) ++info.ties;
    return info;
  }
  const double n = exp.value;
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) s += std::pow(x(j) / info.xmax, n);
  info.sum_scaled = s;
  info.z = info.xmax * std::pow(s, 1.0 / n);
  return info;
}

bool attains_max(const AggInfo& info, double xt) {
  return xt >= info.xmax - 1e-12 * std::max(1.0, info.xmax);
}

// All-zero aggregates take the limit along the all-equal direction over the
// `users` coordinates that can load the edge/source at all; c(z)Psi/x and
// c'(z)z'_t share the same limit c'(0) U^{1/n-1}.
double zero_point_weight(int users, Exponent exp) {
  if (users <= 0) return 0.0;
  const double u = users;
  if (exp.is_limit) return 1.0 / u;
  return std::pow(u, 1.0 / exp.value - 1.0);
}

// dz/dx_t.
double deriv_weight(const AggInfo& info, double xt, int users, Exponent exp) {
  if (info.xmax <= 0.0) return zero_point_weight(users, exp);
  if (exp.is_limit) return attains_max(info, xt) ? 1.0 / info.ties : 0.0;
  const double n = exp.value;
  return std::pow(xt / info.xmax, n - 1.0) *
         std::pow(info.sum_scaled, 1.0 / n - 1.0);
}

// Psi_t, the power-weighted share. Requires xmax > 0.
double share_positive(const AggInfo& info, double xt, Exponent exp) {
  if (exp.is_limit) return attains_max(info, xt) ? 1.0 / info.ties : 0.0;
  return std::pow(xt / info.xmax, exp.value) / info.sum_scaled;
}

// Psi_t / x_t, finite at x_t = 0 (n = 1 keeps the 1/z term). Requires
// xmax > 0.
double share_over_x(const AggInfo& info, double xt, Exponent exp) {
  if (exp.is_limit) {
    if (!attains_max(info, xt)) return 0.0;
    return 1.0 / (info.ties * info.xmax);
  }
  const double n = exp.value;
  return std::pow(xt / info.xmax, n - 1.0) / (info.sum_scaled * info.xmax);
}

// c(z) Psi_t / x_t.
double marginal_term(const CostFunction& cost, const AggInfo& info, double xt,
                     int users, Exponent exp, bool is_user) {
  if (info.xmax <= 0.0)
    return is_user ? cost.derivative(0.0) * zero_point_weight(users, exp)
                   : 0.0;
  return cost(info.z) * share_over_x(info, xt, exp);
}

// c'(z) dz/dx_t.
double differential_term(const CostFunction& cost, const AggInfo& info,
                         double xt, int users, Exponent exp) {
  if (info.xmax <= 0.0)
    return cost.derivative(0.0) * zero_point_weight(users, exp);
  return cost.derivative(info.z) * deriv_weight(info, xt, users, exp);
}

// d(c(z) Psi_t)/dx_t = c' z' Psi + n c(z) Psi (1 - Psi) / x. In limit mode
// the second term grows linearly in the exponent wherever the max is tied;
// it becomes the slope of the returned Marginal.
Marginal nash_term(const CostFunction& cost, const AggInfo& info, double xt,
                   int users, Exponent exp, bool is_user) {
  if (info.xmax <= 0.0) {
    if (!is_user || users <= 0) return {};
    const double c0 = cost.derivative(0.0);
    if (c0 == 0.0) return {};
    const double u = users;
    if (exp.is_limit) return {c0 / (u * u), c0 * (1.0 / u) * (1.0 - 1.0 / u)};
    const double w = zero_point_weight(users, exp);
    return {c0 * w * (1.0 / u + exp.value * (1.0 - 1.0 / u)), 0.0};
  }
  const double psi = share_positive(info, xt, exp);
  const double first =
      cost.derivative(info.z) * deriv_weight(info, xt, users, exp) * psi;
  if (exp.is_limit) {
    if (psi <= 0.0) return {first, 0.0};
    if (info.ties == 1) return {first, 0.0};
    return {first, cost(info.z) * psi * (1.0 - psi) / xt};
  }
  const double second =
      exp.value * cost(info.z) * share_over_x(info, xt, exp) * (1.0 - psi);
  return {first + second, 0.0};
}

int edge_user_count(const Instance& inst, int e) {
  return static_cast<int>(inst.paths.edge_users(e).size());
}

bool edge_used_by(const Instance& inst, int e, int t) {
  for (int u : inst.paths.edge_users(e))
    if (u == t) return true;
  return false;
}

double social_cost_with(const Instance& inst, const FlowRate& fr,
                        AggregatorConfig agg) {
  const Eigen::MatrixXd loads = edge_loads(inst, fr);
  double total = 0.0;
  for (int e = 0; e < inst.num_edges(); ++e)
    total += inst.edge_costs[e](agg_info(loads.row(e), agg.edge).z);
  for (int s = 0; s < inst.num_sources(); ++s)
    total += inst.source_costs[s](agg_info(fr.rates.row(s), agg.source).z);
  return total;
}

}  // namespace

Eigen::MatrixXd edge_loads(const Instance& inst, const FlowRate& fr) {
  if (fr.path_flows.size() != inst.paths.num_paths())
    throw std::invalid_argument("edge_loads: flow vector size mismatch");
  Eigen::MatrixXd loads =
      Eigen::MatrixXd::Zero(inst.num_edges(), inst.num_terminals());
  for (int p = 0; p < inst.paths.num_paths(); ++p) {
    const double f = fr.path_flows[p];
    if (f == 0.0) continue;
    const Path& path = inst.paths.path(p);
    for (int e : path.edges) loads(e, path.terminal) += f;
  }
  return loads;
}

double aggregate(const Eigen::VectorXd& loads, Exponent exp) {
  return agg_info(loads, exp).z;
}

double social_cost(const Instance& inst, const FlowRate& fr) {
  return social_cost_with(inst, fr, inst.aggregator);
}

double social_cost_limit(const Instance& inst, const FlowRate& fr) {
  return social_cost_with(inst, fr, {Exponent::limit(), Exponent::limit()});
}

double marginal_difference(const Marginal& lhs, const Marginal& rhs,
                           double slope_tol) {
  const double ds = lhs.slope - rhs.slope;
  if (std::abs(ds) > slope_tol) return ds > 0 ? kInf : -kInf;
  return lhs.value - rhs.value;
}

double marginal_ratio(const Marginal& lhs, const Marginal& rhs) {
  constexpr double tol = 1e-15;
  if (lhs.slope > tol || rhs.slope > tol) {
    if (rhs.slope <= tol) return kInf;
    return lhs.slope / rhs.slope;
  }
  return lhs.value / rhs.value;
}

double differential_path_cost(const Instance& inst,
                              const Eigen::MatrixXd& loads, int path_id) {
  const Path& path = inst.paths.path(path_id);
  double total = 0.0;
  for (int e : path.edges) {
    const AggInfo info = agg_info(loads.row(e), inst.aggregator.edge);
    total +=
        differential_term(inst.edge_costs[e], info, loads(e, path.terminal),
                          edge_user_count(inst, e), inst.aggregator.edge);
  }
  return total;
}

double differential_path_cost(const Instance& inst, const FlowRate& fr,
                              int path_id) {
  return differential_path_cost(inst, edge_loads(inst, fr), path_id);
}

Eigen::MatrixXd differential_term_matrix(const Instance& inst,
                                         const Eigen::MatrixXd& loads) {
  Eigen::MatrixXd out(inst.num_edges(), inst.num_terminals());
  for (int e = 0; e < inst.num_edges(); ++e) {
    const AggInfo info = agg_info(loads.row(e), inst.aggregator.edge);
    const int users = edge_user_count(inst, e);
    for (int t = 0; t < inst.num_terminals(); ++t)
      out(e, t) = differential_term(inst.edge_costs[e], info, loads(e, t),
                                    users, inst.aggregator.edge);
  }
  return out;
}

Eigen::MatrixXd source_derivative_matrix(const Instance& inst,
                                         const Eigen::MatrixXd& rates) {
  Eigen::MatrixXd out(inst.num_sources(), inst.num_terminals());
  for (int s = 0; s < inst.num_sources(); ++s) {
    const AggInfo info = agg_info(rates.row(s), inst.aggregator.source);
    for (int t = 0; t < inst.num_terminals(); ++t)
      out(s, t) = differential_term(inst.source_costs[s], info, rates(s, t),
                                    inst.num_terminals(),
                                    inst.aggregator.source);
  }
  return out;
}

double cost_from_loads(const Instance& inst, const Eigen::MatrixXd& loads,
                       const Eigen::MatrixXd& rates) {
  double total = 0.0;
  for (int e = 0; e < inst.num_edges(); ++e)
    total += inst.edge_costs[e](agg_info(loads.row(e), inst.aggregator.edge).z);
  for (int s = 0; s < inst.num_sources(); ++s)
    total += inst.source_costs[s](
        agg_info(rates.row(s), inst.aggregator.source).z);
  return total;
}

double marginal_path_cost(const Instance& inst, const Eigen::MatrixXd& loads,
                          int path_id) {
  const Path& path = inst.paths.path(path_id);
  double total = 0.0;
  for (int e : path.edges) {
    const AggInfo info = agg_info(loads.row(e), inst.aggregator.edge);
    total += marginal_term(inst.edge_costs[e], info, loads(e, path.terminal),
                           edge_user_count(inst, e), inst.aggregator.edge,
                           edge_used_by(inst, e, path.terminal));
  }
  return total;
}

double marginal_path_cost(const Instance& inst, const FlowRate& fr,
                          int path_id) {
  return marginal_path_cost(inst, edge_loads(inst, fr), path_id);
}

double source_derivative(const Instance& inst, const FlowRate& fr, int s,
                         int t) {
  const AggInfo info = agg_info(fr.rates.row(s), inst.aggregator.source);
  return differential_term(inst.source_costs[s], info, fr.rates(s, t),
                           inst.num_terminals(), inst.aggregator.source);
}

Marginal source_marginal(const Instance& inst, const FlowRate& fr, int s,
                         int t) {
  const int nt = inst.num_terminals();
  if (inst.splitting.source == SourceSplit::Uniform)
    return {source_derivative(inst, fr, s, t) / nt, 0.0};
  // The power-weighted split has the same derivative structure as the edge
  // split: d'(y) y'_t Phi + m d(y) Phi (1 - Phi) / R.
  const AggInfo info = agg_info(fr.rates.row(s), inst.aggregator.source);
  return nash_term(inst.source_costs[s], info, fr.rates(s, t), nt,
                   inst.aggregator.source, true);
}

Marginal nash_edge_marginal(const Instance& inst, const Eigen::MatrixXd& loads,
                            int path_id) {
  const Path& path = inst.paths.path(path_id);
  Marginal total;
  for (int e : path.edges) {
    const AggInfo info = agg_info(loads.row(e), inst.aggregator.edge);
    total = total + nash_term(inst.edge_costs[e], info,
                              loads(e, path.terminal),
                              edge_user_count(inst, e), inst.aggregator.edge,
                              edge_used_by(inst, e, path.terminal));
  }
  return total;
}

double terminal_edge_cost(const Instance& inst, const FlowRate& fr, int t) {
  const Eigen::MatrixXd loads = edge_loads(inst, fr);
  double total = 0.0;
  for (int e = 0; e < inst.num_edges(); ++e) {
    const AggInfo info = agg_info(loads.row(e), inst.aggregator.edge);
    const double c = inst.edge_costs[e](info.z);
    if (c == 0.0) continue;
    double psi;
    if (info.xmax <= 0.0)
      psi = edge_used_by(inst, e, t)
                ? 1.0 / std::max(1, edge_user_count(inst, e))
                : 0.0;
    else
      psi = share_positive(info, loads(e, t), inst.aggregator.edge);
    total += c * psi;
  }
  return total;
}

double terminal_cost(const Instance& inst, const FlowRate& fr, int t) {
  double total = terminal_edge_cost(inst, fr, t);
  for (int s = 0; s < inst.num_sources(); ++s) {
    const AggInfo info = agg_info(fr.rates.row(s), inst.aggregator.source);
    const double d = inst.source_costs[s](info.z);
    if (d == 0.0) continue;
    double phi;
    if (inst.splitting.source == SourceSplit::Uniform)
      phi = 1.0 / inst.num_terminals();
    else if (info.xmax <= 0.0)
      phi = 1.0 / inst.num_terminals();
    else
      phi = share_positive(info, fr.rates(s, t), inst.aggregator.source);
    total += d * phi;
  }
  return total;
}

bool is_feasible(const Instance& inst, const FlowRate& fr, double tol) {
  if (fr.path_flows.size() != inst.paths.num_paths()) return false;
  if (fr.rates.rows() != inst.num_sources() ||
      fr.rates.cols() != inst.num_terminals())
    return false;
  for (int p = 0; p < fr.path_flows.size(); ++p)
    if (!(fr.path_flows[p] >= -tol)) return false;
  for (int s = 0; s < inst.num_sources(); ++s) {
    for (int t = 0; t < inst.num_terminals(); ++t) {
      double cover = 0.0;
      for (int p : inst.paths.by_pair(s, t)) cover += fr.path_flows[p];
      if (cover < fr.rates(s, t) - tol) return false;
    }
  }
  for (int t = 0; t < inst.num_terminals(); ++t)
    if (!is_member(inst.entropy, fr.rates.col(t), tol)) return false;
  return true;
}

}  // namespace nif
