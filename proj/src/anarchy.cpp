#include "nif/anarchy.hpp"

#include <cmath>
#include <sstream>

#include "nif/equilibrium.hpp"

namespace nif {

namespace {

std::vector<CostFunction> uniform_costs(int count, double a, double k) {
  return std::vector<CostFunction>(count, CostFunction::monomial(a, k));
}

int find_path(const Instance& inst, int s, int t, size_t length) {
  for (int p : inst.paths.by_pair(s, t))
    if (inst.paths.path(p).edges.size() == length) return p;
  throw std::logic_error("expected path not found");
}

Exponent definite(Exponent e, int fallback) {
  return e.is_limit ? Exponent::finite(fallback) : e;
}

}  // namespace

double poa_upper_bound(int num_terminals, double degree) {
  if (num_terminals < 1 || degree < 1)
    throw std::invalid_argument("poa_upper_bound: N_T and k must be >= 1");
  return std::max(num_terminals / degree, degree / num_terminals);
}

Fig1Example make_fig1_instance(int num_sources, int num_terminals, double h,
                               double c1, double c2, AggregatorConfig agg) {
  if (num_sources < 1 || num_terminals < 1 || h <= 0 || c1 <= 0 || c2 <= 0)
    throw std::invalid_argument("fig1: parameters must be positive");
  const int ns = num_sources;
  const int nt = num_terminals;
  std::vector<std::string> nodes;
  for (int i = 1; i <= ns; ++i) nodes.push_back("s" + std::to_string(i));
  nodes.push_back("u");
  nodes.push_back("v");
  for (int j = 1; j <= nt; ++j) nodes.push_back("t" + std::to_string(j));
  const int u = ns, v = ns + 1, t0 = ns + 2;

  std::vector<Edge> edges;
  std::vector<CostFunction> edge_costs;
  for (int j = 0; j < nt; ++j) {  // direct edges from source 1
    edges.push_back({"d" + std::to_string(j + 1), 0, t0 + j});
    edge_costs.push_back(CostFunction::monomial(1.0, 1.0));
  }
  for (int i = 0; i < ns; ++i) {
    edges.push_back({"a" + std::to_string(i + 1), i, u});
    edge_costs.push_back(CostFunction::monomial(1.0, 1.0));
  }
  edges.push_back({"m", u, v});
  edge_costs.push_back(CostFunction::monomial(c2, 1.0));
  for (int j = 0; j < nt; ++j) {
    edges.push_back({"b" + std::to_string(j + 1), v, t0 + j});
    edge_costs.push_back(CostFunction::monomial(1.0, 1.0));
  }

  std::vector<int> sources(ns), terminals(nt);
  for (int i = 0; i < ns; ++i) sources[i] = i;
  for (int j = 0; j < nt; ++j) terminals[j] = t0 + j;

  Fig1Example out{
      Instance(Network(std::move(nodes), std::move(edges), sources, terminals),
               std::move(edge_costs), uniform_costs(ns, c1, 2.0),
               EntropyModel::identical(ns, h), agg, SplittingConfig{}),
      {}, {}, false, false};

  out.wardrop = zero_flow_rate(out.instance);
  out.opt_candidate = zero_flow_rate(out.instance);
  for (int j = 0; j < nt; ++j) {
    out.wardrop.rates(0, j) = h;
    out.wardrop.path_flows[find_path(out.instance, 0, j, 1)] = h;
    for (int i = 0; i < ns; ++i) {
      out.opt_candidate.rates(i, j) = h / ns;
      out.opt_candidate.path_flows[find_path(out.instance, i, j, 3)] = h / ns;
    }
  }
  out.equilibrium_regime = 2.0 * c1 * h / nt <= 1.0 + c2;
  out.anarchy_regime = (1.0 + c2) / c1 < h * (1.0 - 1.0 / ns);
  return out;
}

Instance make_fig2_instance(double c1, double c2, AggregatorConfig agg,
                            SourceSplit split) {
  if (c1 <= 0 || c2 <= 0)
    throw std::invalid_argument("fig2: parameters must be positive");
  std::vector<std::string> nodes = {"s1", "s2", "t1", "t2"};
  std::vector<Edge> edges;
  std::vector<CostFunction> edge_costs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      edges.push_back(
          {"e" + std::to_string(i + 1) + std::to_string(j + 1), i, 2 + j});
      edge_costs.push_back(CostFunction::monomial(1.0, 3.0));
    }
  }
  std::vector<CostFunction> source_costs = {CostFunction::monomial(c1, 3.0),
                                            CostFunction::monomial(c2, 3.0)};
  return Instance(Network(std::move(nodes), std::move(edges), {0, 1}, {2, 3}),
                  std::move(edge_costs), std::move(source_costs),
                  EntropyModel::identical(2, 1.0), agg,
                  SplittingConfig{split});
}

Fig2Analytic fig2_analytic(double c1, double c2) {
  if (c1 <= 0 || c2 <= 0)
    throw std::invalid_argument("fig2_analytic: parameters must be positive");
  Fig2Analytic out;
  const double q = std::sqrt((0.75 * c2 + 1.0) / (0.75 * c1 + 1.0));
  out.h = q / (1.0 + q);
  const double qs = std::sqrt((0.75 * c2 + 1.5) / (0.75 * c1 + 1.5));
  out.h_star = qs / (1.0 + qs);

  const Instance inst = make_fig2_instance(c1, c2);
  auto point_cost = [&](double h) {
    FlowRate fr = zero_flow_rate(inst);
    for (int j = 0; j < 2; ++j) {
      fr.rates(0, j) = h;
      fr.rates(1, j) = 1.0 - h;
      fr.path_flows[find_path(inst, 0, j, 1)] = h;
      fr.path_flows[find_path(inst, 1, j, 1)] = 1.0 - h;
    }
    return social_cost_limit(inst, fr);
  };
  out.wardrop_cost = point_cost(out.h);
  out.opt_cost = point_cost(out.h_star);
  return out;
}

PoaResult price_of_anarchy(const Instance& inst, const SolverConfig& config) {
  AggregatorConfig solve_agg{definite(inst.aggregator.edge, 64),
                             definite(inst.aggregator.source, 64)};
  const Instance solve_inst = solve_agg == inst.aggregator
                                  ? inst
                                  : inst.with_aggregator(solve_agg);
  const SolveResult wr = solve_wardrop(solve_inst, config);
  const SolveResult op = solve_opt(solve_inst, config);

  PoaResult out;
  out.wardrop_cost = social_cost_limit(solve_inst, wr.flow_rate);
  out.opt_cost = social_cost_limit(solve_inst, op.flow_rate);
  out.ratio = out.wardrop_cost / out.opt_cost;
  out.wardrop_cost_solve = social_cost(solve_inst, wr.flow_rate);
  out.opt_cost_solve = op.cost;
  out.ratio_solve = out.wardrop_cost_solve / out.opt_cost_solve;
  out.wardrop_gap = wr.gap;
  out.opt_gap = op.gap;
  out.wardrop_mean_rates = wr.flow_rate.rates.rowwise().mean();
  out.opt_mean_rates = op.flow_rate.rates.rowwise().mean();

  bool uniform = true;
  double k = inst.edge_costs.empty() ? 1.0 : inst.edge_costs.front().degree();
  for (const auto& c : inst.edge_costs) {
    if (!c.is_monomial() || c.degree() != k) uniform = false;
    if (c.is_monomial() && c.degree() == 1.0) out.nonunique_flag = true;
  }
  out.bound_applicable = uniform;
  out.upper_bound = uniform ? poa_upper_bound(inst.num_terminals(), k)
                            : std::numeric_limits<double>::quiet_NaN();
  std::ostringstream desc;
  desc << "ns=" << inst.num_sources() << ";nt=" << inst.num_terminals()
       << ";edges=" << inst.num_edges();
  if (uniform) desc << ";k=" << k;
  out.descriptor = desc.str();
  return out;
}

EntropyModel random_entropy_model(int num_sources, std::mt19937_64& rng) {
  // An explicit joint distribution over binary alphabets: submodularity and
  // monotonicity are inherited, never patched up.
  const int outcomes = 1 << num_sources;
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> pmf(outcomes);
  double total = 0.0;
  for (double& p : pmf) total += (p = unif(rng));
  for (double& p : pmf) p /= total;

  std::vector<double> table(subset_count(num_sources), 0.0);
  for (Subset a = 1; a < subset_count(num_sources); ++a) {
    // Marginal over the coordinates in a.
    std::vector<double> marg(outcomes, 0.0);
    for (int w = 0; w < outcomes; ++w) marg[w & a] += pmf[w];
    double hsum = 0.0;
    for (int w = 0; w < outcomes; ++w)
      if (marg[w] > 0.0) hsum -= marg[w] * std::log2(marg[w]);
    table[a] = hsum;
  }
  return EntropyModel(num_sources, std::move(table));
}

Instance random_instance(const RandomInstanceSpec& spec, std::mt19937_64& rng,
                         AggregatorConfig agg) {
  std::uniform_real_distribution<double> coeff(0.5, 2.0);
  std::uniform_real_distribution<double> ent(0.3, 1.5);
  std::uniform_int_distribution<int> srcdeg(1, 3);
  const int ns = spec.num_sources;
  const int nt = spec.num_terminals;

  std::vector<std::string> nodes;
  for (int i = 1; i <= ns; ++i) nodes.push_back("s" + std::to_string(i));
  for (int j = 1; j <= nt; ++j) nodes.push_back("t" + std::to_string(j));
  std::vector<int> sources(ns), terminals(nt);
  for (int i = 0; i < ns; ++i) sources[i] = i;
  for (int j = 0; j < nt; ++j) terminals[j] = ns + j;

  std::vector<Edge> edges;
  std::vector<CostFunction> edge_costs;
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      edges.push_back(
          {"e" + std::to_string(i + 1) + std::to_string(j + 1), i, ns + j});
      edge_costs.push_back(CostFunction::monomial(coeff(rng), spec.degree));
    }
  }
  if (spec.relay) {
    const int u = ns + nt;
    const int v = u + 1;
    nodes.push_back("u");
    nodes.push_back("v");
    for (int i = 0; i < ns; ++i) {
      edges.push_back({"ru" + std::to_string(i + 1), i, u});
      edge_costs.push_back(CostFunction::monomial(coeff(rng), spec.degree));
    }
    edges.push_back({"rm", u, v});
    edge_costs.push_back(CostFunction::monomial(coeff(rng), spec.degree));
    for (int j = 0; j < nt; ++j) {
      edges.push_back({"rv" + std::to_string(j + 1), v, ns + j});
      edge_costs.push_back(CostFunction::monomial(coeff(rng), spec.degree));
    }
  }

  std::vector<CostFunction> source_costs;
  for (int i = 0; i < ns; ++i)
    source_costs.push_back(CostFunction::monomial(coeff(rng), srcdeg(rng)));

  EntropyModel entropy = [&] {
    if (!spec.independent) return random_entropy_model(ns, rng);
    Eigen::VectorXd h(ns);
    for (int i = 0; i < ns; ++i) h[i] = ent(rng);
    return EntropyModel::independent(h);
  }();

  return Instance(Network(std::move(nodes), std::move(edges), sources,
                          terminals),
                  std::move(edge_costs), std::move(source_costs),
                  std::move(entropy), agg, SplittingConfig{});
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  const AggregatorConfig solve_agg{Exponent::finite(spec.solve_exponent),
                                   Exponent::finite(spec.solve_exponent)};
  auto run_poa = [&](const Instance& inst, SweepRow row) {
    try {
      const PoaResult poa = price_of_anarchy(inst, spec.solver);
      row.wardrop_cost = poa.wardrop_cost;
      row.opt_cost = poa.opt_cost;
      row.ratio = poa.ratio;
      row.bound = poa.upper_bound;
      if (poa.nonunique_flag)
        row.flags += row.flags.empty() ? "nonunique-k1" : ";nonunique-k1";
    } catch (const std::exception& e) {
      row.flags = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  };

  switch (spec.family) {
    case SweepSpec::Family::Fig1: {
      for (int nt = spec.nt_from; nt <= spec.nt_to; ++nt) {
        SweepRow row;
        row.family = "fig1";
        const double c1 = static_cast<double>(nt) * nt;
        const double c2 = 3.0 * nt - 1.0;
        std::ostringstream p;
        p << "nt=" << nt << ";h=1;c1=" << c1 << ";c2=" << c2;
        row.params = p.str();
        try {
          const Fig1Example ex = make_fig1_instance(nt, nt, 1.0, c1, c2);
          row.wardrop_cost = social_cost_limit(ex.instance, ex.wardrop);
          row.opt_cost = social_cost_limit(ex.instance, ex.opt_candidate);
          row.ratio = row.wardrop_cost / row.opt_cost;
          row.bound = poa_upper_bound(nt, 1.0);
          row.flags = "analytic-candidates;nonunique-k1";
        } catch (const std::exception& e) {
          row.flags = std::string("error: ") + e.what();
        }
        rows.push_back(std::move(row));
      }
      break;
    }
    case SweepSpec::Family::Fig2: {
      for (const auto& [c1, c2] : spec.c_pairs) {
        SweepRow row;
        row.family = "fig2";
        std::ostringstream p;
        p << "c1=" << c1 << ";c2=" << c2;
        row.params = p.str();
        try {
          const Instance inst = make_fig2_instance(c1, c2, solve_agg);
          run_poa(inst, std::move(row));
        } catch (const std::exception& e) {
          row.flags = std::string("error: ") + e.what();
          rows.push_back(std::move(row));
        }
      }
      break;
    }
    case SweepSpec::Family::RandomIndependent:
    case SweepSpec::Family::RandomUniformDegree: {
      const bool independent =
          spec.family == SweepSpec::Family::RandomIndependent;
      std::mt19937_64 rng(spec.seed);
      std::uniform_int_distribution<int> ns_pick(2, 3);
      std::uniform_int_distribution<int> nt_pick(2, 3);
      std::uniform_int_distribution<int> deg_pick(1, 3);
      std::bernoulli_distribution relay_pick(0.5);
      for (int i = 0; i < spec.count; ++i) {
        RandomInstanceSpec rspec;
        rspec.num_sources = ns_pick(rng);
        rspec.num_terminals = nt_pick(rng);
        rspec.degree = deg_pick(rng);
        rspec.independent = independent;
        rspec.relay = relay_pick(rng);
        SweepRow row;
        row.family = independent ? "random-independent" : "random-correlated";
        std::ostringstream p;
        p << "i=" << i << ";ns=" << rspec.num_sources
          << ";nt=" << rspec.num_terminals << ";k=" << rspec.degree
          << ";relay=" << (rspec.relay ? 1 : 0);
        row.params = p.str();
        try {
          const Instance inst = random_instance(rspec, rng, solve_agg);
          run_poa(inst, std::move(row));
        } catch (const std::exception& e) {
          row.flags = std::string("error: ") + e.what();
          rows.push_back(std::move(row));
        }
      }
      break;
    }
  }
  return rows;
}

}  // namespace nif
