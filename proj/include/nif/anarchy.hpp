#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nif/instance.hpp"
#include "nif/solve.hpp"

namespace nif {

/// max{N_T/k, k/N_T}: bound on the Wardrop/OPT cost ratio when every edge
/// cost is a degree-k monomial.
double poa_upper_bound(int num_terminals, double degree);

struct PoaResult {
  std::string descriptor;
  /// Limit-mode (exact-max) social costs of the computed Wardrop and OPT
  /// points, and their ratio.
  double wardrop_cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 0.0;
  /// max{N_T/k, k/N_T} when all edge degrees equal k, else NaN.
  double upper_bound = 0.0;
  bool bound_applicable = false;
  /// Costs under the instance's own (finite) aggregation exponents.
  double wardrop_cost_solve = 0.0;
  double opt_cost_solve = 0.0;
  double ratio_solve = 0.0;
  double wardrop_gap = 0.0;
  double opt_gap = 0.0;
  /// Mean rate per source over terminals at each point (for the
  /// two-source examples this is the fixed-point h / h*).
  Eigen::VectorXd wardrop_mean_rates;
  Eigen::VectorXd opt_mean_rates;
  /// Degree-1 edge costs make the transformed program non-strictly convex:
  /// the computed Wardrop point need not be the worst one.
  bool nonunique_flag = false;
};

/// Ratio of the computed Wardrop point's social cost to the computed
/// optimum's. Solves at the instance's exponents (or n=m=64 when the
/// instance is configured in limit mode); costs in the result are
/// limit-mode evaluations with the solve-mode ones alongside.
PoaResult price_of_anarchy(const Instance& inst,
                           const SolverConfig& config = {});

/// Relay network where one source is additionally wired straight to every
/// terminal: sources 1..N_S -> u -> v -> terminals, direct edges from
/// source 1, unit linear edge costs except C2 x on (u,v), source costs
/// C1 y^2, identical sources with entropy h.
struct Fig1Example {
  Instance instance;
  FlowRate wardrop;        // rate h from source 1 on the direct edges
  FlowRate opt_candidate;  // rate h/N_S from every source via the relay
  /// 2 C1 h / N_T <= 1 + C2: the direct flow-rate is an equilibrium.
  bool equilibrium_regime = false;
  /// (1+C2)/C1 < h (1 - 1/N_S): the candidate beats the equilibrium.
  bool anarchy_regime = false;
};

Fig1Example make_fig1_instance(int num_sources, int num_terminals, double h,
                               double c1, double c2,
                               AggregatorConfig agg = {Exponent::limit(),
                                                       Exponent::limit()});

/// Two identical unit-entropy sources wired straight to two terminals,
/// cubic edge costs, source costs C1 y^3 and C2 y^3.
Instance make_fig2_instance(double c1, double c2,
                            AggregatorConfig agg = {Exponent::limit(),
                                                    Exponent::limit()},
                            SourceSplit split = SourceSplit::Uniform);

struct Fig2Analytic {
  double h = 0.0;       // source-1 rate at the equilibrium
  double h_star = 0.0;  // source-1 rate at the optimum
  double wardrop_cost = 0.0;
  double opt_cost = 0.0;
};

/// Closed forms for the two-source direct network: h/(1-h) =
/// sqrt((3C2/4+1)/(3C1/4+1)), h*/(1-h*) with 3/2 in place of 1; costs by
/// limit-mode evaluation of the corresponding flow-rates.
Fig2Analytic fig2_analytic(double c1, double c2);

/// Monotone submodular entropy table realized by an explicit random joint
/// distribution over small alphabets (so validity is inherited, never
/// patched up).
EntropyModel random_entropy_model(int num_sources, std::mt19937_64& rng);

struct RandomInstanceSpec {
  int num_sources = 2;
  int num_terminals = 2;
  double degree = 2.0;       // uniform monomial degree for all costs
  bool independent = false;  // independent vs correlated entropy table
  bool relay = false;        // insert a shared u->v relay on top of the
                             // direct source-terminal edges
};

/// Coefficients drawn from [0.5, 2]; entropy per the spec flag.
Instance random_instance(const RandomInstanceSpec& spec, std::mt19937_64& rng,
                         AggregatorConfig agg);

struct SweepRow {
  std::string family;
  std::string params;
  double wardrop_cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  std::string flags;
};

struct SweepSpec {
  enum class Family {
    Fig1,              // N_T grid, h=1, C1=N_T^2, C2=3N_T-1; candidate-based
    Fig2,              // grid over (c1, c2) pairs; solver-based
    RandomIndependent, // independent sources, uniform random degree
    RandomUniformDegree// correlated sources, uniform degree in {1,2,3}
  };
  Family family = Family::Fig2;
  int nt_from = 5;
  int nt_to = 10;
  std::vector<std::pair<double, double>> c_pairs = {{4.0, 8.0}};
  int count = 20;
  std::uint64_t seed = 1;
  int solve_exponent = 64;
  SolverConfig solver;
};

/// Deterministic, ordered results; a failing row records the error in its
/// flags column and the sweep continues.
std::vector<SweepRow> sweep(const SweepSpec& spec);

}  // namespace nif
