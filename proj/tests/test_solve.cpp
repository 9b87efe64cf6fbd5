#include "nif/solve.hpp"

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nif/anarchy.hpp"
#include "nif/conditions.hpp"

using namespace nif;

namespace {

// 1-D grid oracle for the two-route instance: rate x on route 1, H - x on
// route 2, flows covering exactly.
double grid_minimum_cost(const Instance& inst, double total, double grid_step) {
  double best = std::numeric_limits<double>::infinity();
  FlowRate fr = zero_flow_rate(inst);
  for (double x = 0.0; x <= total + 1e-12; x += grid_step) {
    fr.rates(0, 0) = x;
    fr.rates(1, 0) = total - x;
    fr.path_flows[inst.paths.by_pair(0, 0)[0]] = x;
    fr.path_flows[inst.paths.by_pair(1, 0)[0]] = total - x;
    best = std::min(best, social_cost(inst, fr));
  }
  return best;
}

}  // namespace

TEST_CASE("oracle at zero gradient follows the tie-break rules") {
  const Instance inst = make_fig2_instance(4.0, 8.0,
                                           {Exponent::finite(8),
                                            Exponent::finite(8)});
  Gradient g;
  g.flow = Eigen::VectorXd::Zero(inst.paths.num_paths());
  g.rate = Eigen::MatrixXd::Zero(2, 2);
  const FlowRate v = linear_oracle(inst, g);
  // Index-ascending greedy on identical sources: all rate on source 1.
  for (int t = 0; t < 2; ++t) {
    CHECK(v.rates(0, t) == doctest::Approx(1.0));
    CHECK(v.rates(1, t) == doctest::Approx(0.0));
  }
  // Flow placed on the (single) cheapest path of each pair.
  for (int t = 0; t < 2; ++t)
    CHECK(v.path_flows[inst.paths.by_pair(0, t)[0]] == doctest::Approx(1.0));
}

TEST_CASE("oracle respects gradients") {
  SUBCASE("gradient favoring source 1 concentrates the rates") {
    const Instance inst = make_fig2_instance(4.0, 8.0,
                                             {Exponent::finite(8),
                                              Exponent::finite(8)});
    Gradient g;
    g.flow = Eigen::VectorXd::Zero(inst.paths.num_paths());
    g.rate = Eigen::MatrixXd::Zero(2, 2);
    g.rate.row(1).setConstant(5.0);  // expensive second source
    const FlowRate v = linear_oracle(inst, g);
    for (int t = 0; t < 2; ++t) {
      CHECK(v.rates(0, t) == doctest::Approx(1.0));
      CHECK(v.rates(1, t) == doctest::Approx(0.0));
      CHECK(v.path_flows[inst.paths.by_pair(0, t)[0]] ==
            doctest::Approx(1.0));
    }
  }
  SUBCASE("expensive relay pushes everything onto the direct edges") {
    const Fig1Example ex = make_fig1_instance(
        3, 2, 1.0, 4.0, 9.0, {Exponent::finite(8), Exponent::finite(8)});
    Gradient g;
    g.flow = Eigen::VectorXd::Zero(ex.instance.paths.num_paths());
    g.rate = Eigen::MatrixXd::Zero(3, 2);
    for (int p = 0; p < ex.instance.paths.num_paths(); ++p)
      if (ex.instance.paths.path(p).edges.size() == 3) g.flow[p] = 10.0;
    const FlowRate v = linear_oracle(ex.instance, g);
    for (int t = 0; t < 2; ++t) {
      CHECK(v.rates(0, t) == doctest::Approx(1.0));
      for (int p : ex.instance.paths.by_pair(0, t))
        if (ex.instance.paths.path(p).edges.size() == 1)
          CHECK(v.path_flows[p] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("solver matches a 1-D grid oracle on two-route instances") {
  // x^2 vs 4 x^2: equal-derivative split at x = 0.8.
  const Instance inst = test::two_route_instance(
      1.0, 2.0, 4.0, 2.0, EntropyModel::identical(2, 1.0),
      {Exponent::finite(16), Exponent::finite(16)});
  SolverConfig cfg;
  cfg.gap_tolerance = 1e-10;
  const SolveResult res = solve_opt(inst, cfg);
  CHECK(res.converged);
  CHECK(res.flow_rate.rates(0, 0) == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(res.flow_rate.rates(1, 0) == doctest::Approx(0.2).epsilon(2e-3));
  const double grid = grid_minimum_cost(inst, 1.0, 1e-3);
  CHECK(res.cost == doctest::Approx(grid).epsilon(1e-4));
  CHECK(res.cost <= grid + 1e-6);

  // Mixed degrees and coefficients against the same oracle.
  const Instance mixed = test::two_route_instance(
      0.7, 3.0, 2.0, 2.0, EntropyModel::identical(2, 1.2),
      {Exponent::finite(16), Exponent::finite(16)});
  const SolveResult res2 = solve_opt(mixed, cfg);
  CHECK(res2.cost ==
        doctest::Approx(grid_minimum_cost(mixed, 1.2, 1e-3)).epsilon(1e-4));
}

TEST_CASE("solver matches a 2-D grid oracle (rate split x path split)") {
  // Source 1 reaches the terminal over two parallel edges, source 2 over
  // one; the optimum is a 2-D point (rate split, path split).
  const Network net({"s1", "s2", "t1"},
                    {{"e1a", 0, 2}, {"e1b", 0, 2}, {"e2", 1, 2}}, {0, 1},
                    {2});
  std::vector<CostFunction> ec = {CostFunction::monomial(1.0, 2.0),
                                  CostFunction::monomial(3.0, 2.0),
                                  CostFunction::monomial(2.0, 2.0)};
  std::vector<CostFunction> sc = {CostFunction::monomial(1.0, 2.0),
                                  CostFunction::monomial(1.5, 2.0)};
  const Instance inst(net, ec, sc, EntropyModel::identical(2, 1.0),
                      {Exponent::finite(16), Exponent::finite(16)},
                      SplittingConfig{});
  REQUIRE(inst.paths.num_paths() == 3);

  double grid_best = std::numeric_limits<double>::infinity();
  FlowRate fr = zero_flow_rate(inst);
  for (double r = 0.0; r <= 1.0 + 1e-12; r += 1e-3) {
    for (double a = 0.0; a <= r + 1e-12; a += 1e-3) {
      fr.rates(0, 0) = r;
      fr.rates(1, 0) = 1.0 - r;
      fr.path_flows[inst.paths.by_pair(0, 0)[0]] = a;
      fr.path_flows[inst.paths.by_pair(0, 0)[1]] = r - a;
      fr.path_flows[inst.paths.by_pair(1, 0)[0]] = 1.0 - r;
      grid_best = std::min(grid_best, social_cost(inst, fr));
    }
  }
  SolverConfig cfg;
  cfg.gap_tolerance = 1e-10;
  const SolveResult res = solve_opt(inst, cfg);
  CHECK(res.converged);
  CHECK(res.cost == doctest::Approx(grid_best).epsilon(1e-4));
  CHECK(res.cost <= grid_best + 1e-9);
}

TEST_CASE("independent sources pin the rates to the entropies") {
  std::mt19937_64 rng(8);
  RandomInstanceSpec spec;
  spec.num_sources = 3;
  spec.num_terminals = 2;
  spec.degree = 2;
  spec.independent = true;
  spec.relay = true;
  const Instance inst = random_instance(
      spec, rng, {Exponent::finite(16), Exponent::finite(16)});
  const SolveResult res = solve_opt(inst, {});
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 2; ++t)
      CHECK(res.flow_rate.rates(s, t) ==
            doctest::Approx(inst.entropy.entropy(singleton(s))));
}

TEST_CASE("direct example solve lands on the analytic optimum") {
  const Instance inst = make_fig2_instance(
      4.0, 8.0, {Exponent::finite(64), Exponent::finite(64)});
  SolverConfig cfg;
  cfg.gap_tolerance = 1e-10;
  cfg.max_iterations = 50000;
  const SolveResult res = solve_opt(inst, cfg);
  CHECK(res.converged);
  const Fig2Analytic an = fig2_analytic(4.0, 8.0);
  for (int t = 0; t < 2; ++t)
    CHECK(res.flow_rate.rates(0, t) ==
          doctest::Approx(an.h_star).epsilon(1e-2));
  // Conditions (1) and (2) hold by construction of the iterates.
  const ConditionReport rep = check_opt_conditions(inst, res.flow_rate, 1e-3);
  CHECK(rep.residual[0] <= 1e-8);
  CHECK(rep.residual[1] <= 1e-8);
}

TEST_CASE("determinism: same config, same result") {
  const Instance inst = make_fig2_instance(
      4.0, 8.0, {Exponent::finite(32), Exponent::finite(32)});
  const SolveResult a = solve_opt(inst, {});
  const SolveResult b = solve_opt(inst, {});
  CHECK(a.cost == b.cost);
  CHECK(a.iterations == b.iterations);
  CHECK((a.flow_rate.path_flows - b.flow_rate.path_flows).norm() == 0.0);
  CHECK((a.flow_rate.rates - b.flow_rate.rates).norm() == 0.0);
}

TEST_CASE("gap trace shrinks over geometric checkpoints (diminishing rule)") {
  const Instance inst = make_fig2_instance(
      4.0, 8.0, {Exponent::finite(16), Exponent::finite(16)});
  SolverConfig cfg;
  cfg.step_rule = StepRule::Diminishing;
  cfg.max_iterations = 4096;
  cfg.gap_tolerance = 1e-14;  // run the full budget
  cfg.trace_stride = 1;
  const SolveResult res = solve_opt(inst, cfg);
  REQUIRE(res.trace.size() >= 1000);
  // Raw gaps oscillate under forced diminishing steps; the meaningful
  // monotone quantity is the best gap per geometric window, which must
  // decay across the run.
  std::vector<double> window_min;
  for (size_t hi = 4; hi <= res.trace.size(); hi *= 2) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = hi / 2; i < hi; ++i)
      m = std::min(m, res.trace[i].gap);
    window_min.push_back(m);
  }
  REQUIRE(window_min.size() >= 6);
  CHECK(window_min.back() <= 0.2 * window_min.front());
  for (size_t i = 2; i < window_min.size(); ++i)
    CHECK(window_min[i] <= *std::max_element(window_min.begin(),
                                             window_min.begin() + i));
  // Cost at the last checkpoint approaches the line-search solution.
  const SolveResult ref = solve_opt(inst, {});
  CHECK(res.trace.back().cost == doctest::Approx(ref.cost).epsilon(1e-4));
}

TEST_CASE("limit-mode instances are rejected by the solver") {
  const Instance inst = make_fig2_instance(4.0, 8.0);
  CHECK_THROWS_AS(solve_opt(inst, {}), std::invalid_argument);
}

TEST_CASE("solver restricted to the iteration cap reports non-convergence") {
  // Diminishing steps cannot hit the interior optimum exactly, so a tiny
  // budget with an extreme tolerance must come back unconverged.
  const Instance inst = make_fig2_instance(
      4.0, 8.0, {Exponent::finite(64), Exponent::finite(64)});
  SolverConfig cfg;
  cfg.max_iterations = 3;
  cfg.gap_tolerance = 1e-14;
  cfg.step_rule = StepRule::Diminishing;
  const SolveResult res = solve_opt(inst, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.gap > 1e-14);
  CHECK(res.iterations == 3);
}
