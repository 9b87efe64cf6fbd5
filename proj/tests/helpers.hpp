#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "nif/anarchy.hpp"
#include "nif/evaluate.hpp"
#include "nif/instance.hpp"
#include "nif/polytope.hpp"

namespace test {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Brute-force linear minimization over the base polytope: enumerate the
// greedy vertex of every source ordering and take the best. Independent of
// the production sort-based routine.
inline Eigen::VectorXd brute_force_linear_minimize(
    const nif::EntropyModel& model, const Eigen::VectorXd& w) {
  const int n = model.num_sources();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::VectorXd best;
  double best_val = std::numeric_limits<double>::infinity();
  do {
    Eigen::VectorXd r(n);
    nif::Subset prefix = 0;
    for (int k = 0; k < n; ++k) {
      const nif::Subset next = prefix | nif::singleton(perm[k]);
      r[perm[k]] = model.entropy(next) - model.entropy(prefix);
      prefix = next;
    }
    const double val = w.dot(r);
    if (val < best_val) {
      best_val = val;
      best = r;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// A pool of valid entropy models with N_S <= 4 used across oracle tests.
inline std::vector<nif::EntropyModel> entropy_corpus() {
  using nif::EntropyModel;
  std::vector<EntropyModel> out;
  out.push_back(EntropyModel::identical(2, 1.0));
  out.push_back(EntropyModel::identical(3, 0.7));
  out.push_back(EntropyModel::independent(vec({1.0, 0.5})));
  out.push_back(EntropyModel::independent(vec({0.3, 0.9, 1.4})));
  out.push_back(EntropyModel(
      3, {0.0, 1.0, 1.0, 1.5, 1.0, 1.5, 1.5, 2.0}));  // pairwise-coupled
  std::mt19937_64 rng(20240817);
  for (int n = 2; n <= 4; ++n)
    for (int rep = 0; rep < 3; ++rep)
      out.push_back(nif::random_entropy_model(n, rng));
  return out;
}

// Random member of the polytope: a greedy base vertex plus nonnegative
// slack (scaled), occasionally the vertex itself.
inline Eigen::VectorXd random_member(const nif::EntropyModel& model,
                                     std::mt19937_64& rng) {
  const int n = model.num_sources();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = unif(rng);
  Eigen::VectorXd r = nif::linear_minimize(model, w);
  if (unif(rng) < 0.7)
    for (int i = 0; i < n; ++i) r[i] += 0.8 * unif(rng);
  return r;
}

// Random feasible flow-rate: per-terminal rates from a random polytope
// member, each rate split across that pair's paths (sometimes with excess
// flow, so constraint checks see both equality and slack).
inline nif::FlowRate random_feasible(const nif::Instance& inst,
                                     std::mt19937_64& rng,
                                     bool cover_exactly = false) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  nif::FlowRate fr = nif::zero_flow_rate(inst);
  for (int t = 0; t < inst.num_terminals(); ++t) {
    const Eigen::VectorXd r = random_member(inst.entropy, rng);
    for (int s = 0; s < inst.num_sources(); ++s) {
      fr.rates(s, t) = r[s];
      const auto& ids = inst.paths.by_pair(s, t);
      Eigen::VectorXd split(ids.size());
      for (int i = 0; i < split.size(); ++i) split[i] = unif(rng) + 0.05;
      split *= r[s] / split.sum();
      const double excess = cover_exactly ? 1.0 : 1.0 + 0.3 * unif(rng);
      for (size_t i = 0; i < ids.size(); ++i)
        fr.path_flows[ids[i]] += split[i] * excess;
    }
  }
  return fr;
}

// Two-source, single-terminal instance with two disjoint one-edge routes;
// rate split is one-dimensional, so a grid oracle is exact.
inline nif::Instance two_route_instance(double a1, double k1, double a2,
                                        double k2, nif::EntropyModel entropy,
                                        nif::AggregatorConfig agg) {
  using namespace nif;
  std::vector<std::string> nodes = {"s1", "s2", "t1"};
  std::vector<Edge> edges = {{"e1", 0, 2}, {"e2", 1, 2}};
  std::vector<CostFunction> ec = {CostFunction::monomial(a1, k1),
                                  CostFunction::monomial(a2, k2)};
  std::vector<CostFunction> sc = {CostFunction::monomial(1.0, 1.0),
                                  CostFunction::monomial(1.0, 1.0)};
  return Instance(Network(std::move(nodes), std::move(edges), {0, 1}, {2}),
                  std::move(ec), std::move(sc), std::move(entropy), agg,
                  SplittingConfig{});
}

}  // namespace test
