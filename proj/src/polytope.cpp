#include "nif/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nif {

namespace {

double subset_sum(const Eigen::VectorXd& r, Subset a) {
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i)
    if (contains(a, i)) s += r[i];
  return s;
}

void require_member(const EntropyModel& model, const Eigen::VectorXd& r,
                    double tol, const char* who) {
  if (r.size() != model.num_sources())
    throw std::invalid_argument(std::string(who) + ": rate vector size");
  if (!is_member(model, r, tol))
    throw std::domain_error(std::string(who) +
                            ": rate vector is not in the polytope");
}

}  // namespace

bool is_member(const EntropyModel& model, const Eigen::VectorXd& r,
               double tol) {
  if (r.size() != model.num_sources()) return false;
  for (int i = 0; i < r.size(); ++i)
    if (!std::isfinite(r[i])) return false;
  const int n = model.num_sources();
  for (Subset a = 1; a < subset_count(n); ++a)
    if (subset_sum(r, a) < model.conditional_entropy(a) - tol) return false;
  return true;
}

std::vector<Subset> tight_sets(const EntropyModel& model,
                               const Eigen::VectorXd& r, double tol) {
  require_member(model, r, tol, "tight_sets");
  const int n = model.num_sources();
  std::vector<Subset> out;
  for (Subset a = 1; a < subset_count(n); ++a)
    if (std::abs(subset_sum(r, a) - model.conditional_entropy(a)) <= tol)
      out.push_back(a);
  return out;
}

Subset minimal_tight_set(const EntropyModel& model, const Eigen::VectorXd& r,
                         int i, double tol) {
  require_member(model, r, tol, "minimal_tight_set");
  const int n = model.num_sources();
  Subset acc = full_set(n);
  bool any = false;
  for (Subset a = 1; a < subset_count(n); ++a) {
    if (!contains(a, i)) continue;
    if (std::abs(subset_sum(r, a) - model.conditional_entropy(a)) <= tol) {
      acc &= a;
      any = true;
    }
  }
  return any ? acc : full_set(n);
}

bool participates_in_all_tight(const EntropyModel& model,
                               const Eigen::VectorXd& r, int i, int j,
                               double tol) {
  if (i == j) return true;
  return contains(minimal_tight_set(model, r, i, tol), j);
}

Eigen::VectorXd linear_minimize(const EntropyModel& model,
                                const Eigen::VectorXd& weights) {
  const int n = model.num_sources();
  if (weights.size() != n)
    throw std::invalid_argument("linear_minimize: weight vector size");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(weights[i]))
      throw std::domain_error("linear_minimize: non-finite weight");
    if (weights[i] < 0.0)
      throw std::domain_error("linear_minimize: negative weight");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return weights[a] < weights[b];
  });
  Eigen::VectorXd r(n);
  Subset prefix = 0;
  for (int k = 0; k < n; ++k) {
    const Subset next = prefix | singleton(order[k]);
    r[order[k]] = model.entropy(next) - model.entropy(prefix);
    prefix = next;
  }
  return r;
}

Eigen::VectorXd reduce_to_base(const EntropyModel& model,
                               const Eigen::VectorXd& r, double tol) {
  require_member(model, r, tol, "reduce_to_base");
  const int n = model.num_sources();
  const double target = model.total_entropy();
  Eigen::VectorXd out = r;
  for (int round = 0; round <= n; ++round) {
    if (out.sum() <= target + tol) break;
    // Lowest-index coordinate whose containing inequalities are all loose.
    int pick = -1;
    for (int j = 0; j < n && pick < 0; ++j) {
      bool all_loose = true;
      for (Subset a = 1; a < subset_count(n) && all_loose; ++a) {
        if (!contains(a, j)) continue;
        if (subset_sum(out, a) - model.conditional_entropy(a) <= tol)
          all_loose = false;
      }
      if (all_loose) pick = j;
    }
    if (pick < 0)
      throw std::logic_error(
          "reduce_to_base: no loose coordinate above the base");
    // Largest value making some containing inequality tight; the full-set
    // inequality is the sum-rate target.
    double lowered = -std::numeric_limits<double>::infinity();
    for (Subset a = 1; a < subset_count(n); ++a) {
      if (!contains(a, pick)) continue;
      const double rest = subset_sum(out, a) - out[pick];
      lowered = std::max(lowered, model.conditional_entropy(a) - rest);
    }
    out[pick] = lowered;
  }
  return out;
}

}  // namespace nif
