#pragma once

#include <functional>
#include <stdexcept>

namespace nif {

struct UnsupportedTransform : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Convex, positive, nondecreasing cost of a scalar congestion level.
/// The monomial kind a*x^k (a > 0, k >= 1) is the one the closed-form
/// transforms and the POA theorems apply to; a custom kind exists for
/// evaluation-only use.
class CostFunction {
 public:
  static CostFunction monomial(double coefficient, double degree);
  static CostFunction custom(std::function<double(double)> value,
                             std::function<double(double)> derivative);

  double operator()(double x) const;
  double derivative(double x) const;

  bool is_monomial() const { return monomial_; }
  double coefficient() const { return a_; }
  double degree() const { return k_; }

  bool operator==(const CostFunction& o) const {
    return monomial_ && o.monomial_ && a_ == o.a_ && k_ == o.k_;
  }

 private:
  CostFunction() = default;
  bool monomial_ = true;
  double a_ = 1.0;
  double k_ = 1.0;
  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
};

/// a x^k -> (N_T/k) a x^k. A Wardrop flow-rate of the original instance is
/// a social optimum under these edge costs.
CostFunction transform_cost(const CostFunction& c, int num_terminals);

/// a x^k -> (k/N_T) a x^k, i.e. (1/N_T) x c'(x); inverse of the above.
CostFunction inverse_transform_cost(const CostFunction& c, int num_terminals);

}  // namespace nif
