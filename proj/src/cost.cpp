#include "nif/cost.hpp"

#include <cmath>

namespace nif {

CostFunction CostFunction::monomial(double coefficient, double degree) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("cost: coefficient must be positive");
  if (!(degree >= 1.0))
    throw std::invalid_argument("cost: degree must be at least 1");
  CostFunction c;
  c.monomial_ = true;
  c.a_ = coefficient;
  c.k_ = degree;
  return c;
}

CostFunction CostFunction::custom(std::function<double(double)> value,
                                  std::function<double(double)> derivative) {
  CostFunction c;
  c.monomial_ = false;
  c.value_ = std::move(value);
  c.deriv_ = std::move(derivative);
  return c;
}

double CostFunction::operator()(double x) const {
  if (monomial_) return a_ * std::pow(x, k_);
  return value_(x);
}

double CostFunction::derivative(double x) const {
  if (monomial_) {
    if (k_ == 1.0) return a_;
    return a_ * k_ * std::pow(x, k_ - 1.0);
  }
  return deriv_(x);
}

CostFunction transform_cost(const CostFunction& c, int num_terminals) {
  if (!c.is_monomial())
    throw UnsupportedTransform("cost transform requires a monomial");
  return CostFunction::monomial(c.coefficient() * num_terminals / c.degree(),
                                c.degree());
}

CostFunction inverse_transform_cost(const CostFunction& c, int num_terminals) {
  if (!c.is_monomial())
    throw UnsupportedTransform("cost transform requires a monomial");
  return CostFunction::monomial(c.coefficient() * c.degree() / num_terminals,
                                c.degree());
}

}  // namespace nif
