#include "nif/cost.hpp"

#include <cmath>

#include "doctest.h"

using namespace nif;

TEST_CASE("monomial evaluation and derivative") {
  const CostFunction c = CostFunction::monomial(2.0, 3.0);
  CHECK(c(2.0) == doctest::Approx(16.0));
  CHECK(c.derivative(2.0) == doctest::Approx(24.0));
  CHECK(c(0.0) == 0.0);
  CHECK(CostFunction::monomial(5.0, 1.0).derivative(0.0) == 5.0);
}

TEST_CASE("wardrop transform on monomials") {
  // Linear cost, four terminals: x -> 4x.
  const CostFunction lin = CostFunction::monomial(1.0, 1.0);
  const CostFunction t = transform_cost(lin, 4);
  CHECK(t.coefficient() == doctest::Approx(4.0));
  CHECK(t.degree() == doctest::Approx(1.0));

  // Degree k = N_T is a fixed point.
  const CostFunction cubic = CostFunction::monomial(2.5, 3.0);
  const CostFunction same = transform_cost(cubic, 3);
  CHECK(same.coefficient() == doctest::Approx(2.5));

  // Inverse transform: x^3 with two terminals -> (3/2) x^3.
  const CostFunction inv =
      inverse_transform_cost(CostFunction::monomial(1.0, 3.0), 2);
  CHECK(inv.coefficient() == doctest::Approx(1.5));
  CHECK(inv.degree() == doctest::Approx(3.0));
}

TEST_CASE("transform then inverse is the identity, exactly") {
  for (double a : {0.5, 1.0, 3.25}) {
    for (double k : {1.0, 2.0, 3.0, 4.0}) {
      for (int nt : {1, 2, 3, 8}) {
        const CostFunction c = CostFunction::monomial(a, k);
        const CostFunction round =
            inverse_transform_cost(transform_cost(c, nt), nt);
        CHECK(round.coefficient() == doctest::Approx(a).epsilon(1e-15));
        CHECK(round.degree() == k);
      }
    }
  }
}

TEST_CASE("custom costs evaluate but do not transform") {
  const CostFunction c = CostFunction::custom(
      [](double x) { return x * std::exp(x); },
      [](double x) { return (1.0 + x) * std::exp(x); });
  CHECK(c(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK_THROWS_AS(transform_cost(c, 2), UnsupportedTransform);
  CHECK_THROWS_AS(inverse_transform_cost(c, 2), UnsupportedTransform);
}

TEST_CASE("invalid monomials are rejected") {
  CHECK_THROWS_AS(CostFunction::monomial(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction::monomial(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction::monomial(1.0, 0.5), std::invalid_argument);
}
