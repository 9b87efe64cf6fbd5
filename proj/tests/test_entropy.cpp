#include "nif/entropy.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace nif;

TEST_CASE("identical and independent generators validate") {
  CHECK(validate(EntropyModel::identical(2, 1.0)).ok);
  CHECK(validate(EntropyModel::identical(4, 0.3)).ok);
  CHECK(validate(EntropyModel::independent(test::vec({1.0, 0.5, 2.0}))).ok);
}

TEST_CASE("submodularity violation is reported with the pair") {
  // H({1})=1, H({2})=1, H({1,2})=3: violated by 1.
  EntropyModel m(2, {0.0, 1.0, 1.0, 3.0});
  const auto rep = validate(m);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violation->kind == "submodularity");
  CHECK(rep.violation->magnitude == doctest::Approx(1.0));
  CHECK((rep.violation->a | rep.violation->b) == 0b11u);
}

TEST_CASE("monotonicity and empty-set violations") {
  EntropyModel shrinking(2, {0.0, 1.0, 1.0, 0.5});
  const auto rep = validate(shrinking);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violation->kind == "monotonicity");

  EntropyModel offset(2, {0.25, 1.0, 1.0, 1.5});
  CHECK(validate(offset).violation->kind == "empty-set");
}

TEST_CASE("missing subset entries are a schema error") {
  CHECK_THROWS_AS(EntropyModel(2, {0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(EntropyModel(2, {0.0, 1.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("conditional entropy") {
  const EntropyModel ident = EntropyModel::identical(2, 1.0);
  CHECK(ident.conditional_entropy(0b01) == doctest::Approx(0.0));
  CHECK(ident.conditional_entropy(0b11) == doctest::Approx(1.0));

  const EntropyModel indep = EntropyModel::independent(test::vec({0.4, 1.1}));
  CHECK(indep.conditional_entropy(0b01) == doctest::Approx(0.4));
  CHECK(indep.conditional_entropy(0b10) == doctest::Approx(1.1));
  CHECK(indep.conditional_entropy(0b11) == doctest::Approx(1.5));

  // A = S gives the total entropy for any model.
  for (const auto& m : test::entropy_corpus())
    CHECK(m.conditional_entropy(full_set(m.num_sources())) ==
          doctest::Approx(m.total_entropy()));
}

TEST_CASE("conditional entropy is supermodular whenever validate passes") {
  for (const auto& m : test::entropy_corpus()) {
    REQUIRE(validate(m).ok);
    const int n = m.num_sources();
    for (Subset a = 0; a < subset_count(n); ++a) {
      for (Subset b = 0; b < subset_count(n); ++b) {
        const double lhs =
            m.conditional_entropy(a | b) + m.conditional_entropy(a & b);
        const double rhs =
            m.conditional_entropy(a) + m.conditional_entropy(b);
        CHECK(lhs >= rhs - 1e-9);
      }
    }
  }
}

TEST_CASE("random distribution-backed tables validate") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 5; ++n)
    for (int rep = 0; rep < 4; ++rep)
      CHECK(validate(random_entropy_model(n, rng)).ok);
}
