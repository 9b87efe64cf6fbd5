#include "nif/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace nif {

std::string subset_to_string(Subset a, int n) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!contains(a, i)) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

EntropyModel::EntropyModel(int num_sources, std::vector<double> table)
    : num_sources_(num_sources), table_(std::move(table)) {
  if (num_sources < 1 || num_sources > kMaxSources)
    throw std::invalid_argument("entropy model: source count out of range");
  if (table_.size() != subset_count(num_sources))
    throw std::invalid_argument(
        "entropy model: table must cover all 2^N subsets");
  for (double v : table_)
    if (!std::isfinite(v))
      throw std::invalid_argument("entropy model: non-finite entry");
}

EntropyModel EntropyModel::identical(int num_sources, double h) {
  std::vector<double> table(subset_count(num_sources), h);
  table[0] = 0.0;
  return EntropyModel(num_sources, std::move(table));
}

EntropyModel EntropyModel::independent(const Eigen::VectorXd& per_source) {
  const int n = static_cast<int>(per_source.size());
  std::vector<double> table(subset_count(n), 0.0);
  for (Subset a = 1; a < subset_count(n); ++a) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (contains(a, i)) sum += per_source[i];
    table[a] = sum;
  }
  return EntropyModel(n, std::move(table));
}

double EntropyModel::conditional_entropy(Subset a) const {
  const Subset full = full_set(num_sources_);
  return table_[full] - table_[full & ~a];
}

std::string ValidationViolation::describe(int num_sources) const {
  if (kind == "empty-set") return "H(empty set) must be 0";
  return kind + " violated by " + std::to_string(magnitude) + " at A=" +
         subset_to_string(a, num_sources) + ", B=" +
         subset_to_string(b, num_sources);
}

ValidationReport validate(const EntropyModel& model, double tol) {
  const int n = model.num_sources();
  if (std::abs(model.entropy(0)) > tol)
    return {false,
            ValidationViolation{"empty-set", 0, 0, std::abs(model.entropy(0))}};
  // Monotonicity along single-element extensions covers all pairs A <= B.
  for (Subset a = 0; a < subset_count(n); ++a) {
    for (int i = 0; i < n; ++i) {
      if (contains(a, i)) continue;
      const Subset b = a | singleton(i);
      const double gap = model.entropy(a) - model.entropy(b);
      if (gap > tol)
        return {false, ValidationViolation{"monotonicity", a, b, gap}};
    }
  }
  for (Subset a = 0; a < subset_count(n); ++a) {
    for (Subset b = a + 1; b < subset_count(n); ++b) {
      const double lhs = model.entropy(a | b) + model.entropy(a & b);
      const double rhs = model.entropy(a) + model.entropy(b);
      if (lhs - rhs > tol)
        return {false, ValidationViolation{"submodularity", a, b, lhs - rhs}};
    }
  }
  return {};
}

}  // namespace nif
