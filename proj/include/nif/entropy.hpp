#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nif/subset.hpp"

namespace nif {

/// Joint entropy table H(X_A) over every subset A of the sources, in bits.
/// This is the rank function defining the Slepian-Wolf contra-polymatroid;
/// any monotone submodular table works, entropies of an actual joint
/// distribution being the motivating case.
class EntropyModel {
 public:
  /// table[mask] = H(X_A) for the subset with that bitmask; size must be
  /// exactly 2^num_sources (missing entries are a schema error).
  EntropyModel(int num_sources, std::vector<double> table);

  /// All sources carry the same information: H(A) = h for every A != {}.
  static EntropyModel identical(int num_sources, double h);
  /// Independent sources: H(A) = sum of the per-source entropies in A.
  static EntropyModel independent(const Eigen::VectorXd& per_source);

  int num_sources() const { return num_sources_; }
  double entropy(Subset a) const { return table_[a]; }
  /// H(X_S), the total entropy.
  double total_entropy() const { return table_.back(); }

  /// H(X_A | X_{A^c}) = H(S) - H(A^c). Equals H(S) when A = S.
  double conditional_entropy(Subset a) const;

  bool operator==(const EntropyModel& o) const = default;

 private:
  int num_sources_;
  std::vector<double> table_;
};

struct ValidationViolation {
  std::string kind;  // "empty-set", "monotonicity", "submodularity"
  Subset a = 0;
  Subset b = 0;
  double magnitude = 0.0;
  std::string describe(int num_sources) const;
};

struct ValidationReport {
  bool ok = true;
  std::optional<ValidationViolation> violation;
};

/// Checks H({})=0, monotonicity and submodularity; reports the first
/// violated pair with its magnitude. tol absorbs float noise in tables
/// computed from distributions.
ValidationReport validate(const EntropyModel& model, double tol = 1e-9);

}  // namespace nif
