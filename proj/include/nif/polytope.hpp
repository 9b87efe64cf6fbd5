#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nif/entropy.hpp"

namespace nif {

constexpr double kTightTol = 1e-9;

/// Membership in the Slepian-Wolf polytope: sum_{i in A} r_i >=
/// H(X_A|X_{A^c}) - tol for every nonempty A.
bool is_member(const EntropyModel& model, const Eigen::VectorXd& r,
               double tol = kTightTol);

/// All nonempty subsets whose rate inequality is tight at r (within tol).
/// Requires is_member(r); the family is closed under union and
/// intersection by supermodularity of the conditional entropy.
std::vector<Subset> tight_sets(const EntropyModel& model,
                               const Eigen::VectorXd& r,
                               double tol = kTightTol);

/// Smallest tight set containing source i (intersection of all tight sets
/// containing i), or the full set if no tight set contains i.
Subset minimal_tight_set(const EntropyModel& model, const Eigen::VectorXd& r,
                         int i, double tol = kTightTol);

/// True iff every tight rate inequality involving i also involves j
/// (the qualification in the coupled rate-flow exchange condition).
/// i == j returns true.
bool participates_in_all_tight(const EntropyModel& model,
                               const Eigen::VectorXd& r, int i, int j,
                               double tol = kTightTol);

/// Vertex of the base polytope {r : member, sum r = H(S)} minimizing
/// weights . r: sort sources ascending by weight (ties by index), allocate
/// r_{s(k)} = H({s(1..k)}) - H({s(1..k-1)}). Weights must be finite and
/// nonnegative.
Eigen::VectorXd linear_minimize(const EntropyModel& model,
                                const Eigen::VectorXd& weights);

/// Componentwise-smaller member with sum rate exactly H(S): repeatedly pick
/// the lowest-index coordinate all of whose containing inequalities are
/// loose and lower it until one becomes tight (the full-set inequality
/// doubles as the sum-rate target).
Eigen::VectorXd reduce_to_base(const EntropyModel& model,
                               const Eigen::VectorXd& r,
                               double tol = kTightTol);

}  // namespace nif
