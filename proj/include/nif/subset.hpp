#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace nif {

/// Subsets of the source set {0..n-1} as bitmasks. n is capped at 24,
/// so the full 2^n entropy table stays enumerable.
using Subset = std::uint32_t;

constexpr int kMaxSources = 24;

constexpr Subset full_set(int n) { return (Subset{1} << n) - 1u; }
constexpr Subset subset_count(int n) { return Subset{1} << n; }
constexpr bool contains(Subset a, int i) { return (a >> i) & 1u; }
constexpr Subset singleton(int i) { return Subset{1} << i; }
inline int set_size(Subset a) { return std::popcount(a); }

/// "{1,3}" with 1-based source labels, for diagnostics.
std::string subset_to_string(Subset a, int n);

}  // namespace nif
