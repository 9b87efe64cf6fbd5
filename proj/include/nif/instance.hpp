#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nif/cost.hpp"
#include "nif/entropy.hpp"
#include "nif/network.hpp"

namespace nif {

/// An L_p-style exponent that may be taken to infinity (exact max).
struct Exponent {
  int value = 16;
  bool is_limit = false;

  static Exponent finite(int n) { return {n, false}; }
  static Exponent limit() { return {0, true}; }
  bool operator==(const Exponent&) const = default;
};

/// z_e and y_s aggregate the per-terminal loads/rates with L_n / L_m
/// norms; limit mode is the exact max with split-ties conventions.
struct AggregatorConfig {
  Exponent edge;    // n
  Exponent source;  // m
  bool operator==(const AggregatorConfig&) const = default;
};

enum class SourceSplit { Uniform, Power };

/// Edge costs are always split power-weighted: Psi_{e,t} = x_{e,t}^n / sum_j
/// x_{e,j}^n. Source costs are split uniformly (1/N_T) or power-weighted.
struct SplittingConfig {
  SourceSplit source = SourceSplit::Uniform;
  bool operator==(const SplittingConfig&) const = default;
};

struct Path {
  int source = 0;    // source index (not node index)
  int terminal = 0;  // terminal index
  std::vector<int> edges;
  bool operator==(const Path&) const = default;
};

/// Cached enumeration of all simple paths, indexed globally; the global id
/// order is terminal-major, then source, then lexicographic by edge ids.
class PathTable {
 public:
  PathTable() = default;
  PathTable(const Network& net, int max_paths_per_pair);

  int num_paths() const { return static_cast<int>(paths_.size()); }
  const Path& path(int p) const { return paths_[p]; }
  const std::vector<Path>& paths() const { return paths_; }
  const std::vector<int>& by_pair(int s, int t) const {
    return by_pair_[s * num_terminals_ + t];
  }
  const std::vector<int>& by_terminal(int t) const { return by_terminal_[t]; }
  /// Terminals that can route through edge e at all. Zero-load splitting
  /// limits are taken along the all-equal direction over this set.
  const std::vector<int>& edge_users(int e) const { return edge_users_[e]; }

  bool operator==(const PathTable&) const = default;

 private:
  int num_terminals_ = 0;
  std::vector<Path> paths_;
  std::vector<std::vector<int>> by_pair_;
  std::vector<std::vector<int>> by_terminal_;
  std::vector<std::vector<int>> edge_users_;
};

/// A complete problem instance: network, one cost per edge and per source,
/// the entropy table, and the aggregation/splitting configuration.
/// Immutable after construction; paths are enumerated once here.
struct Instance {
  Network network;
  std::vector<CostFunction> edge_costs;
  std::vector<CostFunction> source_costs;
  EntropyModel entropy;
  AggregatorConfig aggregator;
  SplittingConfig splitting;
  PathTable paths;

  Instance(Network net, std::vector<CostFunction> edge_costs,
           std::vector<CostFunction> source_costs, EntropyModel entropy,
           AggregatorConfig aggregator, SplittingConfig splitting,
           int max_paths_per_pair = kDefaultMaxPathsPerPair);

  int num_sources() const { return network.num_sources(); }
  int num_terminals() const { return network.num_terminals(); }
  int num_edges() const { return network.num_edges(); }

  /// Same instance with every edge cost replaced by its Wardrop transform
  /// (or inverse).
  Instance with_transformed_edge_costs(bool inverse = false) const;
  /// Same instance with different aggregation exponents.
  Instance with_aggregator(AggregatorConfig agg) const;
};

/// Decision variables: flow per global path id and the N_S x N_T rate
/// matrix. Plain data; all entries finite and nonnegative.
struct FlowRate {
  Eigen::VectorXd path_flows;
  Eigen::MatrixXd rates;
};

FlowRate zero_flow_rate(const Instance& inst);

}  // namespace nif
