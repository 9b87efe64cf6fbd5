#include "nif/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace nif {

PathTable::PathTable(const Network& net, int max_paths_per_pair)
    : num_terminals_(net.num_terminals()) {
  const int ns = net.num_sources();
  const int nt = net.num_terminals();
  by_pair_.assign(static_cast<size_t>(ns) * nt, {});
  by_terminal_.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      auto raw = enumerate_paths(net, net.sources()[s], net.terminals()[t],
                                 max_paths_per_pair);
      for (auto& edges : raw) {
        const int id = static_cast<int>(paths_.size());
        paths_.push_back(Path{s, t, std::move(edges)});
        by_pair_[s * nt + t].push_back(id);
        by_terminal_[t].push_back(id);
      }
    }
  }
  edge_users_.assign(net.num_edges(), {});
  for (const Path& p : paths_)
    for (int e : p.edges)
      if (edge_users_[e].empty() || edge_users_[e].back() != p.terminal)
        edge_users_[e].push_back(p.terminal);
}

Instance::Instance(Network net, std::vector<CostFunction> edge_costs_in,
                   std::vector<CostFunction> source_costs_in,
                   EntropyModel entropy_in, AggregatorConfig aggregator_in,
                   SplittingConfig splitting_in, int max_paths_per_pair)
    : network(std::move(net)),
      edge_costs(std::move(edge_costs_in)),
      source_costs(std::move(source_costs_in)),
      entropy(std::move(entropy_in)),
      aggregator(aggregator_in),
      splitting(splitting_in),
      paths(network, max_paths_per_pair) {
  if (static_cast<int>(edge_costs.size()) != network.num_edges())
    throw std::invalid_argument("instance: one cost per edge required");
  if (static_cast<int>(source_costs.size()) != network.num_sources())
    throw std::invalid_argument("instance: one cost per source required");
  if (entropy.num_sources() != network.num_sources())
    throw std::invalid_argument(
        "instance: entropy table and network disagree on source count");
  if (!aggregator.edge.is_limit && aggregator.edge.value < 1)
    throw std::invalid_argument("instance: edge exponent must be >= 1");
  if (!aggregator.source.is_limit && aggregator.source.value < 1)
    throw std::invalid_argument("instance: source exponent must be >= 1");
}

Instance Instance::with_transformed_edge_costs(bool inverse) const {
  std::vector<CostFunction> transformed;
  transformed.reserve(edge_costs.size());
  for (const auto& c : edge_costs)
    transformed.push_back(inverse
                              ? inverse_transform_cost(c, num_terminals())
                              : transform_cost(c, num_terminals()));
  return Instance(network, std::move(transformed), source_costs, entropy,
                  aggregator, splitting);
}

Instance Instance::with_aggregator(AggregatorConfig agg) const {
  return Instance(network, edge_costs, source_costs, entropy, agg, splitting);
}

FlowRate zero_flow_rate(const Instance& inst) {
  FlowRate fr;
  fr.path_flows = Eigen::VectorXd::Zero(inst.paths.num_paths());
  fr.rates = Eigen::MatrixXd::Zero(inst.num_sources(), inst.num_terminals());
  return fr;
}

}  // namespace nif
