#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nif {

struct PathLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultMaxPathsPerPair = 10000;

struct Edge {
  std::string id;
  int tail = 0;  // node index
  int head = 0;
  bool operator==(const Edge&) const = default;
};

/// Directed multigraph with designated source and terminal nodes.
/// Sources, terminals and interior nodes must be disjoint, and every
/// terminal must be reachable from every source.
class Network {
 public:
  Network(std::vector<std::string> nodes, std::vector<Edge> edges,
          std::vector<int> sources, std::vector<int> terminals);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_sources() const { return static_cast<int>(sources_.size()); }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& sources() const { return sources_; }
  const std::vector<int>& terminals() const { return terminals_; }

  const std::string& node_name(int v) const { return nodes_[v]; }
  int node_index(const std::string& name) const;  // -1 if absent

  /// Out-edges of a node, ordered by edge id (lexicographic); this fixes
  /// the deterministic path enumeration order.
  const std::vector<int>& out_edges(int v) const { return adjacency_[v]; }

  bool operator==(const Network&) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<int> sources_;
  std::vector<int> terminals_;
  std::vector<std::vector<int>> adjacency_;
};

/// All simple directed paths from source to terminal as edge-index
/// sequences, lexicographic in the edge-id order. Throws PathLimitError
/// beyond max_paths; never truncates silently.
std::vector<std::vector<int>> enumerate_paths(
    const Network& net, int source_node, int terminal_node,
    int max_paths = kDefaultMaxPathsPerPair);

}  // namespace nif
