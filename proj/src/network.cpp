#include "nif/network.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace nif {

Network::Network(std::vector<std::string> nodes, std::vector<Edge> edges,
                 std::vector<int> sources, std::vector<int> terminals)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      sources_(std::move(sources)),
      terminals_(std::move(terminals)) {
  const int n = num_nodes();
  std::set<std::string> names(nodes_.begin(), nodes_.end());
  if (static_cast<int>(names.size()) != n)
    throw std::invalid_argument("network: duplicate node names");
  for (const Edge& e : edges_)
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw std::invalid_argument("network: edge endpoint out of range");
  std::set<std::string> edge_ids;
  for (const Edge& e : edges_)
    if (!edge_ids.insert(e.id).second)
      throw std::invalid_argument("network: duplicate edge id '" + e.id + "'");
  if (sources_.empty() || terminals_.empty())
    throw std::invalid_argument("network: needs sources and terminals");
  std::set<int> src(sources_.begin(), sources_.end());
  std::set<int> ter(terminals_.begin(), terminals_.end());
  if (src.size() != sources_.size() || ter.size() != terminals_.size())
    throw std::invalid_argument("network: repeated source or terminal");
  for (int v : sources_)
    if (ter.count(v))
      throw std::invalid_argument(
          "network: sources and terminals must be disjoint");

  adjacency_.assign(n, {});
  for (int e = 0; e < num_edges(); ++e) adjacency_[edges_[e].tail].push_back(e);
  for (auto& out : adjacency_)
    std::sort(out.begin(), out.end(),
              [&](int a, int b) { return edges_[a].id < edges_[b].id; });

  // Every terminal reachable from every source.
  for (int s : sources_) {
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    seen[s] = true;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int e : adjacency_[v]) {
        const int w = edges_[e].head;
        if (!seen[w]) {
          seen[w] = true;
          q.push(w);
        }
      }
    }
    for (int t : terminals_)
      if (!seen[t])
        throw std::invalid_argument("network: terminal '" + nodes_[t] +
                                    "' unreachable from source '" + nodes_[s] +
                                    "'");
  }
}

int Network::node_index(const std::string& name) const {
  for (int i = 0; i < num_nodes(); ++i)
    if (nodes_[i] == name) return i;
  return -1;
}

bool Network::operator==(const Network& o) const {
  return nodes_ == o.nodes_ && edges_ == o.edges_ && sources_ == o.sources_ &&
         terminals_ == o.terminals_;
}

std::vector<std::vector<int>> enumerate_paths(const Network& net,
                                              int source_node,
                                              int terminal_node,
                                              int max_paths) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  std::vector<bool> visited(net.num_nodes(), false);

  // Iterative DFS over out-edges in id order yields lexicographic paths.
  struct Frame {
    int node;
    size_t next;
  };
  std::vector<Frame> frames{{source_node, 0}};
  visited[source_node] = true;
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.node == terminal_node) {
      if (static_cast<int>(out.size()) >= max_paths)
        throw PathLimitError("path enumeration exceeded " +
                             std::to_string(max_paths) + " simple paths");
      out.push_back(stack);
      visited[f.node] = false;
      frames.pop_back();
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    const auto& adj = net.out_edges(f.node);
    bool advanced = false;
    while (f.next < adj.size()) {
      const int e = adj[f.next++];
      const int w = net.edges()[e].head;
      if (visited[w]) continue;
      stack.push_back(e);
      visited[w] = true;
      frames.push_back({w, 0});
      advanced = true;
      break;
    }
    if (!advanced && f.next >= adj.size()) {
      visited[f.node] = false;
      frames.pop_back();
      if (!stack.empty()) stack.pop_back();
    }
  }
  return out;
}

}  // namespace nif
