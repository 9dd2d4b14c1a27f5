#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace mcast {

using NodeId = int;

/// Unordered node pair stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge of(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  NodeId other(NodeId x) const { return x == u ? v : u; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph. Edges are kept sorted; each has a dense id.
class Graph {
 public:
  Graph() = default;
  /// Throws std::invalid_argument on self-loops, parallel edges or
  /// out-of-range endpoints.
  Graph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }

  /// Edge id of {a, b}, or -1 when absent.
  int edge_id(NodeId a, NodeId b) const;
  bool has_edge(NodeId a, NodeId b) const { return edge_id(a, b) >= 0; }
  std::span<const NodeId> neighbors(NodeId x) const;

  /// Same edges, extra isolated nodes appended.
  Graph with_node_count(int node_count) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  static std::uint64_t key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<int> adj_offset_;
  std::vector<NodeId> adj_;
};

}  // namespace mcast
