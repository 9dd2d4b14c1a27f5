#include "mcast/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mcast {

Graph::Graph(int node_count, std::vector<Edge> edges) : node_count_(node_count) {
  if (node_count < 0) throw std::invalid_argument("negative node count");
  for (auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    e = Edge::of(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw std::invalid_argument("parallel edge (" + std::to_string(dup->u) + "," +
                                std::to_string(dup->v) + ")");
  edges_ = std::move(edges);
  index_.reserve(edges_.size() * 2);
  std::vector<int> degree(node_count_, 0);
  for (int i = 0; i < edge_count(); ++i) {
    index_.emplace(key(edges_[i].u, edges_[i].v), i);
    ++degree[edges_[i].u];
    ++degree[edges_[i].v];
  }
  adj_offset_.assign(node_count_ + 1, 0);
  for (int x = 0; x < node_count_; ++x) adj_offset_[x + 1] = adj_offset_[x] + degree[x];
  adj_.assign(adj_offset_.back(), 0);
  std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.u]++] = e.v;
    adj_[fill[e.v]++] = e.u;
  }
  for (int x = 0; x < node_count_; ++x)
    std::sort(adj_.begin() + adj_offset_[x], adj_.begin() + adj_offset_[x + 1]);
}

int Graph::edge_id(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  auto it = index_.find(key(a, b));
  return it == index_.end() ? -1 : it->second;
}

std::span<const NodeId> Graph::neighbors(NodeId x) const {
  return {adj_.data() + adj_offset_[x], adj_.data() + adj_offset_[x + 1]};
}

Graph Graph::with_node_count(int node_count) const {
  if (node_count < node_count_)
    throw std::invalid_argument("cannot shrink graph from " + std::to_string(node_count_) +
                                " to " + std::to_string(node_count) + " nodes");
  return Graph(node_count, edges_);
}

}  // namespace mcast
