#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcast/graph.hpp"

namespace mcast {

/// Unchecked description of one multicast tree, as read from disk.
/// `parent` maps every non-root member to its parent.
struct TreeSpec {
  int id = 0;
  NodeId root = 0;
  std::map<NodeId, NodeId> parent;

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;
};

struct InstanceSpec {
  Graph graph;
  std::vector<TreeSpec> trees;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct ValidationIssue {
  enum class Kind { kNodeOutOfRange, kMissingEdge, kNotATree, kDuplicateTreeId };
  Kind kind;
  int tree_id;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Lists every violated invariant: tree nodes out of range, parent edges
/// missing from the host graph, parent maps that are not rooted trees
/// (cycles, disconnected parts, a parent for the root) and repeated ids.
ValidationReport validate_instance(const InstanceSpec& spec);

/// A validated rooted tree. Members are indexed locally in BFS order, so the
/// root is local 0 and parents always precede children.
class MulticastTree {
 public:
  int id() const { return id_; }
  NodeId root() const { return nodes_.front(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return size() - 1; }
  /// Maximum hop distance from the root; 0 for a single-node tree.
  int depth() const { return depth_; }

  std::span<const NodeId> nodes() const { return nodes_; }
  NodeId node(int local) const { return nodes_[local]; }
  /// Local index of a member, or -1.
  int local_of(NodeId v) const;
  bool contains(NodeId v) const { return local_of(v) >= 0; }

  int parent_local(int local) const { return parent_[local]; }
  int depth_local(int local) const { return node_depth_[local]; }
  /// Longest downward distance to a leaf of the subtree.
  int height_local(int local) const { return height_[local]; }
  int subtree_size_local(int local) const { return subtree_size_[local]; }
  std::span<const int> children_local(int local) const {
    return {children_.data() + child_offset_[local], children_.data() + child_offset_[local + 1]};
  }
  bool is_leaf_local(int local) const { return child_offset_[local] == child_offset_[local + 1]; }
  /// Host-graph id of the edge between `local` and its parent; -1 for the root.
  int edge_id_local(int local) const { return edge_id_[local]; }

  std::vector<NodeId> leaves() const;
  TreeSpec to_spec() const;

 private:
  friend class MulticastInstance;
  MulticastTree(const TreeSpec& spec, const Graph& graph);

  int id_ = 0;
  int depth_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<std::pair<NodeId, int>> sorted_lookup_;
  std::vector<int> parent_;
  std::vector<int> node_depth_;
  std::vector<int> height_;
  std::vector<int> subtree_size_;
  std::vector<int> child_offset_;
  std::vector<int> children_;
  std::vector<int> edge_id_;
};

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(ValidationReport report)
      : std::invalid_argument("invalid instance: " + report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Host graph plus multicast trees; immutable once built.
class MulticastInstance {
 public:
  /// Throws InvalidInstance carrying the full report when validation fails.
  static MulticastInstance from_spec(const InstanceSpec& spec);

  const Graph& graph() const { return graph_; }
  const std::vector<MulticastTree>& trees() const { return trees_; }
  int tree_count() const { return static_cast<int>(trees_.size()); }
  int node_count() const { return graph_.node_count(); }
  /// Index into trees() for a tree id (which doubles as its message id), or -1.
  int tree_index(int tree_id) const;
  InstanceSpec to_spec() const;

  /// Trees containing each host edge, as tree indices in ascending tree-id order.
  const std::vector<std::vector<int>>& trees_on_edge() const { return trees_on_edge_; }

 private:
  Graph graph_;
  std::vector<MulticastTree> trees_;
  std::vector<std::pair<int, int>> id_lookup_;
  std::vector<std::vector<int>> trees_on_edge_;
};

struct InstanceMetrics {
  int congestion = 0;
  int dilation = 0;
  int node_count = 0;
  friend bool operator==(const InstanceMetrics&, const InstanceMetrics&) = default;
};

InstanceMetrics compute_metrics(const MulticastInstance& instance);

}  // namespace mcast
