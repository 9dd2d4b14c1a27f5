#include "mcast/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mcast {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    out << "tree " << issues[i].tree_id << ": " << issues[i].detail;
  }
  return out.str();
}

namespace {

std::string edge_name(NodeId a, NodeId b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void validate_tree(const TreeSpec& tree, const Graph& graph, std::vector<ValidationIssue>& issues) {
  using Kind = ValidationIssue::Kind;
  const int n = graph.node_count();
  auto in_range = [n](NodeId v) { return v >= 0 && v < n; };
  bool ranges_ok = in_range(tree.root);
  if (!ranges_ok)
    issues.push_back({Kind::kNodeOutOfRange, tree.id, "root " + std::to_string(tree.root) + " out of range"});
  for (const auto& [child, parent] : tree.parent) {
    if (!in_range(child) || !in_range(parent)) {
      issues.push_back({Kind::kNodeOutOfRange, tree.id, "parent entry " + edge_name(child, parent) + " out of range"});
      ranges_ok = false;
    }
  }
  if (!ranges_ok) return;

  if (tree.parent.count(tree.root))
    issues.push_back({Kind::kNotATree, tree.id, "root " + std::to_string(tree.root) + " has a parent"});

  for (const auto& [child, parent] : tree.parent) {
    if (child == parent) {
      issues.push_back({Kind::kNotATree, tree.id, "node " + std::to_string(child) + " is its own parent"});
    } else if (!graph.has_edge(child, parent)) {
      issues.push_back({Kind::kMissingEdge, tree.id, "edge " + edge_name(parent, child) + " not in graph"});
    }
  }

  // 0 = unknown, 1 = on current walk, 2 = reaches root, 3 = broken.
  std::unordered_map<NodeId, int> state;
  state[tree.root] = 2;
  for (const auto& entry : tree.parent) {
    std::vector<NodeId> walk;
    NodeId v = entry.first;
    int verdict = 0;
    while (true) {
      auto st = state.find(v);
      if (st != state.end()) {
        if (st->second == 1) {
          issues.push_back({Kind::kNotATree, tree.id, "cycle through node " + std::to_string(v)});
          verdict = 3;
        } else {
          verdict = st->second;
        }
        break;
      }
      auto p = tree.parent.find(v);
      if (p == tree.parent.end()) {
        issues.push_back({Kind::kNotATree, tree.id,
                          "node " + std::to_string(v) + " is disconnected from root " + std::to_string(tree.root)});
        state[v] = 3;
        verdict = 3;
        break;
      }
      state[v] = 1;
      walk.push_back(v);
      v = p->second;
    }
    for (NodeId w : walk) state[w] = verdict;
  }
}

}  // namespace

ValidationReport validate_instance(const InstanceSpec& spec) {
  ValidationReport report;
  std::set<int> seen;
  for (const auto& tree : spec.trees) {
    if (!seen.insert(tree.id).second)
      report.issues.push_back({ValidationIssue::Kind::kDuplicateTreeId, tree.id, "duplicate tree id"});
    validate_tree(tree, spec.graph, report.issues);
  }
  return report;
}

MulticastTree::MulticastTree(const TreeSpec& spec, const Graph& graph) : id_(spec.id) {
  std::unordered_map<NodeId, std::vector<NodeId>> kids;
  for (const auto& [child, parent] : spec.parent) kids[parent].push_back(child);
  nodes_.reserve(spec.parent.size() + 1);
  nodes_.push_back(spec.root);
  parent_.push_back(-1);
  node_depth_.push_back(0);
  for (std::size_t head = 0; head < nodes_.size(); ++head) {
    auto it = kids.find(nodes_[head]);
    if (it == kids.end()) continue;
    auto& list = it->second;
    std::sort(list.begin(), list.end());
    for (NodeId c : list) {
      nodes_.push_back(c);
      parent_.push_back(static_cast<int>(head));
      node_depth_.push_back(node_depth_[head] + 1);
    }
  }
  const int count = size();
  sorted_lookup_.reserve(count);
  for (int i = 0; i < count; ++i) sorted_lookup_.emplace_back(nodes_[i], i);
  std::sort(sorted_lookup_.begin(), sorted_lookup_.end());

  child_offset_.assign(count + 1, 0);
  for (int i = 1; i < count; ++i) ++child_offset_[parent_[i] + 1];
  for (int i = 0; i < count; ++i) child_offset_[i + 1] += child_offset_[i];
  children_.assign(count > 0 ? count - 1 : 0, 0);
  {
    std::vector<int> fill(child_offset_.begin(), child_offset_.end() - 1);
    for (int i = 1; i < count; ++i) children_[fill[parent_[i]]++] = i;
  }
  height_.assign(count, 0);
  subtree_size_.assign(count, 1);
  for (int i = count - 1; i > 0; --i) {
    int p = parent_[i];
    height_[p] = std::max(height_[p], height_[i] + 1);
    subtree_size_[p] += subtree_size_[i];
  }
  depth_ = count > 0 ? height_[0] : 0;
  edge_id_.assign(count, -1);
  for (int i = 1; i < count; ++i) edge_id_[i] = graph.edge_id(nodes_[i], nodes_[parent_[i]]);
}

int MulticastTree::local_of(NodeId v) const {
  auto it = std::lower_bound(sorted_lookup_.begin(), sorted_lookup_.end(), std::pair<NodeId, int>{v, -1});
  return it != sorted_lookup_.end() && it->first == v ? it->second : -1;
}

std::vector<NodeId> MulticastTree::leaves() const {
  std::vector<NodeId> out;
  for (int i = 0; i < size(); ++i)
    if (is_leaf_local(i)) out.push_back(nodes_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

TreeSpec MulticastTree::to_spec() const {
  TreeSpec spec;
  spec.id = id_;
  spec.root = root();
  for (int i = 1; i < size(); ++i) spec.parent.emplace(nodes_[i], nodes_[parent_[i]]);
  return spec;
}

MulticastInstance MulticastInstance::from_spec(const InstanceSpec& spec) {
  auto report = validate_instance(spec);
  if (!report.ok()) throw InvalidInstance(std::move(report));
  MulticastInstance inst;
  inst.graph_ = spec.graph;
  inst.trees_.reserve(spec.trees.size());
  for (const auto& t : spec.trees) inst.trees_.push_back(MulticastTree(t, inst.graph_));
  for (int i = 0; i < inst.tree_count(); ++i) inst.id_lookup_.emplace_back(inst.trees_[i].id(), i);
  std::sort(inst.id_lookup_.begin(), inst.id_lookup_.end());
  inst.trees_on_edge_.assign(inst.graph_.edge_count(), {});
  for (const auto& [id, index] : inst.id_lookup_) {
    const auto& tree = inst.trees_[index];
    for (int l = 1; l < tree.size(); ++l) inst.trees_on_edge_[tree.edge_id_local(l)].push_back(index);
  }
  return inst;
}

int MulticastInstance::tree_index(int tree_id) const {
  auto it = std::lower_bound(id_lookup_.begin(), id_lookup_.end(), std::pair<int, int>{tree_id, -1});
  return it != id_lookup_.end() && it->first == tree_id ? it->second : -1;
}

InstanceSpec MulticastInstance::to_spec() const {
  InstanceSpec spec{graph_, {}};
  for (const auto& t : trees_) spec.trees.push_back(t.to_spec());
  return spec;
}

InstanceMetrics compute_metrics(const MulticastInstance& instance) {
  InstanceMetrics m;
  m.node_count = instance.node_count();
  for (const auto& on_edge : instance.trees_on_edge())
    m.congestion = std::max<int>(m.congestion, static_cast<int>(on_edge.size()));
  for (const auto& t : instance.trees()) m.dilation = std::max(m.dilation, t.depth());
  return m;
}

}  // namespace mcast
