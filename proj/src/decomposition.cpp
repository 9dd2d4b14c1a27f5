#include "mcast/decomposition.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcast {

int PathDecomposition::max_level() const {
  return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
}

namespace {

/// Builds paths from a preferred-child choice: every node that is the root or
/// a non-preferred child starts a path (prefixed by its parent edge) that
/// follows preferred children down to a leaf.
PathDecomposition decompose_by_preference(const MulticastTree& tree, const std::vector<int>& preferred,
                                          DecompositionKind kind) {
  PathDecomposition d;
  d.kind = kind;
  d.path_of.assign(tree.size(), -1);
  for (int start = 0; start < tree.size(); ++start) {
    const int parent = tree.parent_local(start);
    const bool starts_path = parent < 0 || preferred[parent] != start;
    if (!starts_path) continue;
    if (parent < 0 && tree.is_leaf_local(start)) continue;  // single-node tree
    std::vector<NodeId> path;
    const int index = static_cast<int>(d.paths.size());
    if (parent >= 0) {
      path.push_back(tree.node(parent));
      d.path_of[start] = index;
    }
    path.push_back(tree.node(start));
    for (int v = preferred[start]; v >= 0; v = preferred[v]) {
      path.push_back(tree.node(v));
      d.path_of[v] = index;
    }
    d.paths.push_back(std::move(path));
  }
  assign_levels(d, tree);
  return d;
}

}  // namespace

void assign_levels(PathDecomposition& d, const MulticastTree& tree) {
  d.levels.assign(d.paths.size(), 0);
  // Paths are discovered top-down when processed in BFS order of top nodes.
  std::vector<std::pair<int, int>> by_top;
  by_top.reserve(d.paths.size());
  for (int p = 0; p < static_cast<int>(d.paths.size()); ++p)
    by_top.emplace_back(tree.depth_local(tree.local_of(d.paths[p].front())), p);
  std::sort(by_top.begin(), by_top.end());
  for (auto [depth, p] : by_top) {
    const int top = tree.local_of(d.paths[p].front());
    const int above = d.path_of[top];
    d.levels[p] = above < 0 ? 1 : d.levels[above] + 1;
  }
}

PathDecomposition heavy_path_decomposition(const MulticastTree& tree) {
  std::vector<int> heavy(tree.size(), -1);
  for (int v = 0; v < tree.size(); ++v) {
    for (int c : tree.children_local(v)) {
      const int h = heavy[v];
      if (h < 0 || tree.subtree_size_local(c) > tree.subtree_size_local(h) ||
          (tree.subtree_size_local(c) == tree.subtree_size_local(h) && tree.node(c) < tree.node(h)))
        heavy[v] = c;
    }
  }
  return decompose_by_preference(tree, heavy, DecompositionKind::kHeavy);
}

std::vector<int> compute_ranks(const MulticastTree& tree) {
  std::vector<int> rank(tree.size(), 0);
  for (int v = tree.size() - 1; v >= 0; --v) {
    int best = -1;
    int ties = 0;
    for (int c : tree.children_local(v)) {
      if (rank[c] > best) {
        best = rank[c];
        ties = 1;
      } else if (rank[c] == best) {
        ++ties;
      }
    }
    rank[v] = best < 0 ? 0 : (ties == 1 ? best : best + 1);
  }
  return rank;
}

RankDecomposition rank_decomposition(const MulticastTree& tree) {
  RankDecomposition out;
  out.rank = compute_ranks(tree);
  std::vector<int> preferred(tree.size(), -1);
  for (int v = 0; v < tree.size(); ++v) {
    for (int c : tree.children_local(v)) {
      const int p = preferred[v];
      if (p < 0 || out.rank[c] > out.rank[p] || (out.rank[c] == out.rank[p] && tree.node(c) < tree.node(p)))
        preferred[v] = c;
    }
  }
  out.decomposition = decompose_by_preference(tree, preferred, DecompositionKind::kRank);
  return out;
}

PathDecomposition shorten(const PathDecomposition& input, const MulticastTree& tree, int chunk_length) {
  if (chunk_length < 1) throw std::invalid_argument("chunk length must be >= 1");
  PathDecomposition d;
  d.kind = DecompositionKind::kShortRefined;
  d.path_of.assign(tree.size(), -1);
  for (const auto& path : input.paths) {
    const int edges = static_cast<int>(path.size()) - 1;
    for (int begin = 0; begin < edges; begin += chunk_length) {
      const int end = std::min(edges, begin + chunk_length);
      const int index = static_cast<int>(d.paths.size());
      std::vector<NodeId> chunk(path.begin() + begin, path.begin() + end + 1);
      for (std::size_t i = 1; i < chunk.size(); ++i) d.path_of[tree.local_of(chunk[i])] = index;
      d.paths.push_back(std::move(chunk));
    }
  }
  assign_levels(d, tree);
  return d;
}

ShortnessReport verify_short(const PathDecomposition& d, const MulticastTree& tree, int chunk_length, int k) {
  ShortnessReport r;
  r.depth = tree.depth();
  std::vector<int> met(tree.size(), 0);
  for (int v = 1; v < tree.size(); ++v) {
    const int p = tree.parent_local(v);
    const bool same = p > 0 && d.path_of[p] == d.path_of[v];
    met[v] = met[p] + (same ? 0 : 1);
    if (tree.is_leaf_local(v)) r.max_intersections = std::max(r.max_intersections, met[v]);
  }
  // max <= depth / l + k, in integers.
  r.pass = static_cast<long long>(r.max_intersections) * chunk_length <=
           static_cast<long long>(r.depth) + static_cast<long long>(k) * chunk_length;
  return r;
}

}  // namespace mcast
