#include "mcast/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "mcast/util.hpp"

namespace mcast {

MulticastInstance gen_random_instance(int node_count, int tree_count, int target_depth,
                                      std::uint64_t seed) {
  if (node_count < 2) throw std::invalid_argument("node_count must be >= 2");
  if (tree_count < 1) throw std::invalid_argument("tree_count must be >= 1");
  if (target_depth < 1) throw std::invalid_argument("target_depth must be >= 1");
  if (target_depth >= node_count)
    throw std::invalid_argument("target_depth " + std::to_string(target_depth) +
                                " cannot fit in " + std::to_string(node_count) + " nodes");
  Rng rng(mix_seed(seed, 0x72616e64));

  std::vector<NodeId> order(node_count);
  std::iota(order.begin(), order.end(), 0);
  for (int i = node_count - 1; i > 0; --i) std::swap(order[i], order[uniform_below(rng, i + 1)]);
  std::set<Edge> edges;
  for (int i = 1; i < node_count; ++i) {
    // Attach to a recent node to keep the diameter large enough for deep trees.
    int lo = std::max(0, i - 3);
    int j = static_cast<int>(uniform_between(rng, lo, i - 1));
    edges.insert(Edge::of(order[i], order[j]));
  }
  for (int extra = 0; extra < node_count / 2; ++extra) {
    NodeId a = static_cast<NodeId>(uniform_below(rng, node_count));
    NodeId b = static_cast<NodeId>(uniform_below(rng, node_count));
    if (a != b) edges.insert(Edge::of(a, b));
  }
  InstanceSpec spec{Graph(node_count, {edges.begin(), edges.end()}), {}};
  const Graph& g = spec.graph;

  for (int t = 0; t < tree_count; ++t) {
    NodeId root = static_cast<NodeId>(uniform_below(rng, node_count));
    std::vector<int> dist(node_count, -1);
    std::vector<NodeId> bfs_parent(node_count, -1);
    std::vector<NodeId> queue{root};
    dist[root] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      NodeId x = queue[h];
      if (dist[x] == target_depth) continue;
      std::vector<NodeId> nb(g.neighbors(x).begin(), g.neighbors(x).end());
      for (int i = static_cast<int>(nb.size()) - 1; i > 0; --i) std::swap(nb[i], nb[uniform_below(rng, i + 1)]);
      for (NodeId y : nb) {
        if (dist[y] >= 0) continue;
        dist[y] = dist[x] + 1;
        bfs_parent[y] = x;
        queue.push_back(y);
      }
    }
    TreeSpec tree{t, root, {}};
    const int reached = static_cast<int>(queue.size()) - 1;
    const int targets = 1 + static_cast<int>(uniform_below(rng, std::min(reached, 24)));
    // Bias toward the far end of the BFS order so trees tend to be deep.
    for (int k = 0; k < targets; ++k) {
      int pick = (k == 0) ? reached : 1 + static_cast<int>(uniform_below(rng, reached));
      for (NodeId v = queue[pick]; v != root && !tree.parent.count(v); v = bfs_parent[v])
        tree.parent.emplace(v, bfs_parent[v]);
    }
    spec.trees.push_back(std::move(tree));
  }
  return MulticastInstance::from_spec(spec);
}

MulticastInstance gen_congested_instance(int node_count, int congestion, int depth,
                                         std::uint64_t seed) {
  if (congestion < 1) throw std::invalid_argument("congestion must be >= 1");
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (depth + 1 > node_count)
    throw std::invalid_argument("depth " + std::to_string(depth) + " cannot fit in " +
                                std::to_string(node_count) + " nodes");
  const int width = std::clamp(node_count / (depth + 1), 1, 32);
  const int columns = node_count / width;
  auto id = [width](int col, int row) { return col * width + row; };

  std::vector<Edge> edges;
  for (int c = 0; c < columns; ++c) {
    for (int r = 0; r < width; ++r) {
      if (r + 1 < width) edges.push_back({id(c, r), id(c, r + 1)});
      if (c + 1 < columns) {
        edges.push_back({id(c, r), id(c + 1, r)});
        if (r + 1 < width) edges.push_back(Edge::of(id(c, r), id(c + 1, r + 1)));
        if (r > 0) edges.push_back(Edge::of(id(c, r), id(c + 1, r - 1)));
      }
    }
  }
  InstanceSpec spec{Graph(node_count, std::move(edges)), {}};
  Rng rng(mix_seed(seed, 0x636f6e67));

  // Hub edge between columns hub and hub+1 on the middle row.
  const int hub_lo = std::max(0, (columns - 1 - depth) / 2);
  const int hub = std::min(columns - 2, hub_lo + depth / 2);
  const int hub_row = width / 2;
  const int branch_cap = std::max(1, width / 2);

  for (int t = 0; t < congestion; ++t) {
    const int first = std::max(0, hub + 1 - depth);
    const int last = std::min(hub, columns - 1 - depth);
    const int root_col = static_cast<int>(uniform_between(rng, first, last));
    std::vector<int> spine(depth + 1);
    spine[hub - root_col] = hub_row;
    spine[hub + 1 - root_col] = hub_row;
    auto step = [&](int row) { return std::clamp(row + static_cast<int>(uniform_between(rng, -1, 1)), 0, width - 1); };
    for (int k = hub - root_col - 1; k >= 0; --k) spine[k] = step(spine[k + 1]);
    for (int k = hub + 2 - root_col; k <= depth; ++k) spine[k] = step(spine[k - 1]);

    TreeSpec tree{t, id(root_col, spine[0]), {}};
    std::vector<int> current{spine[0]};
    for (int k = 1; k <= depth; ++k) {
      const int col = root_col + k;
      std::vector<int> next;
      for (int r = 0; r < width; ++r) {
        std::vector<int> parents;
        for (int pr : current)
          if (std::abs(pr - r) <= 1) parents.push_back(pr);
        if (parents.empty()) continue;
        bool take = r == spine[k];
        if (r == spine[k] && std::find(parents.begin(), parents.end(), spine[k - 1]) != parents.end())
          parents = {spine[k - 1]};
        if (!take && static_cast<int>(next.size()) < branch_cap) take = bernoulli(rng, 0.35);
        if (!take) continue;
        int pr = parents[uniform_below(rng, parents.size())];
        tree.parent.emplace(id(col, r), id(col - 1, pr));
        next.push_back(r);
      }
      current = std::move(next);
    }
    spec.trees.push_back(std::move(tree));
  }
  return MulticastInstance::from_spec(spec);
}

MulticastInstance gen_random_tree(int node_count, double shape, std::uint64_t seed) {
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  Rng rng(mix_seed(seed, 0x74726565));
  std::vector<Edge> edges;
  TreeSpec tree{0, 0, {}};
  // Window of candidate parents: small windows give long paths.
  const int window = std::max(1, static_cast<int>((1.0 - shape) * node_count));
  for (int v = 1; v < node_count; ++v) {
    int lo = std::max(0, v - window);
    NodeId p = static_cast<NodeId>(uniform_between(rng, lo, v - 1));
    tree.parent.emplace(v, p);
    edges.push_back({p, v});
  }
  return MulticastInstance::from_spec({Graph(node_count, std::move(edges)), {std::move(tree)}});
}

}  // namespace mcast
