#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mcast/decomposition.hpp"
#include "mcast/generators.hpp"
#include "mcast/util.hpp"
#include "oracles.hpp"

using namespace mcast;

namespace {

MulticastInstance single_tree(int n, const std::vector<std::pair<NodeId, NodeId>>& child_parent) {
  std::vector<Edge> edges;
  TreeSpec t{0, 0, {}};
  for (auto [c, p] : child_parent) {
    edges.push_back(Edge::of(c, p));
    t.parent[c] = p;
  }
  return MulticastInstance::from_spec({Graph(n, edges), {t}});
}

MulticastInstance complete_binary(int h) {
  const int n = (1 << h) - 1;
  std::vector<std::pair<NodeId, NodeId>> cp;
  for (int v = 1; v < n; ++v) cp.emplace_back(v, (v - 1) / 2);
  return single_tree(n, cp);
}

// 16 nodes: a heavy chain 0-1-2-3-4-5 with short side branches.
MulticastInstance sixteen() {
  return single_tree(16, {{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 0}, {7, 6}, {11, 6}, {8, 1}, {14, 8},
                          {9, 2}, {13, 2}, {10, 3}, {15, 10}});
}

// Distinct path ids met by every root-to-leaf walk, computed from the node
// sequences alone.
int walk_max(const PathDecomposition& d, const MulticastTree& tree) {
  std::map<std::pair<NodeId, NodeId>, int> edge_path;
  for (int p = 0; p < static_cast<int>(d.paths.size()); ++p)
    for (std::size_t i = 1; i < d.paths[p].size(); ++i) edge_path[{d.paths[p][i - 1], d.paths[p][i]}] = p;
  int best = 0;
  for (NodeId leaf : tree.leaves()) {
    std::set<int> met;
    for (int l = tree.local_of(leaf); l != 0; l = tree.parent_local(l))
      met.insert(edge_path.at({tree.node(tree.parent_local(l)), tree.node(l)}));
    best = std::max(best, static_cast<int>(met.size()));
  }
  return best;
}

void check_partition(const PathDecomposition& d, const MulticastTree& tree) {
  int total = 0;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& p : d.paths) {
    total += static_cast<int>(p.size()) - 1;
    for (std::size_t i = 1; i < p.size(); ++i) {
      int l = tree.local_of(p[i]);
      REQUIRE(l > 0);
      REQUIRE(tree.node(tree.parent_local(l)) == p[i - 1]);
      REQUIRE(seen.insert({p[i - 1], p[i]}).second);
    }
  }
  CHECK(total == tree.edge_count());
  // Level = 1 + distinct paths met between the root and the path's top.
  for (std::size_t p = 0; p < d.paths.size(); ++p) {
    std::set<int> met;
    for (int l = tree.local_of(d.paths[p][0]); l != 0; l = tree.parent_local(l)) met.insert(d.path_of[l]);
    CHECK(d.levels[p] == 1 + static_cast<int>(met.size()));
  }
}

}  // namespace

TEST_CASE("a path is one heavy path") {
  auto inst = fixture::path(9);
  auto d = heavy_path_decomposition(inst.trees()[0]);
  CHECK(d.paths.size() == 1);
  CHECK(d.path_length(0) == 9);
  auto r = verify_short(d, inst.trees()[0], 1, 1);
  CHECK(r.max_intersections == 1);
  CHECK(r.pass);
}

TEST_CASE("sixteen-node tree: heavy paths and shortening") {
  auto inst = sixteen();
  const auto& t = inst.trees()[0];
  auto d = heavy_path_decomposition(t);
  check_partition(d, t);
  std::set<std::vector<NodeId>> expect{{0, 1, 2, 3, 4, 5}, {0, 6, 7}, {6, 11}, {1, 8, 14}, {2, 9}, {2, 13}, {3, 10, 15}};
  CHECK(oracle::path_set(d.paths) == expect);

  const int ell = default_chunk_length(16);
  CHECK(ell == 4);
  auto s = shorten(d, t, ell);
  check_partition(s, t);
  std::map<std::vector<NodeId>, int> level;
  for (std::size_t p = 0; p < s.paths.size(); ++p) level[s.paths[p]] = s.levels[p];
  CHECK(level.at({0, 1, 2, 3, 4}) == 1);
  CHECK(level.at({4, 5}) == 2);
  CHECK(level.at({0, 6, 7}) == 1);
  CHECK(level.at({1, 8, 14}) == 2);
  CHECK(level.at({3, 10, 15}) == 2);
  CHECK(level.at({6, 11}) == 2);
  CHECK(s.kind == DecompositionKind::kShortRefined);
}

TEST_CASE("shorten leaves short paths alone and rejects zero") {
  auto inst = sixteen();
  const auto& t = inst.trees()[0];
  auto d = heavy_path_decomposition(t);
  auto s = shorten(d, t, 5);
  CHECK(oracle::path_set(s.paths) == oracle::path_set(d.paths));
  CHECK(s.levels.size() == d.levels.size());
  CHECK_THROWS_AS(shorten(d, t, 0), std::invalid_argument);
}

TEST_CASE("complete binary trees") {
  for (int h = 2; h <= 8; ++h) {
    auto inst = complete_binary(h);
    const auto& t = inst.trees()[0];
    auto d = heavy_path_decomposition(t);
    check_partition(d, t);
    // Ties go left, so the all-right walk changes path on every edge.
    CHECK(walk_max(d, t) == h - 1);
    auto rd = rank_decomposition(t);
    CHECK(rd.rank[0] == h - 1);
    CHECK(rd.rank[0] == oracle::rank_of(oracle::children(t.to_spec()), t.root()));
    const int n = (1 << h) - 1;
    const int ell = ceil_log2(n);
    if (h >= 3) CHECK_FALSE(verify_short(d, t, ell, floor_log2(n) - 1).pass);
  }
}

TEST_CASE("single leaf has rank zero") {
  auto inst = MulticastInstance::from_spec({Graph(1, {}), {{0, 0, {}}}});
  auto rd = rank_decomposition(inst.trees()[0]);
  CHECK(rd.rank == std::vector<int>{0});
  CHECK(rd.decomposition.paths.empty());
}

TEST_CASE("random trees: crossing bounds, ranks and shortness") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    const int n = static_cast<int>(uniform_between(rng, 2, 1500));
    const double shape = static_cast<double>(uniform_below(rng, 101)) / 100.0;
    auto inst = gen_random_tree(n, shape, seed);
    const auto& t = inst.trees()[0];
    const int bound = floor_log2(n) + 1;

    auto h = heavy_path_decomposition(t);
    check_partition(h, t);
    CHECK(walk_max(h, t) <= bound);
    CHECK(verify_short(h, t, 1, 1).max_intersections == walk_max(h, t));

    auto rd = rank_decomposition(t);
    check_partition(rd.decomposition, t);
    CHECK(walk_max(rd.decomposition, t) <= bound);
    auto ch = oracle::children(t.to_spec());
    for (int l = 0; l < t.size(); ++l) {
      REQUIRE(rd.rank[l] == oracle::rank_of(ch, t.node(l)));
      CHECK((1 << rd.rank[l]) <= oracle::subtree_size(ch, t.node(l)));
    }
    // Below the root the heavy child continues its parent's path and is at
    // least as large as each sibling.
    for (int x = 1; x < t.size(); ++x) {
      int heavy = -1;
      for (int c : t.children_local(x))
        if (h.path_of[c] == h.path_of[x]) {
          REQUIRE(heavy < 0);
          heavy = c;
        }
      if (t.is_leaf_local(x)) continue;
      REQUIRE(heavy >= 0);
      for (int c : t.children_local(x)) CHECK(t.subtree_size_local(c) <= t.subtree_size_local(heavy));
    }

    const int ell = default_chunk_length(n);
    auto s = shorten(h, t, ell);
    check_partition(s, t);
    for (const auto& p : s.paths) CHECK(static_cast<int>(p.size()) - 1 <= ell);
    auto rep = verify_short(s, t, ell, ceil_log2(n) + 1);
    CHECK(rep.pass);
    CHECK(rep.max_intersections == walk_max(s, t));
  }
}
