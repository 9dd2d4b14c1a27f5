#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "mcast/lowerbound.hpp"

namespace mcast {

namespace {

using State = std::vector<std::uint32_t>;  // per tree, bitmask over local nodes

bool subset_of(const State& a, const State& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] & ~b[i]) != 0) return false;
  return true;
}

}  // namespace

std::optional<int> exhaustive_opt(const MulticastInstance& instance, int horizon, const ExhaustiveLimits& limits) {
  const auto& trees = instance.trees();
  std::vector<int> used_edges;
  for (int e = 0; e < instance.graph().edge_count(); ++e)
    if (!instance.trees_on_edge()[e].empty()) used_edges.push_back(e);
  if (static_cast<int>(used_edges.size()) > limits.max_edges) throw std::invalid_argument("exhaustive search: too many edges");
  if (instance.tree_count() > limits.max_messages) throw std::invalid_argument("exhaustive search: too many messages");
  if (horizon > limits.max_horizon) throw std::invalid_argument("exhaustive search: horizon too large");

  // For each used edge, the (tree, parent local, child local) crossings.
  struct Crossing {
    int tree;
    int parent;
    int child;
  };
  std::vector<std::vector<Crossing>> crossings;
  for (int e : used_edges) {
    const Edge& edge = instance.graph().edge(e);
    std::vector<Crossing> cs;
    for (int t : instance.trees_on_edge()[e]) {
      int a = trees[t].local_of(edge.u);
      int b = trees[t].local_of(edge.v);
      if (trees[t].parent_local(b) == a)
        cs.push_back({t, a, b});
      else
        cs.push_back({t, b, a});
    }
    crossings.push_back(std::move(cs));
  }

  State start(trees.size());
  State goal(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    start[t] = 1u;
    goal[t] = trees[t].size() >= 32 ? ~0u : (1u << trees[t].size()) - 1;
  }
  if (start == goal) return 0;

  // Rounds still needed: the deepest missing node below its nearest known
  // ancestor, and per edge the number of crossings still pending.
  auto lower_bound = [&](const State& s) {
    int lb = 0;
    for (std::size_t t = 0; t < trees.size(); ++t) {
      const auto& tree = trees[t];
      std::vector<int> gap(tree.size(), 0);
      for (int l = 1; l < tree.size(); ++l) {
        if (s[t] >> l & 1u) continue;
        gap[l] = gap[tree.parent_local(l)] + 1;
        lb = std::max(lb, gap[l]);
      }
    }
    for (const auto& cs : crossings) {
      int pending = 0;
      for (const auto& c : cs)
        if (!(s[c.tree] >> c.child & 1u)) ++pending;
      lb = std::max(lb, pending);
    }
    return lb;
  };

  std::vector<State> frontier{start};
  for (int round = 1; round <= horizon; ++round) {
    std::set<State> next;
    for (const State& s : frontier) {
      // Useful options per edge; an edge with options never idles.
      std::vector<std::vector<int>> options;
      for (const auto& cs : crossings) {
        std::vector<int> opt;
        for (int i = 0; i < static_cast<int>(cs.size()); ++i)
          if ((s[cs[i].tree] >> cs[i].parent & 1u) && !(s[cs[i].tree] >> cs[i].child & 1u)) opt.push_back(i);
        if (!opt.empty()) options.push_back(std::move(opt));
        else options.emplace_back();
      }
      std::vector<int> pick(options.size(), 0);
      while (true) {
        State n = s;
        for (std::size_t e = 0; e < options.size(); ++e) {
          if (options[e].empty()) continue;
          const auto& c = crossings[e][options[e][pick[e]]];
          n[c.tree] |= 1u << c.child;
        }
        if (n == goal) return round;
        if (round + lower_bound(n) <= horizon) next.insert(std::move(n));
        std::size_t i = 0;
        while (i < options.size()) {
          if (options[i].empty()) {
            ++i;
            continue;
          }
          if (++pick[i] < static_cast<int>(options[i].size())) break;
          pick[i] = 0;
          ++i;
        }
        if (i == options.size()) break;
      }
    }
    frontier.clear();
    std::vector<State> all(next.begin(), next.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < all.size() && !dominated; ++j)
        dominated = j != i && subset_of(all[i], all[j]) && (all[i] != all[j]);
      if (!dominated) frontier.push_back(all[i]);
    }
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

}  // namespace mcast
