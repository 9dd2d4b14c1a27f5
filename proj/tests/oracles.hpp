#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They work from the plain specs with maps and sets and share no code with
// the library beyond the data types.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mcast/instance.hpp"
#include "mcast/schedule.hpp"

namespace oracle {

using mcast::InstanceSpec;
using mcast::NodeId;
using mcast::Schedule;

inline int tree_depth(const mcast::TreeSpec& t) {
  int best = 0;
  for (auto [child, p] : t.parent) {
    int d = 0;
    for (NodeId x = child; x != t.root; x = t.parent.at(x)) ++d;
    best = std::max(best, d);
  }
  return best;
}

struct Metrics {
  int congestion = 0;
  int dilation = 0;
};

inline Metrics metrics(const InstanceSpec& spec) {
  std::map<std::pair<NodeId, NodeId>, int> count;
  Metrics m;
  for (const auto& t : spec.trees) {
    for (auto [c, p] : t.parent) m.congestion = std::max(m.congestion, ++count[{std::min(c, p), std::max(c, p)}]);
    m.dilation = std::max(m.dilation, tree_depth(t));
  }
  return m;
}

// Round-by-round replay with knowledge sets. Returns the round after which
// every tree node holds its message, or nothing if the schedule breaks a
// rule or leaves someone uninformed.
inline std::optional<int> replay(const InstanceSpec& spec, const Schedule& s) {
  std::map<int, const mcast::TreeSpec*> by_id;
  for (const auto& t : spec.trees) by_id[t.id] = &t;
  std::map<NodeId, std::set<int>> know;
  for (const auto& t : spec.trees) know[t.root].insert(t.id);
  std::map<int, std::vector<mcast::Send>> rounds;
  for (const auto& x : s.sends) rounds[x.round].push_back(x);
  int last = 0;
  for (auto& [r, sends] : rounds) {
    if (r < 1) return std::nullopt;
    std::set<std::pair<NodeId, NodeId>> used;
    std::vector<std::pair<NodeId, int>> gained;
    for (const auto& x : sends) {
      auto it = by_id.find(x.message);
      if (it == by_id.end()) return std::nullopt;
      const auto& par = it->second->parent;
      bool tree_edge = (par.count(x.to) && par.at(x.to) == x.from) || (par.count(x.from) && par.at(x.from) == x.to);
      if (!tree_edge) return std::nullopt;
      if (!used.insert({std::min(x.from, x.to), std::max(x.from, x.to)}).second) return std::nullopt;
      if (!know[x.from].count(x.message)) return std::nullopt;
      gained.emplace_back(x.to, x.message);
    }
    for (auto [v, m] : gained) know[v].insert(m);
    last = r;
  }
  int done = 0;
  for (const auto& t : spec.trees)
    for (auto [c, p] : t.parent)
      if (!know[c].count(t.id)) return std::nullopt;
  done = last;
  return done;
}

// Per-tree children lists from a spec tree.
inline std::map<NodeId, std::vector<NodeId>> children(const mcast::TreeSpec& t) {
  std::map<NodeId, std::vector<NodeId>> ch;
  ch[t.root];
  for (auto [c, p] : t.parent) {
    ch[p].push_back(c);
    ch[c];
  }
  for (auto& [v, list] : ch) std::sort(list.begin(), list.end());
  return ch;
}

inline int rank_of(const std::map<NodeId, std::vector<NodeId>>& ch, NodeId v) {
  const auto& kids = ch.at(v);
  if (kids.empty()) return 0;
  std::vector<int> r;
  for (NodeId c : kids) r.push_back(rank_of(ch, c));
  std::sort(r.rbegin(), r.rend());
  return r.size() > 1 && r[0] == r[1] ? r[0] + 1 : r[0];
}

inline int subtree_size(const std::map<NodeId, std::vector<NodeId>>& ch, NodeId v) {
  int s = 1;
  for (NodeId c : ch.at(v)) s += subtree_size(ch, c);
  return s;
}

// Edge count of the recursive lower-bound construction, evaluated by
// literally counting: top-level edges plus the edges of each sub-instance.
inline long long lowerbound_edges(int c, int d) {
  if (d == 1) return 1;
  long long b = 1;
  for (int i = 1; i <= c / 2; ++i) b = b * (c - c / 2 + i) / i;
  long long pairs = 1LL << (d - 2);
  long long subinstances = 1;
  for (long long i = 0; i < 2 * pairs; ++i) subinstances *= b;
  return 2 * pairs + subinstances * lowerbound_edges(c, d - 1);
}

// Paths as sets of edges, for order-insensitive comparison.
inline std::set<std::vector<NodeId>> path_set(const std::vector<std::vector<NodeId>>& paths) {
  return {paths.begin(), paths.end()};
}

}  // namespace oracle

namespace oracle {

// Largest number of distinct paths met by a root-to-leaf walk. Paths are
// node sequences running away from the root, so a walk meets a path on one
// contiguous stretch and it suffices to count path changes along the walk.
inline int walk_max(const std::vector<std::vector<NodeId>>& paths, const mcast::TreeSpec& t) {
  std::map<NodeId, int> path_into;  // child -> path holding its parent edge
  for (int p = 0; p < static_cast<int>(paths.size()); ++p)
    for (std::size_t i = 1; i < paths[p].size(); ++i) path_into[paths[p][i]] = p;
  auto ch = children(t);
  std::map<NodeId, int> met;
  met[t.root] = 0;
  std::vector<NodeId> stack{t.root};
  int best = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId c : ch.at(v)) {
      bool same = v != t.root && path_into.at(v) == path_into.at(c);
      met[c] = met[v] + (same ? 0 : 1);
      best = std::max(best, met[c]);
      stack.push_back(c);
    }
  }
  return best;
}

}  // namespace oracle
