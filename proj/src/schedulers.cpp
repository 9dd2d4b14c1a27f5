#include "mcast/schedulers.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "mcast/util.hpp"

namespace mcast {

namespace {

struct Pending {
  std::uint64_t key;
  int tree;
  int child;
  bool operator>(const Pending& o) const { return std::tie(key, tree, child) > std::tie(o.key, o.tree, o.child); }
};

using EdgeQueue = std::priority_queue<Pending, std::vector<Pending>, std::greater<>>;

/// Forwards messages down their trees, one packet per edge per round,
/// picking the smallest key on every edge. `release[t]` is the first round
/// in which tree t's root may send.
template <typename KeyFn>
Schedule forward_by_priority(const MulticastInstance& instance, const std::vector<int>& release, KeyFn key) {
  const int edges = instance.graph().edge_count();
  std::vector<EdgeQueue> queue(edges);
  std::set<int> active;
  std::vector<std::vector<int>> released_at;
  for (int t = 0; t < instance.tree_count(); ++t) {
    const int r = release[t];
    if (static_cast<int>(released_at.size()) <= r) released_at.resize(r + 1);
    released_at[r].push_back(t);
  }
  std::size_t remaining = 0;
  for (const auto& tree : instance.trees()) remaining += tree.edge_count();

  auto enqueue_children = [&](int t, int local) {
    const auto& tree = instance.trees()[t];
    for (int c : tree.children_local(local)) {
      const int e = tree.edge_id_local(c);
      queue[e].push({key(t, c), t, c});
      active.insert(e);
    }
  };

  Schedule schedule;
  std::vector<std::pair<int, int>> delivered;
  for (int round = 1; remaining > 0; ++round) {
    if (round < static_cast<int>(released_at.size()))
      for (int t : released_at[round]) enqueue_children(t, 0);
    delivered.clear();
    for (auto it = active.begin(); it != active.end();) {
      auto& q = queue[*it];
      Pending p = q.top();
      q.pop();
      const auto& tree = instance.trees()[p.tree];
      schedule.sends.push_back({round, tree.node(tree.parent_local(p.child)), tree.node(p.child), tree.id()});
      delivered.emplace_back(p.tree, p.child);
      it = q.empty() ? active.erase(it) : std::next(it);
    }
    remaining -= delivered.size();
    for (auto [t, c] : delivered) enqueue_children(t, c);
  }
  schedule.normalize();
  return schedule;
}

}  // namespace

Schedule greedy_schedule(const MulticastInstance& instance) {
  std::vector<int> release(instance.tree_count(), 1);
  return forward_by_priority(instance, release, [&](int t, int c) {
    const auto& tree = instance.trees()[t];
    // Deepest remaining subtree first.
    const std::uint64_t urgency = static_cast<std::uint64_t>(0x7fffffff - tree.height_local(c));
    return (urgency << 32) | static_cast<std::uint32_t>(tree.id());
  });
}

Schedule random_delay_schedule(const MulticastInstance& instance, std::uint64_t seed) {
  const int congestion = compute_metrics(instance).congestion;
  Rng rng(mix_seed(seed, 0x64656c61));
  std::vector<int> delay(instance.tree_count());
  for (auto& d : delay) d = static_cast<int>(uniform_below(rng, std::max(1, congestion)));
  const int shift = delay.empty() ? 0 : *std::min_element(delay.begin(), delay.end());
  std::vector<int> release(delay.size());
  for (std::size_t t = 0; t < delay.size(); ++t) release[t] = delay[t] - shift + 1;
  return forward_by_priority(instance, release, [&](int t, int c) {
    const auto& tree = instance.trees()[t];
    const auto when = static_cast<std::uint64_t>(release[t] + tree.depth_local(tree.parent_local(c)));
    return (when << 32) | static_cast<std::uint32_t>(tree.id());
  });
}

Schedule unicast_frame_schedule(std::span<const FramePath> paths, const Graph& graph, std::uint64_t seed) {
  const int count = static_cast<int>(paths.size());
  std::vector<std::vector<int>> hop_edge(count);
  std::vector<int> load(graph.edge_count(), 0);
  int congestion = 0;
  for (int i = 0; i < count; ++i) {
    const auto& nodes = paths[i].nodes;
    for (std::size_t h = 0; h + 1 < nodes.size(); ++h) {
      const int e = graph.edge_id(nodes[h], nodes[h + 1]);
      if (e < 0)
        throw std::invalid_argument("path uses missing edge (" + std::to_string(nodes[h]) + "," +
                                    std::to_string(nodes[h + 1]) + ")");
      hop_edge[i].push_back(e);
      congestion = std::max(congestion, ++load[e]);
    }
  }
  Rng rng(mix_seed(seed, 0x756e6963));
  std::vector<int> delay(count);
  for (auto& d : delay) d = static_cast<int>(uniform_below(rng, std::max(1, congestion)));

  std::vector<int> position(count, 0);
  std::vector<int> live;
  for (int i = 0; i < count; ++i)
    if (!hop_edge[i].empty()) live.push_back(i);
  std::vector<int> best(graph.edge_count(), -1);
  std::vector<int> touched;
  Schedule schedule;
  for (int round = 1; !live.empty(); ++round) {
    auto better = [&](int a, int b) {
      const bool ra = delay[a] < round, rb = delay[b] < round;
      if (ra != rb) return ra;
      const int ga = static_cast<int>(hop_edge[a].size()) - position[a];
      const int gb = static_cast<int>(hop_edge[b].size()) - position[b];
      if (ga != gb) return ga > gb;
      if (delay[a] != delay[b]) return delay[a] < delay[b];
      return a < b;
    };
    touched.clear();
    for (int i : live) {
      const int e = hop_edge[i][position[i]];
      if (best[e] < 0) {
        best[e] = i;
        touched.push_back(e);
      } else if (better(i, best[e])) {
        best[e] = i;
      }
    }
    for (int e : touched) {
      const int i = best[e];
      best[e] = -1;
      const auto& nodes = paths[i].nodes;
      schedule.sends.push_back({round, nodes[position[i]], nodes[position[i] + 1], paths[i].message});
      ++position[i];
    }
    std::erase_if(live, [&](int i) { return position[i] == static_cast<int>(hop_edge[i].size()); });
  }
  schedule.normalize();
  return schedule;
}

FrameAssignment plan_frames(const MulticastInstance& instance, int chunk_length) {
  if (chunk_length < 1) throw std::invalid_argument("chunk length must be >= 1");
  FrameAssignment a;
  a.chunk_length = chunk_length;
  a.decompositions.reserve(instance.tree_count());
  for (const auto& tree : instance.trees())
    a.decompositions.push_back(shorten(heavy_path_decomposition(tree), tree, chunk_length));
  a.offset.assign(instance.tree_count(), 0);
  apply_offsets(a, a.offset);
  return a;
}

void apply_offsets(FrameAssignment& a, std::vector<int> offsets) {
  if (offsets.size() != a.decompositions.size())
    throw std::invalid_argument("expected one offset per tree");
  a.offset = std::move(offsets);
  a.frame_of.assign(a.decompositions.size(), {});
  a.frame_count = 0;
  for (std::size_t t = 0; t < a.decompositions.size(); ++t) {
    const auto& levels = a.decompositions[t].levels;
    auto& frames = a.frame_of[t];
    frames.resize(levels.size());
    for (std::size_t p = 0; p < levels.size(); ++p) {
      frames[p] = levels[p] + a.offset[t];
      a.frame_count = std::max(a.frame_count, frames[p]);
    }
  }
}

void assign_offsets(FrameAssignment& a, int congestion, std::uint64_t seed) {
  const auto range = std::max<std::int64_t>(1, ceil_div(congestion, a.chunk_length));
  Rng rng(mix_seed(seed, 0x6f666673));
  std::vector<int> offsets(a.decompositions.size());
  for (auto& x : offsets) x = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(range)));
  apply_offsets(a, std::move(offsets));
}

FrameSchedule schedule_frames(const MulticastInstance& instance, FrameAssignment assignment, std::uint64_t seed,
                              bool pad_frames) {
  FrameSchedule out;
  const int frames = assignment.frame_count;
  std::vector<std::vector<std::pair<int, int>>> chunks(frames + 1);
  for (int t = 0; t < instance.tree_count(); ++t)
    for (std::size_t p = 0; p < assignment.frame_of[t].size(); ++p)
      chunks[assignment.frame_of[t][p]].emplace_back(t, static_cast<int>(p));

  std::vector<std::vector<char>> holds(instance.tree_count());
  for (int t = 0; t < instance.tree_count(); ++t) {
    holds[t].assign(instance.trees()[t].size(), 0);
    holds[t][0] = 1;
  }
  std::vector<Schedule> inner(frames + 1);
  std::vector<FramePath> batch;
  for (int f = 1; f <= frames; ++f) {
    batch.clear();
    for (auto [t, p] : chunks[f]) {
      const auto& tree = instance.trees()[t];
      const auto& nodes = assignment.decompositions[t].paths[p];
      if (!holds[t][tree.local_of(nodes.front())])
        throw std::logic_error("frame " + std::to_string(f) + ": chunk of tree " + std::to_string(tree.id()) +
                               " starts at a node without the message");
      batch.push_back({tree.id(), nodes});
    }
    inner[f] = unicast_frame_schedule(batch, instance.graph(), mix_seed(seed, static_cast<std::uint64_t>(f)));
    for (auto [t, p] : chunks[f]) {
      const auto& tree = instance.trees()[t];
      for (NodeId v : assignment.decompositions[t].paths[p]) holds[t][tree.local_of(v)] = 1;
    }
  }
  int pad = 0;
  for (int f = 1; f <= frames; ++f) pad = std::max(pad, inner[f].length);
  int base = 0;
  out.frame_lengths.reserve(frames);
  for (int f = 1; f <= frames; ++f) {
    for (auto s : inner[f].sends) {
      s.round += base;
      out.schedule.sends.push_back(s);
    }
    const int len = pad_frames ? pad : inner[f].length;
    out.frame_lengths.push_back(len);
    base += len;
  }
  out.schedule.normalize();
  out.assignment = std::move(assignment);
  return out;
}

FrameSchedule frame_multicast_schedule(const MulticastInstance& instance, std::uint64_t seed,
                                       const FrameOptions& options) {
  const int chunk = options.chunk_length.value_or(default_chunk_length(instance.node_count()));
  auto assignment = plan_frames(instance, chunk);
  if (options.forced_offsets) {
    apply_offsets(assignment, *options.forced_offsets);
  } else {
    assign_offsets(assignment, compute_metrics(instance).congestion, seed);
  }
  return schedule_frames(instance, std::move(assignment), seed, options.pad_frames);
}

namespace {

std::vector<std::pair<int, int>> frame_edge_pairs(const MulticastInstance& instance, const FrameAssignment& a) {
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < instance.tree_count(); ++t) {
    const auto& tree = instance.trees()[t];
    const auto& d = a.decompositions[t];
    for (int l = 1; l < tree.size(); ++l) pairs.emplace_back(a.frame_of[t][d.path_of[l]], tree.edge_id_local(l));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

FrameCongestionProfile frame_congestion_profile(const MulticastInstance& instance, const FrameAssignment& a) {
  FrameCongestionProfile profile;
  const auto pairs = frame_edge_pairs(instance, a);
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    const int count = static_cast<int>(j - i);
    profile.counts.emplace_back(pairs[i].first, pairs[i].second, count);
    profile.max_frame_congestion = std::max(profile.max_frame_congestion, count);
    i = j;
  }
  for (const auto& d : a.decompositions)
    for (std::size_t p = 0; p < d.paths.size(); ++p)
      profile.max_frame_dilation = std::max(profile.max_frame_dilation, d.path_length(static_cast<int>(p)));
  return profile;
}

int max_frame_congestion(const MulticastInstance& instance, const FrameAssignment& a) {
  // Per edge, count trees per frame; trees touch each edge once.
  int best = 0;
  std::vector<int> frames;
  const auto& on_edge = instance.trees_on_edge();
  std::vector<std::vector<int>> frame_on_edge(on_edge.size());
  for (int t = 0; t < instance.tree_count(); ++t) {
    const auto& tree = instance.trees()[t];
    const auto& d = a.decompositions[t];
    for (int l = 1; l < tree.size(); ++l) frame_on_edge[tree.edge_id_local(l)].push_back(a.frame_of[t][d.path_of[l]]);
  }
  for (auto& list : frame_on_edge) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size();) {
      std::size_t j = i;
      while (j < list.size() && list[j] == list[i]) ++j;
      best = std::max(best, static_cast<int>(j - i));
      i = j;
    }
  }
  return best;
}

SeedSearchFailed::SeedSearchFailed(std::uint64_t seed, int congestion, int budget)
    : std::runtime_error("no seed met congestion budget " + std::to_string(budget) + "; best seed " +
                         std::to_string(seed) + " reached " + std::to_string(congestion)),
      best_seed(seed),
      best_congestion(congestion) {}

DeterministicSchedule deterministic_schedule(const MulticastInstance& instance, int congestion_budget,
                                             std::uint64_t seed_cap, std::optional<int> chunk_length) {
  if (congestion_budget < 1) throw std::invalid_argument("congestion budget must be >= 1");
  const int chunk = chunk_length.value_or(default_chunk_length(instance.node_count()));
  const int congestion = compute_metrics(instance).congestion;
  auto plan = plan_frames(instance, chunk);
  std::uint64_t best_seed = 0;
  int best = -1;
  for (std::uint64_t s = 0; s < seed_cap; ++s) {
    assign_offsets(plan, congestion, s);
    const int value = max_frame_congestion(instance, plan);
    if (best < 0 || value < best) {
      best = value;
      best_seed = s;
    }
    if (value <= congestion_budget) return {schedule_frames(instance, std::move(plan), s), s};
  }
  throw SeedSearchFailed(best_seed, best, congestion_budget);
}

}  // namespace mcast
