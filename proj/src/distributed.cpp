#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

#include "mcast/congest.hpp"
#include "mcast/schedulers.hpp"
#include "mcast/util.hpp"

namespace mcast {

namespace {

// Values every node may use besides its own local view.
struct Shared {
  DistributedPhase phase = DistributedPhase::kSetup;
  int frame = 0;
  int step = 0;  // round index inside the preferred-edge phase
  int node_count = 0;
  int congestion = 0;
  int dilation = 0;
  int chunk = 1;
  int budget = 0;
  std::uint64_t seed = 0;
};

int offset_for(std::uint64_t seed, int tree_id, int range) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(tree_id)));
  return static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::max(1, range))));
}

// Common plumbing: per-neighbor outgoing bit queues and incoming buffers.
class FramedNode : public NodeProgram {
 public:
  FramedNode(NodeId id, const Graph& g, const Shared& shared) : id_(id), shared_(shared) {
    auto nb = g.neighbors(id);
    nbrs_.assign(nb.begin(), nb.end());
    out_.resize(nbrs_.size());
    in_.resize(nbrs_.size());
  }

  bool done() const override { return shared_.phase == DistributedPhase::kFinished; }
  bool has_pending() const {
    return std::any_of(out_.begin(), out_.end(), [](const Payload& p) { return !p.empty(); });
  }

 protected:
  int nbr_index(NodeId v) const {
    return static_cast<int>(std::lower_bound(nbrs_.begin(), nbrs_.end(), v) - nbrs_.begin());
  }
  void flush(Outbox& out) {
    for (std::size_t i = 0; i < nbrs_.size(); ++i)
      if (!out_[i].empty()) out.send(nbrs_[i], out_[i].take_front(shared_.budget));
  }

  NodeId id_;
  const Shared& shared_;
  std::vector<NodeId> nbrs_;
  std::vector<Payload> out_;
  std::vector<Payload> in_;
};

class DecompositionNode : public FramedNode {
 public:
  struct Slot {
    int tree_index = 0;
    int tree_id = 0;
    int x = 0;
    bool is_root = false;
    std::vector<int> tnbrs;  // neighbor indices
    std::vector<int> child_rank;
    int reports = 0;
    int max_child_height = -1;
    int height = -1;
    int rank = -1;
    int parent = -1;  // neighbor index
    int send_frame = -1;
    bool sent = false;
    int preferred = -1;  // neighbor index
    bool preferred_flag = false;
    int counter_in = -1;
    bool counters_sent = false;
  };

  DecompositionNode(NodeId id, const MulticastInstance& instance, const Shared& shared)
      : FramedNode(id, instance.graph(), shared) {
    const auto& g = instance.graph();
    edge_slots_.resize(nbrs_.size());
    for (int t = 0; t < instance.tree_count(); ++t) {
      const auto& tree = instance.trees()[t];
      int l = tree.local_of(id);
      if (l < 0 || tree.size() < 2) continue;
      Slot s;
      s.tree_index = t;
      s.tree_id = tree.id();
      s.x = offset_for(shared.seed, tree.id(), shared.congestion);
      s.is_root = l == 0;
      for (NodeId v : nbrs_) {
        int lv = tree.local_of(v);
        if (lv >= 0 && (tree.parent_local(lv) == l || tree.parent_local(l) == lv)) s.tnbrs.push_back(nbr_index(v));
      }
      s.child_rank.assign(nbrs_.size(), -1);
      slots_.push_back(std::move(s));
    }
    // Slot lists per neighbor are in ascending tree id; a tag is the position.
    std::vector<int> order(slots_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return slots_[a].tree_id < slots_[b].tree_id; });
    for (int s : order)
      for (int n : slots_[s].tnbrs) edge_slots_[n].push_back(s);
    expected_.resize(nbrs_.size());
    (void)g;
  }

  const std::vector<Slot>& slots() const { return slots_; }

  // A node of rank r has at least 2^(r+1) - 1 nodes below it, so ranks stay
  // below ceil(log2 n).
  int rank_bits() const { return std::max(1, bits_for(ceil_log2(std::max(2, shared_.node_count)))); }
  int counter_bits() const { return std::max(1, bits_for(shared_.chunk)); }
  int tag_bits(int n) const { return bits_for(static_cast<std::int64_t>(edge_slots_[n].size())); }

  void send(int, Outbox& out) override {
    switch (shared_.phase) {
      case DistributedPhase::kSetup: {
        const int w = std::max(1, ceil_log2(shared_.node_count));
        for (NodeId v : nbrs_) {
          Payload p;
          p.append(static_cast<std::uint64_t>(id_), w);
          out.send(v, std::move(p));
        }
        return;
      }
      case DistributedPhase::kPreferred:
        enqueue_preferred();
        flush(out);
        return;
      default:
        flush(out);
    }
  }

  void receive(int, NodeId from, const Payload& payload) override {
    const int n = nbr_index(from);
    switch (shared_.phase) {
      case DistributedPhase::kSetup:
        known_ids_.push_back(static_cast<NodeId>(payload.read(0, static_cast<int>(payload.size()))));
        return;
      case DistributedPhase::kPreferred:
        for (std::size_t i = 0; i < payload.size(); ++i) {
          if (expected_[n].empty()) throw std::logic_error("unexpected preferred-edge bit");
          slots_[expected_[n].front()].preferred_flag = payload.read(i, 1) != 0;
          expected_[n].pop_front();
        }
        return;
      default:
        in_[n].append(payload);
    }
  }

  // Called before each frame's first round.
  void begin_frame(int f) {
    if (shared_.phase == DistributedPhase::kRanks) {
      settle();
      for (std::size_t n = 0; n < nbrs_.size(); ++n) {
        for (std::size_t pos = 0; pos < edge_slots_[n].size(); ++pos) {
          Slot& s = slots_[edge_slots_[n][pos]];
          if (s.sent || s.parent != static_cast<int>(n) || s.send_frame != f) continue;
          out_[n].append(static_cast<std::uint64_t>(s.rank), rank_bits());
          out_[n].append(pos, tag_bits(static_cast<int>(n)));
          s.sent = true;
        }
      }
    } else if (shared_.phase == DistributedPhase::kCounters) {
      const int horizon = shared_.congestion - 1 + shared_.dilation;
      for (Slot& s : slots_) {
        if (s.counters_sent || (!s.is_root && s.counter_in < 0)) continue;
        const int target = horizon - s.x - s.height;
        if (f > target) throw std::logic_error("counter frame missed");
        if (f < target) continue;
        s.counters_sent = true;
      }
      for (std::size_t n = 0; n < nbrs_.size(); ++n) {
        for (std::size_t pos = 0; pos < edge_slots_[n].size(); ++pos) {
          Slot& s = slots_[edge_slots_[n][pos]];
          if (!s.counters_sent || s.child_rank[n] < 0 || horizon - s.x - s.height != f) continue;
          int c = 0;
          if (static_cast<int>(n) == s.preferred && !s.is_root) c = (s.counter_in + 1) % shared_.chunk;
          out_[n].append(static_cast<std::uint64_t>(c), counter_bits());
          out_[n].append(pos, tag_bits(static_cast<int>(n)));
        }
      }
    }
  }

  void end_frame(int f) {
    for (std::size_t n = 0; n < nbrs_.size(); ++n) {
      Payload& buf = in_[n];
      const int tb = tag_bits(static_cast<int>(n));
      const int vb = shared_.phase == DistributedPhase::kRanks ? rank_bits() : counter_bits();
      for (std::size_t pos = 0; pos < buf.size(); pos += vb + tb) {
        const int value = static_cast<int>(buf.read(pos, vb));
        const auto tag = buf.read(pos + vb, tb);
        if (tag >= edge_slots_[n].size()) throw std::logic_error("bad tag");
        Slot& s = slots_[edge_slots_[n][tag]];
        if (shared_.phase == DistributedPhase::kRanks) {
          if (s.child_rank[n] >= 0) throw std::logic_error("duplicate rank report");
          s.child_rank[n] = value;
          ++s.reports;
          s.max_child_height = std::max(s.max_child_height, f - s.x);
        } else {
          s.counter_in = value;
        }
      }
      buf = Payload();
    }
    if (shared_.phase == DistributedPhase::kRanks) settle();
  }

  bool ranks_done() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const Slot& s) {
      return s.is_root ? s.reports == static_cast<int>(s.tnbrs.size()) : s.sent;
    });
  }

  bool counters_done() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const Slot& s) { return s.is_root || s.counter_in >= 0; });
  }

  void choose_preferred() {
    for (Slot& s : slots_) {
      for (int n : s.tnbrs) {
        if (s.child_rank[n] < 0) continue;
        if (s.preferred < 0 || s.child_rank[n] > s.child_rank[s.preferred] ||
            (s.child_rank[n] == s.child_rank[s.preferred] && nbrs_[n] < nbrs_[s.preferred]))
          s.preferred = n;
      }
    }
  }

  bool preferred_drained() const {
    return !has_pending() && std::all_of(expected_.begin(), expected_.end(), [](const auto& q) { return q.empty(); });
  }

 private:
  // Fixes parent, height and rank once all but one neighbor reported.
  void settle() {
    for (Slot& s : slots_) {
      if (s.is_root) {
        if (s.reports == static_cast<int>(s.tnbrs.size()) && s.rank < 0) finish(s);
        continue;
      }
      if (s.parent >= 0 || s.reports + 1 != static_cast<int>(s.tnbrs.size())) continue;
      for (int n : s.tnbrs)
        if (s.child_rank[n] < 0) s.parent = n;
      finish(s);
      s.send_frame = s.x + s.height;
    }
  }

  void finish(Slot& s) {
    s.height = s.max_child_height + 1;
    int best = -1;
    int ties = 0;
    for (int n : s.tnbrs) {
      if (s.child_rank[n] < 0) continue;
      if (s.child_rank[n] > best) {
        best = s.child_rank[n];
        ties = 1;
      } else if (s.child_rank[n] == best) {
        ++ties;
      }
    }
    s.rank = best < 0 ? 0 : best + (ties > 1 ? 1 : 0);
  }

  void enqueue_preferred() {
    const int j = shared_.step;
    for (std::size_t n = 0; n < nbrs_.size(); ++n) {
      for (int si : edge_slots_[n]) {
        const Slot& s = slots_[si];
        if (s.x != j) continue;
        if (s.child_rank[n] >= 0) out_[n].append(static_cast<int>(n) == s.preferred ? 1 : 0, 1);
        if (s.parent == static_cast<int>(n)) expected_[n].push_back(si);
      }
    }
  }

  std::vector<Slot> slots_;
  std::vector<std::vector<int>> edge_slots_;
  std::vector<std::deque<int>> expected_;
  std::vector<NodeId> known_ids_;
};

template <typename Node>
std::vector<Node*> raw(const std::vector<std::unique_ptr<NodeProgram>>& programs) {
  std::vector<Node*> out;
  for (const auto& p : programs) out.push_back(static_cast<Node*>(p.get()));
  return out;
}

// Frame clock shared by the framed phases: a frame lasts until every queue
// drains (or a fixed number of rounds, extended on overflow).
struct FrameClock {
  std::optional<int> fixed;
  int rounds_in_frame = 0;
  int overflow = 0;
  bool overflowed = false;

  // True when the current frame should close after this round.
  bool tick(bool pending) {
    ++rounds_in_frame;
    if (pending) {
      if (fixed && rounds_in_frame >= *fixed && !overflowed) {
        overflowed = true;
        ++overflow;
      }
      return false;
    }
    if (fixed && rounds_in_frame < *fixed) return false;
    rounds_in_frame = 0;
    overflowed = false;
    return true;
  }
};

}  // namespace

DistributedDecomposition distributed_rank_decomposition(const MulticastInstance& instance,
                                                        const DistributedOptions& options) {
  const auto metrics = compute_metrics(instance);
  Shared sh;
  sh.node_count = instance.node_count();
  sh.congestion = std::max(1, metrics.congestion);
  sh.dilation = metrics.dilation;
  sh.chunk = ceil_log_power(sh.node_count, 1.0 + options.epsilon);
  sh.seed = options.seed;
  auto network = CongestNetwork::make(instance.graph(), options.bit_factor);
  sh.budget = network.bits_per_round;

  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (NodeId v = 0; v < instance.node_count(); ++v)
    programs.push_back(std::make_unique<DecompositionNode>(v, instance, sh));
  auto nodes = raw<DecompositionNode>(programs);
  auto any_pending = [&] {
    return std::any_of(nodes.begin(), nodes.end(), [](auto* n) { return n->has_pending(); });
  };

  DistributedDecomposition result;
  result.chunk_length = sh.chunk;
  FrameClock clock{options.fixed_frame_rounds};
  int phase_start = 0;
  auto enter = [&](DistributedPhase next, int round) {
    result.phase_rounds[sh.phase] = round - phase_start;
    phase_start = round;
    sh.phase = next;
    sh.frame = 0;
    sh.step = 0;
  };

  RunOptions run;
  run.keep_payloads = options.keep_payloads;
  const int bound = sh.congestion + sh.dilation + ceil_log2(std::max(2, sh.node_count));
  run.max_rounds = options.round_factor * 3 * bound + 64;
  run.after_round = [&](int round) {
    switch (sh.phase) {
      case DistributedPhase::kSetup:
        enter(DistributedPhase::kRanks, round);
        for (auto* n : nodes) n->begin_frame(0);
        return;
      case DistributedPhase::kRanks:
      case DistributedPhase::kCounters: {
        if (!clock.tick(any_pending())) return;
        for (auto* n : nodes) n->end_frame(sh.frame);
        if (sh.phase == DistributedPhase::kRanks &&
            std::all_of(nodes.begin(), nodes.end(), [](auto* n) { return n->ranks_done(); })) {
          for (auto* n : nodes) n->choose_preferred();
          enter(DistributedPhase::kPreferred, round);
          return;
        }
        if (sh.phase == DistributedPhase::kCounters &&
            std::all_of(nodes.begin(), nodes.end(), [](auto* n) { return n->counters_done(); })) {
          enter(DistributedPhase::kFinished, round);
          return;
        }
        ++sh.frame;
        for (auto* n : nodes) n->begin_frame(sh.frame);
        return;
      }
      case DistributedPhase::kPreferred:
        if (sh.step >= sh.congestion - 1 &&
            std::all_of(nodes.begin(), nodes.end(), [](auto* n) { return n->preferred_drained(); })) {
          enter(DistributedPhase::kCounters, round);
          for (auto* n : nodes) n->begin_frame(0);
          return;
        }
        ++sh.step;
        return;
      case DistributedPhase::kFinished:
        return;
    }
  };

  try {
    result.transcript = run_congest(network, programs, run);
  } catch (const CongestBudgetViolation& e) {
    throw DistributedFailure(std::string(to_string(sh.phase)) + " phase: " + e.what(), sh.phase);
  } catch (const CongestNonTermination& e) {
    throw DistributedFailure(std::string(to_string(sh.phase)) + " phase: " + e.what(), sh.phase);
  } catch (const std::logic_error& e) {
    throw DistributedFailure(std::string(to_string(sh.phase)) + " phase: " + e.what(), sh.phase);
  }
  result.rounds = result.transcript.rounds;
  result.overflow_frames = clock.overflow;

  // Read the outcome off the node states.
  for (int t = 0; t < instance.tree_count(); ++t) {
    const auto& tree = instance.trees()[t];
    std::vector<int> counter(tree.size(), -1);
    std::vector<int> rank(tree.size(), 0);
    for (int l = 0; l < tree.size(); ++l) {
      for (const auto& s : nodes[tree.node(l)]->slots()) {
        if (s.tree_index != t) continue;
        rank[l] = s.rank;
        counter[l] = s.counter_in;
      }
    }
    PathDecomposition d;
    d.kind = DecompositionKind::kShortRefined;
    d.path_of.assign(tree.size(), -1);
    for (int l = 1; l < tree.size(); ++l) {
      if (counter[l] != 0) continue;
      const int p = static_cast<int>(d.paths.size());
      std::vector<NodeId> path{tree.node(tree.parent_local(l)), tree.node(l)};
      d.path_of[l] = p;
      int cur = l;
      while (true) {
        int next = -1;
        for (int c : tree.children_local(cur))
          if (counter[c] > 0) next = c;
        if (next < 0) break;
        path.push_back(tree.node(next));
        d.path_of[next] = p;
        cur = next;
      }
      d.paths.push_back(std::move(path));
    }
    assign_levels(d, tree);
    result.decompositions.push_back(std::move(d));
    result.ranks.push_back(std::move(rank));
  }
  return result;
}

namespace {

class MulticastNode : public FramedNode {
 public:
  struct Slot {
    int tree_id = 0;
    int depth = 0;
    int frame = 0;
    std::uint64_t priority = 0;
    bool holds = false;
    std::vector<int> targets;  // neighbor indices still to serve
  };

  MulticastNode(NodeId id, const MulticastInstance& instance, const Shared& shared, int offset_range)
      : FramedNode(id, instance.graph(), shared) {
    edge_trees_.resize(nbrs_.size());
    for (const auto& tree : instance.trees()) {
      const int l = tree.local_of(id);
      if (l < 0 || tree.size() < 2) continue;
      Slot s;
      s.tree_id = tree.id();
      s.depth = tree.depth_local(l);
      s.frame = offset_for(shared.seed, tree.id(), offset_range) + s.depth / shared.chunk;
      s.priority = mix_seed(shared.seed ^ 0x7072696fULL, static_cast<std::uint64_t>(tree.id()));
      s.holds = l == 0;
      const int index = static_cast<int>(slots_.size());
      // Local knowledge: which incident edges belong to the tree.
      for (std::size_t n = 0; n < nbrs_.size(); ++n) {
        const int b = tree.local_of(nbrs_[n]);
        if (b >= 0 && (tree.parent_local(l) == b || tree.parent_local(b) == l)) edge_trees_[n].push_back(index);
      }
      slots_.push_back(std::move(s));
    }
    // Announce depth mod 3 per tree on each edge so both endpoints learn
    // the edge's orientation in every tree.
    for (std::size_t n = 0; n < nbrs_.size(); ++n) {
      std::sort(edge_trees_[n].begin(), edge_trees_[n].end(),
                [&](int a, int b) { return slots_[a].tree_id < slots_[b].tree_id; });
      for (int si : edge_trees_[n]) out_[n].append(static_cast<std::uint64_t>(slots_[si].depth % 3), 2);
    }
    two_way_.assign(nbrs_.size(), false);
  }

  bool has_tree_edges() const {
    return std::any_of(edge_trees_.begin(), edge_trees_.end(), [](const auto& v) { return !v.empty(); });
  }

  void end_orientation() {
    for (std::size_t n = 0; n < nbrs_.size(); ++n) {
      bool down = false;
      bool up = false;
      for (std::size_t i = 0; i < edge_trees_[n].size(); ++i) {
        Slot& s = slots_[edge_trees_[n][i]];
        const int theirs = static_cast<int>(in_[n].read(2 * i, 2));
        if ((theirs - s.depth % 3 + 3) % 3 == 1) {
          s.targets.push_back(static_cast<int>(n));
          down = true;
        } else {
          up = true;
        }
      }
      two_way_[n] = down && up;
      in_[n] = Payload();
    }
  }

  bool can_send() const {
    return std::any_of(slots_.begin(), slots_.end(), [&](const Slot& s) {
      return s.holds && s.frame == shared_.frame && !s.targets.empty();
    });
  }
  bool finished() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const Slot& s) { return s.targets.empty(); });
  }
  int late_slots() const {
    int late = 0;
    for (const auto& s : slots_)
      if (!s.targets.empty() && s.frame <= shared_.frame) ++late;
    return late;
  }

  void send(int round, Outbox& out) override {
    if (shared_.phase == DistributedPhase::kSetup) {
      flush(out);
      return;
    }
    const int word = std::max(1, ceil_log2(shared_.node_count));
    for (std::size_t n = 0; n < nbrs_.size(); ++n) {
      // An edge used in both directions is time-shared by round parity so
      // the two endpoints never send over it in the same round.
      if (two_way_[n] && (round + (id_ < nbrs_[n] ? 0 : 1)) % 2 != 0) continue;
      Slot* best = nullptr;
      for (int si : edge_trees_[n]) {
        Slot& s = slots_[si];
        if (!s.holds || s.frame != shared_.frame) continue;
        if (std::find(s.targets.begin(), s.targets.end(), static_cast<int>(n)) == s.targets.end()) continue;
        if (!best || std::tie(s.priority, s.tree_id) < std::tie(best->priority, best->tree_id)) best = &s;
      }
      if (!best) continue;
      std::erase(best->targets, static_cast<int>(n));
      const auto& ids = edge_trees_[n];
      const auto tag = std::find(ids.begin(), ids.end(), static_cast<int>(best - slots_.data())) - ids.begin();
      Payload p;
      p.append(static_cast<std::uint64_t>(tag), bits_for(static_cast<std::int64_t>(ids.size())));
      p.append(static_cast<std::uint64_t>(best->tree_id) % (std::uint64_t{1} << word), word);
      out.send(nbrs_[n], std::move(p));
      sends.push_back({round, id_, nbrs_[n], best->tree_id});
    }
  }

  void receive(int, NodeId from, const Payload& payload) override {
    const int n = nbr_index(from);
    if (shared_.phase == DistributedPhase::kSetup) {
      in_[n].append(payload);
      return;
    }
    const auto& ids = edge_trees_[n];
    const auto tag = payload.read(0, bits_for(static_cast<std::int64_t>(ids.size())));
    slots_[ids.at(tag)].holds = true;
  }

  std::vector<Send> sends;

 private:
  std::vector<Slot> slots_;
  std::vector<std::vector<int>> edge_trees_;  // slot indices per neighbor, by tree id
  std::vector<bool> two_way_;
};

}  // namespace

DistributedMulticast distributed_multicast(const MulticastInstance& instance, const DistributedOptions& options,
                                           bool depths_known) {
  const auto metrics = compute_metrics(instance);
  DistributedMulticast result;
  if (!depths_known) {
    auto dec = distributed_rank_decomposition(instance, options);
    FrameAssignment a;
    a.chunk_length = dec.chunk_length;
    a.decompositions = std::move(dec.decompositions);
    a.offset.assign(instance.tree_count(), 0);
    apply_offsets(a, a.offset);
    assign_offsets(a, metrics.congestion, options.seed);
    auto fs = schedule_frames(instance, a, options.seed, false);
    result.setup_rounds = dec.rounds;
    result.chunk_length = dec.chunk_length;
    result.schedule = std::move(fs.schedule);
    result.rounds = dec.rounds + result.schedule.length;
    result.frame_count = fs.assignment.frame_count;
    result.max_frame_congestion = max_frame_congestion(instance, fs.assignment);
    result.overflow_frames = dec.overflow_frames;
    result.transcript = std::move(dec.transcript);
    return result;
  }

  Shared sh;
  sh.node_count = instance.node_count();
  sh.congestion = std::max(1, metrics.congestion);
  sh.dilation = metrics.dilation;
  sh.chunk = ceil_log_power(sh.node_count, 2.0 + options.epsilon);
  sh.seed = options.seed;
  sh.phase = DistributedPhase::kSetup;
  auto network = CongestNetwork::make(instance.graph(), options.bit_factor);
  sh.budget = network.bits_per_round;
  const int range = static_cast<int>(ceil_div(sh.congestion, sh.chunk));

  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (NodeId v = 0; v < instance.node_count(); ++v)
    programs.push_back(std::make_unique<MulticastNode>(v, instance, sh, range));
  auto nodes = raw<MulticastNode>(programs);
  if (std::none_of(nodes.begin(), nodes.end(), [](auto* n) { return n->has_tree_edges(); }))
    sh.phase = DistributedPhase::kFinished;

  FrameClock clock{options.fixed_frame_rounds};
  RunOptions run;
  run.keep_payloads = options.keep_payloads;
  const int bound = sh.congestion + sh.dilation + ceil_log2(std::max(2, sh.node_count));
  run.max_rounds = options.round_factor * bound + 64;
  run.after_round = [&](int round) {
    if (sh.phase == DistributedPhase::kSetup) {
      if (std::any_of(nodes.begin(), nodes.end(), [](auto* n) { return n->has_pending(); })) return;
      for (auto* n : nodes) n->end_orientation();
      sh.phase = DistributedPhase::kRanks;
      result.setup_rounds = round;
      return;
    }
    const bool pending = std::any_of(nodes.begin(), nodes.end(), [](auto* n) { return n->can_send(); });
    if (!clock.tick(pending)) return;
    if (std::all_of(nodes.begin(), nodes.end(), [](auto* n) { return n->finished(); })) {
      sh.phase = DistributedPhase::kFinished;
      return;
    }
    for (auto* n : nodes)
      if (n->late_slots() > 0) throw std::logic_error("message missed its frame");
    ++sh.frame;
  };

  try {
    result.transcript = run_congest(network, programs, run);
  } catch (const CongestBudgetViolation& e) {
    throw DistributedFailure(std::string("multicast: ") + e.what(), DistributedPhase::kRanks);
  } catch (const CongestNonTermination& e) {
    throw DistributedFailure(std::string("multicast: ") + e.what(), DistributedPhase::kRanks);
  } catch (const std::logic_error& e) {
    throw DistributedFailure(std::string("multicast: ") + e.what(), DistributedPhase::kRanks);
  }

  std::map<std::pair<int, int>, int> per_frame_edge;
  for (auto* n : nodes) {
    for (Send s : n->sends) {
      s.round -= result.setup_rounds;
      result.schedule.sends.push_back(s);
    }
  }
  result.schedule.normalize();
  result.rounds = result.transcript.rounds;
  result.chunk_length = sh.chunk;
  result.frame_count = sh.frame + 1;
  result.overflow_frames = clock.overflow;
  // Frame of each send, reconstructed from the sender's view.
  for (const auto& tree : instance.trees()) {
    const int x = offset_for(sh.seed, tree.id(), range);
    for (int l = 1; l < tree.size(); ++l) {
      const int f = x + tree.depth_local(tree.parent_local(l)) / sh.chunk;
      result.max_frame_congestion =
          std::max(result.max_frame_congestion, ++per_frame_edge[{f, tree.edge_id_local(l)}]);
    }
  }
  return result;
}

}  // namespace mcast
