#include "mcast/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcast {

void Schedule::normalize() {
  std::sort(sends.begin(), sends.end());
  length = sends.empty() ? 0 : sends.back().round;
}

const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kSenderLacksMessage: return "sender-lacks-message";
    case Violation::Kind::kEdgeNotInTree: return "edge-not-in-tree";
    case Violation::Kind::kCapacity: return "capacity";
    case Violation::Kind::kUnknownMessage: return "unknown-message";
    case Violation::Kind::kBadRound: return "bad-round";
    case Violation::Kind::kLengthMismatch: return "length-mismatch";
  }
  return "?";
}

namespace {

struct Replay {
  std::vector<std::vector<int>> received;
  std::vector<Violation> violations;
  int redundant = 0;
};

Replay replay(const MulticastInstance& instance, const Schedule& schedule, int last_round) {
  using Kind = Violation::Kind;
  Replay out;
  out.received.resize(instance.tree_count());
  for (int t = 0; t < instance.tree_count(); ++t) {
    out.received[t].assign(instance.trees()[t].size(), kNever);
    out.received[t][0] = 0;
  }
  std::vector<int> order(schedule.sends.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return schedule.sends[a].round < schedule.sends[b].round; });

  const Graph& g = instance.graph();
  std::vector<int> edge_last_round(g.edge_count(), 0);
  std::vector<std::pair<int, int>> pending;  // (tree index, local) delivered at end of round
  int current = -1;
  auto flush = [&](int round) {
    for (auto [t, l] : pending)
      if (out.received[t][l] == kNever) out.received[t][l] = round;
    pending.clear();
  };
  for (int idx : order) {
    const Send& s = schedule.sends[idx];
    if (s.round > last_round) break;
    if (s.round != current) {
      flush(current);
      current = s.round;
    }
    if (s.round < 1 || s.round > schedule.length) {
      out.violations.push_back({Kind::kBadRound, s.round, s, "round outside [1, length]"});
      continue;
    }
    const int t = instance.tree_index(s.message);
    if (t < 0) {
      out.violations.push_back({Kind::kUnknownMessage, s.round, s, "no tree with this id"});
      continue;
    }
    const auto& tree = instance.trees()[t];
    const int lf = tree.local_of(s.from);
    const int lt = tree.local_of(s.to);
    const bool tree_edge = lf >= 0 && lt >= 0 &&
                           (tree.parent_local(lt) == lf || tree.parent_local(lf) == lt);
    if (!tree_edge) {
      out.violations.push_back({Kind::kEdgeNotInTree, s.round, s, "edge not in the message's tree"});
      continue;
    }
    const int e = g.edge_id(s.from, s.to);
    if (edge_last_round[e] == s.round) {
      out.violations.push_back({Kind::kCapacity, s.round, s, "second packet on edge in one round"});
      continue;
    }
    edge_last_round[e] = s.round;
    if (out.received[t][lf] >= s.round) {
      out.violations.push_back({Kind::kSenderLacksMessage, s.round, s, "sender does not hold message"});
      continue;
    }
    if (out.received[t][lt] != kNever) {
      ++out.redundant;
    } else {
      pending.emplace_back(t, lt);
    }
  }
  flush(current);
  return out;
}

}  // namespace

DeliveryReport simulate(const MulticastInstance& instance, const Schedule& schedule) {
  DeliveryReport report;
  auto r = replay(instance, schedule, std::numeric_limits<int>::max());
  report.violations = std::move(r.violations);
  report.redundant_sends = r.redundant;
  int max_round = 0;
  for (const auto& s : schedule.sends) max_round = std::max(max_round, s.round);
  if (max_round < schedule.length)
    report.violations.push_back({Violation::Kind::kLengthMismatch, schedule.length, {},
                                 "declared length " + std::to_string(schedule.length) +
                                     " but last send in round " + std::to_string(max_round)});
  bool all = true;
  int length = 0;
  for (int t = 0; t < instance.tree_count(); ++t) {
    const auto& tree = instance.trees()[t];
    int done = 0;
    for (int l = 0; l < tree.size() && done != kNever; ++l)
      if (tree.is_leaf_local(l)) done = std::max(done, r.received[t][l]);
    if (done == kNever) {
      all = false;
      report.undelivered_trees.push_back(tree.id());
    } else {
      report.completion_round[tree.id()] = done;
      length = std::max(length, done);
    }
  }
  if (all) report.length = length;
  report.valid = report.violations.empty() && all;
  return report;
}

std::vector<std::vector<int>> receive_rounds(const MulticastInstance& instance, const Schedule& schedule) {
  auto r = replay(instance, schedule, std::numeric_limits<int>::max());
  if (!r.violations.empty())
    throw std::invalid_argument(std::string("schedule has violations, first: ") +
                                to_string(r.violations.front().kind) + " in round " +
                                std::to_string(r.violations.front().round));
  return std::move(r.received);
}

std::map<NodeId, std::set<int>> knowledge_at(const MulticastInstance& instance, const Schedule& schedule,
                                             int round) {
  auto r = replay(instance, schedule, round);
  if (!r.violations.empty())
    throw std::invalid_argument(std::string("invalid schedule prefix: ") + to_string(r.violations.front().kind) +
                                " in round " + std::to_string(r.violations.front().round));
  std::map<NodeId, std::set<int>> known;
  for (int t = 0; t < instance.tree_count(); ++t) {
    const auto& tree = instance.trees()[t];
    for (int l = 0; l < tree.size(); ++l)
      if (r.received[t][l] <= round) known[tree.node(l)].insert(tree.id());
  }
  return known;
}

}  // namespace mcast
