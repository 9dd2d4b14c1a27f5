#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcast/instance.hpp"

namespace mcast {

/// One packet crossing one edge. Messages are named by their tree's id.
struct Send {
  int round = 1;
  NodeId from = 0;
  NodeId to = 0;
  int message = 0;

  friend auto operator<=>(const Send&, const Send&) = default;
};

struct Schedule {
  std::vector<Send> sends;
  int length = 0;

  /// Sorts sends by (round, from, to, message) and sets length to the last round.
  void normalize();
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct Violation {
  enum class Kind {
    kSenderLacksMessage,
    kEdgeNotInTree,
    kCapacity,
    kUnknownMessage,
    kBadRound,
    kLengthMismatch,
  };
  Kind kind;
  int round;
  Send send;
  std::string detail;
};

struct DeliveryReport {
  bool valid = false;
  /// Round by which every leaf of every tree holds its message; empty if never.
  std::optional<int> length;
  std::vector<Violation> violations;
  /// Sends to nodes that already held the message. Legal.
  int redundant_sends = 0;
  /// Tree id -> completion round (0 for single-node trees); absent if incomplete.
  std::map<int, int> completion_round;
  std::vector<int> undelivered_trees;
};

/// Replays the schedule round by round under the store-and-forward rules.
/// A message sent in round t is usable by the receiver from round t + 1.
DeliveryReport simulate(const MulticastInstance& instance, const Schedule& schedule);

inline constexpr int kNever = std::numeric_limits<int>::max();

/// Per tree (indexed like instance.trees()) and per local node: the round
/// after which that node holds the message (0 for the root, kNever if never).
/// Throws std::invalid_argument if the schedule has violations.
std::vector<std::vector<int>> receive_rounds(const MulticastInstance& instance, const Schedule& schedule);

/// Messages known by each node after `round` rounds. Nodes that know nothing
/// are omitted. Throws if the schedule prefix up to `round` is invalid.
std::map<NodeId, std::set<int>> knowledge_at(const MulticastInstance& instance, const Schedule& schedule,
                                             int round);

const char* to_string(Violation::Kind kind);

}  // namespace mcast
