#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcast/decomposition.hpp"
#include "mcast/graph.hpp"
#include "mcast/instance.hpp"
#include "mcast/schedule.hpp"

namespace mcast {

/// Growable bit string; fields are written and read most significant bit first.
class Payload {
 public:
  void append(std::uint64_t value, int width);
  std::uint64_t read(std::size_t pos, int width) const;
  void append(const Payload& other);
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  /// Removes and returns the first `count` bits.
  Payload take_front(std::size_t count);
  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  std::vector<bool> bits_;
};

class Outbox {
 public:
  void send(NodeId to, Payload payload) { items_.push_back({to, std::move(payload)}); }
  struct Item {
    NodeId to;
    Payload payload;
  };
  std::vector<Item>& items() { return items_; }

 private:
  std::vector<Item> items_;
};

/// One node's local algorithm. Each round the engine collects send() from
/// every node, then delivers with receive().
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void send(int round, Outbox& out) = 0;
  virtual void receive(int round, NodeId from, const Payload& payload) = 0;
  virtual bool done() const = 0;
};

struct CongestNetwork {
  const Graph* graph = nullptr;
  int bits_per_round = 0;
  /// B = bit_factor * ceil(log2 n).
  static CongestNetwork make(const Graph& graph, int bit_factor);
};

struct TranscriptEntry {
  int round = 0;
  NodeId from = 0;
  NodeId to = 0;
  int bits = 0;
  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct CongestTranscript {
  int bits_per_round = 0;
  int rounds = 0;
  std::vector<TranscriptEntry> entries;
  std::vector<Payload> payloads;  // parallel to entries when kept
};

class CongestBudgetViolation : public std::runtime_error {
 public:
  CongestBudgetViolation(const std::string& what, int round, NodeId from, NodeId to, int bits)
      : std::runtime_error(what), round(round), from(from), to(to), bits(bits) {}
  int round;
  NodeId from;
  NodeId to;
  int bits;
};

class CongestNonTermination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  int max_rounds = 1'000'000;
  bool keep_payloads = false;
  /// Called after every round's deliveries.
  std::function<void(int)> after_round;
};

/// Runs until every program reports done(). Throws CongestBudgetViolation
/// for payloads over the budget, to non-neighbors, or a second payload on
/// the same direction in one round; CongestNonTermination at max_rounds.
CongestTranscript run_congest(const CongestNetwork& network, std::span<const std::unique_ptr<NodeProgram>> programs,
                              const RunOptions& options);

struct MessageSizeAudit {
  int max_bits = 0;
  int budget = 0;
  std::map<int, std::int64_t> histogram;  // bits -> count
  std::vector<TranscriptEntry> over_budget;
  bool pass() const { return over_budget.empty(); }
};

MessageSizeAudit message_size_audit(const CongestTranscript& transcript);

enum class DistributedPhase { kSetup, kRanks, kPreferred, kCounters, kFinished };
const char* to_string(DistributedPhase phase);

struct DistributedOptions {
  std::uint64_t seed = 0;
  double epsilon = 0.25;
  int bit_factor = 4;
  /// Fixed frame length in rounds; frames that cannot drain in time are
  /// extended and counted. Empty means frames end as soon as they drain.
  std::optional<int> fixed_frame_rounds;
  /// Abort after this multiple of the (C + D + log n) frame bound.
  int round_factor = 64;
  bool keep_payloads = false;
};

struct DistributedDecomposition {
  int chunk_length = 0;
  std::vector<PathDecomposition> decompositions;  // by tree index
  std::vector<std::vector<int>> ranks;            // by tree index and local index
  std::map<DistributedPhase, int> phase_rounds;
  int rounds = 0;
  int overflow_frames = 0;
  CongestTranscript transcript;
};

/// Error naming the phase where a run failed.
class DistributedFailure : public std::runtime_error {
 public:
  DistributedFailure(const std::string& what, DistributedPhase phase) : std::runtime_error(what), phase(phase) {}
  DistributedPhase phase;
};

/// Rank decomposition shortened to chunks of ceil(log^(1+eps) n), computed
/// by node programs that only know their own id, their neighbors, which
/// trees they belong to, whether they are a root, and the shared seed, n,
/// C and D. Throws DistributedFailure.
DistributedDecomposition distributed_rank_decomposition(const MulticastInstance& instance,
                                                        const DistributedOptions& options);

struct DistributedMulticast {
  Schedule schedule;
  int rounds = 0;
  /// Rounds before the first multicast send: the decomposition, or the
  /// orientation exchange when depths are known.
  int setup_rounds = 0;
  int chunk_length = 0;
  int frame_count = 0;
  int max_frame_congestion = 0;
  int overflow_frames = 0;
  CongestTranscript transcript;
};

/// Frame-based multicast. With depths known, neighbors first swap depth mod 3
/// per shared tree to learn edge orientations; then each node forwards m_T in
/// frame X_T + floor(depth / L), L = ceil(log^(2+eps) n), one message per edge
/// per round, time-sharing edges used in both directions by round parity. Otherwise the distributed decomposition runs first and the frame
/// scheduler is applied to its output. Throws DistributedFailure.
DistributedMulticast distributed_multicast(const MulticastInstance& instance, const DistributedOptions& options,
                                           bool depths_known);

}  // namespace mcast
