#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mcast/decomposition.hpp"
#include "mcast/instance.hpp"
#include "mcast/schedule.hpp"

namespace mcast {

/// Each round, every edge forwards one eligible message (sender holds it,
/// receiver does not). Edges are visited in sorted order; the message whose
/// receiver has the deepest remaining subtree wins, ties by smaller tree id.
/// Length is at most C * D.
Schedule greedy_schedule(const MulticastInstance& instance);

/// Trees draw start delays uniform in [0, C), shifted so the smallest is 0.
/// Released messages are forwarded greedily, priority (delay + depth of the
/// sender, tree id) ascending.
Schedule random_delay_schedule(const MulticastInstance& instance, std::uint64_t seed);

/// A packet that must walk `nodes` front to back.
struct FramePath {
  int message = 0;
  std::vector<NodeId> nodes;
};

/// Store-and-forward schedule for a batch of unicast paths, rounds counted
/// from 1. Each path draws a random delay in [0, C') where C' is the largest
/// number of paths sharing an edge; every round each edge moves one waiting
/// packet, preferring released packets, then the most hops to go, then the
/// smaller delay. Work-conserving, so the length never exceeds C' * D'.
/// Throws std::invalid_argument if a path uses an edge absent from `graph`.
Schedule unicast_frame_schedule(std::span<const FramePath> paths, const Graph& graph, std::uint64_t seed);

/// Per-tree short decompositions plus the random shift that turns path
/// levels into frames.
struct FrameAssignment {
  int chunk_length = 1;
  std::vector<PathDecomposition> decompositions;  // by tree index
  std::vector<int> offset;                        // by tree index
  std::vector<std::vector<int>> frame_of;         // [tree index][path]
  int frame_count = 0;
};

struct FrameOptions {
  /// Chunk length; defaults to ceil(log2 n).
  std::optional<int> chunk_length;
  /// Pad every frame to the longest frame's length.
  bool pad_frames = false;
  /// Use these offsets (by tree index) instead of drawing them.
  std::optional<std::vector<int>> forced_offsets;
};

struct FrameSchedule {
  Schedule schedule;
  FrameAssignment assignment;
  std::vector<int> frame_lengths;  // rounds spent in frames 1..frame_count
};

/// Heavy-path decompositions cut into chunks of length l, one offset per
/// tree uniform in [0, max(1, ceil(C / l))), chunks run in frame
/// level + offset. Frames execute one after another; each is a batch of
/// unicasts handed to unicast_frame_schedule.
FrameSchedule frame_multicast_schedule(const MulticastInstance& instance, std::uint64_t seed,
                                       const FrameOptions& options = {});

/// Decompositions only; offsets left at zero and frames unset.
FrameAssignment plan_frames(const MulticastInstance& instance, int chunk_length);
/// Draws offsets for `seed` and fills frame_of and frame_count.
void assign_offsets(FrameAssignment& assignment, int congestion, std::uint64_t seed);
void apply_offsets(FrameAssignment& assignment, std::vector<int> offsets);

/// Runs the frames of a fixed assignment.
FrameSchedule schedule_frames(const MulticastInstance& instance, FrameAssignment assignment, std::uint64_t seed,
                              bool pad_frames = false);

struct FrameCongestionProfile {
  /// (frame, edge id, number of chunks crossing that edge in that frame),
  /// sorted by frame then edge.
  std::vector<std::tuple<int, int, int>> counts;
  int max_frame_congestion = 0;
  int max_frame_dilation = 0;
};

FrameCongestionProfile frame_congestion_profile(const MulticastInstance& instance,
                                                const FrameAssignment& assignment);
/// Same maximum as frame_congestion_profile without materializing counts.
int max_frame_congestion(const MulticastInstance& instance, const FrameAssignment& assignment);

class SeedSearchFailed : public std::runtime_error {
 public:
  SeedSearchFailed(std::uint64_t best_seed, int best_congestion, int budget);
  std::uint64_t best_seed;
  int best_congestion;
};

struct DeterministicSchedule {
  FrameSchedule result;
  std::uint64_t seed = 0;
};

/// Tries seeds 0, 1, 2, ... for the offset draw and keeps the first whose
/// max frame congestion is within the budget. Throws SeedSearchFailed after
/// `seed_cap` candidates, reporting the best seed seen.
DeterministicSchedule deterministic_schedule(const MulticastInstance& instance, int congestion_budget,
                                             std::uint64_t seed_cap = 1024, std::optional<int> chunk_length = {});

}  // namespace mcast
