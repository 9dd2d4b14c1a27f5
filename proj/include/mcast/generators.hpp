#pragma once

#include <cstdint>

#include "mcast/instance.hpp"

namespace mcast {

/// Random connected host graph (random spanning tree plus about n/2 chords)
/// with `tree_count` trees, each grown by randomized BFS from a random root
/// to depth at most `target_depth` and pruned to the root paths of a random
/// set of targets. Deterministic for a fixed seed.
/// Throws std::invalid_argument when the parameters cannot fit.
MulticastInstance gen_random_instance(int node_count, int tree_count, int target_depth,
                                      std::uint64_t seed);

/// Instance with congestion exactly `congestion` and dilation exactly `depth`.
///
/// The host graph is a strip of `width` rows whose columns are joined by
/// horizontal and diagonal edges; a tree's depth equals the column offset
/// from its root, so every tree spans `depth + 1` columns. All trees route
/// their spine through one hub edge, which pins the congestion. Width is
/// chosen as min(32, n / (depth + 1)) so that `depth + 1` columns fit.
MulticastInstance gen_congested_instance(int node_count, int congestion, int depth,
                                         std::uint64_t seed);

/// A single random tree spanning all `node_count` nodes; the host graph is
/// the tree itself. `shape` in [0, 1] trades bushy (0) for path-like (1).
MulticastInstance gen_random_tree(int node_count, double shape, std::uint64_t seed);

}  // namespace mcast
