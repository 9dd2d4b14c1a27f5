#pragma once

#include <vector>

#include "mcast/instance.hpp"

namespace mcast {

enum class DecompositionKind { kHeavy, kRank, kShortRefined };

/// Partition of one tree's edges into downward paths.
///
/// A tree edge is identified by its lower endpoint, so `path_of[l]` is the
/// path holding the edge from local node l to its parent (-1 at the root).
/// `levels[p]` is 1 + the number of paths met on the walk from the root to
/// the top node of p.
struct PathDecomposition {
  DecompositionKind kind = DecompositionKind::kHeavy;
  std::vector<std::vector<NodeId>> paths;
  std::vector<int> levels;
  std::vector<int> path_of;

  int path_length(int p) const { return static_cast<int>(paths[p].size()) - 1; }
  int max_level() const;
};

/// Heavy child = largest subtree; ties go to the smaller node id.
PathDecomposition heavy_path_decomposition(const MulticastTree& tree);

/// Rank per local node: leaves 0, otherwise the children's maximum, plus one
/// when that maximum is attained more than once.
std::vector<int> compute_ranks(const MulticastTree& tree);

struct RankDecomposition {
  PathDecomposition decomposition;
  std::vector<int> rank;  // by local index
};

/// Preferred child = highest rank; ties go to the smaller node id.
RankDecomposition rank_decomposition(const MulticastTree& tree);

/// Splits every path top-down into chunks of `chunk_length` edges (the last
/// chunk may be shorter) and recomputes levels. Throws on chunk_length < 1.
PathDecomposition shorten(const PathDecomposition& decomposition, const MulticastTree& tree, int chunk_length);

/// Recomputes `levels` from `paths` and `path_of`.
void assign_levels(PathDecomposition& decomposition, const MulticastTree& tree);

struct ShortnessReport {
  int max_intersections = 0;
  int depth = 0;
  bool pass = false;
};

/// Max over leaves of the number of distinct paths met on the root-to-leaf
/// walk, checked against depth / chunk_length + k.
ShortnessReport verify_short(const PathDecomposition& decomposition, const MulticastTree& tree, int chunk_length,
                             int k);

}  // namespace mcast
