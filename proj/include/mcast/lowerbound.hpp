#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcast/instance.hpp"
#include "mcast/schedule.hpp"

namespace mcast {

/// A label names one multicast tree of the construction.
using Label = int;
/// Sorted, duplicate-free.
using LabelSet = std::vector<Label>;

/// Ordered tuple of disjoint label sets of equal size; sets 2i and 2i+1
/// (0-based) are adjacent.
struct LabelPartition {
  std::vector<LabelSet> sets;
  friend bool operator==(const LabelPartition&, const LabelPartition&) = default;
};

/// Every union of a |a|/2-subset of a with a |b|/2-subset of b, subsets of a
/// varying slowest. Throws std::invalid_argument for unequal or odd sizes
/// and for overlapping inputs.
std::vector<LabelSet> interleave(const LabelSet& a, const LabelSet& b);

/// Streams the Cartesian product of interleave() over adjacent pairs,
/// last pair varying fastest. Nothing beyond one interleave() list per pair
/// is materialized.
class InterleavingCursor {
 public:
  /// Throws std::invalid_argument for an odd number of sets.
  explicit InterleavingCursor(const LabelPartition& partition);
  /// Writes the next tuple; false once exhausted.
  bool next(LabelPartition& out);
  /// Number of tuples, saturating at UINT64_MAX.
  std::uint64_t count() const;

 private:
  std::vector<std::vector<LabelSet>> choices_;
  std::vector<std::size_t> digit_;
  bool started_ = false;
  bool done_ = false;
};

struct LowerBoundStats {
  std::int64_t edges = 0;  // m_D
  std::int64_t nodes = 0;
  int labels = 0;
  int recursion_depth = 0;
};

struct LowerBoundInstance {
  int congestion = 0;
  int depth = 0;
  MulticastInstance instance;
  std::vector<Label> label_of_tree;  // by tree index
  LowerBoundStats stats;
  /// Raw construction output, kept so lemma checks do not depend on the
  /// tree conversion: the edges carrying each label and each label's root.
  std::vector<std::vector<Edge>> label_edges;
  std::vector<NodeId> label_root;
};

struct LowerBoundLimits {
  /// Largest allowed C * 2^(D+1).
  int bit_cap = 64;
  std::int64_t max_edges = 5'000'000;
};

/// Edge count from m_1 = 1, m_D = 2^(D-1) + binom(C, C/2)^(2^(D-1)) m_(D-1);
/// empty on overflow.
std::optional<std::int64_t> predicted_edge_count(int congestion, int depth);
/// Node count from n_1 = 2, n_D = 3 * 2^(D-2) + K (n_(D-1) - 2^(D-2)) with the
/// same K; empty on overflow.
std::optional<std::int64_t> predicted_node_count(int congestion, int depth);

/// Recursive construction with C * 2^(D-1) labels. Sub-instances are built
/// with fresh node ids and glued to their attachment vertices by union-find;
/// ids are densified afterwards. Throws std::invalid_argument for odd or
/// non-positive C, D < 1, or sizes over `limits` (message carries the
/// predicted node count).
LowerBoundInstance build_lowerbound(int congestion, int depth, const LowerBoundLimits& limits = {});

struct LemmaReport {
  bool congestion_ok = false;  // every edge carries exactly C labels, metric C
  bool dilation_ok = false;    // every tree has depth exactly D, metric D
  bool trees_ok = false;       // each label induces a tree containing its root
  bool node_bound_ok = false;  // nodes <= 2^(C 2^(D+1))
  bool roots_ok = false;       // each root is incident to exactly one edge
  std::vector<std::string> failures;
  bool all() const { return congestion_ok && dilation_ok && trees_ok && node_bound_ok && roots_ok; }
};

LemmaReport check_lemmas(const LowerBoundInstance& lb, int congestion, int depth);

/// Appends isolated nodes; throws std::invalid_argument if n is smaller
/// than the current node count.
MulticastInstance pad_to_n(const MulticastInstance& instance, int node_count);

struct MarkovEdge {
  int edge = 0;
  int congestion = 0;
  int check_round = 0;
  std::vector<int> delayed_trees;  // tree ids that had not crossed by check_round
  bool pass = false;
};

struct MarkovReport {
  bool pass = true;
  int edges_checked = 0;
  std::vector<MarkovEdge> edges;
};

/// For each edge with congestion c, let t0 be the first round after which
/// one of its messages could sit at the edge's upper endpoint. At most one
/// packet crosses per round, so after round t0 + floor(c/2) at least
/// ceil(c/2) of its trees have not crossed. Checks that on the replay.
MarkovReport markov_delay_check(const MulticastInstance& instance, const Schedule& schedule);

struct ExhaustiveLimits {
  int max_edges = 12;
  int max_messages = 6;
  int max_horizon = 8;
};

/// Exact optimum schedule length by round-by-round search over maximal edge
/// assignments, pruning states whose knowledge is a subset of another
/// state's at the same round. Empty when the optimum exceeds `horizon`.
/// Throws std::invalid_argument above the limits.
std::optional<int> exhaustive_opt(const MulticastInstance& instance, int horizon, const ExhaustiveLimits& limits = {});

}  // namespace mcast
