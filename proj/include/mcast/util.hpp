#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mcast {

/// Smallest k with 2^k >= x; 0 for x <= 1.
inline int ceil_log2(std::int64_t x) {
  int k = 0;
  while ((std::int64_t{1} << k) < x) ++k;
  return k;
}

/// Largest k with 2^k <= x; requires x >= 1.
inline int floor_log2(std::int64_t x) {
  int k = 0;
  while ((x >> (k + 1)) > 0) ++k;
  return k;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

/// Default chunk length: ceil(log2 n), clamped to 1 for tiny graphs.
inline int default_chunk_length(int node_count) {
  return node_count < 2 ? 1 : ceil_log2(node_count);
}

/// ceil((log2 n)^power), at least 1.
inline int ceil_log_power(int node_count, double power) {
  if (node_count < 2) return 1;
  double v = std::pow(std::log2(static_cast<double>(node_count)), power);
  auto r = static_cast<int>(std::ceil(v - 1e-9));
  return r < 1 ? 1 : r;
}

/// Bits needed to write any value in [0, count); 0 when count <= 1.
inline int bits_for(std::int64_t count) { return ceil_log2(count); }

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; portable across standard
/// libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline std::int64_t uniform_between(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline bool bernoulli(Rng& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

/// Derives an independent stream for (seed, stream) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mcast
