#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcast/instance.hpp"
#include "mcast/io.hpp"
#include "mcast/schedule.hpp"

namespace mcast {

inline constexpr const char* kSchedulerNames[] = {"greedy", "random-delay", "frames", "deterministic", "congest"};

struct SchedulerRun {
  Schedule schedule;
  int frame_count = 0;
  int max_frame_congestion = 0;
};

/// Runs one named scheduler. "deterministic" uses the budget 8 ceil(log2 n);
/// "congest" is the distributed multicast with known depths.
/// Throws std::invalid_argument for an unknown name.
SchedulerRun run_scheduler(const MulticastInstance& instance, const std::string& name, std::uint64_t seed);

struct BenchCell {
  int node_count = 0;
  int congestion = 0;
  int depth = 0;
};

struct BenchSuite {
  std::vector<BenchCell> cells;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> schedulers;
  int workers = 1;
};

struct BenchRecord {
  int n = 0;
  int congestion = 0;
  int dilation = 0;
  std::string scheduler;
  std::uint64_t seed = 0;
  int length = 0;
  int frame_count = 0;
  int max_frame_congestion = 0;
  double wall_ms = 0;
  std::string status;  // "ok", "invalid" or "error: ..."
};

/// {"cells": [{"n", "C", "D"}...], "seeds": [...], "schedulers": [...], "workers": k}
BenchSuite suite_from_json(const Json& j);

/// One row per (cell, seed, scheduler) in that nesting order. Each cell's
/// instance is gen_congested_instance(n, C, min(D, n - 1), seed). Failures
/// are recorded in the status column and the sweep continues.
std::vector<BenchRecord> run_bench(const BenchSuite& suite);

inline constexpr const char* kBenchHeader =
    "n,C,D,scheduler,seed,length,frame_count,max_frame_congestion,wall_ms,status";

std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace mcast
