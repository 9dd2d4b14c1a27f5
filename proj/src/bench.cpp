#include "mcast/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <optional>
#include <thread>

#include "mcast/congest.hpp"
#include "mcast/generators.hpp"
#include "mcast/schedulers.hpp"
#include "mcast/util.hpp"

namespace mcast {

SchedulerRun run_scheduler(const MulticastInstance& instance, const std::string& name, std::uint64_t seed) {
  SchedulerRun run;
  if (name == "greedy") {
    run.schedule = greedy_schedule(instance);
  } else if (name == "random-delay") {
    run.schedule = random_delay_schedule(instance, seed);
  } else if (name == "frames") {
    auto fs = frame_multicast_schedule(instance, seed, {});
    run.frame_count = fs.assignment.frame_count;
    run.max_frame_congestion = max_frame_congestion(instance, fs.assignment);
    run.schedule = std::move(fs.schedule);
  } else if (name == "deterministic") {
    const int budget = 8 * std::max(1, ceil_log2(instance.node_count()));
    auto ds = deterministic_schedule(instance, budget);
    run.frame_count = ds.result.assignment.frame_count;
    run.max_frame_congestion = max_frame_congestion(instance, ds.result.assignment);
    run.schedule = std::move(ds.result.schedule);
  } else if (name == "congest") {
    DistributedOptions opt;
    opt.seed = seed;
    auto dm = distributed_multicast(instance, opt, true);
    run.frame_count = dm.frame_count;
    run.max_frame_congestion = dm.max_frame_congestion;
    run.schedule = std::move(dm.schedule);
  } else {
    throw std::invalid_argument("unknown scheduler '" + name + "'");
  }
  return run;
}

BenchSuite suite_from_json(const Json& j) {
  try {
    BenchSuite s;
    for (const auto& c : j.value("cells", Json::array()))
      s.cells.push_back({c.at("n").get<int>(), c.at("C").get<int>(), c.at("D").get<int>()});
    for (const auto& x : j.value("seeds", Json::array())) s.seeds.push_back(x.get<std::uint64_t>());
    for (const auto& x : j.value("schedulers", Json::array())) s.schedulers.push_back(x.get<std::string>());
    s.workers = std::max(1, j.value("workers", 1));
    return s;
  } catch (const std::exception& e) {
    throw ParseError(std::string("suite: ") + e.what());
  }
}

std::vector<BenchRecord> run_bench(const BenchSuite& suite) {
  struct Job {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < suite.cells.size(); ++c)
    for (auto seed : suite.seeds) jobs.push_back({c, seed});
  const std::size_t per_job = suite.schedulers.size();
  std::vector<BenchRecord> records(jobs.size() * per_job);

  auto work = [&](std::size_t j) {
    const BenchCell& cell = suite.cells[jobs[j].cell];
    const std::uint64_t seed = jobs[j].seed;
    std::optional<MulticastInstance> instance;
    std::string gen_error;
    try {
      instance = gen_congested_instance(cell.node_count, cell.congestion, std::min(cell.depth, cell.node_count - 1), seed);
    } catch (const std::exception& e) {
      gen_error = e.what();
    }
    const auto metrics = instance ? compute_metrics(*instance) : InstanceMetrics{cell.congestion, cell.depth, cell.node_count};
    for (std::size_t k = 0; k < per_job; ++k) {
      BenchRecord& r = records[j * per_job + k];
      r.n = cell.node_count;
      r.congestion = metrics.congestion;
      r.dilation = metrics.dilation;
      r.scheduler = suite.schedulers[k];
      r.seed = seed;
      if (!instance) {
        r.status = "error: " + gen_error;
        continue;
      }
      auto start = std::chrono::steady_clock::now();
      try {
        auto run = run_scheduler(*instance, r.scheduler, seed);
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.length = run.schedule.length;
        r.frame_count = run.frame_count;
        r.max_frame_congestion = run.max_frame_congestion;
        r.status = simulate(*instance, run.schedule).valid ? "ok" : "invalid";
      } catch (const std::exception& e) {
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.status = std::string("error: ") + e.what();
      }
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) work(j);
  };
  const int threads = std::min<int>(suite.workers, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = std::string(kBenchHeader) + "\n";
  char ms[32];
  for (const auto& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out += std::to_string(r.n) + "," + std::to_string(r.congestion) + "," + std::to_string(r.dilation) + "," +
           r.scheduler + "," + std::to_string(r.seed) + "," + std::to_string(r.length) + "," +
           std::to_string(r.frame_count) + "," + std::to_string(r.max_frame_congestion) + "," + ms + "," + status +
           "\n";
  }
  return out;
}

}  // namespace mcast
