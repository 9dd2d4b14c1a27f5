#include <sstream>

#include "doctest.h"
#include "mcast/bench.hpp"
#include "mcast/generators.hpp"

using namespace mcast;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Drops the wall time column so runs can be compared.
std::string strip_time(const std::vector<BenchRecord>& rs) {
  auto copy = rs;
  for (auto& r : copy) r.wall_ms = 0;
  return bench_csv(copy);
}

}  // namespace

TEST_CASE("empty suite gives only the header") {
  CHECK(bench_csv(run_bench({})) == std::string(kBenchHeader) + "\n");
}

TEST_CASE("grid sweep") {
  BenchSuite suite;
  for (int n : {64, 96, 128})
    for (int c : {2, 4, 6}) suite.cells.push_back({n, c, 3 + c});
  suite.seeds = {0, 1, 2, 3, 4};
  suite.schedulers = {"greedy", "frames"};
  auto rs = run_bench(suite);
  CHECK(rs.size() == 90);
  CHECK(lines(bench_csv(rs)).size() == 91);
  for (const auto& r : rs) {
    CHECK(r.status == "ok");
    CHECK(r.length >= std::max(r.congestion, r.dilation));
    if (r.scheduler == "greedy") CHECK(r.length <= r.congestion * r.dilation);
  }
  // Rows follow spec order: cell, then seed, then scheduler.
  CHECK(rs[0].scheduler == "greedy");
  CHECK(rs[1].scheduler == "frames");
  CHECK(rs[2].seed == 1);
  CHECK(rs[10].n == 64);
  CHECK(rs[10].congestion == 4);

  suite.workers = 3;
  CHECK(strip_time(run_bench(suite)) == strip_time(rs));
}

TEST_CASE("greedy column recomputed from the instances") {
  BenchSuite suite;
  suite.cells = {{100, 5, 6}};
  suite.seeds = {7, 8};
  suite.schedulers = {"greedy"};
  for (const auto& r : run_bench(suite)) {
    auto inst = gen_congested_instance(100, 5, 6, r.seed);
    auto m = compute_metrics(inst);
    CHECK(r.congestion == m.congestion);
    CHECK(r.length <= m.congestion * m.dilation);
  }
}

TEST_CASE("failures are recorded per row") {
  BenchSuite suite;
  suite.cells = {{8, 2, 50}, {64, 2, 3}};
  suite.seeds = {0};
  suite.schedulers = {"nope", "greedy"};
  auto rs = run_bench(suite);
  REQUIRE(rs.size() == 4);
  CHECK(rs[0].status.rfind("error: unknown scheduler", 0) == 0);
  CHECK(rs[1].status == "ok");
  CHECK(rs[3].status == "ok");
  auto text = bench_csv(rs);
  for (const auto& line : lines(text)) CHECK(std::count(line.begin(), line.end(), ',') == 9);
}

TEST_CASE("suite json") {
  auto s = suite_from_json(parse_json(R"({"cells":[{"n":64,"C":4,"D":5}],"seeds":[1,2],"schedulers":["greedy"],"workers":2})"));
  CHECK(s.cells.size() == 1);
  CHECK(s.cells[0].depth == 5);
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(s.workers == 2);
  CHECK_THROWS_AS(suite_from_json(parse_json(R"({"cells":[{"n":64}]})")), ParseError);
}
