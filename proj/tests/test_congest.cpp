#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mcast/congest.hpp"
#include "mcast/decomposition.hpp"
#include "mcast/generators.hpp"
#include "mcast/util.hpp"
#include "oracles.hpp"

using namespace mcast;

namespace {

class Silent : public NodeProgram {
 public:
  void send(int, Outbox&) override {}
  void receive(int, NodeId, const Payload&) override {}
  bool done() const override { return true; }
};

// Sends pseudo-random payloads whose content depends on everything heard
// so far, for a fixed number of rounds.
class Chatter : public NodeProgram {
 public:
  Chatter(NodeId id, std::vector<NodeId> nbrs, int rounds, int budget, std::uint64_t seed)
      : id_(id), nbrs_(std::move(nbrs)), rounds_(rounds), budget_(budget), state_(mix_seed(seed, id)) {}
  void send(int round, Outbox& out) override {
    for (NodeId v : nbrs_) {
      std::uint64_t h = mix_seed(state_, static_cast<std::uint64_t>(round * 7919 + v));
      if (h % 3 == 0) continue;
      Payload p;
      p.append(h, static_cast<int>(h % static_cast<std::uint64_t>(std::min(budget_, 64))) + 1);
      out.send(v, std::move(p));
    }
    seen_ = round;
  }
  void receive(int round, NodeId from, const Payload& p) override {
    state_ = mix_seed(state_ ^ p.read(0, std::min<int>(static_cast<int>(p.size()), 64)), static_cast<std::uint64_t>(round + from));
  }
  bool done() const override { return seen_ >= rounds_; }

 private:
  NodeId id_;
  std::vector<NodeId> nbrs_;
  int rounds_;
  int budget_;
  std::uint64_t state_;
  int seen_ = 0;
};

// Straight-line reference: same programs driven by a plain nested loop.
std::vector<TranscriptEntry> reference_run(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& ps) {
  std::vector<TranscriptEntry> out;
  for (int round = 1;; ++round) {
    bool all = true;
    for (auto& p : ps) all = all && p->done();
    if (all) break;
    std::vector<std::tuple<NodeId, NodeId, Payload>> msgs;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      Outbox o;
      ps[u]->send(round, o);
      for (auto& it : o.items()) msgs.emplace_back(u, it.to, it.payload);
    }
    for (auto& [u, v, p] : msgs) {
      ps[v]->receive(round, u, p);
      out.push_back({round, u, v, static_cast<int>(p.size())});
    }
  }
  return out;
}

class Ping : public NodeProgram {
 public:
  Ping(NodeId id, NodeId other, int width) : id_(id), other_(other), width_(width) {}
  void send(int round, Outbox& out) override {
    if ((round % 2 == 1) == (id_ == 0) && round <= 6) {
      Payload p;
      p.append(static_cast<std::uint64_t>(id_), width_);
      out.send(other_, std::move(p));
    }
    last_ = round;
  }
  void receive(int, NodeId, const Payload& p) override { heard_.push_back(static_cast<int>(p.read(0, width_))); }
  bool done() const override { return last_ >= 6; }
  std::vector<int> heard_;

 private:
  NodeId id_, other_;
  int width_;
  int last_ = 0;
};

class Loud : public NodeProgram {
 public:
  explicit Loud(int bits) : bits_(bits) {}
  void send(int round, Outbox& out) override {
    Payload p;
    p.append(0, round == 3 ? bits_ + 1 : bits_);
    out.send(1, std::move(p));
  }
  void receive(int, NodeId, const Payload&) override {}
  bool done() const override { return false; }
  int bits_;
};

}  // namespace

TEST_CASE("payload fields") {
  Payload p;
  p.append(5, 3);
  p.append(1, 1);
  p.append(0x1234, 16);
  CHECK(p.size() == 20);
  CHECK(p.read(0, 3) == 5);
  CHECK(p.read(3, 1) == 1);
  CHECK(p.read(4, 16) == 0x1234);
  auto front = p.take_front(4);
  CHECK(front.read(0, 3) == 5);
  CHECK(p.read(0, 16) == 0x1234);
  CHECK_THROWS(p.read(10, 16));
}

TEST_CASE("silent programs take zero rounds") {
  Graph g(3, {{0, 1}, {1, 2}});
  std::vector<std::unique_ptr<NodeProgram>> ps;
  for (int i = 0; i < 3; ++i) ps.push_back(std::make_unique<Silent>());
  auto tr = run_congest(CongestNetwork::make(g, 4), ps, {});
  CHECK(tr.rounds == 0);
  CHECK(tr.entries.empty());
  auto audit = message_size_audit(tr);
  CHECK(audit.pass());
  CHECK(audit.max_bits == 0);
}

TEST_CASE("ping pong of ids") {
  Graph g(2, {{0, 1}});
  auto net = CongestNetwork::make(g, 1);
  const int w = std::max(1, ceil_log2(2));
  std::vector<std::unique_ptr<NodeProgram>> ps;
  ps.push_back(std::make_unique<Ping>(0, 1, w));
  ps.push_back(std::make_unique<Ping>(1, 0, w));
  auto tr = run_congest(net, ps, {});
  CHECK(tr.rounds == 6);
  CHECK(tr.entries.size() == 6);
  for (const auto& e : tr.entries) CHECK(e.bits == w);
  CHECK(message_size_audit(tr).pass());
  CHECK(static_cast<Ping*>(ps[1].get())->heard_ == std::vector<int>{0, 0, 0});
}

TEST_CASE("engine matches the sequential reference") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = gen_random_instance(12, 1, 2, seed);
    const Graph& g = inst.graph();
    auto net = CongestNetwork::make(g, 2);
    auto make = [&] {
      std::vector<std::unique_ptr<NodeProgram>> ps;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nb = g.neighbors(v);
        ps.push_back(std::make_unique<Chatter>(v, std::vector<NodeId>(nb.begin(), nb.end()), 1 + static_cast<int>(seed % 7),
                                               net.bits_per_round, seed));
      }
      return ps;
    };
    auto a = make();
    auto tr = run_congest(net, a, {});
    auto b = make();
    auto ref = reference_run(g, b);
    REQUIRE(tr.entries == ref);
  }
}

TEST_CASE("budget violations and non-termination") {
  Graph g(2, {{0, 1}});
  auto net = CongestNetwork::make(g, 1);
  std::vector<std::unique_ptr<NodeProgram>> ps;
  ps.push_back(std::make_unique<Loud>(net.bits_per_round));
  ps.push_back(std::make_unique<Silent>());
  try {
    run_congest(net, ps, {});
    FAIL("expected a violation");
  } catch (const CongestBudgetViolation& e) {
    CHECK(e.round == 3);
    CHECK(e.from == 0);
    CHECK(e.to == 1);
  }
  std::vector<std::unique_ptr<NodeProgram>> ok;
  ok.push_back(std::make_unique<Loud>(net.bits_per_round - 1));
  ok.push_back(std::make_unique<Silent>());
  RunOptions opt;
  opt.max_rounds = 10;
  CHECK_THROWS_AS(run_congest(net, ok, opt), CongestNonTermination);

  CongestTranscript tr;
  tr.bits_per_round = 4;
  tr.entries = {{1, 0, 1, 4}, {2, 1, 0, 9}};
  auto audit = message_size_audit(tr);
  CHECK_FALSE(audit.pass());
  REQUIRE(audit.over_budget.size() == 1);
  CHECK(audit.over_budget[0].round == 2);
  CHECK(audit.max_bits == 9);
}

TEST_CASE("distributed decomposition equals the centralized pipeline on single trees") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const int n = static_cast<int>(uniform_between(rng, 2, 400));
    auto inst = gen_random_tree(n, static_cast<double>(seed % 11) / 10.0, seed);
    DistributedOptions opt;
    opt.seed = seed;
    auto d = distributed_rank_decomposition(inst, opt);
    const auto& t = inst.trees()[0];
    auto central = rank_decomposition(t);
    auto expect = shorten(central.decomposition, t, d.chunk_length);
    CHECK(oracle::path_set(d.decompositions[0].paths) == oracle::path_set(expect.paths));
    CHECK(d.ranks[0] == central.rank);
    CHECK(message_size_audit(d.transcript).pass());
  }
}

TEST_CASE("distributed decomposition on multi-tree instances") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = gen_random_instance(200, 12, 10, seed);
    DistributedOptions opt;
    opt.seed = seed;
    auto d = distributed_rank_decomposition(inst, opt);
    const int n = inst.node_count();
    for (int t = 0; t < inst.tree_count(); ++t) {
      const auto& tree = inst.trees()[t];
      auto ch = oracle::children(tree.to_spec());
      for (int l = 0; l < tree.size(); ++l) {
        REQUIRE(d.ranks[t][l] == oracle::rank_of(ch, tree.node(l)));
        CHECK((1 << d.ranks[t][l]) <= oracle::subtree_size(ch, tree.node(l)));
      }
      CHECK(verify_short(d.decompositions[t], tree, d.chunk_length, ceil_log2(n) + 1).pass);
      auto expect = shorten(rank_decomposition(tree).decomposition, tree, d.chunk_length);
      CHECK(oracle::path_set(d.decompositions[t].paths) == oracle::path_set(expect.paths));
    }
    CHECK(message_size_audit(d.transcript).pass());
    // Same inputs, same transcript.
    auto again = distributed_rank_decomposition(inst, opt);
    CHECK(again.transcript.entries == d.transcript.entries);
  }
}

TEST_CASE("fixed frames count overflows but stay correct") {
  auto inst = gen_congested_instance(256, 24, 12, 5);
  DistributedOptions opt;
  opt.seed = 5;
  opt.bit_factor = 1;
  opt.fixed_frame_rounds = 1;
  auto d = distributed_rank_decomposition(inst, opt);
  CHECK(d.overflow_frames > 0);
  for (int t = 0; t < inst.tree_count(); ++t) {
    const auto& tree = inst.trees()[t];
    auto expect = shorten(rank_decomposition(tree).decomposition, tree, d.chunk_length);
    CHECK(oracle::path_set(d.decompositions[t].paths) == oracle::path_set(expect.paths));
  }
}

TEST_CASE("distributed multicast delivers") {
  auto path = fixture::path(6);
  DistributedOptions opt;
  auto shallow = distributed_multicast(path, opt, true);
  CHECK(simulate(path, shallow.schedule).valid);
  CHECK(shallow.schedule.length == 6);
  CHECK(shallow.rounds <= 6 + 2);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = gen_random_instance(128, 10, 8, seed);
    opt.seed = seed;
    auto a = distributed_multicast(inst, opt, true);
    auto r = simulate(inst, a.schedule);
    REQUIRE(r.valid);
    CHECK(oracle::replay(inst.to_spec(), a.schedule).has_value());
    CHECK(message_size_audit(a.transcript).pass());
    CHECK(a.max_frame_congestion <= 8 * a.chunk_length);
    if (seed < 5) {
      auto b = distributed_multicast(inst, opt, false);
      CHECK(simulate(inst, b.schedule).valid);
      CHECK(b.rounds == b.setup_rounds + b.schedule.length);
    }
    CHECK(a.rounds >= a.setup_rounds + a.schedule.length);
  }
}
