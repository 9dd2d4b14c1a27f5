#include "doctest.h"
#include "fixtures.hpp"
#include "mcast/generators.hpp"
#include "mcast/schedule.hpp"
#include "mcast/schedulers.hpp"
#include "mcast/util.hpp"
#include "oracles.hpp"

using namespace mcast;

TEST_CASE("single edge delivered in round 1") {
  auto inst = fixture::path(1);
  auto r = simulate(inst, {{{1, 0, 1, 0}}, 1});
  CHECK(r.valid);
  CHECK(r.length == 1);
}

TEST_CASE("shared edge used twice in one round") {
  auto inst = fixture::congested_edge();
  auto r = simulate(inst, {{{1, 0, 1, 1}, {1, 0, 1, 2}}, 1});
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations[0].kind == Violation::Kind::kCapacity);
}

TEST_CASE("shared edge over two rounds") {
  auto inst = fixture::congested_edge();
  auto r = simulate(inst, {{{1, 0, 1, 1}, {2, 0, 1, 2}}, 2});
  CHECK(r.valid);
  CHECK(r.length == 2);
  CHECK(r.completion_round.at(1) == 1);
  CHECK(r.completion_round.at(2) == 2);
}

TEST_CASE("violations are named") {
  auto inst = fixture::path(2);
  auto early = simulate(inst, {{{1, 1, 2, 0}}, 1});
  CHECK_FALSE(early.valid);
  CHECK(early.violations[0].kind == Violation::Kind::kSenderLacksMessage);
  auto wrong = simulate(inst, {{{1, 0, 1, 5}}, 1});
  CHECK(wrong.violations[0].kind == Violation::Kind::kUnknownMessage);
  auto zero = simulate(inst, {{{0, 0, 1, 0}}, 1});
  CHECK(zero.violations[0].kind == Violation::Kind::kBadRound);
  auto partial = simulate(inst, {{{1, 0, 1, 0}}, 1});
  CHECK_FALSE(partial.valid);
  CHECK_FALSE(partial.length.has_value());
  CHECK(partial.undelivered_trees == std::vector<int>{0});
}

TEST_CASE("copying and redundant sends") {
  // Star: 0 is root with children 1, 2; both edges in the same round.
  auto inst = MulticastInstance::from_spec({Graph(3, {{0, 1}, {0, 2}}), {{0, 0, {{1, 0}, {2, 0}}}}});
  auto r = simulate(inst, {{{1, 0, 1, 0}, {1, 0, 2, 0}, {2, 0, 1, 0}}, 2});
  CHECK(r.valid);
  CHECK(r.redundant_sends == 1);
  CHECK(r.length == 1);
}

TEST_CASE("single-node trees are delivered at round 0") {
  auto inst = MulticastInstance::from_spec({Graph(2, {{0, 1}}), {{0, 1, {}}}});
  auto r = simulate(inst, {});
  CHECK(r.valid);
  CHECK(r.length == 0);
}

TEST_CASE("knowledge snapshots") {
  auto inst = fixture::congested_edge();
  Schedule s{{{1, 0, 1, 1}, {2, 0, 1, 2}}, 2};
  auto k0 = knowledge_at(inst, s, 0);
  CHECK(k0[0] == std::set<int>{1, 2});
  CHECK(k0[1].empty());
  auto k1 = knowledge_at(inst, s, 1);
  CHECK(k1[1] == std::set<int>{1});
  Schedule bad{{{1, 1, 0, 1}}, 1};
  CHECK_THROWS(knowledge_at(inst, bad, 1));
}

TEST_CASE("simulate agrees with the replay oracle on random schedules") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = gen_random_instance(24, 4, 4, seed);
    Schedule s = random_delay_schedule(inst, seed);
    // Perturb half of them so both verdicts are exercised.
    Rng rng(seed);
    if (seed % 2 == 1 && !s.sends.empty()) {
      auto& x = s.sends[uniform_below(rng, s.sends.size())];
      x.round = std::max(1, x.round - 1);
      s.normalize();
    }
    auto r = simulate(inst, s);
    auto o = oracle::replay(inst.to_spec(), s);
    REQUIRE(r.valid == o.has_value());
    if (o) CHECK(*r.length == *o);
    if (r.valid) {
      auto last = knowledge_at(inst, s, s.length);
      for (const auto& t : inst.trees())
        for (NodeId v : t.nodes()) CHECK(last[v].count(t.id()) == 1);
      // Knowledge only grows.
      for (int round = 1; round <= s.length; ++round) {
        auto before = knowledge_at(inst, s, round - 1);
        auto after = knowledge_at(inst, s, round);
        for (auto& [v, set] : before)
          for (int m : set) CHECK(after[v].count(m) == 1);
      }
    }
  }
}
