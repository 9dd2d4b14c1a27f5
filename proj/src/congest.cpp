#include "mcast/congest.hpp"

#include <algorithm>
#include <set>

#include "mcast/util.hpp"

namespace mcast {

void Payload::append(std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) bits_.push_back((value >> i) & 1u);
}

std::uint64_t Payload::read(std::size_t pos, int width) const {
  if (pos + width > bits_.size()) throw std::out_of_range("payload read past end");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | (bits_[pos + i] ? 1u : 0u);
  return v;
}

void Payload::append(const Payload& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

Payload Payload::take_front(std::size_t count) {
  count = std::min(count, bits_.size());
  Payload out;
  out.bits_.assign(bits_.begin(), bits_.begin() + count);
  bits_.erase(bits_.begin(), bits_.begin() + count);
  return out;
}

CongestNetwork CongestNetwork::make(const Graph& graph, int bit_factor) {
  if (bit_factor < 1) throw std::invalid_argument("bit factor must be positive");
  return {&graph, bit_factor * std::max(1, ceil_log2(graph.node_count()))};
}

CongestTranscript run_congest(const CongestNetwork& network, std::span<const std::unique_ptr<NodeProgram>> programs,
                              const RunOptions& options) {
  const Graph& g = *network.graph;
  if (static_cast<int>(programs.size()) != g.node_count()) throw std::invalid_argument("one program per node required");
  CongestTranscript tr;
  tr.bits_per_round = network.bits_per_round;
  auto all_done = [&] {
    return std::all_of(programs.begin(), programs.end(), [](const auto& p) { return p->done(); });
  };
  int round = 0;
  while (!all_done()) {
    if (round >= options.max_rounds)
      throw CongestNonTermination("no termination within " + std::to_string(options.max_rounds) + " rounds");
    ++round;
    struct Pending {
      NodeId from;
      NodeId to;
      Payload payload;
    };
    std::vector<Pending> pending;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      Outbox out;
      programs[u]->send(round, out);
      std::set<NodeId> used;
      for (auto& item : out.items()) {
        const int bits = static_cast<int>(item.payload.size());
        auto fail = [&](const std::string& why) {
          throw CongestBudgetViolation("round " + std::to_string(round) + ": " + std::to_string(u) + "->" +
                                           std::to_string(item.to) + " " + why,
                                       round, u, item.to, bits);
        };
        if (!g.has_edge(u, item.to)) fail("is not an edge");
        if (!used.insert(item.to).second) fail("carries two payloads");
        if (bits > network.bits_per_round)
          fail("carries " + std::to_string(bits) + " bits, budget " + std::to_string(network.bits_per_round));
        if (bits == 0) continue;
        pending.push_back({u, item.to, std::move(item.payload)});
      }
    }
    for (auto& p : pending) {
      programs[p.to]->receive(round, p.from, p.payload);
      tr.entries.push_back({round, p.from, p.to, static_cast<int>(p.payload.size())});
      if (options.keep_payloads) tr.payloads.push_back(std::move(p.payload));
    }
    if (options.after_round) options.after_round(round);
  }
  tr.rounds = round;
  return tr;
}

MessageSizeAudit message_size_audit(const CongestTranscript& transcript) {
  MessageSizeAudit a;
  a.budget = transcript.bits_per_round;
  for (const auto& e : transcript.entries) {
    a.max_bits = std::max(a.max_bits, e.bits);
    ++a.histogram[e.bits];
    if (e.bits > a.budget) a.over_budget.push_back(e);
  }
  return a;
}

const char* to_string(DistributedPhase phase) {
  switch (phase) {
    case DistributedPhase::kSetup: return "setup";
    case DistributedPhase::kRanks: return "ranks";
    case DistributedPhase::kPreferred: return "preferred-edges";
    case DistributedPhase::kCounters: return "counters";
    case DistributedPhase::kFinished: return "finished";
  }
  return "?";
}

}  // namespace mcast
