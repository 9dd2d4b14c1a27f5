#pragma once

#include "mcast/instance.hpp"

namespace fixture {

// Two trees rooted at node 0 sharing the single edge (0, 1).
inline mcast::MulticastInstance congested_edge() {
  mcast::InstanceSpec spec{mcast::Graph(2, {{0, 1}}), {{1, 0, {{1, 0}}}, {2, 0, {{1, 0}}}}};
  return mcast::MulticastInstance::from_spec(spec);
}

inline mcast::MulticastInstance path(int edges) {
  std::vector<mcast::Edge> es;
  mcast::TreeSpec t{0, 0, {}};
  for (int i = 0; i < edges; ++i) {
    es.push_back({i, i + 1});
    t.parent[i + 1] = i;
  }
  return mcast::MulticastInstance::from_spec({mcast::Graph(edges + 1, es), {t}});
}

}  // namespace fixture
