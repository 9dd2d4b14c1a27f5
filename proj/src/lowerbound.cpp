#include "mcast/lowerbound.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "mcast/util.hpp"

namespace mcast {

namespace {

// All k-subsets of `items` in lexicographic order of positions.
std::vector<LabelSet> subsets(const LabelSet& items, int k) {
  std::vector<LabelSet> out;
  const int n = static_cast<int>(items.size());
  std::vector<int> pos(k);
  std::iota(pos.begin(), pos.end(), 0);
  while (true) {
    LabelSet s;
    for (int p : pos) s.push_back(items[p]);
    out.push_back(std::move(s));
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) break;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}

std::optional<std::int64_t> checked_pow(std::int64_t base, std::int64_t exp) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    auto m = checked_mul(r, base);
    if (!m) return std::nullopt;
    r = *m;
  }
  return r;
}

std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Raw output of the recursion before identification.
struct Builder {
  int congestion = 0;
  int next_node = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Label> edge_labels;  // congestion entries per edge
  std::vector<std::pair<int, int>> merges;

  int fresh() { return next_node++; }

  void add_edge(int a, int b, const LabelSet& labels) {
    edges.emplace_back(a, b);
    edge_labels.insert(edge_labels.end(), labels.begin(), labels.end());
  }

  // Returns the root vertex of each set, in set order.
  std::vector<int> build(const LabelPartition& s) {
    if (s.sets.size() == 1) {
      int r = fresh();
      int v = fresh();
      add_edge(r, v, s.sets[0]);
      return {r};
    }
    std::vector<int> roots;
    std::vector<int> attach;
    for (std::size_t i = 0; i + 1 < s.sets.size(); i += 2) {
      int r1 = fresh();
      int r2 = fresh();
      int v = fresh();
      add_edge(r1, v, s.sets[i]);
      add_edge(r2, v, s.sets[i + 1]);
      roots.push_back(r1);
      roots.push_back(r2);
      attach.push_back(v);
    }
    InterleavingCursor cursor(s);
    LabelPartition sub;
    while (cursor.next(sub)) {
      auto sub_roots = build(sub);
      for (std::size_t j = 0; j < sub_roots.size(); ++j) merges.emplace_back(sub_roots[j], attach[j]);
    }
    return roots;
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

std::vector<LabelSet> interleave(const LabelSet& a, const LabelSet& b) {
  if (a.size() != b.size() || a.size() % 2 != 0) throw std::invalid_argument("interleave: sets must have equal even size");
  LabelSet both = a;
  both.insert(both.end(), b.begin(), b.end());
  std::sort(both.begin(), both.end());
  if (std::adjacent_find(both.begin(), both.end()) != both.end()) throw std::invalid_argument("interleave: sets overlap");
  const int half = static_cast<int>(a.size() / 2);
  auto sa = subsets(a, half);
  auto sb = subsets(b, half);
  std::vector<LabelSet> out;
  out.reserve(sa.size() * sb.size());
  for (const auto& x : sa) {
    for (const auto& y : sb) {
      LabelSet u = x;
      u.insert(u.end(), y.begin(), y.end());
      std::sort(u.begin(), u.end());
      out.push_back(std::move(u));
    }
  }
  return out;
}

InterleavingCursor::InterleavingCursor(const LabelPartition& partition) {
  if (partition.sets.size() % 2 != 0) throw std::invalid_argument("interleavings need an even number of sets");
  for (std::size_t i = 0; i + 1 < partition.sets.size(); i += 2)
    choices_.push_back(interleave(partition.sets[i], partition.sets[i + 1]));
  digit_.assign(choices_.size(), 0);
  done_ = choices_.empty();
}

bool InterleavingCursor::next(LabelPartition& out) {
  if (done_) return false;
  if (started_) {
    int i = static_cast<int>(digit_.size()) - 1;
    while (i >= 0 && digit_[i] + 1 == choices_[i].size()) {
      digit_[i] = 0;
      --i;
    }
    if (i < 0) {
      done_ = true;
      return false;
    }
    ++digit_[i];
  }
  started_ = true;
  out.sets.resize(choices_.size());
  for (std::size_t i = 0; i < choices_.size(); ++i) out.sets[i] = choices_[i][digit_[i]];
  return true;
}

std::uint64_t InterleavingCursor::count() const {
  if (choices_.empty()) return 0;
  std::uint64_t r = 1;
  for (const auto& c : choices_) {
    if (__builtin_mul_overflow(r, static_cast<std::uint64_t>(c.size()), &r)) return UINT64_MAX;
  }
  return r;
}

std::optional<std::int64_t> predicted_edge_count(int congestion, int depth) {
  if (congestion < 2 || congestion % 2 != 0 || depth < 1) return std::nullopt;
  std::int64_t m = 1;
  const std::int64_t b = binom(congestion, congestion / 2);
  for (int d = 2; d <= depth; ++d) {
    if (d - 1 >= 62) return std::nullopt;
    auto k = checked_pow(b, std::int64_t{1} << (d - 1));
    if (!k) return std::nullopt;
    auto km = checked_mul(*k, m);
    if (!km) return std::nullopt;
    m = *km + (std::int64_t{1} << (d - 1));
  }
  return m;
}

std::optional<std::int64_t> predicted_node_count(int congestion, int depth) {
  if (congestion < 2 || congestion % 2 != 0 || depth < 1) return std::nullopt;
  std::int64_t n = 2;
  const std::int64_t b = binom(congestion, congestion / 2);
  for (int d = 2; d <= depth; ++d) {
    if (d - 1 >= 62) return std::nullopt;
    auto k = checked_pow(b, std::int64_t{1} << (d - 1));
    if (!k) return std::nullopt;
    const std::int64_t half = std::int64_t{1} << (d - 2);
    auto kn = checked_mul(*k, n - half);
    if (!kn) return std::nullopt;
    n = *kn + 3 * half;
  }
  return n;
}

LowerBoundInstance build_lowerbound(int congestion, int depth, const LowerBoundLimits& limits) {
  if (congestion < 2 || congestion % 2 != 0) throw std::invalid_argument("lower bound: congestion must be even and positive");
  if (depth < 1) throw std::invalid_argument("lower bound: depth must be at least 1");
  auto describe = [&] {
    auto nodes = predicted_node_count(congestion, depth);
    return std::string("lower bound (C=") + std::to_string(congestion) + ", D=" + std::to_string(depth) +
           ") too large: predicted node count " + (nodes ? std::to_string(*nodes) : std::string("exceeds 2^63"));
  };
  if (depth + 1 >= 31 || static_cast<std::int64_t>(congestion) * (std::int64_t{1} << (depth + 1)) > limits.bit_cap)
    throw std::invalid_argument(describe());
  auto predicted = predicted_edge_count(congestion, depth);
  if (!predicted || *predicted > limits.max_edges) throw std::invalid_argument(describe());

  const int set_count = 1 << (depth - 1);
  LabelPartition top;
  for (int j = 0; j < set_count; ++j) {
    LabelSet s(congestion);
    std::iota(s.begin(), s.end(), j * congestion);
    top.sets.push_back(std::move(s));
  }
  Builder b;
  b.congestion = congestion;
  b.edges.reserve(*predicted);
  b.edge_labels.reserve(*predicted * congestion);
  auto roots = b.build(top);

  UnionFind uf(b.next_node);
  for (auto [x, y] : b.merges) uf.unite(x, y);
  std::vector<int> dense(b.next_node, -1);
  int count = 0;
  for (int x = 0; x < b.next_node; ++x) {
    int r = uf.find(x);
    if (dense[r] < 0) dense[r] = count++;
    dense[x] = dense[r];
  }

  LowerBoundInstance lb;
  lb.congestion = congestion;
  lb.depth = depth;
  const int labels = congestion * set_count;
  lb.label_edges.resize(labels);
  lb.label_root.resize(labels);
  for (int j = 0; j < set_count; ++j)
    for (Label l : top.sets[j]) lb.label_root[l] = dense[roots[j]];

  std::vector<Edge> edges;
  edges.reserve(b.edges.size());
  for (std::size_t e = 0; e < b.edges.size(); ++e) {
    Edge edge = Edge::of(dense[b.edges[e].first], dense[b.edges[e].second]);
    edges.push_back(edge);
    for (int i = 0; i < congestion; ++i) lb.label_edges[b.edge_labels[e * congestion + i]].push_back(edge);
  }

  InstanceSpec spec{Graph(count, edges), {}};
  // Orient each label's edges away from its root.
  std::vector<std::vector<NodeId>> adj(count);
  for (Label l = 0; l < labels; ++l) {
    for (const Edge& e : lb.label_edges[l]) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    TreeSpec t{l, lb.label_root[l], {}};
    std::queue<NodeId> q;
    q.push(t.root);
    std::vector<NodeId> touched{t.root};
    std::map<NodeId, bool> seen{{t.root, true}};
    while (!q.empty()) {
      NodeId x = q.front();
      q.pop();
      for (NodeId y : adj[x]) {
        if (seen.count(y)) continue;
        seen[y] = true;
        t.parent[y] = x;
        q.push(y);
      }
    }
    for (const Edge& e : lb.label_edges[l]) {
      adj[e.u].clear();
      adj[e.v].clear();
    }
    spec.trees.push_back(std::move(t));
  }
  lb.instance = MulticastInstance::from_spec(spec);
  lb.label_of_tree.resize(labels);
  std::iota(lb.label_of_tree.begin(), lb.label_of_tree.end(), 0);
  lb.stats.edges = static_cast<std::int64_t>(edges.size());
  lb.stats.nodes = count;
  lb.stats.labels = labels;
  lb.stats.recursion_depth = depth;
  return lb;
}

LemmaReport check_lemmas(const LowerBoundInstance& lb, int congestion, int depth) {
  LemmaReport r;
  const int labels = static_cast<int>(lb.label_edges.size());

  std::map<Edge, int> per_edge;
  for (const auto& es : lb.label_edges)
    for (const Edge& e : es) ++per_edge[e];
  r.congestion_ok = true;
  for (const Edge& e : lb.instance.graph().edges()) {
    auto it = per_edge.find(e);
    int c = it == per_edge.end() ? 0 : it->second;
    if (c != congestion) {
      r.congestion_ok = false;
      r.failures.push_back("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") carries " + std::to_string(c) +
                           " labels");
      break;
    }
  }
  auto metrics = compute_metrics(lb.instance);
  if (metrics.congestion != congestion) {
    r.congestion_ok = false;
    r.failures.push_back("instance congestion " + std::to_string(metrics.congestion));
  }

  // Tree and depth checks work from the raw label edge lists.
  r.trees_ok = true;
  r.dilation_ok = true;
  for (Label l = 0; l < labels; ++l) {
    const auto& es = lb.label_edges[l];
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const Edge& e : es) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    const NodeId root = lb.label_root[l];
    std::map<NodeId, int> dist;
    bool is_tree = adj.count(root) > 0;
    if (is_tree) {
      dist[root] = 0;
      std::queue<NodeId> q;
      q.push(root);
      while (!q.empty()) {
        NodeId x = q.front();
        q.pop();
        for (NodeId y : adj[x]) {
          if (dist.count(y)) continue;
          dist[y] = dist[x] + 1;
          q.push(y);
        }
      }
      is_tree = dist.size() == adj.size() && es.size() + 1 == adj.size();
    }
    if (!is_tree) {
      r.trees_ok = false;
      r.failures.push_back("label " + std::to_string(l) + " does not induce a tree rooted at " + std::to_string(root));
      continue;
    }
    int d = 0;
    for (auto& [v, x] : dist) d = std::max(d, x);
    if (d != depth) {
      r.dilation_ok = false;
      r.failures.push_back("label " + std::to_string(l) + " has depth " + std::to_string(d));
    }
  }
  if (metrics.dilation != depth) {
    r.dilation_ok = false;
    r.failures.push_back("instance dilation " + std::to_string(metrics.dilation));
  }

  const std::int64_t exponent = static_cast<std::int64_t>(congestion) * (std::int64_t{1} << std::min(depth + 1, 40));
  r.node_bound_ok = exponent >= 63 || lb.stats.nodes <= (std::int64_t{1} << exponent);
  if (!r.node_bound_ok) r.failures.push_back("node count " + std::to_string(lb.stats.nodes) + " over bound");

  r.roots_ok = true;
  std::vector<NodeId> roots = lb.label_root;
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (NodeId root : roots) {
    if (lb.instance.graph().neighbors(root).size() != 1) {
      r.roots_ok = false;
      r.failures.push_back("root " + std::to_string(root) + " has degree " +
                           std::to_string(lb.instance.graph().neighbors(root).size()));
    }
  }
  return r;
}

MulticastInstance pad_to_n(const MulticastInstance& instance, int node_count) {
  InstanceSpec spec = instance.to_spec();
  spec.graph = spec.graph.with_node_count(node_count);
  return MulticastInstance::from_spec(spec);
}

MarkovReport markov_delay_check(const MulticastInstance& instance, const Schedule& schedule) {
  auto received = receive_rounds(instance, schedule);
  MarkovReport report;
  const auto& trees = instance.trees();
  for (int e = 0; e < instance.graph().edge_count(); ++e) {
    const auto& on = instance.trees_on_edge()[e];
    if (on.empty()) continue;
    const Edge& edge = instance.graph().edge(e);
    MarkovEdge m;
    m.edge = e;
    m.congestion = static_cast<int>(on.size());
    int t0 = std::numeric_limits<int>::max();
    std::vector<std::pair<int, int>> crossing;  // tree index, child local
    for (int t : on) {
      const auto& tree = trees[t];
      int a = tree.local_of(edge.u);
      int b = tree.local_of(edge.v);
      int child = tree.parent_local(b) == a ? b : a;
      int parent = child == b ? a : b;
      t0 = std::min(t0, tree.depth_local(parent));
      crossing.emplace_back(t, child);
    }
    m.check_round = t0 + m.congestion / 2;
    for (auto [t, child] : crossing)
      if (received[t][child] > m.check_round) m.delayed_trees.push_back(trees[t].id());
    m.pass = static_cast<int>(m.delayed_trees.size()) >= (m.congestion + 1) / 2;
    report.pass = report.pass && m.pass;
    ++report.edges_checked;
    report.edges.push_back(std::move(m));
  }
  return report;
}

}  // namespace mcast
