#include "mcast/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mcast {

Json instance_to_json(const InstanceSpec& spec) {
  Json j;
  j["n"] = spec.graph.node_count();
  Json edges = Json::array();
  for (const Edge& e : spec.graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  std::vector<const TreeSpec*> trees;
  for (const auto& t : spec.trees) trees.push_back(&t);
  std::stable_sort(trees.begin(), trees.end(), [](auto* a, auto* b) { return a->id < b->id; });
  Json jt = Json::array();
  for (const TreeSpec* t : trees) {
    Json parent = Json::object();
    for (auto [child, p] : t->parent) parent[std::to_string(child)] = p;
    jt.push_back({{"id", t->id}, {"root", t->root}, {"parent", std::move(parent)}});
  }
  j["trees"] = std::move(jt);
  return j;
}

InstanceSpec instance_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
      edges.push_back(Edge::of(e[0].get<int>(), e[1].get<int>()));
    }
    InstanceSpec spec{Graph(n, std::move(edges)), {}};
    for (const auto& t : j.at("trees")) {
      TreeSpec ts{t.at("id").get<int>(), t.at("root").get<int>(), {}};
      for (const auto& [child, p] : t.at("parent").items()) {
        std::size_t used = 0;
        int c = std::stoi(child, &used);
        if (used != child.size()) throw ParseError("bad node key '" + child + "'");
        ts.parent[c] = p.get<int>();
      }
      spec.trees.push_back(std::move(ts));
    }
    return spec;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

Json schedule_to_json(const Schedule& schedule) {
  Schedule s = schedule;
  std::sort(s.sends.begin(), s.sends.end());
  Json sends = Json::array();
  for (const Send& x : s.sends) sends.push_back({{"round", x.round}, {"from", x.from}, {"to", x.to}, {"msg", x.message}});
  return {{"length", s.length}, {"sends", std::move(sends)}};
}

Schedule schedule_from_json(const Json& j) {
  try {
    Schedule s;
    s.length = j.at("length").get<int>();
    for (const auto& x : j.at("sends"))
      s.sends.push_back({x.at("round").get<int>(), x.at("from").get<int>(), x.at("to").get<int>(), x.at("msg").get<int>()});
    return s;
  } catch (const std::exception& e) {
    throw ParseError(std::string("schedule: ") + e.what());
  }
}

Json decomposition_to_json(const PathDecomposition& d) { return {{"paths", d.paths}, {"levels", d.levels}}; }

std::string dump(const Json& j) { return j.dump() + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << contents;
}

}  // namespace mcast
