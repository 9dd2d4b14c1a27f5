#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "mcast/bench.hpp"
#include "mcast/congest.hpp"
#include "mcast/decomposition.hpp"
#include "mcast/generators.hpp"
#include "mcast/io.hpp"
#include "mcast/lowerbound.hpp"
#include "mcast/schedulers.hpp"
#include "mcast/util.hpp"

using namespace mcast;

namespace {

// Invariant breaches inside the tool (as opposed to bad input).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

// Metrics and stats go to stdout when the artifact went to a file, else stderr.
std::ostream& info(const std::string& out) { return out.empty() || out == "-" ? std::cerr : std::cout; }

MulticastInstance load_instance(const std::string& path) {
  return MulticastInstance::from_spec(instance_from_json(parse_json(read_file(path))));
}

std::string metrics_line(const MulticastInstance& inst) {
  auto m = compute_metrics(inst);
  return "n=" + std::to_string(m.node_count) + " C=" + std::to_string(m.congestion) + " D=" + std::to_string(m.dilation) +
         " trees=" + std::to_string(inst.tree_count()) + " edges=" + std::to_string(inst.graph().edge_count());
}

std::uint64_t default_seed() {
  const char* env = std::getenv("MCAST_SEED");
  if (!env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw std::invalid_argument("MCAST_SEED is not a number");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedules simultaneous multicasts in the store-and-forward model."};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string out;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance (random, congested or lowerbound).");
  std::string gen_kind;
  int n = 0, trees = 0, depth = 0, congestion = 0, pad_to = 0;
  gen->add_option("kind", gen_kind, "random | congested | lowerbound")->required()->check(
      CLI::IsMember({"random", "congested", "lowerbound"}));
  gen->add_option("--n", n, "node count");
  gen->add_option("--trees", trees, "tree count (random)");
  gen->add_option("--depth", depth, "target depth");
  gen->add_option("--congestion", congestion, "congestion (congested, lowerbound)");
  gen->add_option("--pad-to", pad_to, "append isolated nodes up to this count (lowerbound)");
  gen->add_option("--seed", seed, "seed (default $MCAST_SEED or 0)");
  gen->add_option("--out", out, "output file (default stdout)");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Schedule an instance and verify the result.");
  std::string instance_path, scheduler = "frames";
  int budget = 0, chunk = 0, bit_factor = 4;
  double epsilon = 0.25;
  bool pad_frames = false;
  sched->add_option("--instance", instance_path, "instance JSON")->required();
  sched->add_option("--scheduler", scheduler, "greedy | random-delay | frames | deterministic | congest")
      ->check(CLI::IsMember({"greedy", "random-delay", "frames", "deterministic", "congest"}));
  sched->add_option("--seed", seed, "seed (default $MCAST_SEED or 0)");
  sched->add_option("--budget", budget, "frame congestion budget for deterministic (default 8 ceil(log2 n))");
  sched->add_option("--chunk", chunk, "chunk length for frames/deterministic (default ceil(log2 n))");
  sched->add_flag("--pad-frames", pad_frames, "pad frames to the longest frame (frames)");
  sched->add_option("--epsilon", epsilon, "epsilon (congest)");
  sched->add_option("--bit-factor", bit_factor, "B = bit_factor * ceil(log2 n) (congest)");
  sched->add_option("--out", out, "output file (default stdout)");

  // validate
  auto* val = app.add_subcommand("validate", "Validate an instance, and optionally a schedule for it.");
  std::string schedule_path;
  val->add_option("--instance", instance_path, "instance JSON")->required();
  val->add_option("--schedule", schedule_path, "schedule JSON");

  // decompose
  auto* dec = app.add_subcommand("decompose", "Print path decompositions.");
  std::string kind = "short";
  int tree_id = -1;
  dec->add_option("--instance", instance_path, "instance JSON")->required();
  dec->add_option("--kind", kind, "heavy | rank | short | rank-short")
      ->check(CLI::IsMember({"heavy", "rank", "short", "rank-short"}));
  dec->add_option("--tree", tree_id, "only this tree id");
  dec->add_option("--chunk", chunk, "chunk length for short kinds (default ceil(log2 n))");
  dec->add_option("--out", out, "output file (default stdout)");

  // congest-sim
  auto* cs = app.add_subcommand("congest-sim", "Run the CONGEST simulation.");
  bool depths_known = false, multicast = false;
  cs->add_option("--instance", instance_path, "instance JSON")->required();
  cs->add_option("--epsilon", epsilon, "epsilon");
  cs->add_option("--seed", seed, "shared seed (default $MCAST_SEED or 0)");
  cs->add_option("--bit-factor", bit_factor, "B = bit_factor * ceil(log2 n)");
  cs->add_flag("--depths-known", depths_known, "nodes know their depths; runs the multicast");
  cs->add_flag("--multicast", multicast, "run the multicast (decomposition first unless --depths-known)");
  cs->add_option("--out", out, "output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand(
      "bench",
      "Run a benchmark suite and write CSV.\n"
      "Suite JSON: {\"cells\":[{\"n\":..,\"C\":..,\"D\":..}], \"seeds\":[..], \"schedulers\":[..], \"workers\":k}\n"
      "CSV columns: n,C,D,scheduler,seed,length,frame_count,max_frame_congestion,wall_ms,status\n"
      "  C and D are the realized congestion and dilation; status is ok, invalid or error: <message>.");
  std::string suite_path;
  int workers = 0;
  bench->add_option("--suite", suite_path, "suite JSON")->required();
  bench->add_option("--workers", workers, "override the suite's worker count");
  bench->add_option("--out", out, "output CSV (default stdout)");

  // check-lemmas
  auto* lem = app.add_subcommand("check-lemmas", "Build a lower-bound instance and check its structural lemmas.");
  lem->add_option("--congestion", congestion, "even congestion")->required();
  lem->add_option("--depth", depth, "depth")->required();

  // opt
  auto* opt = app.add_subcommand("opt", "Exact optimum of a tiny instance.");
  int horizon = 8;
  opt->add_option("--instance", instance_path, "instance JSON")->required();
  opt->add_option("--horizon", horizon, "largest length searched (<= 8)");

  try {
    seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) {
      Json j;
      std::string line;
      if (gen_kind == "random") {
        auto inst = gen_random_instance(n, trees, depth, seed);
        j = instance_to_json(inst.to_spec());
        line = metrics_line(inst);
      } else if (gen_kind == "congested") {
        auto inst = gen_congested_instance(n, congestion, depth, seed);
        j = instance_to_json(inst.to_spec());
        line = metrics_line(inst);
      } else {
        auto lb = build_lowerbound(congestion, depth);
        auto inst = pad_to ? pad_to_n(lb.instance, pad_to) : lb.instance;
        j = instance_to_json(inst.to_spec());
        j["stats"] = {{"m_D", lb.stats.edges}, {"nodes", lb.stats.nodes}, {"labels", lb.stats.labels}};
        line = metrics_line(inst);
      }
      emit(dump(j), out);
      info(out) << line << "\n";
    } else if (sched->parsed()) {
      auto inst = load_instance(instance_path);
      Schedule s;
      if (scheduler == "frames") {
        FrameOptions fo;
        if (chunk > 0) fo.chunk_length = chunk;
        fo.pad_frames = pad_frames;
        s = frame_multicast_schedule(inst, seed, fo).schedule;
      } else if (scheduler == "deterministic") {
        const int b = budget > 0 ? budget : 8 * std::max(1, ceil_log2(inst.node_count()));
        auto ds = deterministic_schedule(inst, b, 1024, chunk > 0 ? std::optional<int>(chunk) : std::nullopt);
        info(out) << "seed=" << ds.seed << "\n";
        s = std::move(ds.result.schedule);
      } else if (scheduler == "congest") {
        DistributedOptions o;
        o.seed = seed;
        o.epsilon = epsilon;
        o.bit_factor = bit_factor;
        auto dm = distributed_multicast(inst, o, true);
        info(out) << "congest_rounds=" << dm.rounds << "\n";
        s = std::move(dm.schedule);
      } else {
        s = run_scheduler(inst, scheduler, seed).schedule;
      }
      auto report = simulate(inst, s);
      if (!report.valid) throw InternalError(scheduler + " produced an invalid schedule");
      auto m = compute_metrics(inst);
      const int lg = std::max(1, ceil_log2(m.node_count));
      const double ratio = static_cast<double>(s.length) / (m.congestion + m.dilation + lg * lg);
      emit(dump(schedule_to_json(s)), out);
      info(out) << "length=" << s.length << " C=" << m.congestion << " D=" << m.dilation << " n=" << m.node_count
                << " ratio=" << ratio << "\n";
    } else if (val->parsed()) {
      auto spec = instance_from_json(parse_json(read_file(instance_path)));
      auto report = validate_instance(spec);
      if (!report.ok()) {
        std::cout << report.to_string();
        return 1;
      }
      auto inst = MulticastInstance::from_spec(spec);
      std::cout << "instance ok " << metrics_line(inst) << "\n";
      if (!schedule_path.empty()) {
        auto r = simulate(inst, schedule_from_json(parse_json(read_file(schedule_path))));
        for (const auto& v : r.violations)
          std::cout << "round " << v.round << ": " << to_string(v.kind) << " " << v.detail << "\n";
        if (!r.valid) {
          std::cout << "schedule invalid";
          for (int t : r.undelivered_trees) std::cout << " undelivered=" << t;
          std::cout << "\n";
          return 1;
        }
        std::cout << "schedule ok length=" << *r.length << " redundant=" << r.redundant_sends << "\n";
      }
    } else if (dec->parsed()) {
      auto inst = load_instance(instance_path);
      const int ell = chunk > 0 ? chunk : default_chunk_length(inst.node_count());
      Json all = Json::array();
      for (const auto& t : inst.trees()) {
        if (tree_id >= 0 && t.id() != tree_id) continue;
        PathDecomposition d;
        if (kind == "heavy") d = heavy_path_decomposition(t);
        else if (kind == "rank") d = rank_decomposition(t).decomposition;
        else if (kind == "short") d = shorten(heavy_path_decomposition(t), t, ell);
        else d = shorten(rank_decomposition(t).decomposition, t, ell);
        Json j = decomposition_to_json(d);
        if (tree_id >= 0) {
          emit(dump(j), out);
          return 0;
        }
        j["id"] = t.id();
        all.push_back(std::move(j));
      }
      if (tree_id >= 0) throw std::invalid_argument("no tree with id " + std::to_string(tree_id));
      emit(dump(all), out);
    } else if (cs->parsed()) {
      auto inst = load_instance(instance_path);
      DistributedOptions o;
      o.seed = seed;
      o.epsilon = epsilon;
      o.bit_factor = bit_factor;
      Json j;
      if (multicast || depths_known) {
        auto dm = distributed_multicast(inst, o, depths_known);
        if (!simulate(inst, dm.schedule).valid) throw InternalError("distributed multicast schedule is invalid");
        j["rounds"] = dm.rounds;
        j["max_bits"] = message_size_audit(dm.transcript).max_bits;
        j["schedule"] = schedule_to_json(dm.schedule);
      } else {
        auto dd = distributed_rank_decomposition(inst, o);
        j["rounds"] = dd.rounds;
        j["max_bits"] = message_size_audit(dd.transcript).max_bits;
        Json ds = Json::array();
        for (int t = 0; t < inst.tree_count(); ++t) {
          Json x = decomposition_to_json(dd.decompositions[t]);
          x["id"] = inst.trees()[t].id();
          ds.push_back(std::move(x));
        }
        j["decomposition"] = std::move(ds);
      }
      emit(dump(j), out);
    } else if (bench->parsed()) {
      auto suite = suite_from_json(parse_json(read_file(suite_path)));
      if (workers > 0) suite.workers = workers;
      emit(bench_csv(run_bench(suite)), out);
    } else if (lem->parsed()) {
      auto lb = build_lowerbound(congestion, depth);
      auto r = check_lemmas(lb, congestion, depth);
      Json j{{"congestion", r.congestion_ok}, {"dilation", r.dilation_ok}, {"trees", r.trees_ok},
             {"node_bound", r.node_bound_ok}, {"roots", r.roots_ok}, {"failures", r.failures},
             {"m_D", lb.stats.edges}, {"nodes", lb.stats.nodes}, {"labels", lb.stats.labels}};
      std::cout << dump(j);
      return r.all() ? 0 : 1;
    } else if (opt->parsed()) {
      auto inst = load_instance(instance_path);
      auto best = exhaustive_opt(inst, horizon);
      Json j{{"optimum", best ? Json(*best) : Json(nullptr)}, {"horizon", horizon}};
      std::cout << dump(j);
    }
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    // invalid_argument (and ParseError, InvalidInstance) derive from logic_error.
    if (dynamic_cast<const std::invalid_argument*>(&e)) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const SeedSearchFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DistributedFailure& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
