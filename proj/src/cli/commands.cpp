#include "topogas/cli.hpp"

#include "../common/files.hpp"
#include "topogas/errors.hpp"
#include "topogas/eval.hpp"
#include "topogas/gas_io.hpp"
#include "topogas/simulate.hpp"
#include "topogas/trace.hpp"
#include "topogas/world_map.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>

#ifdef TOPOGAS_WITH_LIVE
#include "topogas/live/server.hpp"
#endif

namespace topogas::cli {

namespace {

/// A usage problem detected after flag parsing (exit code 1).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SimulateOptions {
  std::string map;
  std::size_t demonstrators = 1;
  std::uint64_t seed = 0;
  double duration = 60.0;
  double rate = 10.0;
  double speed = 440.0;
  std::string out;
};

struct TrainOptions {
  std::string trace;
  std::optional<double> rate;
  Params params;
  std::string edge_mode = "proximity";
  std::string neighbor_rule = "toward_input";
  bool keep_isolated = false;
  std::string waypoints;
  std::string map;
  std::size_t stride = 10;
  std::string out;
  std::string metrics_out;
};

struct EvalOptions {
  std::string gas;
  std::string waypoints;
  std::string map;
};

struct CompareOptions {
  std::string gas_a;
  std::string gas_b;
};

struct ExportOptions {
  std::string gas;
  std::string format = "dot";
  std::string out;
};

struct MapOptions {
  std::string map;
  std::string out;
};

void emit(const std::string &content, const std::string &path, std::ostream &out) {
  if (path.empty() || path == "-")
    out << content;
  else
    files::write_all(path, content);
}

int run_simulate(const SimulateOptions &o, std::ostream &out) {
  if (!(o.duration > 0.0)) throw UsageError("--duration must be > 0");
  if (!(o.rate > 0.0)) throw UsageError("--rate must be > 0");
  if (o.demonstrators < 1) throw UsageError("--demonstrators must be >= 1");
  const WorldMap map = resolve_map(o.map);
  SimulationSpec spec;
  spec.demonstrators = o.demonstrators;
  spec.seed = o.seed;
  spec.duration_s = o.duration;
  spec.rate_hz = o.rate;
  spec.speed = o.speed;
  const Trace trace = simulate(map, spec);
  emit(format_trace(trace), o.out, out);
  return kSuccess;
}

ReferenceWaypoints waypoint_source(const std::string &waypoints, const std::string &map) {
  if (!waypoints.empty()) return load_waypoints(waypoints);
  if (!map.empty()) return resolve_map(map).waypoints();
  return {};
}

int run_train(TrainOptions o, std::ostream &out, std::ostream &err) {
  const auto mode = parse_edge_mode(o.edge_mode);
  if (!mode) throw UsageError("--edge-mode must be proximity, trajectory or both");
  const auto rule = parse_neighbor_rule(o.neighbor_rule);
  if (!rule) throw UsageError("--neighbor-rule must be toward_input or second_offset");
  o.params.edge_mode = *mode;
  o.params.neighbor_rule = *rule;
  o.params.remove_isolated_nodes = !o.keep_isolated;
  if (o.stride == 0) throw UsageError("--stride must be >= 1");

  const ReferenceWaypoints waypoints = waypoint_source(o.waypoints, o.map);
  if (!o.metrics_out.empty() && waypoints.empty())
    throw UsageError("--metrics-out needs reference waypoints (--waypoints or --map)");

  Gas gas(o.params);

  ParsedTrace parsed = read_trace_file(o.trace);
  if (parsed.skipped > 0) err << "warning: skipped " << parsed.skipped << " malformed trace line(s)\n";
  Trace trace = std::move(parsed.trace);
  if (o.rate) trace = resample(trace, *o.rate);
  if (trace.empty()) throw MeasureError("trace '" + o.trace + "' has no usable samples");

  std::optional<MetricsRecorder> recorder;
  if (!waypoints.empty()) recorder.emplace(waypoints);
  const FeedResult fed = feed(gas, trace, recorder ? o.stride : 0, recorder ? recorder->observer() : FeedObserver{});

  if (!o.out.empty()) save_gas_file(gas, o.out);
  if (!o.metrics_out.empty()) files::write_all(o.metrics_out, format_metrics_csv(recorder->series()));

  out << "steps " << fed.steps << '\n';
  if (fed.skipped > 0) out << "skipped " << fed.skipped << '\n';
  out << "nodes " << gas.node_count() << '\n';
  out << "edges " << gas.edges().size() << '\n';
  if (recorder) {
    out << "cum_distance " << cumulated_distance(waypoints, gas) << '\n';
    const auto stable =
        detect_stable(recorder->series(), default_stability_window(gas.tick()), kDefaultStabilityEps);
    if (stable)
      out << "stable_tick " << *stable << " (t=" << *sim_time_at(recorder->series(), *stable) << " s)\n";
    else
      out << "stable_tick none\n";
  }
  return kSuccess;
}

int run_eval(const EvalOptions &o, std::ostream &out) {
  const Gas gas = load_gas_file(o.gas);
  if (gas.nodes().empty()) throw MeasureError("gas '" + o.gas + "' is empty");
  out << "nodes " << gas.node_count() << '\n';
  out << "edges " << gas.edges().size() << '\n';
  const ReferenceWaypoints waypoints = waypoint_source(o.waypoints, o.map);
  if (!waypoints.empty()) out << "cum_distance " << cumulated_distance(waypoints, gas) << '\n';
  if (!o.map.empty()) {
    const auto crossing = obstacle_crossing_edges(gas, resolve_map(o.map));
    std::size_t proximity = 0;
    for (const EdgeKey &k : crossing) proximity += k.kind == EdgeKind::proximity;
    out << "obstacle_crossing_edges " << crossing.size() << '\n';
    out << "obstacle_crossing_proximity " << proximity << '\n';
    out << "obstacle_crossing_trajectory " << crossing.size() - proximity << '\n';
  }
  return kSuccess;
}

int run_compare(const CompareOptions &o, std::ostream &out) {
  const auto cmp = compare_graphs(load_gas_file(o.gas_a), load_gas_file(o.gas_b));
  out << "nodes_a " << cmp.nodes_a << '\n';
  out << "nodes_b " << cmp.nodes_b << '\n';
  out << "chamfer " << cmp.chamfer << '\n';
  return kSuccess;
}

int run_export(const ExportOptions &o, std::ostream &out) {
  const Gas gas = load_gas_file(o.gas);
  emit(o.format == "dot" ? export_dot(gas) : export_nodes_csv(gas), o.out, out);
  return kSuccess;
}

void add_param_flags(CLI::App &cmd, TrainOptions &o) {
  cmd.add_option("--winner-attraction", o.params.winner_attraction, "Fraction of (input - winner) applied to the winner")
      ->capture_default_str();
  cmd.add_option("--neighbor-attraction", o.params.neighbor_attraction, "Fraction applied to the winner's neighbours")
      ->capture_default_str();
  cmd.add_option("--error-decay", o.params.error_decay, "Error removed from every node per input (WU)")
      ->capture_default_str();
  cmd.add_option("--max-error", o.params.max_error, "Winner error that triggers an insertion (WU)")
      ->capture_default_str();
  cmd.add_option("--max-age", o.params.max_age, "Edges older than this are deleted")->capture_default_str();
  cmd.add_option("--edge-mode", o.edge_mode, "proximity | trajectory | both")->capture_default_str();
  cmd.add_option("--neighbor-rule", o.neighbor_rule, "toward_input | second_offset (experimental)")
      ->capture_default_str();
  cmd.add_flag("--keep-isolated", o.keep_isolated, "Do not delete nodes that lose their last edge");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Learn navigation topologies from demonstrator traces with a growing neural gas", "topogas"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto *simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic demonstrator trace");
  simulate_cmd->add_option("--map", sim.map, "Built-in map name or fixture path")->required();
  simulate_cmd->add_option("--demonstrators", sim.demonstrators, "Number of simulated players")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--duration", sim.duration, "Simulated seconds")->capture_default_str();
  simulate_cmd->add_option("--rate", sim.rate, "Sampling rate (Hz)")->capture_default_str();
  simulate_cmd->add_option("--speed", sim.speed, "Walking speed (WU/s)")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Trace output path (stdout if omitted)");

  TrainOptions train;
  auto *train_cmd = app.add_subcommand("train", "Replay a trace through a growing neural gas");
  train_cmd->add_option("--trace", train.trace, "Trace file")->required();
  train_cmd->add_option("--rate", train.rate, "Resample the trace to this rate (Hz) before training");
  add_param_flags(*train_cmd, train);
  train_cmd->add_option("--waypoints", train.waypoints, "Reference waypoints file (x y [z] lines or map fixture)");
  train_cmd->add_option("--map", train.map, "Map whose waypoints serve as the reference");
  train_cmd->add_option("--stride", train.stride, "Metrics sampling stride (steps)")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Gas document output path");
  train_cmd->add_option("--metrics-out", train.metrics_out, "Metrics table output path");

  EvalOptions eval;
  auto *eval_cmd = app.add_subcommand("eval", "Report measures of a learned gas");
  eval_cmd->add_option("gas", eval.gas, "Gas document")->required();
  eval_cmd->add_option("--waypoints", eval.waypoints, "Reference waypoints file");
  eval_cmd->add_option("--map", eval.map, "Map for waypoints and obstacle checks");

  CompareOptions compare;
  auto *compare_cmd = app.add_subcommand("compare", "Compare two learned gases");
  compare_cmd->add_option("gas_a", compare.gas_a, "First gas document")->required();
  compare_cmd->add_option("gas_b", compare.gas_b, "Second gas document")->required();

  ExportOptions exp;
  auto *export_cmd = app.add_subcommand("export", "Render a gas as Graphviz or a CSV node table");
  export_cmd->add_option("gas", exp.gas, "Gas document")->required();
  export_cmd->add_option("--format", exp.format, "dot | csv")
      ->check(CLI::IsMember({"dot", "csv"}))
      ->capture_default_str();
  export_cmd->add_option("--out", exp.out, "Output path (stdout if omitted)");

  MapOptions map_opts;
  auto *map_cmd = app.add_subcommand("map", "Print a map fixture");
  map_cmd->add_option("--map", map_opts.map, "Built-in map name or fixture path")->required();
  map_cmd->add_option("--out", map_opts.out, "Output path (stdout if omitted)");

#ifdef TOPOGAS_WITH_LIVE
  live::ServerOptions serve;
  auto *serve_cmd = app.add_subcommand("serve", "Run the live learning session server");
  serve_cmd->add_option("--address", serve.address, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Listen port (0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("--interval-ms", serve.snapshot_interval_ms, "Snapshot interval")->capture_default_str();
  serve_cmd->add_option("--max-input-hz", serve.max_input_hz, "Per-demonstrator input cap (0 disables)")
      ->capture_default_str();
#endif

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim, out);
    if (*train_cmd) return run_train(train, out, err);
    if (*eval_cmd) return run_eval(eval, out);
    if (*compare_cmd) return run_compare(compare, out);
    if (*export_cmd) return run_export(exp, out);
    if (*map_cmd) {
      emit(format_map(resolve_map(map_opts.map)), map_opts.out, out);
      return kSuccess;
    }
#ifdef TOPOGAS_WITH_LIVE
    if (*serve_cmd) return live::run_server(serve, out);
#endif
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

} // namespace topogas::cli
