#include "topogas/eval.hpp"

#include "../common/files.hpp"
#include "../common/text.hpp"
#include "topogas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace topogas {

namespace {

double nearest_node_distance(const Position &p, const std::vector<Node> &nodes) {
  double best = std::numeric_limits<double>::infinity();
  for (const Node &n : nodes) best = std::min(best, squared_distance(p, n.pos));
  return std::sqrt(best);
}

} // namespace

ReferenceWaypoints parse_waypoints(std::string_view document) {
  if (text::trim(document).starts_with("topogas-map")) return parse_map(document).waypoints();
  ReferenceWaypoints out;
  text::LineReader lines(document);
  std::string_view line;
  while (lines.next(line)) {
    const auto f = text::split(text::strip_comment(line), " \t\r,");
    if (f.empty()) continue;
    if (f.size() != 2 && f.size() != 3) throw ParseError(lines.line_number(), "waypoint", "expected: x y [z]");
    Position p;
    const char *names[] = {"x", "y", "z"};
    double *slots[] = {&p.x, &p.y, &p.z};
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto v = text::parse_double(f[i]);
      if (!v || !std::isfinite(*v)) throw ParseError(lines.line_number(), names[i], "not a finite number");
      *slots[i] = *v;
    }
    out.push_back(p);
  }
  return out;
}

ReferenceWaypoints load_waypoints(const std::string &path) { return parse_waypoints(files::read_all(path)); }

double cumulated_distance(std::span<const Position> waypoints, const Gas &gas) {
  if (gas.nodes().empty()) throw MeasureError("cumulated distance is undefined for an empty gas");
  if (waypoints.empty()) throw MeasureError("cumulated distance needs at least one reference waypoint");
  double sum = 0.0;
  for (const Position &p : waypoints) sum += nearest_node_distance(p, gas.nodes());
  return sum;
}

std::optional<std::uint64_t> detect_stable(const MetricsSeries &series, std::uint64_t window, double eps_rel) {
  if (window == 0) throw ConfigError("detect_stable: window must be > 0");
  if (series.empty()) return std::nullopt;
  const std::uint64_t first = series.front().tick;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < series.size(); ++hi) {
    const std::uint64_t end = series[hi].tick;
    if (end < first + window) continue;
    while (series[lo].tick < end - window) ++lo;
    if (hi - lo + 1 < 2) continue;

    bool flat_count = true;
    double lowest = series[lo].cum_distance, highest = lowest, sum = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      flat_count = flat_count && series[i].node_count == series[lo].node_count;
      lowest = std::min(lowest, series[i].cum_distance);
      highest = std::max(highest, series[i].cum_distance);
      sum += series[i].cum_distance;
    }
    const double mean = sum / static_cast<double>(hi - lo + 1);
    if (flat_count && highest - lowest <= eps_rel * mean) return end;
  }
  return std::nullopt;
}

std::uint64_t default_stability_window(std::uint64_t run_ticks) { return std::max<std::uint64_t>(2, run_ticks / 5); }

std::optional<double> sim_time_at(const MetricsSeries &series, std::uint64_t tick) {
  auto it = std::find_if(series.begin(), series.end(), [tick](const MetricsRecord &r) { return r.tick == tick; });
  if (it == series.end()) return std::nullopt;
  return it->sim_time;
}

std::string format_metrics_csv(const MetricsSeries &series) {
  std::ostringstream out;
  out << "tick,sim_time,node_count,cum_distance\n";
  for (const MetricsRecord &r : series)
    out << r.tick << ',' << text::format_double(r.sim_time) << ',' << r.node_count << ','
        << text::format_double(r.cum_distance) << '\n';
  return out.str();
}

MetricsSeries parse_metrics_csv(std::string_view document) {
  MetricsSeries series;
  text::LineReader lines(document);
  std::string_view line;
  if (!lines.next(line) || text::trim(line) != "tick,sim_time,node_count,cum_distance")
    throw ParseError(1, "header", "expected 'tick,sim_time,node_count,cum_distance'");
  while (lines.next(line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, ",");
    if (f.size() != 4) throw ParseError(lines.line_number(), "record", "expected 4 comma-separated fields");
    const auto tick = text::parse_int<std::uint64_t>(text::trim(f[0]));
    const auto time = text::parse_double(text::trim(f[1]));
    const auto count = text::parse_int<std::size_t>(text::trim(f[2]));
    const auto dist = text::parse_double(text::trim(f[3]));
    if (!tick) throw ParseError(lines.line_number(), "tick", "not an integer");
    if (!time) throw ParseError(lines.line_number(), "sim_time", "not a number");
    if (!count) throw ParseError(lines.line_number(), "node_count", "not an integer");
    if (!dist) throw ParseError(lines.line_number(), "cum_distance", "not a number");
    if (!series.empty() && *tick <= series.back().tick)
      throw ParseError(lines.line_number(), "tick", "ticks must be strictly increasing");
    series.push_back({*tick, *time, *count, *dist});
  }
  return series;
}

void MetricsRecorder::record(const Gas &gas, double sim_time) {
  if (!series_.empty() && gas.tick() <= series_.back().tick) return;
  series_.push_back({gas.tick(), sim_time, gas.node_count(), cumulated_distance(waypoints_, gas)});
}

GraphComparison compare_graphs(const Gas &a, const Gas &b) {
  if (a.nodes().empty() || b.nodes().empty()) throw MeasureError("compare_graphs needs two non-empty graphs");
  GraphComparison out{a.node_count(), b.node_count(), 0.0};
  for (const Node &n : a.nodes()) out.chamfer += nearest_node_distance(n.pos, b.nodes());
  for (const Node &m : b.nodes()) out.chamfer += nearest_node_distance(m.pos, a.nodes());
  return out;
}

std::vector<EdgeKey> obstacle_crossing_edges(const Gas &gas, const WorldMap &map) {
  std::vector<EdgeKey> out;
  for (const Edge &e : gas.edges())
    if (map.segment_blocked(gas.find_node(e.key.a)->pos, gas.find_node(e.key.b)->pos)) out.push_back(e.key);
  return out;
}

} // namespace topogas
