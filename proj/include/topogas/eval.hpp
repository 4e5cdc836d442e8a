#pragma once

#include "topogas/gas.hpp"
#include "topogas/trace.hpp"
#include "topogas/world_map.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topogas {

/// Hand-placed navigation points used only as an evaluation reference.
using ReferenceWaypoints = std::vector<Position>;

/// Reads reference waypoints: either a map fixture (its planted waypoints) or
/// lines of `x y [z]` with `#` comments.
ReferenceWaypoints load_waypoints(const std::string &path);
ReferenceWaypoints parse_waypoints(std::string_view document);

/// Sum over waypoints of the distance to the closest node. Throws MeasureError
/// if either side is empty.
double cumulated_distance(std::span<const Position> waypoints, const Gas &gas);

struct MetricsRecord {
  std::uint64_t tick = 0;
  double sim_time = 0.0;
  std::size_t node_count = 0;
  double cum_distance = 0.0;

  friend bool operator==(const MetricsRecord &, const MetricsRecord &) = default;
};

/// Ticks strictly increasing.
using MetricsSeries = std::vector<MetricsRecord>;

/// Earliest tick T at which the trailing window [T - window, T] is complete,
/// holds at least two records, has a constant node count, and has
/// max - min of cum_distance <= eps_rel * (window mean of cum_distance).
std::optional<std::uint64_t> detect_stable(const MetricsSeries &series, std::uint64_t window, double eps_rel);

/// 20% of the run, the default trailing window.
std::uint64_t default_stability_window(std::uint64_t run_ticks);
inline constexpr double kDefaultStabilityEps = 0.05;

/// Simulated time at `tick`, read from the series.
std::optional<double> sim_time_at(const MetricsSeries &series, std::uint64_t tick);

std::string format_metrics_csv(const MetricsSeries &series);
MetricsSeries parse_metrics_csv(std::string_view document);

/// Collects a MetricsSeries while feeding a trace.
class MetricsRecorder {
public:
  explicit MetricsRecorder(ReferenceWaypoints waypoints) : waypoints_(std::move(waypoints)) {}

  void record(const Gas &gas, double sim_time);
  FeedObserver observer() {
    return [this](const Gas &gas, const Sample &s) { record(gas, s.t); };
  }
  const MetricsSeries &series() const { return series_; }

private:
  ReferenceWaypoints waypoints_;
  MetricsSeries series_;
};

struct GraphComparison {
  std::size_t nodes_a = 0;
  std::size_t nodes_b = 0;
  double chamfer = 0.0; ///< sum of both directed nearest-node distance sums
};

GraphComparison compare_graphs(const Gas &a, const Gas &b);

/// Edges whose straight segment passes through a blocked cell of the map.
std::vector<EdgeKey> obstacle_crossing_edges(const Gas &gas, const WorldMap &map);

} // namespace topogas
