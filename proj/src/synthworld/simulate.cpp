#include "topogas/simulate.hpp"

#include "topogas/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace topogas {

namespace {

constexpr int kMaxGoalRetries = 100;
constexpr GridCoord kSteps[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The std distributions are implementation-defined; these keep traces identical across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::size_t below(std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double symmetric(double half_width) { return (2.0 * unit() - 1.0) * half_width; }

private:
  std::mt19937_64 engine_;
};

class Walker {
public:
  Walker(const WorldMap &map, Rng rng, double jitter) : map_(map), rng_(std::move(rng)), jitter_(jitter) {
    const auto cells = map.walkable_cells();
    cell_ = cells[rng_.below(cells.size())];
    pos_ = map.cell_center(cell_);
  }

  void advance(double distance) {
    while (distance > 0.0) {
      if (next_ >= path_.size()) plan();
      const Position target = map_.cell_center(path_[next_]);
      const double gap = std::hypot(target.x - pos_.x, target.y - pos_.y);
      if (gap <= distance) {
        pos_ = target;
        cell_ = path_[next_++];
        distance -= gap;
      } else {
        const double f = distance / gap;
        pos_.x += f * (target.x - pos_.x);
        pos_.y += f * (target.y - pos_.y);
        distance = 0.0;
      }
    }
  }

  Position observe() {
    Position p = pos_;
    p.x += rng_.symmetric(jitter_);
    p.y += rng_.symmetric(jitter_);
    p.z = map_.height_at(map_.cell_of(p));
    return p;
  }

private:
  void plan() {
    const auto &goals = map_.waypoint_cells();
    for (int attempt = 0; attempt < kMaxGoalRetries; ++attempt) {
      const GridCoord goal = goals[rng_.below(goals.size())];
      if (goal == cell_) continue;
      auto path = random_shortest_path(goal);
      if (path.size() < 2) continue;
      path_ = std::move(path);
      next_ = 1;
      return;
    }
    throw std::runtime_error("simulate: no reachable waypoint goal after " + std::to_string(kMaxGoalRetries) +
                             " attempts on map '" + map_.name() + "'");
  }

  // A uniformly chosen step toward the goal at every cell, so equally short routes all get used.
  std::vector<GridCoord> random_shortest_path(GridCoord goal) {
    const auto dist = map_.step_distances(goal);
    const auto at = [&](GridCoord c) { return dist[static_cast<std::size_t>(c.row) * map_.cols() + c.col]; };
    if (at(cell_) < 0) return {};
    std::vector<GridCoord> path{cell_};
    for (GridCoord c = cell_; !(c == goal);) {
      GridCoord options[4];
      std::size_t count = 0;
      for (GridCoord d : kSteps) {
        const GridCoord n{c.col + d.col, c.row + d.row};
        if (map_.walkable(n) && at(n) == at(c) - 1) options[count++] = n;
      }
      c = options[rng_.below(count)];
      path.push_back(c);
    }
    return path;
  }

  const WorldMap &map_;
  Rng rng_;
  double jitter_;
  GridCoord cell_;
  Position pos_;
  std::vector<GridCoord> path_;
  std::size_t next_ = 0;
};

} // namespace

Trace simulate(const WorldMap &map, const SimulationSpec &spec) {
  if (spec.demonstrators < 1) throw ConfigError("simulate: need at least one demonstrator");
  if (!(std::isfinite(spec.duration_s) && spec.duration_s > 0.0)) throw ConfigError("simulate: duration must be > 0");
  if (!(std::isfinite(spec.rate_hz) && spec.rate_hz > 0.0)) throw ConfigError("simulate: rate must be > 0");
  if (!(std::isfinite(spec.speed) && spec.speed > 0.0)) throw ConfigError("simulate: speed must be > 0");
  if (!(spec.jitter >= 0.0 && spec.jitter < 0.5 * map.cell_size()))
    throw ConfigError("simulate: jitter must lie in [0, cell_size / 2)");
  if (map.waypoint_cells().empty()) throw ConfigError("simulate: map has no waypoints to walk to");

  const auto count = static_cast<std::uint64_t>(std::llround(spec.duration_s * spec.rate_hz));
  const double step = spec.speed / spec.rate_hz;

  Trace trace;
  trace.rate_hint = spec.rate_hz;
  trace.samples.reserve(count * spec.demonstrators);
  for (std::size_t d = 0; d < spec.demonstrators; ++d) {
    Walker walker(map, Rng(spec.seed ^ splitmix64(0xd1b54a32d192ed03ULL * (d + 1))), spec.jitter);
    for (std::uint64_t k = 0; k < count; ++k) {
      if (k > 0) walker.advance(step);
      trace.samples.push_back(Sample{static_cast<double>(k) / spec.rate_hz, static_cast<DemonstratorId>(d), walker.observe()});
    }
  }
  sort_trace(trace);
  return trace;
}

} // namespace topogas
