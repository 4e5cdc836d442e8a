#pragma once

#include "topogas/trace.hpp"
#include "topogas/world_map.hpp"

#include <cstddef>
#include <cstdint>

namespace topogas {

struct SimulationSpec {
  std::size_t demonstrators = 1;
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  double speed = 440.0; ///< WU/s, about 8.8 m/s at 50 WU per meter
  double rate_hz = 10.0;
  double jitter = 10.0; ///< uniform +-jitter WU added to x and y of every sample
};

/// Simulated players: each starts on a seeded random walkable cell, then keeps
/// picking a random waypoint and walking a grid-shortest path to it through
/// cell centers, choosing uniformly among equally short routes at each step.
/// Output is the merged trace of all demonstrators (ids 0..n-1), a pure
/// function of (map, spec).
Trace simulate(const WorldMap &map, const SimulationSpec &spec);

} // namespace topogas
