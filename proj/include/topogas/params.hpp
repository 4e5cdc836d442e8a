#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace topogas {

/// Which edges the gas grows.
///  - proximity:  winner/second-nearest links (classic GNG edges)
///  - trajectory: links between consecutive winners of the same demonstrator
///  - both:       both kinds side by side
enum class EdgeMode { proximity, trajectory, both };

/// How graph neighbours of the winner are attracted.
///  - toward_input:  each neighbour n moves by neighbor_attraction * (input - n)
///  - second_offset: each neighbour moves by neighbor_attraction * (input - second);
///                   experimental, kept for comparison only
enum class NeighborRule { toward_input, second_offset };

struct Params {
  double winner_attraction = 0.03;
  double neighbor_attraction = 0.0006;
  double error_decay = 10.0;
  double max_error = 20000.0;
  int max_age = 75;
  EdgeMode edge_mode = EdgeMode::proximity;
  bool remove_isolated_nodes = true;
  NeighborRule neighbor_rule = NeighborRule::toward_input;

  bool grows_proximity_edges() const { return edge_mode != EdgeMode::trajectory; }
  bool grows_trajectory_edges() const { return edge_mode != EdgeMode::proximity; }

  /// Throws ConfigError naming the first violated bound.
  void validate() const;

  friend bool operator==(const Params &, const Params &) = default;
};

std::string_view to_string(EdgeMode mode);
std::string_view to_string(NeighborRule rule);
std::optional<EdgeMode> parse_edge_mode(std::string_view text);
std::optional<NeighborRule> parse_neighbor_rule(std::string_view text);

} // namespace topogas
