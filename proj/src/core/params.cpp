#include "topogas/params.hpp"

#include "topogas/errors.hpp"

#include <cmath>
#include <string>

namespace topogas {

void Params::validate() const {
  auto fail = [](const std::string &what) { throw ConfigError("invalid params: " + what); };
  if (!(std::isfinite(winner_attraction) && winner_attraction > 0.0 && winner_attraction <= 1.0))
    fail("winner_attraction must lie in (0, 1]");
  if (!(std::isfinite(neighbor_attraction) && neighbor_attraction >= 0.0 && neighbor_attraction <= 1.0))
    fail("neighbor_attraction must lie in [0, 1]");
  if (!(std::isfinite(error_decay) && error_decay > 0.0)) fail("error_decay must be > 0");
  if (!(std::isfinite(max_error) && max_error > 0.0)) fail("max_error must be > 0");
  if (max_age < 1) fail("max_age must be >= 1");
}

std::string_view to_string(EdgeMode mode) {
  switch (mode) {
  case EdgeMode::proximity: return "proximity";
  case EdgeMode::trajectory: return "trajectory";
  case EdgeMode::both: return "both";
  }
  return "proximity";
}

std::string_view to_string(NeighborRule rule) {
  switch (rule) {
  case NeighborRule::toward_input: return "toward_input";
  case NeighborRule::second_offset: return "second_offset";
  }
  return "toward_input";
}

std::optional<EdgeMode> parse_edge_mode(std::string_view text) {
  if (text == "proximity") return EdgeMode::proximity;
  if (text == "trajectory") return EdgeMode::trajectory;
  if (text == "both") return EdgeMode::both;
  return std::nullopt;
}

std::optional<NeighborRule> parse_neighbor_rule(std::string_view text) {
  if (text == "toward_input") return NeighborRule::toward_input;
  if (text == "second_offset") return NeighborRule::second_offset;
  return std::nullopt;
}

} // namespace topogas
