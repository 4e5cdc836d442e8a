#include "topogas/errors.hpp"
#include "topogas/world_map.hpp"

#include <string>

namespace topogas {

namespace {

// 2000 x 2000 WU open square, 16 waypoints on a 4 x 4 lattice.
constexpr std::string_view kOpenRoom = R"(topogas-map 1
name open_room
cell_size 100
size 20 20
grid
....................
....................
..W....W....W....W..
....................
....................
....................
....................
..W....W....W....W..
....................
....................
....................
....................
..W....W....W....W..
....................
....................
....................
....................
..W....W....W....W..
....................
....................
end
)";

// 4000 x 4000 WU: three dead-end corridors (one cell, 200 WU wide) joined by a hall
// along the bottom. 24 corridor waypoints plus 16 hall waypoints.
constexpr std::string_view kCorridors = R"(topogas-map 1
name corridors
cell_size 200
size 20 20
grid
####################
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
####W####W####W#####
####.####.####.#####
##WWWWWWWWWWWWWWWW##
####################
####################
end
)";

} // namespace

std::vector<std::string> builtin_map_names() { return {"open_room", "corridors"}; }

std::string_view builtin_map_fixture(std::string_view name) {
  if (name == "open_room") return kOpenRoom;
  if (name == "corridors") return kCorridors;
  throw ConfigError("unknown built-in map '" + std::string(name) + "'");
}

WorldMap builtin_map(std::string_view name) { return parse_map(builtin_map_fixture(name)); }

} // namespace topogas
