#pragma once

#include "topogas/position.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topogas {

struct GridCoord {
  int col = 0;
  int row = 0;

  friend bool operator==(const GridCoord &, const GridCoord &) = default;
};

/// 2-D occupancy grid with optional per-cell height and planted reference waypoints.
///
/// Cell (col, row) covers x in [col, col+1) * cell_size and y in [row, row+1) * cell_size;
/// row 0 is the first grid line of the fixture. Everything outside the grid is blocked.
class WorldMap {
public:
  WorldMap(std::string name, double cell_size, int cols, int rows);

  const std::string &name() const { return name_; }
  double cell_size() const { return cell_size_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double width() const { return cols_ * cell_size_; }
  double height() const { return rows_ * cell_size_; }
  double diagonal() const;

  bool in_bounds(GridCoord c) const { return c.col >= 0 && c.row >= 0 && c.col < cols_ && c.row < rows_; }
  bool walkable(GridCoord c) const { return in_bounds(c) && walkable_[index(c)] != 0; }
  bool walkable_at(const Position &p) const { return walkable(cell_of(p)); }
  void set_walkable(GridCoord c, bool open);

  GridCoord cell_of(const Position &p) const;
  /// Center of the cell, lifted to the cell height when the map has one.
  Position cell_center(GridCoord c) const;
  double height_at(GridCoord c) const;
  bool has_heights() const { return !heights_.empty(); }
  void set_height(GridCoord c, double h);

  /// Adds a reference waypoint at the center of a walkable cell.
  void plant_waypoint(GridCoord c);
  const std::vector<GridCoord> &waypoint_cells() const { return waypoint_cells_; }
  std::vector<Position> waypoints() const;

  std::vector<GridCoord> walkable_cells() const;
  std::size_t walkable_components() const;

  /// 4-connected shortest path, both ends included; empty when unreachable.
  /// Neighbours are expanded east, south, west, north, so the result is deterministic.
  std::vector<GridCoord> shortest_path(GridCoord from, GridCoord to) const;

  /// 4-connected step count from every cell to `to` (row-major, -1 where unreachable).
  std::vector<int> step_distances(GridCoord to) const;

  /// True if the straight 2-D segment touches any blocked (or out-of-map) cell.
  bool segment_blocked(const Position &a, const Position &b) const;

private:
  std::size_t index(GridCoord c) const { return static_cast<std::size_t>(c.row) * cols_ + c.col; }

  std::string name_;
  double cell_size_;
  int cols_;
  int rows_;
  std::vector<std::uint8_t> walkable_;
  std::vector<double> heights_;
  std::vector<GridCoord> waypoint_cells_;
};

/// Fixture text:
///
///   topogas-map 1
///   name <name>
///   cell_size <WU>
///   size <cols> <rows>
///   grid
///   <rows lines of cols characters: '#' blocked, '.' walkable, 'W' waypoint>
///   [heights
///    <rows lines of cols reals>]
///   end
WorldMap parse_map(std::string_view document);
std::string format_map(const WorldMap &map);
WorldMap load_map_file(const std::string &path);

std::vector<std::string> builtin_map_names();
/// The versioned fixture text for a built-in map. Throws ConfigError for unknown names.
std::string_view builtin_map_fixture(std::string_view name);
WorldMap builtin_map(std::string_view name);

/// A built-in name, or otherwise a path to a fixture file.
WorldMap resolve_map(const std::string &name_or_path);

} // namespace topogas
