#include "topogas/world_map.hpp"

#include "../common/files.hpp"
#include "../common/text.hpp"
#include "topogas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>
#include <sstream>

namespace topogas {

WorldMap::WorldMap(std::string name, double cell_size, int cols, int rows)
    : name_(std::move(name)), cell_size_(cell_size), cols_(cols), rows_(rows) {
  if (!(std::isfinite(cell_size) && cell_size > 0.0)) throw ConfigError("map cell_size must be > 0");
  if (cols <= 0 || rows <= 0) throw ConfigError("map size must be positive");
  walkable_.assign(static_cast<std::size_t>(cols) * rows, 0);
}

double WorldMap::diagonal() const { return std::hypot(width(), height()); }

void WorldMap::set_walkable(GridCoord c, bool open) {
  if (!in_bounds(c)) throw ConfigError("cell outside the map");
  walkable_[index(c)] = open ? 1 : 0;
}

GridCoord WorldMap::cell_of(const Position &p) const {
  return {static_cast<int>(std::floor(p.x / cell_size_)), static_cast<int>(std::floor(p.y / cell_size_))};
}

double WorldMap::height_at(GridCoord c) const { return heights_.empty() || !in_bounds(c) ? 0.0 : heights_[index(c)]; }

void WorldMap::set_height(GridCoord c, double h) {
  if (!in_bounds(c)) throw ConfigError("cell outside the map");
  if (heights_.empty()) heights_.assign(walkable_.size(), 0.0);
  heights_[index(c)] = h;
}

Position WorldMap::cell_center(GridCoord c) const {
  return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_, height_at(c)};
}

void WorldMap::plant_waypoint(GridCoord c) {
  if (!walkable(c)) throw ConfigError("waypoints must be planted on walkable cells");
  waypoint_cells_.push_back(c);
}

std::vector<Position> WorldMap::waypoints() const {
  std::vector<Position> out;
  out.reserve(waypoint_cells_.size());
  for (GridCoord c : waypoint_cells_) out.push_back(cell_center(c));
  return out;
}

std::vector<GridCoord> WorldMap::walkable_cells() const {
  std::vector<GridCoord> out;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (walkable({c, r})) out.push_back({c, r});
  return out;
}

namespace {
constexpr GridCoord kSteps[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}

std::size_t WorldMap::walkable_components() const {
  std::vector<std::uint8_t> seen(walkable_.size(), 0);
  std::size_t components = 0;
  for (GridCoord start : walkable_cells()) {
    if (seen[index(start)]) continue;
    ++components;
    std::deque<GridCoord> open{start};
    seen[index(start)] = 1;
    while (!open.empty()) {
      const GridCoord c = open.front();
      open.pop_front();
      for (GridCoord d : kSteps) {
        const GridCoord n{c.col + d.col, c.row + d.row};
        if (walkable(n) && !seen[index(n)]) {
          seen[index(n)] = 1;
          open.push_back(n);
        }
      }
    }
  }
  return components;
}

std::vector<GridCoord> WorldMap::shortest_path(GridCoord from, GridCoord to) const {
  if (!walkable(from) || !walkable(to)) return {};
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(walkable_.size(), none);
  std::deque<GridCoord> open{from};
  parent[index(from)] = index(from);
  while (!open.empty() && parent[index(to)] == none) {
    const GridCoord c = open.front();
    open.pop_front();
    for (GridCoord d : kSteps) {
      const GridCoord n{c.col + d.col, c.row + d.row};
      if (walkable(n) && parent[index(n)] == none) {
        parent[index(n)] = index(c);
        open.push_back(n);
      }
    }
  }
  if (parent[index(to)] == none) return {};
  std::vector<GridCoord> path;
  for (std::size_t i = index(to);; i = parent[i]) {
    path.push_back({static_cast<int>(i % cols_), static_cast<int>(i / cols_)});
    if (i == index(from)) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> WorldMap::step_distances(GridCoord to) const {
  std::vector<int> dist(walkable_.size(), -1);
  if (!walkable(to)) return dist;
  std::deque<GridCoord> open{to};
  dist[index(to)] = 0;
  while (!open.empty()) {
    const GridCoord c = open.front();
    open.pop_front();
    for (GridCoord d : kSteps) {
      const GridCoord n{c.col + d.col, c.row + d.row};
      if (walkable(n) && dist[index(n)] < 0) {
        dist[index(n)] = dist[index(c)] + 1;
        open.push_back(n);
      }
    }
  }
  return dist;
}

bool WorldMap::segment_blocked(const Position &a, const Position &b) const {
  // Grid traversal in cell units; at exact corner crossings both side cells are checked.
  const double fx = a.x / cell_size_, fy = a.y / cell_size_;
  const double gx = b.x / cell_size_, gy = b.y / cell_size_;
  GridCoord c{static_cast<int>(std::floor(fx)), static_cast<int>(std::floor(fy))};
  const GridCoord end{static_cast<int>(std::floor(gx)), static_cast<int>(std::floor(gy))};
  if (!walkable(c)) return true;

  const double dx = gx - fx, dy = gy - fy;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double delta_x = step_x != 0 ? 1.0 / std::abs(dx) : inf;
  const double delta_y = step_y != 0 ? 1.0 / std::abs(dy) : inf;
  double t_x = step_x > 0 ? (c.col + 1 - fx) / dx : (step_x < 0 ? (fx - c.col) / -dx : inf);
  double t_y = step_y > 0 ? (c.row + 1 - fy) / dy : (step_y < 0 ? (fy - c.row) / -dy : inf);

  int budget = std::abs(end.col - c.col) + std::abs(end.row - c.row);
  while (!(c == end) && budget-- > 0) {
    if (t_x < t_y) {
      c.col += step_x;
      t_x += delta_x;
    } else if (t_y < t_x) {
      c.row += step_y;
      t_y += delta_y;
    } else {
      if (!walkable({c.col + step_x, c.row}) || !walkable({c.col, c.row + step_y})) return true;
      c.col += step_x;
      c.row += step_y;
      t_x += delta_x;
      t_y += delta_y;
      --budget;
    }
    if (!walkable(c)) return true;
  }
  return !walkable(end);
}

// ---------------------------------------------------------------------------
// Fixture text

namespace {

class MapReader {
public:
  explicit MapReader(std::string_view doc) : lines_(doc) {}

  std::string_view raw() {
    std::string_view line;
    if (!lines_.next(line)) throw ParseError(lines_.line_number() + 1, "<eof>", "unexpected end of map");
    return line;
  }

  std::vector<std::string_view> fields(std::string_view key, std::size_t arity) {
    std::string_view line;
    do {
      line = text::trim(raw());
    } while (line.empty());
    auto f = text::split(line);
    if (f[0] != key || f.size() != arity + 1)
      fail(key, "expected '" + std::string(key) + "' with " + std::to_string(arity) + " value(s)");
    return f;
  }

  [[noreturn]] void fail(std::string_view field, const std::string &msg) const {
    throw ParseError(lines_.line_number(), std::string(field), msg);
  }

private:
  text::LineReader lines_;
};

} // namespace

WorldMap parse_map(std::string_view document) {
  MapReader r(document);
  auto header = r.fields("topogas-map", 1);
  if (header[1] != "1") r.fail("version", "unsupported map version");
  const std::string name(r.fields("name", 1)[1]);
  const auto cell = text::parse_double(r.fields("cell_size", 1)[1]);
  if (!cell || !(*cell > 0.0)) r.fail("cell_size", "must be a positive number");
  const auto size = r.fields("size", 2);
  const auto cols = text::parse_int<int>(size[1]);
  const auto rows = text::parse_int<int>(size[2]);
  if (!cols || !rows || *cols <= 0 || *rows <= 0) r.fail("size", "expected two positive integers");

  WorldMap map(name, *cell, *cols, *rows);
  r.fields("grid", 0);
  for (int row = 0; row < *rows; ++row) {
    const auto line = text::trim(r.raw());
    if (static_cast<int>(line.size()) != *cols) r.fail("grid", "row width must equal " + std::to_string(*cols));
    for (int col = 0; col < *cols; ++col) {
      switch (line[col]) {
      case '#': break;
      case '.': map.set_walkable({col, row}, true); break;
      case 'W':
        map.set_walkable({col, row}, true);
        map.plant_waypoint({col, row});
        break;
      default: r.fail("grid", std::string("unknown cell character '") + line[col] + "'");
      }
    }
  }

  std::string_view line;
  do {
    line = text::trim(r.raw());
  } while (line.empty());
  if (line == "heights") {
    for (int row = 0; row < *rows; ++row) {
      const auto f = text::split(r.raw());
      if (static_cast<int>(f.size()) != *cols) r.fail("heights", "expected " + std::to_string(*cols) + " values");
      for (int col = 0; col < *cols; ++col) {
        const auto h = text::parse_double(f[col]);
        if (!h || !std::isfinite(*h)) r.fail("heights", "not a number");
        map.set_height({col, row}, *h);
      }
    }
    r.fields("end", 0);
  } else if (line != "end") {
    r.fail("end", "expected 'heights' or 'end'");
  }

  if (map.walkable_components() == 0) r.fail("grid", "map has no walkable cell");
  return map;
}

std::string format_map(const WorldMap &map) {
  std::ostringstream out;
  out << "topogas-map 1\n";
  out << "name " << map.name() << '\n';
  out << "cell_size " << text::format_double(map.cell_size()) << '\n';
  out << "size " << map.cols() << ' ' << map.rows() << '\n';
  out << "grid\n";
  const auto &wps = map.waypoint_cells();
  for (int row = 0; row < map.rows(); ++row) {
    for (int col = 0; col < map.cols(); ++col) {
      const GridCoord c{col, row};
      if (!map.walkable(c))
        out << '#';
      else if (std::find(wps.begin(), wps.end(), c) != wps.end())
        out << 'W';
      else
        out << '.';
    }
    out << '\n';
  }
  if (map.has_heights()) {
    out << "heights\n";
    for (int row = 0; row < map.rows(); ++row) {
      for (int col = 0; col < map.cols(); ++col) out << (col ? " " : "") << text::format_double(map.height_at({col, row}));
      out << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

WorldMap load_map_file(const std::string &path) { return parse_map(files::read_all(path)); }

WorldMap resolve_map(const std::string &name_or_path) {
  const auto names = builtin_map_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_map(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_map_file(name_or_path);
  throw ConfigError("unknown map '" + name_or_path + "' (built-in maps: open_room, corridors)");
}

} // namespace topogas
