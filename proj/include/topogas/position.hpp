#pragma once

#include <cmath>

namespace topogas {

/// A point in world units (WU).
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Position &, const Position &) = default;
};

inline Position operator+(const Position &a, const Position &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Position operator-(const Position &a, const Position &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Position operator*(double s, const Position &p) { return {s * p.x, s * p.y, s * p.z}; }

inline double squared_distance(const Position &a, const Position &b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Position &a, const Position &b) { return std::sqrt(squared_distance(a, b)); }

inline bool is_finite(const Position &p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

inline Position midpoint(const Position &a, const Position &b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z)};
}

} // namespace topogas
