#pragma once

#include <cmath>
#include <vector>

namespace trajgan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
  double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Rotates p about pivot by angle (radians, counter-clockwise).
Vec2 rotate_about(Vec2 p, Vec2 pivot, double angle);

// Simple polygon as a counter-clockwise vertex list (no closing repeat).
using Polygon = std::vector<Vec2>;

// Polygonal region where a vehicle may legally be; polygons may overlap and
// the union may be disconnected.
struct DrivableArea {
  std::vector<Polygon> polygons;
  bool empty() const { return polygons.empty(); }
};

double polygon_area(const Polygon& poly);  // absolute area

// Even-odd rule; points on an edge count as inside.
bool point_in_polygon(const Polygon& poly, Vec2 p);
bool point_in_drivable(const DrivableArea& area, Vec2 p);

// Sutherland-Hodgman clip against an axis-aligned box. Degenerate results
// (fewer than 3 vertices or ~zero area) come back empty.
Polygon clip_polygon_to_box(const Polygon& poly, Vec2 lo, Vec2 hi);

// Closest point of p on the region: p itself when inside, otherwise the
// nearest boundary point over all polygon edges. Empty area returns p.
Vec2 nearest_point_in_area(const DrivableArea& area, Vec2 p);

}  // namespace trajgan
