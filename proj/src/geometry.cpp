#include "trajgan/geometry.hpp"

#include <algorithm>
#include <limits>

namespace trajgan {

namespace {

constexpr double kBoundaryEps = 1e-9;

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return (p - a).norm() <= kBoundaryEps;
  const double t = dot(ap, ab) / len2;
  if (t < -kBoundaryEps || t > 1.0 + kBoundaryEps) return false;
  const Vec2 closest = a + ab * std::clamp(t, 0.0, 1.0);
  return (p - closest).norm() <= kBoundaryEps;
}

Vec2 closest_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

}  // namespace

Vec2 rotate_about(Vec2 p, Vec2 pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec2 r = p - pivot;
  return {pivot.x + c * r.x - s * r.y, pivot.y + s * r.x + c * r.y};
}

double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return std::abs(twice) * 0.5;
}

bool point_in_polygon(const Polygon& poly, Vec2 p) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(poly[i], poly[(i + 1) % n], p)) return true;
  }
  // pnpoly even-odd crossing count
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y) &&
        p.x < (poly[j].x - poly[i].x) * (p.y - poly[i].y) /
                      (poly[j].y - poly[i].y) +
                  poly[i].x) {
      inside = !inside;
    }
  }
  return inside;
}

bool point_in_drivable(const DrivableArea& area, Vec2 p) {
  for (const auto& poly : area.polygons) {
    if (point_in_polygon(poly, p)) return true;
  }
  return false;
}

Polygon clip_polygon_to_box(const Polygon& poly, Vec2 lo, Vec2 hi) {
  // Each pass clips against one half-plane keep(p) with boundary point lerp.
  auto clip_pass = [](const Polygon& in, auto keep, auto intersect) {
    Polygon out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 cur = in[i];
      const Vec2 prev = in[(i + n - 1) % n];
      const bool cur_in = keep(cur);
      const bool prev_in = keep(prev);
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
    return out;
  };
  auto lerp_x = [](double x) {
    return [x](Vec2 a, Vec2 b) {
      const double t = (x - a.x) / (b.x - a.x);
      return Vec2{x, a.y + t * (b.y - a.y)};
    };
  };
  auto lerp_y = [](double y) {
    return [y](Vec2 a, Vec2 b) {
      const double t = (y - a.y) / (b.y - a.y);
      return Vec2{a.x + t * (b.x - a.x), y};
    };
  };

  Polygon out = poly;
  out = clip_pass(out, [&](Vec2 p) { return p.x >= lo.x; }, lerp_x(lo.x));
  if (out.empty()) return out;
  out = clip_pass(out, [&](Vec2 p) { return p.x <= hi.x; }, lerp_x(hi.x));
  if (out.empty()) return out;
  out = clip_pass(out, [&](Vec2 p) { return p.y >= lo.y; }, lerp_y(lo.y));
  if (out.empty()) return out;
  out = clip_pass(out, [&](Vec2 p) { return p.y <= hi.y; }, lerp_y(hi.y));

  if (out.size() < 3 || polygon_area(out) < 1e-12) return {};
  return out;
}

Vec2 nearest_point_in_area(const DrivableArea& area, Vec2 p) {
  if (point_in_drivable(area, p)) return p;
  Vec2 best = p;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& poly : area.polygons) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 q = closest_on_segment(poly[i], poly[(i + 1) % n], p);
      const double d = (q - p).norm();
      if (d < best_dist) {
        best_dist = d;
        best = q;
      }
    }
  }
  return best;
}

}  // namespace trajgan
