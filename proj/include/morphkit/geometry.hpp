#pragma once

#include <array>
#include <cmath>

namespace morphkit {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Point2&) const = default;
};

constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
constexpr Point2 midpoint(Point2 a, Point2 b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }

/// Twice the signed area of (a, b, c); positive when counter-clockwise in a y-up frame.
constexpr double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Distance from p to the closed segment [a, b].
inline double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + ab * t);
}

struct Ellipse {
  Point2 center;
  double semi_axis_x = 1.0;
  double semi_axis_y = 1.0;

  /// Normalized elliptical radius: 1 on the boundary, < 1 inside.
  double radius_of(Point2 p) const {
    const double u = (p.x - center.x) / semi_axis_x;
    const double v = (p.y - center.y) / semi_axis_y;
    return std::sqrt(u * u + v * v);
  }
  bool contains(Point2 p) const { return radius_of(p) <= 1.0; }
};

}  // namespace morphkit
