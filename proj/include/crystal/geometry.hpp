#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace crystal {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
// Rotation by +90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps an angle into [0, 2pi).
double wrap_angle(double theta);
// Maps an angle difference into (-pi, pi].
double wrap_difference(double delta);

using Ring = std::vector<Vec2>;

// Shoelace area, positive for counterclockwise rings.
double signed_area(std::span<const Vec2> ring);
double perimeter(std::span<const Vec2> ring);

// Closest point of segment [a, b] to p.
Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

enum class Location { Outside, Boundary, Inside };

// Point location with respect to a closed ring; `tol` is the boundary slack.
Location locate(Vec2 p, std::span<const Vec2> ring, double tol = 1e-12);

// True when the open segments cross at a single interior point of both.
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
// True when the closed segments share at least one point.
bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol = 1e-12);

// No two non-adjacent edges touch and no edge is degenerate.
bool is_simple(std::span<const Vec2> ring);

}  // namespace crystal
