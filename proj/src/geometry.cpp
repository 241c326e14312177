#include "crystal/geometry.hpp"

#include <algorithm>

namespace crystal {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double wrap_difference(double delta) {
  double d = std::remainder(delta, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

double signed_area(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

double perimeter(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += norm(ring[(i + 1) % n] - ring[i]);
  return total;
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + s * d;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) { return norm(p - closest_on_segment(p, a, b)); }

Location locate(Vec2 p, std::span<const Vec2> ring, double tol) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[j];
    const Vec2 b = ring[i];
    if (distance_to_segment(p, a, b) <= tol) return Location::Boundary;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({norm(b - a) * norm(c - a), 1e-300});
  if (v > 1e-14 * scale) return 1;
  if (v < -1e-14 * scale) return -1;
  return 0;
}

}  // namespace

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  if (segments_cross(a, b, c, d)) return true;
  return distance_to_segment(a, c, d) <= tol || distance_to_segment(b, c, d) <= tol ||
         distance_to_segment(c, a, b) <= tol || distance_to_segment(d, a, b) <= tol;
}

bool is_simple(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, norm(ring[(i + 1) % n] - ring[i]));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (norm(ring[(i + 1) % n] - ring[i]) <= tol) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Vec2 c = ring[j];
      const Vec2 d = ring[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common vertex: reject folding back.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 p = (j == i + 1) ? a : b;
        const Vec2 q = (j == i + 1) ? d : c;
        if (std::abs(cross(p - shared, q - shared)) <= tol * norm(p - shared) &&
            dot(p - shared, q - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_touch(a, b, c, d, tol)) return false;
    }
  }
  return true;
}

}  // namespace crystal
