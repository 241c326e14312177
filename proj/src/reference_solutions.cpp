#include "crystal/reference_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crystal/error.hpp"

namespace crystal {

namespace {

void check_time(double t, double t_star) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "negative time");
  if (t > t_star)
    throw Error(ErrorCode::PastExtinction, "t = " + std::to_string(t) + " exceeds extinction time " + std::to_string(t_star));
}

}  // namespace

double wulff_extinction_time(double r0, double c) {
  if (!(r0 > 0.0) || !(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "R0 and c must be positive");
  return r0 * r0 / (2.0 * c);
}

double wulff_radius(double r0, double c, double t) {
  check_time(t, wulff_extinction_time(r0, c));
  return std::sqrt(std::max(r0 * r0 - 2.0 * c * t, 0.0));
}

double rectangle_extinction_time(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "half-sides must be positive");
  return a * b / 2.0;
}

double rectangle_scale(double a, double b, double t) {
  check_time(t, rectangle_extinction_time(a, b));
  return std::sqrt(std::max(1.0 - 2.0 * t / (a * b), 0.0));
}

double staircase_facet_speed(double a, double b) {
  if (!(b > a)) throw Error(ErrorCode::EmptyFacet, "facet [a, b] needs b > a");
  return 2.0 / (b - a);
}

double breaking_facet_value(Vec2 x, double t) {
  const bool in_a = x.x >= -1.0 && x.x <= 0.0 && x.y >= -1.0 && x.y <= 1.0;
  const bool in_b = x.x >= 0.0 && x.x <= 1.0 && x.y >= 0.5 && x.y <= 1.0;
  double u = 0.0;
  if (in_a) u += std::max(1.0 - kBreakingSpeedA * t, 0.0);
  if (in_b && !in_a) u += std::max(1.0 - kBreakingSpeedB * t, 0.0);
  return u;
}

ExactSolution ExactSolution::wulff_homothetic(double r0, double c) {
  wulff_extinction_time(r0, c);
  return {Kind::WulffHomothetic, r0, c};
}

ExactSolution ExactSolution::rectangle(double a, double b) {
  rectangle_extinction_time(a, b);
  return {Kind::Rectangle, a, b};
}

ExactSolution ExactSolution::staircase_facet(double a, double b) {
  staircase_facet_speed(a, b);
  return {Kind::StaircaseFacet, a, b};
}

ExactSolution ExactSolution::breaking_facet() { return {Kind::BreakingFacet, 0.0, 0.0}; }

double ExactSolution::extinction_time() const {
  switch (kind_) {
    case Kind::WulffHomothetic: return wulff_extinction_time(p_, q_);
    case Kind::Rectangle: return rectangle_extinction_time(p_, q_);
    // A valley facet keeps rising and widening.
    case Kind::StaircaseFacet: return std::numeric_limits<double>::infinity();
    case Kind::BreakingFacet: return 1.0 / std::min(kBreakingSpeedA, kBreakingSpeedB);
  }
  return 0.0;
}

double ExactSolution::evaluate(double t, Vec2 x) const {
  switch (kind_) {
    case Kind::WulffHomothetic: return wulff_radius(p_, q_, t);
    case Kind::Rectangle: return rectangle_scale(p_, q_, t);
    case Kind::StaircaseFacet:
    {
      // Unit-slope walls: the facet at height s spans width (b-a)+2s and rises at
      // 2/width, so (b-a) s + s^2 = 2t.
      check_time(t, extinction_time());
      const double w = q_ - p_;
      return 0.5 * (std::sqrt(w * w + 8.0 * t) - w);
    }
    case Kind::BreakingFacet:
      check_time(t, extinction_time());
      return breaking_facet_value(x, t);
  }
  return 0.0;
}

}  // namespace crystal
