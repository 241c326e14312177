#pragma once

#include "crystal/geometry.hpp"

namespace crystal {

// Planar closed-form solutions used as oracles.

// Homothetic Wulff solution of V = c sigma(nu) kappa: R(t) = sqrt(R0^2 - 2 c t).
double wulff_radius(double r0, double c, double t);
double wulff_extinction_time(double r0, double c);

// Rectangle (-a,a)x(-b,b) under V = kappa (or sigma kappa) for the l1 anisotropy:
// scale factor R(t) = sqrt(1 - 2t/(ab)).
double rectangle_scale(double a, double b, double t);
double rectangle_extinction_time(double a, double b);

// Speed of a flat minimum on [a, b] of a one-dimensional profile.
double staircase_facet_speed(double a, double b);

// Exact anisotropic total-variation flow of the indicator of A u B with
// A = [-1,0]x[-1,1], B = [0,1]x[1/2,1] and the l1 anisotropy.
double breaking_facet_value(Vec2 x, double t);
inline constexpr double kBreakingSpeedA = 3.0;
inline constexpr double kBreakingSpeedB = 4.0;

class ExactSolution {
 public:
  enum class Kind { WulffHomothetic, Rectangle, StaircaseFacet, BreakingFacet };

  static ExactSolution wulff_homothetic(double r0, double c);
  static ExactSolution rectangle(double a, double b);
  static ExactSolution staircase_facet(double a, double b);
  static ExactSolution breaking_facet();

  Kind kind() const { return kind_; }
  double extinction_time() const;
  // Scale factor (Wulff, rectangle), facet height of the unit-slope profile
  // max(a-x, 0, x-b) (staircase) or the value at `x` (breaking facet).
  double evaluate(double t, Vec2 x = {}) const;

 private:
  ExactSolution(Kind kind, double p, double q) : kind_(kind), p_(p), q_(q) {}
  Kind kind_;
  double p_;
  double q_;
};

}  // namespace crystal
