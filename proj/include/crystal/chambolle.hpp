#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "crystal/anisotropy.hpp"
#include "crystal/grid.hpp"
#include "crystal/tv_solver.hpp"

namespace crystal {

// Mobility M on directions and its polar M0(x) = sup{x.p : |p| <= 1/M(p/|p|)}.
// A crystalline mobility is stored through W_M = {x : x.n_k <= M(n_k)}, whose support
// function extends M between the given directions and whose gauge is M0.
class Mobility {
 public:
  static Mobility euclidean();
  // M = sigma, so M0 = sigma polar.
  static Mobility of(const Anisotropy& an);
  // M(n_k) for every facet normal of `an`; values that break convexity are lowered
  // to the convex extension.
  static Mobility crystalline(const Anisotropy& an, const std::vector<double>& values);

  bool is_euclidean() const { return !shape_.has_value(); }
  double operator()(Vec2 n) const;
  double polar(Vec2 x) const;
  // min over y in [a, b] of M0(x - y).
  double segment_distance(Vec2 x, Vec2 a, Vec2 b) const;
  // Largest |x| with M0(x) <= 1.
  double reach() const { return reach_; }
  // W_M, or nullopt for the Euclidean disc.
  const std::optional<Anisotropy>& shape() const { return shape_; }

 private:
  Mobility() = default;

  std::optional<Anisotropy> shape_;
  // Frank vertices n_k / M(n_k) on the convex hull.
  std::vector<Vec2> frank_;
  double reach_ = 1.0;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Zero-level contour of the piecewise-linear interpolant of w, with {w <= 0} on the
// left of every segment. Saddle cells follow the cell-centre average.
std::vector<Segment> marching_squares(const GridField& w);

// A set given either by polygons (even-odd fill) or by a grid function (set = {w <= 0}).
class EvolvingSet {
 public:
  static EvolvingSet polygons(std::vector<Ring> rings, double time = 0.0);
  static EvolvingSet level_set(GridField w, double time = 0.0);

  bool polygonal() const { return std::holds_alternative<std::vector<Ring>>(rep_); }
  const std::vector<Ring>& rings() const { return std::get<std::vector<Ring>>(rep_); }
  const GridField& level() const { return std::get<GridField>(rep_); }

  double time() const { return time_; }
  // Oriented boundary, set on the left.
  const std::vector<Segment>& boundary() const { return boundary_; }
  bool empty() const { return boundary_.empty() && !any_inside_; }
  double area() const;
  double perimeter() const;
  bool contains(Vec2 p) const;
  // Bounding box of the boundary.
  std::pair<Vec2, Vec2> bounds() const;

 private:
  EvolvingSet() = default;

  std::variant<std::vector<Ring>, GridField> rep_;
  std::vector<Segment> boundary_;
  double time_ = 0.0;
  bool any_inside_ = false;
};

// Nodewise d(x) = dist_M0(x, E) - dist_M0(x, E^c) on the nodes of `grid` (values ignored).
// Polygonal sets are measured exactly against every boundary segment; grid sets by
// propagating nearest-segment candidates through the lattice. Values beyond `cap` are
// reported as +-cap.
GridField signed_distance(const EvolvingSet& set, const Mobility& mob, const GridField& grid,
                          double cap = std::numeric_limits<double>::infinity());

struct ChambolleParams {
  // Box and spacing of the computation; values and boundary are ignored.
  GridField grid;
  // Clamp |d| <= band before minimising. Zero picks 0.25 of the shorter box side.
  double band = 0.0;
  // Step `a` is overwritten with the time step.
  ResolventParams resolvent{.a = 0.0, .max_iters = 20000, .tolerance = 1e-7, .method = ResolventMethod::Auto};
  // Solve on a box around the set instead of the whole grid.
  bool crop = true;
};

// One implicit step T_h: the zero sublevel set of the resolvent of the clamped signed
// distance at a = h. Throws Vanished when the set disappears and TouchedBoundary when
// it reaches the edge of the grid.
EvolvingSet chambolle_step(const EvolvingSet& set, double h, const Anisotropy& an, const Mobility& mob,
                           const ChambolleParams& params);

enum class ChambolleStatus { Horizon, Vanished, TouchedBoundary };
std::string_view to_string(ChambolleStatus status);

struct ChambolleRecord {
  std::size_t k = 0;
  double time = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

struct ChambolleTrajectory {
  std::vector<ChambolleRecord> records;
  ChambolleStatus status = ChambolleStatus::Horizon;
  // First time the set was found empty.
  std::optional<double> vanish_time;
  // Area extrapolated linearly to zero over the last step, within that step.
  std::optional<double> extinction_time;
  // Set after the last completed step.
  std::optional<EvolvingSet> final_set;
  // Sets kept every `frame_every` steps.
  std::vector<EvolvingSet> frames;
};

// E^h(t) = T_h^{floor(t/h)}(E0) for t <= horizon.
ChambolleTrajectory chambolle_evolve(const EvolvingSet& initial, double h, double horizon, const Anisotropy& an,
                                     const Mobility& mob, const ChambolleParams& params,
                                     std::size_t frame_every = 0);

struct FatteningReport {
  std::vector<double> times;
  std::vector<double> outer_area;
  std::vector<double> inner_area;
  double max_difference = 0.0;
};

// Two unit squares touching at a corner, evolved once with a small neck of width
// `gap` added at the contact and once with the squares pulled `gap` apart.
FatteningReport fattening_demo(const Anisotropy& an, const Mobility& mob, double h, double horizon,
                               const ChambolleParams& params, double gap);

}  // namespace crystal
