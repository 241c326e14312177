#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "crystal/anisotropy.hpp"
#include "crystal/geometry.hpp"

namespace crystal {

// Sorted set of facet directions a polygon may use. For strictly admissible polygons
// this is the Wulff normal fan; weakly admissible polygons add their own extra
// directions, which carry Delta = 0.
struct DirectionFan {
  std::vector<double> angles;
  std::vector<double> deltas;
  std::vector<bool> admissible;

  static DirectionFan of(const Anisotropy& an, std::span<const double> extra_angles = {});
  std::size_t size() const { return angles.size(); }
  std::optional<std::size_t> find(double theta, double tol = Anisotropy::kAngleTolerance) const;
  bool adjacent(std::size_t a, std::size_t b) const;
};

struct Facet {
  std::size_t dir = 0;  // index into the polygon's DirectionFan
  double length = 0.0;
};

// Closed polygon traversed counterclockwise, outward normals, tangent = normal
// rotated by +90 degrees. The anchor is the start vertex of facet 0.
class AdmissiblePolygon {
 public:
  static AdmissiblePolygon from_vertices(std::span<const Vec2> points,
                                         std::shared_ptr<const Anisotropy> an, bool weak = false);
  static AdmissiblePolygon from_facets(std::shared_ptr<const Anisotropy> an, Vec2 anchor,
                                       std::vector<Facet> facets, bool weak = false,
                                       std::vector<double> extra_angles = {});

  std::size_t size() const { return facets_.size(); }
  const Facet& facet(std::size_t j) const { return facets_[j]; }
  std::span<const Facet> facets() const { return facets_; }
  Vec2 anchor() const { return anchor_; }
  bool weak() const { return weak_; }
  const Anisotropy& anisotropy() const { return *anisotropy_; }
  std::shared_ptr<const Anisotropy> anisotropy_ptr() const { return anisotropy_; }
  const DirectionFan& fan() const { return fan_; }

  double angle(std::size_t j) const { return fan_.angles[facets_[j].dir]; }
  Vec2 normal(std::size_t j) const { return unit_from_angle(angle(j)); }
  Vec2 tangent(std::size_t j) const { return perp(normal(j)); }
  double delta(std::size_t j) const { return fan_.deltas[facets_[j].dir]; }
  // Signed turn phi_j = theta_j - theta_{j-1} at the start vertex of facet j.
  double corner_angle(std::size_t j) const;

  std::vector<Vec2> vertices() const;
  double area() const;
  double perimeter() const;
  // |sum_j L_j t_j|
  double closure_residual() const;
  bool is_convex() const;

  // Copy with new lengths/anchor; fan and directions unchanged.
  AdmissiblePolygon with_lengths(std::span<const double> lengths, Vec2 anchor) const;

  friend bool operator==(const AdmissiblePolygon& a, const AdmissiblePolygon& b);

 private:
  AdmissiblePolygon() = default;
  void validate_adjacency() const;
  void restore_closure();

  std::shared_ptr<const Anisotropy> anisotropy_;
  DirectionFan fan_;
  std::vector<Facet> facets_;
  Vec2 anchor_{};
  bool weak_ = false;

};

std::vector<int> transition_numbers(const AdmissiblePolygon& p);
std::vector<double> crystalline_curvature(const AdmissiblePolygon& p);
// dL_j/dt = V_{j-1}/sin(phi_j) - (cot phi_j + cot phi_{j+1}) V_j + V_{j+1}/sin(phi_{j+1})
std::vector<double> length_derivative(const AdmissiblePolygon& p, std::span<const double> velocity);
// Velocity of the vertex shared by facets j-1 and j, from x.n_{j-1} = V_{j-1}, x.n_j = V_j.
Vec2 vertex_velocity(Vec2 n_prev, Vec2 n_next, double v_prev, double v_next);

enum class EventKind { FacetGone, Merge, Extinction, NonAdmissibleStop };
enum class FlowStatus { TimeLimit, Extinction, NonAdmissibleStop };

const char* to_string(EventKind kind);
const char* to_string(FlowStatus status);

struct FlowEvent {
  double time = 0.0;
  EventKind kind = EventKind::FacetGone;
  std::vector<std::size_t> facets;
};

struct Snapshot {
  double time = 0.0;
  AdmissiblePolygon polygon;
};

struct Trajectory {
  std::vector<Snapshot> samples;
  std::vector<FlowEvent> events;
  FlowStatus status = FlowStatus::TimeLimit;
  std::optional<double> extinction_time;
  // Set for power laws with exponent < 1, where degenerate pinching may occur.
  bool degenerate_law = false;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

struct FlowOptions {
  double rel_tol = 1e-8;
  // Zero selects 1e-12 times the initial perimeter.
  double abs_tol = 0.0;
  // Zero selects 1e-9 times the initial perimeter.
  double length_floor = 0.0;
  // Area (relative to the initial area) that counts as extinction.
  double extinction_area_ratio = 1e-12;
  // Facets below (1 + simultaneity) * floor at an event are removed together.
  double simultaneity = 1e-3;
  // Snapshots at these times (sorted); when empty every accepted step is recorded.
  std::vector<double> sample_times;
  std::size_t max_steps = 2'000'000;
};

Trajectory evolve(const AdmissiblePolygon& p, const SpeedLaw& law, double t_end,
                  const FlowOptions& opts = {});

// Every vertex of `inner` lies inside or on `outer` and no edges cross.
bool encloses(const AdmissiblePolygon& outer, const AdmissiblePolygon& inner);
bool encloses(std::span<const Vec2> outer, std::span<const Vec2> inner);

}  // namespace crystal
