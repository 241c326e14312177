#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crystal/geometry.hpp"

namespace crystal {

// A purely crystalline surface energy density, stored through its Wulff polygon.
//
// Facet k of the Wulff polygon runs from vertex k to vertex k+1 (counterclockwise),
// has outer normal n_k = (cos theta_k, sin theta_k) with theta_0 < ... < theta_{m-1}
// in [0, 2pi), length Delta(n_k) and support value h_k = sigma(n_k).
// sigma is the support function of the polygon and sigma_polar its gauge.
// Even symmetry is not assumed anywhere.
class Anisotropy {
 public:
  // Angles closer than this are treated as the same direction.
  static constexpr double kAngleTolerance = 1e-10;

  static Anisotropy crystalline(std::vector<Vec2> wulff_vertices, std::string name = {});
  // "l1" (square Wulff shape), "hexagon" (regular, circumradius 1), "linf" (diamond).
  static Anisotropy builtin(std::string_view name);

  double sigma(Vec2 p) const;
  double sigma_polar(Vec2 x) const;

  std::size_t size() const { return angles_.size(); }
  double angle(std::size_t k) const { return angles_[k]; }
  Vec2 normal(std::size_t k) const { return normals_[k]; }
  double facet_length(std::size_t k) const { return lengths_[k]; }
  double support(std::size_t k) const { return supports_[k]; }
  // Vertex n_k / sigma(n_k) of the Frank diagram {sigma <= 1}.
  Vec2 frank_vertex(std::size_t k) const { return normals_[k] / supports_[k]; }

  std::span<const Vec2> wulff_vertices() const { return vertices_; }
  std::span<const double> angles() const { return angles_; }
  const std::string& name() const { return name_; }

  std::optional<std::size_t> direction_index(double theta, double tol = kAngleTolerance) const;

  // Angular gap theta_{k+1} - theta_k (wrapping at k = m-1), always in (0, pi).
  double gap(std::size_t k) const;

 private:
  Anisotropy() = default;

  std::string name_;
  std::vector<Vec2> vertices_;
  std::vector<double> angles_;
  std::vector<Vec2> normals_;
  std::vector<double> lengths_;
  std::vector<double> supports_;
};

// Normal velocity law V = g(n, kappa), nondecreasing in kappa.
class SpeedLaw {
 public:
  enum class Kind { Linear, Power, Custom };
  using MobilityFn = std::function<double(Vec2)>;
  using CustomFn = std::function<double(Vec2, double)>;

  // V = M(n) (kappa + C)
  static SpeedLaw linear(MobilityFn mobility, double forcing = 0.0);
  // V = M(n) |kappa|^(alpha-1) kappa
  static SpeedLaw power(double alpha, MobilityFn mobility = unit_mobility());
  static SpeedLaw custom(CustomFn g);

  // V = sigma(n) kappa
  static SpeedLaw sigma_kappa(const Anisotropy& an);
  // V = kappa
  static SpeedLaw kappa();

  static MobilityFn unit_mobility();

  double operator()(Vec2 n, double kappa) const;

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double forcing() const { return forcing_; }
  double mobility(Vec2 n) const;

 private:
  SpeedLaw() = default;

  Kind kind_ = Kind::Linear;
  MobilityFn mobility_;
  CustomFn custom_;
  double forcing_ = 0.0;
  double exponent_ = 1.0;
};

struct CornerCheck {
  bool preserving = true;
  // Largest relative mismatch found over all sampled directions.
  double worst_violation = 0.0;
  double worst_angle = 0.0;
};

// Tests g(m,0) sin(phi) = g(n_k,0) sin(psi_{k+1}) + g(n_{k+1},0) sin(psi_k) at `samples`
// equispaced directions strictly inside every gap of the normal fan.
CornerCheck is_corner_preserving(const Anisotropy& an, const SpeedLaw& law,
                                 std::size_t samples = 64, double rel_tol = 1e-12);

}  // namespace crystal
