#include "crystal/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "crystal/error.hpp"

namespace crystal {

Anisotropy Anisotropy::crystalline(std::vector<Vec2> pts, std::string name) {
  if (pts.size() < 3) throw Error(ErrorCode::NonConvex, "a Wulff polygon needs at least 3 vertices");

  Vec2 centroid{};
  for (Vec2 p : pts) centroid += p;
  centroid = centroid / static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](Vec2 a, Vec2 b) {
    return std::atan2(a.y - centroid.y, a.x - centroid.x) < std::atan2(b.y - centroid.y, b.x - centroid.x);
  });

  const std::size_t m = pts.size();
  double scale = 0.0;
  for (Vec2 p : pts) scale = std::max(scale, norm(p));
  for (std::size_t i = 0; i < m; ++i) {
    if (norm(pts[(i + 1) % m] - pts[i]) <= 1e-12 * std::max(scale, 1e-300))
      throw Error(ErrorCode::DegenerateEdge, "zero-length Wulff edge");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e0 = pts[(i + 1) % m] - pts[i];
    const Vec2 e1 = pts[(i + 2) % m] - pts[(i + 1) % m];
    if (cross(e0, e1) <= 1e-12 * norm(e0) * norm(e1))
      throw Error(ErrorCode::NonConvex, "Wulff vertices are not in strictly convex position");
  }

  struct Facet {
    Vec2 start;
    double angle;
    Vec2 normal;
    double length;
    double support;
  };
  std::vector<Facet> facets;
  facets.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % m];
    const double len = norm(b - a);
    const Vec2 n{(b.y - a.y) / len, -(b.x - a.x) / len};
    const double h = dot(n, a);
    if (h <= 1e-12 * scale)
      throw Error(ErrorCode::OriginOutside, "the origin must lie strictly inside the Wulff polygon");
    facets.push_back({a, wrap_angle(std::atan2(n.y, n.x)), n, len, h});
  }
  const auto first = std::min_element(facets.begin(), facets.end(),
                                      [](const Facet& a, const Facet& b) { return a.angle < b.angle; });
  std::rotate(facets.begin(), first, facets.end());

  Anisotropy an;
  an.name_ = std::move(name);
  for (const Facet& f : facets) {
    an.vertices_.push_back(f.start);
    an.angles_.push_back(f.angle);
    an.normals_.push_back(f.normal);
    an.lengths_.push_back(f.length);
    an.supports_.push_back(f.support);
  }
  return an;
}

Anisotropy Anisotropy::builtin(std::string_view name) {
  if (name == "l1") return crystalline({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}, "l1");
  if (name == "linf") return crystalline({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, "linf");
  if (name == "hexagon") {
    std::vector<Vec2> v;
    for (int k = 0; k < 6; ++k) v.push_back(unit_from_angle(k * std::numbers::pi / 3.0));
    return crystalline(std::move(v), "hexagon");
  }
  throw Error(ErrorCode::InvalidArgument, "unknown built-in anisotropy '" + std::string(name) + "'");
}

double Anisotropy::sigma(Vec2 p) const {
  double best = -std::numeric_limits<double>::infinity();
  for (Vec2 v : vertices_) best = std::max(best, dot(v, p));
  return std::max(best, 0.0);
}

double Anisotropy::sigma_polar(Vec2 x) const {
  double best = 0.0;
  for (std::size_t k = 0; k < normals_.size(); ++k) best = std::max(best, dot(normals_[k], x) / supports_[k]);
  return best;
}

std::optional<std::size_t> Anisotropy::direction_index(double theta, double tol) const {
  for (std::size_t k = 0; k < angles_.size(); ++k) {
    if (std::abs(wrap_difference(theta - angles_[k])) <= tol) return k;
  }
  return std::nullopt;
}

double Anisotropy::gap(std::size_t k) const {
  const std::size_t next = (k + 1) % angles_.size();
  return wrap_angle(angles_[next] - angles_[k]);
}

SpeedLaw SpeedLaw::linear(MobilityFn mobility, double forcing) {
  SpeedLaw law;
  law.kind_ = Kind::Linear;
  law.mobility_ = std::move(mobility);
  law.forcing_ = forcing;
  return law;
}

SpeedLaw SpeedLaw::power(double alpha, MobilityFn mobility) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "power law exponent must be positive");
  SpeedLaw law;
  law.kind_ = Kind::Power;
  law.mobility_ = std::move(mobility);
  law.exponent_ = alpha;
  return law;
}

SpeedLaw SpeedLaw::custom(CustomFn g) {
  SpeedLaw law;
  law.kind_ = Kind::Custom;
  law.custom_ = std::move(g);
  return law;
}

SpeedLaw SpeedLaw::sigma_kappa(const Anisotropy& an) {
  return linear([an](Vec2 n) { return an.sigma(n); });
}

SpeedLaw SpeedLaw::kappa() { return linear(unit_mobility()); }

SpeedLaw::MobilityFn SpeedLaw::unit_mobility() {
  return [](Vec2) { return 1.0; };
}

double SpeedLaw::mobility(Vec2 n) const { return mobility_ ? mobility_(n) : 1.0; }

double SpeedLaw::operator()(Vec2 n, double kappa) const {
  switch (kind_) {
    case Kind::Linear:
      return mobility(n) * (kappa + forcing_);
    case Kind::Power:
      if (kappa == 0.0) return 0.0;
      return mobility(n) * std::copysign(std::pow(std::abs(kappa), exponent_), kappa);
    case Kind::Custom:
      return custom_(n, kappa);
  }
  return 0.0;
}

CornerCheck is_corner_preserving(const Anisotropy& an, const SpeedLaw& law, std::size_t samples,
                                 double rel_tol) {
  CornerCheck result;
  const std::size_t m = an.size();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t next = (k + 1) % m;
    const double phi = an.gap(k);
    const double g_k = law(an.normal(k), 0.0);
    const double g_next = law(an.normal(next), 0.0);
    for (std::size_t i = 1; i <= samples; ++i) {
      const double psi_k = phi * static_cast<double>(i) / static_cast<double>(samples + 1);
      const double psi_next = phi - psi_k;
      const double theta = an.angle(k) + psi_k;
      const double lhs = law(unit_from_angle(theta), 0.0);
      const double rhs = (g_k * std::sin(psi_next) + g_next * std::sin(psi_k)) / std::sin(phi);
      const double scale = std::max(std::abs(lhs), std::abs(rhs));
      const double mismatch = std::abs(lhs - rhs);
      const double rel = scale > 0.0 ? mismatch / scale : 0.0;
      if (rel > result.worst_violation) {
        result.worst_violation = rel;
        result.worst_angle = wrap_angle(theta);
      }
      if (mismatch > rel_tol * scale) result.preserving = false;
    }
  }
  return result;
}

}  // namespace crystal
