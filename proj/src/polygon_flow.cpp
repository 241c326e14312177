#include "crystal/polygon_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "crystal/error.hpp"

namespace crystal {

DirectionFan DirectionFan::of(const Anisotropy& an, std::span<const double> extra_angles) {
  struct Entry {
    double angle;
    double delta;
    bool admissible;
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < an.size(); ++k) entries.push_back({an.angle(k), an.facet_length(k), true});
  for (double theta : extra_angles) {
    const double a = wrap_angle(theta);
    const bool known = std::any_of(entries.begin(), entries.end(), [&](const Entry& e) {
      return std::abs(wrap_difference(e.angle - a)) <= Anisotropy::kAngleTolerance;
    });
    if (!known) entries.push_back({a, 0.0, false});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
  DirectionFan fan;
  for (const Entry& e : entries) {
    fan.angles.push_back(e.angle);
    fan.deltas.push_back(e.delta);
    fan.admissible.push_back(e.admissible);
  }
  return fan;
}

std::optional<std::size_t> DirectionFan::find(double theta, double tol) const {
  for (std::size_t k = 0; k < angles.size(); ++k) {
    if (std::abs(wrap_difference(theta - angles[k])) <= tol) return k;
  }
  return std::nullopt;
}

bool DirectionFan::adjacent(std::size_t a, std::size_t b) const {
  const std::size_t m = size();
  return (a + 1) % m == b || (b + 1) % m == a;
}

namespace {

constexpr double kSinFloor = 1e-12;

}  // namespace

AdmissiblePolygon AdmissiblePolygon::from_vertices(std::span<const Vec2> points,
                                                   std::shared_ptr<const Anisotropy> an, bool weak) {
  if (!an) throw Error(ErrorCode::InvalidArgument, "missing anisotropy");
  std::vector<Vec2> pts;
  double scale = 0.0;
  for (Vec2 p : points) scale = std::max(scale, norm(p));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (Vec2 p : points) {
    if (pts.empty() || norm(p - pts.back()) > tol) pts.push_back(p);
  }
  while (pts.size() > 1 && norm(pts.front() - pts.back()) <= tol) pts.pop_back();
  if (pts.size() < 3) throw Error(ErrorCode::NotSimple, "fewer than three distinct vertices");
  if (signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
  if (!is_simple(pts)) throw Error(ErrorCode::NotSimple, "polygon is not simple");

  // Drop vertices interior to straight runs.
  auto edge_angle = [](Vec2 a, Vec2 b) { return wrap_angle(std::atan2(-(b.x - a.x), b.y - a.y)); };
  bool changed = true;
  while (changed && pts.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t n = pts.size();
      const Vec2 prev = pts[(i + n - 1) % n];
      const Vec2 cur = pts[i];
      const Vec2 next = pts[(i + 1) % n];
      if (std::abs(wrap_difference(edge_angle(prev, cur) - edge_angle(cur, next))) <= Anisotropy::kAngleTolerance) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }

  const std::size_t n = pts.size();
  std::vector<double> edge_angles(n);
  std::vector<double> extra;
  for (std::size_t i = 0; i < n; ++i) {
    edge_angles[i] = edge_angle(pts[i], pts[(i + 1) % n]);
    if (!an->direction_index(edge_angles[i])) {
      if (!weak)
        throw Error(ErrorCode::NonAdmissibleDirection,
                    "edge " + std::to_string(i) + " has a normal outside the Wulff normal fan");
      extra.push_back(edge_angles[i]);
    }
  }

  AdmissiblePolygon poly;
  poly.anisotropy_ = std::move(an);
  poly.weak_ = weak;
  poly.fan_ = DirectionFan::of(*poly.anisotropy_, extra);
  poly.anchor_ = pts.front();
  for (std::size_t i = 0; i < n; ++i) {
    const auto dir = poly.fan_.find(edge_angles[i]);
    poly.facets_.push_back({*dir, norm(pts[(i + 1) % n] - pts[i])});
  }
  poly.validate_adjacency();
  poly.restore_closure();
  return poly;
}

AdmissiblePolygon AdmissiblePolygon::from_facets(std::shared_ptr<const Anisotropy> an, Vec2 anchor,
                                                 std::vector<Facet> facets, bool weak,
                                                 std::vector<double> extra_angles) {
  if (!an) throw Error(ErrorCode::InvalidArgument, "missing anisotropy");
  if (!weak && !extra_angles.empty())
    throw Error(ErrorCode::NonAdmissibleDirection, "extra directions require a weakly admissible polygon");
  if (facets.size() < 3) throw Error(ErrorCode::AdjacencyViolation, "a polygon needs at least three facets");
  AdmissiblePolygon poly;
  poly.anisotropy_ = std::move(an);
  poly.weak_ = weak;
  poly.fan_ = DirectionFan::of(*poly.anisotropy_, extra_angles);
  poly.anchor_ = anchor;
  for (const Facet& f : facets) {
    if (f.dir >= poly.fan_.size())
      throw Error(ErrorCode::NonAdmissibleDirection, "direction index " + std::to_string(f.dir) + " out of range");
    if (!(f.length > 0.0)) throw Error(ErrorCode::ZeroLength, "facet lengths must be positive");
  }
  poly.facets_ = std::move(facets);
  poly.validate_adjacency();
  poly.restore_closure();
  return poly;
}

void AdmissiblePolygon::validate_adjacency() const {
  const std::size_t n = facets_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = facets_[(j + n - 1) % n].dir;
    if (!fan_.adjacent(prev, facets_[j].dir))
      throw Error(ErrorCode::AdjacencyViolation,
                  "facets " + std::to_string((j + n - 1) % n) + " and " + std::to_string(j) +
                      " do not have adjacent directions");
  }
}

void AdmissiblePolygon::restore_closure() {
  // Least-squares length correction: minimise |dL|^2 subject to sum_j (L_j + dL_j) t_j = 0.
  Vec2 residual{};
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    const Vec2 t = tangent(j);
    residual += facets_[j].length * t;
    sxx += t.x * t.x;
    sxy += t.x * t.y;
    syy += t.y * t.y;
  }
  // Already closed up to rounding: leave the lengths untouched so re-parsing is exact.
  if (norm(residual) <= 1e-13 * perimeter()) return;
  const double det = sxx * syy - sxy * sxy;
  if (std::abs(det) < 1e-300) return;
  const Vec2 mult{(syy * residual.x - sxy * residual.y) / det, (sxx * residual.y - sxy * residual.x) / det};
  for (std::size_t j = 0; j < facets_.size(); ++j) facets_[j].length -= dot(tangent(j), mult);
}

double AdmissiblePolygon::corner_angle(std::size_t j) const {
  const std::size_t n = facets_.size();
  return wrap_difference(angle(j) - angle((j + n - 1) % n));
}

std::vector<Vec2> AdmissiblePolygon::vertices() const {
  std::vector<Vec2> v;
  v.reserve(facets_.size());
  Vec2 p = anchor_;
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    v.push_back(p);
    p += facets_[j].length * tangent(j);
  }
  return v;
}

double AdmissiblePolygon::area() const { return signed_area(vertices()); }

double AdmissiblePolygon::perimeter() const {
  double total = 0.0;
  for (const Facet& f : facets_) total += f.length;
  return total;
}

double AdmissiblePolygon::closure_residual() const {
  Vec2 r{};
  for (std::size_t j = 0; j < facets_.size(); ++j) r += facets_[j].length * tangent(j);
  return norm(r);
}

bool AdmissiblePolygon::is_convex() const {
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    if (corner_angle(j) <= 0.0) return false;
  }
  return true;
}

AdmissiblePolygon AdmissiblePolygon::with_lengths(std::span<const double> lengths, Vec2 anchor) const {
  AdmissiblePolygon copy = *this;
  for (std::size_t j = 0; j < facets_.size(); ++j) copy.facets_[j].length = lengths[j];
  copy.anchor_ = anchor;
  return copy;
}

bool operator==(const AdmissiblePolygon& a, const AdmissiblePolygon& b) {
  if (a.weak_ != b.weak_ || !(a.anchor_ == b.anchor_) || a.facets_.size() != b.facets_.size()) return false;
  if (a.fan_.angles != b.fan_.angles || a.fan_.deltas != b.fan_.deltas) return false;
  for (std::size_t j = 0; j < a.facets_.size(); ++j) {
    if (a.facets_[j].dir != b.facets_[j].dir || a.facets_[j].length != b.facets_[j].length) return false;
  }
  return true;
}

std::vector<int> transition_numbers(const AdmissiblePolygon& p) {
  const std::size_t n = p.size();
  std::vector<int> chi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double before = p.corner_angle(j);
    const double after = p.corner_angle((j + 1) % n);
    if (before > 0.0 && after > 0.0)
      chi[j] = -1;
    else if (before < 0.0 && after < 0.0)
      chi[j] = 1;
    else
      chi[j] = 0;
  }
  return chi;
}

std::vector<double> crystalline_curvature(const AdmissiblePolygon& p) {
  const std::vector<int> chi = transition_numbers(p);
  std::vector<double> kappa(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double len = p.facet(j).length;
    if (!(len > 0.0)) throw Error(ErrorCode::ZeroLength, "facet " + std::to_string(j) + " has zero length");
    kappa[j] = chi[j] * p.delta(j) / len;
  }
  return kappa;
}

namespace {

struct CornerTrig {
  std::vector<double> inv_sin;  // 1 / sin(phi_j)
  std::vector<double> cot;      // cot(phi_j)
};

CornerTrig corner_trig(const AdmissiblePolygon& p) {
  CornerTrig trig;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double phi = p.corner_angle(j);
    const double s = std::sin(phi);
    if (std::abs(s) < kSinFloor)
      throw Error(ErrorCode::ParallelAdjacentFacets, "facets meeting at vertex " + std::to_string(j) + " are parallel");
    trig.inv_sin.push_back(1.0 / s);
    trig.cot.push_back(std::cos(phi) / s);
  }
  return trig;
}

void length_rates(const CornerTrig& trig, std::span<const double> v, std::span<double> out) {
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = (j + n - 1) % n;
    const std::size_t next = (j + 1) % n;
    out[j] = trig.inv_sin[j] * v[prev] - (trig.cot[j] + trig.cot[next]) * v[j] + trig.inv_sin[next] * v[next];
  }
}

}  // namespace

std::vector<double> length_derivative(const AdmissiblePolygon& p, std::span<const double> velocity) {
  if (velocity.size() != p.size())
    throw Error(ErrorCode::InvalidArgument, "one velocity per facet is required");
  const CornerTrig trig = corner_trig(p);
  std::vector<double> rates(p.size());
  length_rates(trig, velocity, rates);
  return rates;
}

Vec2 vertex_velocity(Vec2 n_prev, Vec2 n_next, double v_prev, double v_next) {
  const double det = cross(n_prev, n_next);
  if (std::abs(det) < kSinFloor) throw Error(ErrorCode::ParallelAdjacentFacets, "parallel adjacent facets");
  return {(v_prev * n_next.y - n_prev.y * v_next) / det, (n_prev.x * v_next - v_prev * n_next.x) / det};
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FacetGone: return "FacetGone";
    case EventKind::Merge: return "Merge";
    case EventKind::Extinction: return "Extinction";
    case EventKind::NonAdmissibleStop: return "NonAdmissibleStop";
  }
  return "?";
}

const char* to_string(FlowStatus status) {
  switch (status) {
    case FlowStatus::TimeLimit: return "TimeLimit";
    case FlowStatus::Extinction: return "Extinction";
    case FlowStatus::NonAdmissibleStop: return "NonAdmissibleStop";
  }
  return "?";
}

namespace {

// Length/anchor ODE system for a fixed facet combinatorics.
// State layout: [L_0, ..., L_{n-1}, anchor.x, anchor.y].
class FacetSystem {
 public:
  FacetSystem(const AdmissiblePolygon& p, const SpeedLaw& law) : law_(law), trig_(corner_trig(p)) {
    const std::vector<int> chi = transition_numbers(p);
    for (std::size_t j = 0; j < p.size(); ++j) {
      normals_.push_back(p.normal(j));
      tangents_.push_back(p.tangent(j));
      weights_.push_back(chi[j] * p.delta(j));
    }
    velocity_.resize(p.size());
  }

  std::size_t facets() const { return normals_.size(); }
  std::size_t dim() const { return normals_.size() + 2; }

  bool rhs(std::span<const double> y, std::span<double> dy) {
    const std::size_t n = facets();
    for (std::size_t j = 0; j < n; ++j) {
      if (!(y[j] > 0.0)) return false;
      velocity_[j] = law_(normals_[j], weights_[j] / y[j]);
      if (!std::isfinite(velocity_[j])) return false;
    }
    length_rates(trig_, velocity_, dy.first(n));
    const Vec2 anchor_rate = vertex_velocity(normals_[n - 1], normals_[0], velocity_[n - 1], velocity_[0]);
    dy[n] = anchor_rate.x;
    dy[n + 1] = anchor_rate.y;
    return true;
  }

  double area(std::span<const double> y) const {
    const std::size_t n = facets();
    Vec2 p{y[n], y[n + 1]};
    double twice = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2 q = p + y[j] * tangents_[j];
      twice += cross(p, q);
      p = q;
    }
    return 0.5 * twice;
  }

 private:
  const SpeedLaw& law_;
  CornerTrig trig_;
  std::vector<Vec2> normals_;
  std::vector<Vec2> tangents_;
  std::vector<double> weights_;
  std::vector<double> velocity_;
};

// Dormand-Prince 5(4) tableau.
constexpr std::array<std::array<double, 6>, 7> kA{{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
constexpr std::array<double, 7> kErr{71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

class DormandPrince {
 public:
  explicit DormandPrince(FacetSystem& sys) : sys_(sys), k_(7, std::vector<double>(sys.dim())), tmp_(sys.dim()) {}

  // One step of size h from y (whose derivative is k1). Returns false when a stage
  // leaves the domain of the system. On success y_new holds the 5th-order solution,
  // k1_new its derivative and err the 4th/5th-order difference.
  bool step(std::span<const double> y, std::span<const double> k1, double h, std::span<double> y_new,
            std::span<double> k1_new, std::span<double> err) {
    const std::size_t d = y.size();
    std::copy(k1.begin(), k1.end(), k_[0].begin());
    for (std::size_t s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < s; ++r) acc += kA[s][r] * k_[r][i];
        tmp_[i] = y[i] + h * acc;
      }
      if (!sys_.rhs(tmp_, k_[s])) return false;
    }
    // Stage 7 is evaluated at the 5th-order solution (FSAL).
    std::copy(tmp_.begin(), tmp_.end(), y_new.begin());
    std::copy(k_[6].begin(), k_[6].end(), k1_new.begin());
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t r = 0; r < 7; ++r) acc += kErr[r] * k_[r][i];
      err[i] = h * acc;
    }
    return true;
  }

 private:
  FacetSystem& sys_;
  std::vector<std::vector<double>> k_;
  std::vector<double> tmp_;
};

struct Integrator {
  FlowOptions opts;
  double abs_tol = 0.0;
  double length_floor = 0.0;
  double area_floor = 0.0;
};

double error_norm(std::span<const double> y, std::span<const double> y_new, std::span<const double> err,
                  double rel_tol, double abs_tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(y.size()));
}

std::vector<double> pack(const AdmissiblePolygon& p) {
  std::vector<double> y;
  for (const Facet& f : p.facets()) y.push_back(f.length);
  y.push_back(p.anchor().x);
  y.push_back(p.anchor().y);
  return y;
}

AdmissiblePolygon unpack(const AdmissiblePolygon& shape, std::span<const double> y) {
  const std::size_t n = shape.size();
  return shape.with_lengths(y.first(n), {y[n], y[n + 1]});
}

}  // namespace

Trajectory evolve(const AdmissiblePolygon& initial, const SpeedLaw& law, double t_end, const FlowOptions& opts) {
  if (!(t_end >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be nonnegative");
  if (!std::is_sorted(opts.sample_times.begin(), opts.sample_times.end()))
    throw Error(ErrorCode::InvalidArgument, "sample times must be sorted");
  for (std::size_t k = 0; k < initial.fan().size(); ++k) {
    if (law.kind() != SpeedLaw::Kind::Custom && !(law.mobility(unit_from_angle(initial.fan().angles[k])) > 0.0))
      throw Error(ErrorCode::InvalidArgument, "mobility must be positive on every facet direction");
  }

  Trajectory traj;
  traj.degenerate_law = law.kind() == SpeedLaw::Kind::Power && law.exponent() < 1.0;

  const double p0 = initial.perimeter();
  const double a0 = std::abs(initial.area());
  const double abs_tol = opts.abs_tol > 0.0 ? opts.abs_tol : 1e-12 * p0;
  const double floor = opts.length_floor > 0.0 ? opts.length_floor : 1e-9 * p0;
  const double area_floor = opts.extinction_area_ratio * a0;
  const double removal = floor * (1.0 + opts.simultaneity);

  AdmissiblePolygon poly = initial;
  double t = 0.0;
  traj.samples.push_back({0.0, poly});
  std::size_t next_sample = 0;
  while (next_sample < opts.sample_times.size() && opts.sample_times[next_sample] <= 0.0) ++next_sample;

  auto record = [&](double time, const AdmissiblePolygon& p) {
    if (time > traj.samples.back().time) traj.samples.push_back({time, p});
  };

  double h = 0.0;
  while (true) {
    FacetSystem sys(poly, law);
    DormandPrince dp(sys);
    const std::size_t dim = sys.dim();
    std::vector<double> y = pack(poly), k1(dim), y_new(dim), k1_new(dim), err(dim);
    if (!sys.rhs(y, k1)) throw Error(ErrorCode::ZeroLength, "invalid polygon state");

    auto triggered = [&](std::span<const double> state) {
      for (std::size_t j = 0; j < sys.facets(); ++j) {
        if (state[j] <= floor) return true;
      }
      return sys.area(state) <= area_floor;
    };

    if (h <= 0.0) {
      double rate = 0.0;
      for (std::size_t j = 0; j < sys.facets(); ++j) rate = std::max(rate, std::abs(k1[j]) / y[j]);
      h = rate > 0.0 ? 1e-3 / rate : std::max(t_end - t, 1e-3);
    }

    bool restart = false;
    while (!restart) {
      if (t >= t_end) {
        traj.status = FlowStatus::TimeLimit;
        record(t, unpack(poly, y));
        return traj;
      }
      if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps)
        throw Error(ErrorCode::StiffnessFailure, "step budget exhausted");

      double target = t_end;
      if (next_sample < opts.sample_times.size()) target = std::min(target, opts.sample_times[next_sample]);
      const double h_min = 1e-15 * std::max(1.0, std::abs(t));
      // A target closer than one step can resolve counts as reached.
      if (target - t < h_min) {
        t = target;
        if (next_sample < opts.sample_times.size() && target == opts.sample_times[next_sample]) {
          record(t, unpack(poly, y));
          ++next_sample;
        }
        continue;
      }
      bool clamped = false;
      if (t + h >= target) {
        h = target - t;
        clamped = true;
      }
      if (h < h_min) throw Error(ErrorCode::StiffnessFailure, "step size underflow at t=" + std::to_string(t));

      const bool valid = dp.step(y, k1, h, y_new, k1_new, err);
      const double e = valid ? error_norm(y, y_new, err, opts.rel_tol, abs_tol) : 0.0;
      if (!valid || !(e <= 1.0)) {
        ++traj.rejected_steps;
        h *= valid ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.25;
        continue;
      }

      if (triggered(y_new)) {
        // Localise the first crossing by bisecting the step length.
        double lo = 0.0, hi = h, h_state = h;
        std::vector<double> y_hi = y_new, y_mid(dim), k_mid(dim), e_mid(dim);
        while (hi - lo > 1e-14 * std::max(1.0, std::abs(t))) {
          const double mid = 0.5 * (lo + hi);
          const bool ok = dp.step(y, k1, mid, y_mid, k_mid, e_mid);
          if (ok && !triggered(y_mid)) {
            lo = mid;
          } else {
            hi = mid;
            if (ok) {
              y_hi = y_mid;
              h_state = mid;
            }
          }
        }
        ++traj.accepted_steps;
        t += h_state;
        const AdmissiblePolygon at_event = unpack(poly, y_hi);

        if (sys.area(y_hi) <= area_floor) {
          record(t, at_event);
          traj.events.push_back({t, EventKind::Extinction, {}});
          traj.status = FlowStatus::Extinction;
          traj.extinction_time = t;
          return traj;
        }

        // Remove every facet at the floor, then merge parallel neighbours.
        const std::size_t n = sys.facets();
        std::vector<std::size_t> gone;
        for (std::size_t j = 0; j < n; ++j) {
          if (y_hi[j] <= removal) gone.push_back(j);
        }
        traj.events.push_back({t, EventKind::FacetGone, gone});
        Vec2 anchor{y_hi[n], y_hi[n + 1]};
        std::vector<Facet> kept;
        bool leading = true;
        for (std::size_t j = 0; j < n; ++j) {
          const bool removed = std::find(gone.begin(), gone.end(), j) != gone.end();
          if (removed) {
            if (leading) anchor += y_hi[j] * at_event.tangent(j);
            continue;
          }
          leading = false;
          kept.push_back({at_event.facet(j).dir, y_hi[j]});
        }
        std::vector<Facet> merged;
        std::vector<std::size_t> merge_sites;
        for (const Facet& f : kept) {
          if (!merged.empty() && merged.back().dir == f.dir) {
            merged.back().length += f.length;
            merge_sites.push_back(merged.size() - 1);
          } else {
            merged.push_back(f);
          }
        }
        if (merged.size() > 1 && merged.front().dir == merged.back().dir) {
          anchor -= merged.back().length * unit_from_angle(poly.fan().angles[merged.back().dir] + std::numbers::pi / 2);
          merged.front().length += merged.back().length;
          merged.pop_back();
          merge_sites.push_back(0);
        }
        if (!merge_sites.empty()) traj.events.push_back({t, EventKind::Merge, merge_sites});

        if (merged.size() < 3) {
          record(t, at_event);
          traj.events.push_back({t, EventKind::Extinction, {}});
          traj.status = FlowStatus::Extinction;
          traj.extinction_time = t;
          return traj;
        }

        std::vector<double> extra;
        for (std::size_t k = 0; k < poly.fan().size(); ++k) {
          if (!poly.fan().admissible[k]) extra.push_back(poly.fan().angles[k]);
        }
        // Directions that are no longer used leave the fan so adjacency is judged on
        // the current polygon only.
        std::vector<double> used_extra;
        for (double a : extra) {
          const auto k = poly.fan().find(a);
          if (std::any_of(merged.begin(), merged.end(), [&](const Facet& f) { return f.dir == *k; }))
            used_extra.push_back(a);
        }
        for (Facet& f : merged) f.dir = *DirectionFan::of(poly.anisotropy(), used_extra).find(poly.fan().angles[f.dir]);
        try {
          poly = AdmissiblePolygon::from_facets(poly.anisotropy_ptr(), anchor, merged, poly.weak(), used_extra);
        } catch (const Error& err_adj) {
          if (err_adj.code() != ErrorCode::AdjacencyViolation) throw;
          record(t, at_event);
          traj.events.push_back({t, EventKind::NonAdmissibleStop, gone});
          traj.status = FlowStatus::NonAdmissibleStop;
          return traj;
        }
        record(t, poly);
        restart = true;
        continue;
      }

      ++traj.accepted_steps;
      t = clamped ? target : t + h;
      y.swap(y_new);
      k1.swap(k1_new);
      if (clamped && next_sample < opts.sample_times.size() && target == opts.sample_times[next_sample]) {
        record(t, unpack(poly, y));
        ++next_sample;
      } else if (opts.sample_times.empty()) {
        record(t, unpack(poly, y));
      }
      if (e > 0.0) h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2)));
      else h *= 5.0;
    }
  }
}

bool encloses(std::span<const Vec2> outer, std::span<const Vec2> inner) {
  double scale = 1.0;
  for (Vec2 p : outer) scale = std::max(scale, norm(p));
  const double tol = 1e-12 * scale;
  for (Vec2 p : inner) {
    if (locate(p, outer, tol) == Location::Outside) return false;
  }
  const std::size_t n = outer.size(), m = inner.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (segments_cross(outer[i], outer[(i + 1) % n], inner[j], inner[(j + 1) % m])) return false;
    }
  }
  // Edges joining two boundary vertices may still leave the outer polygon.
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 mid = 0.5 * (inner[j] + inner[(j + 1) % m]);
    if (locate(mid, outer, tol) == Location::Outside) return false;
  }
  return true;
}

bool encloses(const AdmissiblePolygon& outer, const AdmissiblePolygon& inner) {
  return encloses(outer.vertices(), inner.vertices());
}

}  // namespace crystal
