#include "crystal/chambolle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crystal/error.hpp"

namespace crystal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Monotone-chain convex hull, counterclockwise, collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

Mobility Mobility::euclidean() { return Mobility(); }

Mobility Mobility::of(const Anisotropy& an) {
  Mobility m;
  m.shape_ = an;
  for (std::size_t k = 0; k < an.size(); ++k) m.frank_.push_back(an.frank_vertex(k));
  m.reach_ = 0.0;
  for (Vec2 v : an.wulff_vertices()) m.reach_ = std::max(m.reach_, norm(v));
  return m;
}

Mobility Mobility::crystalline(const Anisotropy& an, const std::vector<double>& values) {
  if (values.size() != an.size())
    throw Error(ErrorCode::InvalidArgument, "need one mobility value per facet normal (" +
                                                std::to_string(an.size()) + ")");
  std::vector<Vec2> q;
  for (std::size_t k = 0; k < an.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k]))
      throw Error(ErrorCode::InvalidArgument, "mobility values must be positive");
    q.push_back(an.normal(k) / values[k]);
  }
  const std::vector<Vec2> hull = convex_hull(q);
  // W_M is the polar of the hull: one vertex per hull edge.
  std::vector<Vec2> verts;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2 p = hull[i], r = hull[(i + 1) % hull.size()];
    const double det = cross(p, r);
    if (!(det > 0.0)) throw Error(ErrorCode::OriginOutside, "mobility directions do not surround the origin");
    verts.push_back(Vec2{r.y - p.y, p.x - r.x} / det);
  }
  return of(Anisotropy::crystalline(std::move(verts), "mobility"));
}

double Mobility::operator()(Vec2 n) const { return shape_ ? shape_->sigma(n) : norm(n); }

double Mobility::polar(Vec2 x) const {
  if (!shape_) return norm(x);
  double s = -kInf;
  for (Vec2 q : frank_) s = std::max(s, dot(x, q));
  return s;
}

double Mobility::segment_distance(Vec2 x, Vec2 a, Vec2 b) const {
  if (!shape_) return distance_to_segment(x, a, b);
  // f(s) = max_k (alpha_k - s beta_k) is convex and piecewise linear on [0, 1]; its
  // minimum sits at an end or where two lines cross.
  const std::size_t m = frank_.size();
  double alpha[16], beta[16];
  const bool small = m <= 16;
  std::vector<double> big_alpha, big_beta;
  double* al = alpha;
  double* be = beta;
  if (!small) {
    big_alpha.resize(m);
    big_beta.resize(m);
    al = big_alpha.data();
    be = big_beta.data();
  }
  const Vec2 p = x - a, e = b - a;
  double f0 = -kInf, f1 = -kInf;
  for (std::size_t k = 0; k < m; ++k) {
    al[k] = dot(p, frank_[k]);
    be[k] = dot(e, frank_[k]);
    f0 = std::max(f0, al[k]);
    f1 = std::max(f1, al[k] - be[k]);
  }
  double best = std::min(f0, f1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double db = be[i] - be[j];
      if (db == 0.0) continue;
      const double s = (al[i] - al[j]) / db;
      if (!(s > 0.0 && s < 1.0)) continue;
      const double line = al[i] - s * be[i];
      if (line >= best) continue;
      double f = -kInf;
      for (std::size_t k = 0; k < m; ++k) f = std::max(f, al[k] - s * be[k]);
      best = std::min(best, f);
    }
  return best;
}

std::vector<Segment> marching_squares(const GridField& w) {
  std::vector<Segment> out;
  if (w.width() < 2 || w.height() < 2) return out;
  for (std::size_t j = 0; j + 1 < w.height(); ++j)
    for (std::size_t i = 0; i + 1 < w.width(); ++i) {
      const double v[4] = {w.at(i, j), w.at(i + 1, j), w.at(i + 1, j + 1), w.at(i, j + 1)};
      const bool in[4] = {v[0] <= 0.0, v[1] <= 0.0, v[2] <= 0.0, v[3] <= 0.0};
      if (in[0] == in[1] && in[1] == in[2] && in[2] == in[3]) continue;
      const Vec2 c[4] = {w.node(i, j), w.node(i + 1, j), w.node(i + 1, j + 1), w.node(i, j + 1)};
      // Crossings in counterclockwise order around the cell.
      Vec2 pt[4];
      bool enter[4];
      int n = 0;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if (in[e] == in[f]) continue;
        const double t = v[e] / (v[e] - v[f]);
        pt[n] = c[e] + t * (c[f] - c[e]);
        enter[n] = in[f];
        ++n;
      }
      auto emit = [&](Vec2 a, Vec2 b) {
        if (!(a == b)) out.push_back({a, b});
      };
      if (n == 2) {
        const int x = enter[0] ? 1 : 0;
        emit(pt[x], pt[1 - x]);
        continue;
      }
      // Saddle: join across the inside when the centre is inside.
      const bool joined = 0.25 * (v[0] + v[1] + v[2] + v[3]) <= 0.0;
      for (int k = 0; k < 4; ++k) {
        if (enter[k]) continue;
        emit(pt[k], joined ? pt[(k + 1) % 4] : pt[(k + 3) % 4]);
      }
    }
  return out;
}

EvolvingSet EvolvingSet::polygons(std::vector<Ring> rings, double time) {
  if (rings.empty()) throw Error(ErrorCode::EmptySet, "no polygons given");
  for (const Ring& r : rings) {
    if (r.size() < 3) throw Error(ErrorCode::InvalidArgument, "a ring needs three vertices");
    if (!is_simple(r)) throw Error(ErrorCode::NotSimple, "ring is not simple");
    if (signed_area(r) == 0.0) throw Error(ErrorCode::ZeroArea, "ring encloses no area");
  }
  for (std::size_t a = 0; a < rings.size(); ++a)
    for (std::size_t b = a + 1; b < rings.size(); ++b)
      for (std::size_t i = 0; i < rings[a].size(); ++i)
        for (std::size_t j = 0; j < rings[b].size(); ++j)
          if (segments_cross(rings[a][i], rings[a][(i + 1) % rings[a].size()], rings[b][j],
                             rings[b][(j + 1) % rings[b].size()]))
            throw Error(ErrorCode::NotSimple, "rings cross each other");
  EvolvingSet s;
  s.time_ = time;
  s.any_inside_ = true;
  // Even nesting depth bounds the set from outside, odd depth from inside.
  for (std::size_t a = 0; a < rings.size(); ++a) {
    Vec2 probe = 0.5 * (rings[a][0] + rings[a][1]);
    int depth = 0;
    for (std::size_t b = 0; b < rings.size(); ++b)
      if (b != a && locate(probe, rings[b]) == Location::Inside) ++depth;
    Ring r = rings[a];
    if ((signed_area(r) > 0.0) != (depth % 2 == 0)) std::reverse(r.begin(), r.end());
    for (std::size_t i = 0; i < r.size(); ++i) s.boundary_.push_back({r[i], r[(i + 1) % r.size()]});
  }
  s.rep_ = std::move(rings);
  return s;
}

EvolvingSet EvolvingSet::level_set(GridField w, double time) {
  w.validate();
  EvolvingSet s;
  s.time_ = time;
  s.boundary_ = marching_squares(w);
  s.any_inside_ = std::any_of(w.values().begin(), w.values().end(), [](double v) { return v <= 0.0; });
  s.rep_ = std::move(w);
  return s;
}

double EvolvingSet::area() const {
  double a = 0.0;
  for (const Segment& s : boundary_) a += cross(s.a, s.b);
  return 0.5 * a;
}

double EvolvingSet::perimeter() const {
  double p = 0.0;
  for (const Segment& s : boundary_) p += norm(s.b - s.a);
  return p;
}

bool EvolvingSet::contains(Vec2 p) const {
  if (polygonal()) {
    bool inside = false;
    for (const Ring& r : rings()) {
      const Location lo = locate(p, r);
      if (lo == Location::Boundary) return true;
      if (lo == Location::Inside) inside = !inside;
    }
    return inside;
  }
  const GridField& w = level();
  const double fx = (p.x - w.origin().x) / w.spacing();
  const double fy = (p.y - w.origin().y) / w.spacing();
  const double nx = static_cast<double>(w.width() - 1), ny = static_cast<double>(w.height() - 1);
  if (fx < 0.0 || fy < 0.0 || fx > nx || fy > ny) return false;
  const auto i = std::min(static_cast<std::size_t>(fx), w.width() > 1 ? w.width() - 2 : 0);
  const auto j = std::min(static_cast<std::size_t>(fy), w.height() > 1 ? w.height() - 2 : 0);
  const double tx = fx - static_cast<double>(i), ty = fy - static_cast<double>(j);
  auto val = [&](std::size_t a, std::size_t b) {
    return w.at(std::min(a, w.width() - 1), std::min(b, w.height() - 1));
  };
  const double v = (1 - tx) * (1 - ty) * val(i, j) + tx * (1 - ty) * val(i + 1, j) + tx * ty * val(i + 1, j + 1) +
                   (1 - tx) * ty * val(i, j + 1);
  return v <= 0.0;
}

std::pair<Vec2, Vec2> EvolvingSet::bounds() const {
  if (boundary_.empty()) {
    if (!any_inside_) throw Error(ErrorCode::EmptySet, "set is empty");
    const GridField& w = level();
    return {w.origin(), w.node(w.width() - 1, w.height() - 1)};
  }
  Vec2 lo{kInf, kInf}, hi{-kInf, -kInf};
  for (const Segment& s : boundary_)
    for (Vec2 p : {s.a, s.b}) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
  return {lo, hi};
}

namespace {

// Lipschitz bound of M0 per unit Euclidean length.
double polar_bound(const Mobility& mob) {
  double b = 0.0;
  for (int k = 0; k < 64; ++k) b = std::max(b, mob.polar(unit_from_angle(kTwoPi * k / 64.0)));
  return b / std::cos(kTwoPi / 128.0);
}

// Inside flags for the nodes of `grid`, read straight off an aligned level grid.
std::vector<char> inside_flags(const EvolvingSet& set, const GridField& grid) {
  std::vector<char> in(grid.size());
  if (!set.polygonal()) {
    const GridField& w = set.level();
    const double ox = (grid.origin().x - w.origin().x) / w.spacing();
    const double oy = (grid.origin().y - w.origin().y) / w.spacing();
    const bool aligned = std::abs(grid.spacing() - w.spacing()) <= 1e-12 * w.spacing() &&
                         std::abs(ox - std::round(ox)) < 1e-9 && std::abs(oy - std::round(oy)) < 1e-9;
    if (aligned) {
      const auto di = static_cast<long long>(std::llround(ox)), dj = static_cast<long long>(std::llround(oy));
      for (std::size_t j = 0; j < grid.height(); ++j)
        for (std::size_t i = 0; i < grid.width(); ++i) {
          const long long a = static_cast<long long>(i) + di, b = static_cast<long long>(j) + dj;
          const bool on = a >= 0 && b >= 0 && a < static_cast<long long>(w.width()) &&
                          b < static_cast<long long>(w.height());
          in[j * grid.width() + i] = on && w.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) <= 0.0;
        }
      return in;
    }
  }
  for (std::size_t j = 0; j < grid.height(); ++j)
    for (std::size_t i = 0; i < grid.width(); ++i) in[j * grid.width() + i] = set.contains(grid.node(i, j));
  return in;
}

}  // namespace

GridField signed_distance(const EvolvingSet& set, const Mobility& mob, const GridField& grid, double cap) {
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "distance cap must be positive");
  const std::vector<Segment>& segs = set.boundary();
  const std::vector<char> in = inside_flags(set, grid);
  GridField d = grid;
  if (segs.empty()) {
    if (!std::isfinite(cap)) throw Error(ErrorCode::EmptySet, "set or its complement is empty");
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = in[k] ? -cap : cap;
    return d;
  }
  const std::size_t nx = grid.width(), ny = grid.height();
  std::vector<double> dist(grid.size(), kInf);

  if (set.polygonal()) {
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        const Vec2 x = grid.node(i, j);
        double m = kInf;
        for (const Segment& s : segs) m = std::min(m, mob.segment_distance(x, s.a, s.b));
        dist[j * nx + i] = m;
      }
  } else {
    // Nearest-segment candidates seeded next to the contour and swept through the lattice.
    std::vector<int> cand(grid.size(), -1);
    const double h = grid.spacing();
    const Vec2 o = grid.origin();
    auto try_seg = [&](std::size_t k, int s) {
      const double m = mob.segment_distance(grid.node(k % nx, k / nx), segs[s].a, segs[s].b);
      if (m < dist[k]) {
        dist[k] = m;
        cand[k] = s;
      }
    };
    auto clamp_index = [](double f, std::size_t n) {
      return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
    };
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const Segment& g = segs[s];
      const std::size_t i0 = clamp_index(std::floor((std::min(g.a.x, g.b.x) - o.x) / h) - 1, nx);
      const std::size_t i1 = clamp_index(std::ceil((std::max(g.a.x, g.b.x) - o.x) / h) + 1, nx);
      const std::size_t j0 = clamp_index(std::floor((std::min(g.a.y, g.b.y) - o.y) / h) - 1, ny);
      const std::size_t j1 = clamp_index(std::ceil((std::max(g.a.y, g.b.y) - o.y) / h) + 1, ny);
      for (std::size_t j = j0; j <= j1; ++j)
        for (std::size_t i = i0; i <= i1; ++i) try_seg(j * nx + i, static_cast<int>(s));
    }
    const double reach_limit = cap + 3.0 * h * polar_bound(mob);
    auto pull = [&](std::size_t k, std::size_t q) {
      const int s = cand[q];
      if (s < 0 || s == cand[k] || dist[q] > reach_limit) return;
      try_seg(k, s);
    };
    for (int round = 0; round < 2; ++round) {
      for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
          const std::size_t k = j * nx + i;
          if (i > 0) pull(k, k - 1);
          if (j > 0) {
            pull(k, k - nx);
            if (i > 0) pull(k, k - nx - 1);
            if (i + 1 < nx) pull(k, k - nx + 1);
          }
        }
        for (std::size_t i = nx; i-- > 0;)
          if (i + 1 < nx) pull(j * nx + i, j * nx + i + 1);
      }
      for (std::size_t j = ny; j-- > 0;) {
        for (std::size_t i = nx; i-- > 0;) {
          const std::size_t k = j * nx + i;
          if (i + 1 < nx) pull(k, k + 1);
          if (j + 1 < ny) {
            pull(k, k + nx);
            if (i + 1 < nx) pull(k, k + nx + 1);
            if (i > 0) pull(k, k + nx - 1);
          }
        }
        for (std::size_t i = 0; i < nx; ++i)
          if (i > 0) pull(j * nx + i, j * nx + i - 1);
      }
    }
  }
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double m = std::min(dist[k], cap);
    d[k] = in[k] ? -m : m;
  }
  return d;
}

std::string_view to_string(ChambolleStatus status) {
  switch (status) {
    case ChambolleStatus::Horizon: return "Horizon";
    case ChambolleStatus::Vanished: return "Vanished";
    case ChambolleStatus::TouchedBoundary: return "TouchedBoundary";
  }
  return "?";
}

namespace {

class Stepper {
 public:
  Stepper(const Anisotropy& an, const Mobility& mob, const ChambolleParams& params)
      : an_(an), mob_(mob), params_(params) {
    const GridField& g = params.grid;
    if (g.width() < 3 || g.height() < 3) throw Error(ErrorCode::InvalidArgument, "grid is too small");
    const double w = g.spacing() * static_cast<double>(g.width() - 1);
    const double hgt = g.spacing() * static_cast<double>(g.height() - 1);
    band_ = params.band > 0.0 ? params.band : 0.25 * std::min(w, hgt);
  }

  // Throws when the set is too close to the grid edge for a meaningful step.
  void check_margin(const EvolvingSet& set) const {
    const auto [lo, hi] = set.bounds();
    const double margin = 0.2 * norm(hi - lo);
    const GridField& g = params_.grid;
    const Vec2 glo = g.origin(), ghi = g.node(g.width() - 1, g.height() - 1);
    if (lo.x - margin < glo.x || lo.y - margin < glo.y || hi.x + margin > ghi.x || hi.y + margin > ghi.y)
      throw Error(ErrorCode::InvalidArgument, "set must keep a margin of 0.2 diameters from the grid edge");
  }

  struct Output {
    EvolvingSet set;
    std::size_t iterations;
    bool converged;
  };

  Output step(const EvolvingSet& set, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
    if (set.empty()) throw Error(ErrorCode::EmptySet, "cannot step an empty set");
    const GridField& g = params_.grid;
    const double s = g.spacing();
    std::size_t i0 = 0, j0 = 0, i1 = g.width() - 1, j1 = g.height() - 1;
    if (params_.crop) {
      const auto [lo, hi] = set.bounds();
      const double margin = band_ * mob_.reach() + 4.0 * s;
      auto index = [&](double x, double origin, std::size_t n) {
        return static_cast<std::size_t>(std::clamp(std::floor((x - origin) / s), 0.0, static_cast<double>(n - 1)));
      };
      i0 = index(lo.x - margin, g.origin().x, g.width());
      j0 = index(lo.y - margin, g.origin().y, g.height());
      i1 = std::min(g.width() - 1, index(hi.x + margin, g.origin().x, g.width()) + 1);
      j1 = std::min(g.height() - 1, index(hi.y + margin, g.origin().y, g.height()) + 1);
    }
    GridField box(i1 - i0 + 1, j1 - j0 + 1, s, g.node(i0, j0), BoundaryMode::Pad, band_);
    GridField psi = signed_distance(set, mob_, box, band_);
    psi.set_boundary(BoundaryMode::Pad, band_);

    ResolventParams rp = params_.resolvent;
    rp.a = h;
    DualField warm;
    const bool have_warm = !z_.x.empty();
    if (have_warm) warm = remap(i0, j0, box);
    ResolventResult r = resolvent_solve(psi, an_, rp, have_warm ? &warm : nullptr);
    z_ = std::move(r.z);
    zi0_ = i0;
    zj0_ = j0;

    const GridField& w = r.v;
    bool any = false;
    for (std::size_t j = 0; j < w.height(); ++j)
      for (std::size_t i = 0; i < w.width(); ++i) {
        if (w.at(i, j) > 0.0) continue;
        any = true;
        if (i == 0 || j == 0 || i + 1 == w.width() || j + 1 == w.height())
          throw Error(ErrorCode::TouchedBoundary, "evolved set reaches the edge of the computational box");
      }
    if (!any) throw Error(ErrorCode::Vanished, "evolved set is empty");
    return {EvolvingSet::level_set(w, set.time() + h), r.iterations, r.converged};
  }

 private:
  // Previous dual field shifted onto the lattice of `box`.
  DualField remap(std::size_t i0, std::size_t j0, const GridField& box) const {
    DualField out;
    out.width = box.width() + 2;
    out.height = box.height() + 2;
    out.x.assign(out.width * out.height, 0.0);
    out.y.assign(out.width * out.height, 0.0);
    const long long di = static_cast<long long>(i0) - static_cast<long long>(zi0_);
    const long long dj = static_cast<long long>(j0) - static_cast<long long>(zj0_);
    for (std::size_t j = 0; j < out.height; ++j)
      for (std::size_t i = 0; i < out.width; ++i) {
        const long long a = static_cast<long long>(i) + di, b = static_cast<long long>(j) + dj;
        if (a < 0 || b < 0 || a >= static_cast<long long>(z_.width) || b >= static_cast<long long>(z_.height)) continue;
        const std::size_t src = static_cast<std::size_t>(b) * z_.width + static_cast<std::size_t>(a);
        out.x[j * out.width + i] = z_.x[src];
        out.y[j * out.width + i] = z_.y[src];
      }
    return out;
  }

  const Anisotropy& an_;
  const Mobility& mob_;
  const ChambolleParams& params_;
  double band_ = 0.0;
  DualField z_;
  std::size_t zi0_ = 0, zj0_ = 0;
};

}  // namespace

EvolvingSet chambolle_step(const EvolvingSet& set, double h, const Anisotropy& an, const Mobility& mob,
                           const ChambolleParams& params) {
  Stepper stepper(an, mob, params);
  stepper.check_margin(set);
  return stepper.step(set, h).set;
}

ChambolleTrajectory chambolle_evolve(const EvolvingSet& initial, double h, double horizon, const Anisotropy& an,
                                     const Mobility& mob, const ChambolleParams& params, std::size_t frame_every) {
  if (!(h > 0.0) || !(horizon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need h > 0 and horizon >= 0");
  Stepper stepper(an, mob, params);
  stepper.check_margin(initial);
  ChambolleTrajectory traj;
  traj.records.push_back({0, initial.time(), initial.area(), initial.perimeter(), 0, true});
  if (frame_every > 0) traj.frames.push_back(initial);
  const auto steps = static_cast<std::size_t>(std::floor(horizon / h + 1e-9));
  EvolvingSet current = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      Stepper::Output out = stepper.step(current, h);
      current = std::move(out.set);
      traj.records.push_back({k, current.time(), current.area(), current.perimeter(), out.iterations, out.converged});
      if (frame_every > 0 && k % frame_every == 0) traj.frames.push_back(current);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TouchedBoundary) {
        traj.status = ChambolleStatus::TouchedBoundary;
        break;
      }
      if (e.code() != ErrorCode::Vanished) throw;
      traj.status = ChambolleStatus::Vanished;
      const double t_vanish = current.time() + h;
      traj.vanish_time = t_vanish;
      const std::size_t n = traj.records.size();
      double t_ext = t_vanish;
      if (n >= 2) {
        const double a1 = traj.records[n - 1].area, a0 = traj.records[n - 2].area;
        if (a0 > a1) t_ext = std::min(t_vanish, traj.records[n - 1].time + h * a1 / (a0 - a1));
      }
      traj.extinction_time = t_ext;
      break;
    }
  }
  traj.final_set = current;
  return traj;
}

FatteningReport fattening_demo(const Anisotropy& an, const Mobility& mob, double h, double horizon,
                               const ChambolleParams& params, double gap) {
  if (!(gap > 0.0) || gap >= 0.5) throw Error(ErrorCode::InvalidArgument, "gap must lie in (0, 0.5)");
  const double g = gap;
  const EvolvingSet outer = EvolvingSet::polygons({{{-1, -1}, {0, -1}, {0, -g}, {g, -g}, {g, 0}, {1, 0}, {1, 1},
                                                    {0, 1}, {0, g}, {-g, g}, {-g, 0}, {-1, 0}}});
  const EvolvingSet inner =
      EvolvingSet::polygons({{{-1, -1}, {-g, -1}, {-g, -g}, {-1, -g}}, {{g, g}, {1, g}, {1, 1}, {g, 1}}});
  const ChambolleTrajectory a = chambolle_evolve(outer, h, horizon, an, mob, params);
  const ChambolleTrajectory b = chambolle_evolve(inner, h, horizon, an, mob, params);
  FatteningReport rep;
  const std::size_t n = std::min(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < n; ++k) {
    rep.times.push_back(a.records[k].time);
    rep.outer_area.push_back(a.records[k].area);
    rep.inner_area.push_back(b.records[k].area);
    rep.max_difference = std::max(rep.max_difference, a.records[k].area - b.records[k].area);
  }
  return rep;
}

}  // namespace crystal
