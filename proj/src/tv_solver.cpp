#include "crystal/tv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>

#include "crystal/error.hpp"

namespace crystal {

namespace {

// Nearest-point map onto the Wulff polygon, with the polygon data laid out flat.
class WulffProjector {
 public:
  explicit WulffProjector(const Anisotropy& an) {
    const auto verts = an.wulff_vertices();
    vx_.reserve(verts.size());
    for (std::size_t k = 0; k < verts.size(); ++k) {
      vx_.push_back(verts[k].x);
      vy_.push_back(verts[k].y);
      nx_.push_back(an.normal(k).x);
      ny_.push_back(an.normal(k).y);
      h_.push_back(an.support(k));
    }
    // Axis-aligned boxes reduce to a clamp.
    box_ = verts.size() == 4;
    for (std::size_t k = 0; k < nx_.size() && box_; ++k) {
      const Vec2 n = an.normal(k);
      if (std::abs(n.x) > 1e-15 && std::abs(n.y) > 1e-15) box_ = false;
      if (n.x > 0.5) xmax_ = h_[k];
      else if (n.x < -0.5) xmin_ = -h_[k];
      else if (n.y > 0.5) ymax_ = h_[k];
      else ymin_ = -h_[k];
    }
  }

  void project(double& zx, double& zy) const {
    if (box_) {
      zx = std::clamp(zx, xmin_, xmax_);
      zy = std::clamp(zy, ymin_, ymax_);
      return;
    }
    const std::size_t m = h_.size();
    bool outside = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (zx * nx_[k] + zy * ny_[k] > h_[k]) {
        outside = true;
        break;
      }
    }
    if (!outside) return;
    // The nearest boundary point lies on an edge whose half-plane excludes z.
    double best = std::numeric_limits<double>::infinity();
    double bx = zx, by = zy;
    for (std::size_t k = 0; k < m; ++k) {
      if (zx * nx_[k] + zy * ny_[k] <= h_[k]) continue;
      const std::size_t k1 = k + 1 == m ? 0 : k + 1;
      const double ex = vx_[k1] - vx_[k], ey = vy_[k1] - vy_[k];
      double s = ((zx - vx_[k]) * ex + (zy - vy_[k]) * ey) / (ex * ex + ey * ey);
      s = std::clamp(s, 0.0, 1.0);
      const double px = vx_[k] + s * ex, py = vy_[k] + s * ey;
      const double d = (zx - px) * (zx - px) + (zy - py) * (zy - py);
      if (d < best) {
        best = d;
        bx = px;
        by = py;
      }
    }
    zx = bx;
    zy = by;
  }

  double sigma(double gx, double gy) const {
    double s = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < vx_.size(); ++k) s = std::max(s, vx_[k] * gx + vy_[k] * gy);
    return s;
  }

 private:
  std::vector<double> vx_, vy_, nx_, ny_, h_;
  bool box_ = false;
  double xmin_ = 0.0, xmax_ = 0.0, ymin_ = 0.0, ymax_ = 0.0;
};

// Difference lattice of a grid. Pad mode adds a frozen ghost frame along every axis
// of extent > 1 and is otherwise treated like Neumann on the enlarged array.
struct Lattice {
  std::size_t nx, ny, px, py, ex, ey;
  bool periodic;
  double inv_h;
  double pad;

  explicit Lattice(const GridField& g)
      : nx(g.width()),
        ny(g.height()),
        px(g.boundary() == BoundaryMode::Pad && g.width() > 1 ? 1 : 0),
        py(g.boundary() == BoundaryMode::Pad && g.height() > 1 ? 1 : 0),
        ex(nx + 2 * px),
        ey(ny + 2 * py),
        periodic(g.boundary() == BoundaryMode::Periodic),
        inv_h(1.0 / g.spacing()),
        pad(g.boundary() == BoundaryMode::Pad ? g.pad_value() : 0.0) {}

  std::size_t size() const { return ex * ey; }
  bool interior(std::size_t i, std::size_t j) const {
    return i >= px && i < px + nx && j >= py && j < py + ny;
  }

  std::vector<double> extend(const GridField& g) const {
    std::vector<double> e(size(), pad);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) e[(j + py) * ex + i + px] = g.at(i, j);
    return e;
  }

  void restrict_to(const std::vector<double>& e, GridField& g) const {
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) g.at(i, j) = e[(j + py) * ex + i + px];
  }

  // Forward differences divided by h.
  void gradient(const std::vector<double>& e, std::size_t i, std::size_t j, double& gx, double& gy) const {
    const std::size_t k = j * ex + i;
    if (i + 1 < ex) gx = e[k + 1] - e[k];
    else gx = periodic ? e[j * ex] - e[k] : 0.0;
    if (j + 1 < ey) gy = e[k + ex] - e[k];
    else gy = periodic ? e[i] - e[k] : 0.0;
    gx *= inv_h;
    gy *= inv_h;
  }

  // Negative adjoint of `gradient`.
  double divergence(const std::vector<double>& zx, const std::vector<double>& zy, std::size_t i,
                    std::size_t j) const {
    const std::size_t k = j * ex + i;
    double d = 0.0;
    if (periodic) {
      d += zx[k] - zx[j * ex + (i == 0 ? ex - 1 : i - 1)];
      d += zy[k] - zy[(j == 0 ? ey - 1 : j - 1) * ex + i];
    } else {
      if (i + 1 < ex) d += zx[k];
      if (i > 0) d -= zx[k - 1];
      if (j + 1 < ey) d += zy[k];
      if (j > 0) d -= zy[k - ex];
    }
    return d * inv_h;
  }
};

void check_params(const GridField& psi, const ResolventParams& p) {
  if (!(p.a > 0.0) || !std::isfinite(p.a)) throw Error(ErrorCode::InvalidArgument, "resolvent step a must be positive");
  if (p.max_iters == 0) throw Error(ErrorCode::InvalidArgument, "max_iters must be positive");
  if (!(p.tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  if (p.tau < 0.0 || p.sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "step sizes must be non-negative");
  const double bound = 8.0 / (psi.spacing() * psi.spacing());
  if (p.tau > 0.0 && p.sigma > 0.0 && p.tau * p.sigma * bound > 1.0 + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "step sizes violate tau * sigma * |grad|^2 <= 1");
  psi.validate();
}

double energy_sum(const Lattice& lat, const WulffProjector& w, const std::vector<double>& e) {
  double s = 0.0;
  for (std::size_t j = 0; j < lat.ey; ++j)
    for (std::size_t i = 0; i < lat.ex; ++i) {
      double gx, gy;
      lat.gradient(e, i, j, gx, gy);
      s += w.sigma(gx, gy);
    }
  return s;
}

}  // namespace

double discrete_energy(const GridField& v, const Anisotropy& an) {
  v.validate();
  const Lattice lat(v);
  const WulffProjector w(an);
  return energy_sum(lat, w, lat.extend(v)) * v.spacing() * v.spacing();
}

double resolvent_objective(const GridField& v, const GridField& psi, const Anisotropy& an, double a) {
  if (v.width() != psi.width() || v.height() != psi.height())
    throw Error(ErrorCode::InvalidArgument, "field shapes differ");
  double q = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) q += (v[k] - psi[k]) * (v[k] - psi[k]);
  return q / (2.0 * a) * v.spacing() * v.spacing() + discrete_energy(v, an);
}

namespace {

// Iterates, dual field and best-so-far bookkeeping shared by both methods.
class Solve {
 public:
  Solve(const GridField& psi, const Anisotropy& an, const ResolventParams& params)
      : lat(psi),
        wulff(an),
        a(params.a),
        psi_e(lat.extend(psi)),
        v(psi_e),
        zx(lat.size(), 0.0),
        zy(lat.size(), 0.0),
        div_(lat.size(), 0.0),
        candidate_(lat.size()) {
    result.v = psi;
    result.gap = std::numeric_limits<double>::infinity();
  }

  bool seed(const DualField* warm) {
    const std::size_t m = lat.size();
    if (!warm || warm->width != lat.ex || warm->height != lat.ey || warm->x.size() != m || warm->y.size() != m)
      return false;
    zx = warm->x;
    zy = warm->y;
    for (std::size_t k = 0; k < m; ++k) wulff.project(zx[k], zy[k]);
    // Start from the primal point the seeded dual field implies.
    for (std::size_t j = lat.py; j < lat.py + lat.ny; ++j)
      for (std::size_t i = lat.px; i < lat.px + lat.nx; ++i) {
        const std::size_t k = j * lat.ex + i;
        v[k] = psi_e[k] + a * lat.divergence(zx, zy, i, j);
      }
    return true;
  }

  // Records the objective and returns the primal-dual gap per node; keeps the better
  // of the primal iterate and the primal point recovered from the dual.
  double checkpoint() {
    double dual = 0.0;
    for (std::size_t j = 0; j < lat.ey; ++j)
      for (std::size_t i = 0; i < lat.ex; ++i) {
        const std::size_t k = j * lat.ex + i;
        const double d = lat.divergence(zx, zy, i, j);
        div_[k] = d;
        if (lat.interior(i, j)) dual += -psi_e[k] * d - 0.5 * a * d * d;
        else dual -= lat.pad * d;
      }
    candidate_ = psi_e;
    for (std::size_t j = lat.py; j < lat.py + lat.ny; ++j)
      for (std::size_t i = lat.px; i < lat.px + lat.nx; ++i) {
        const std::size_t k = j * lat.ex + i;
        candidate_[k] = psi_e[k] + a * div_[k];
      }
    const double p_iter = primal(v);
    const double p_dual = primal(candidate_);
    const bool use_dual = p_dual < p_iter;
    const double p = std::min(p_iter, p_dual);
    const double gap = std::max(0.0, p - dual) / static_cast<double>(lat.nx * lat.ny);
    if (p < best_) {
      best_ = p;
      lat.restrict_to(use_dual ? candidate_ : v, result.v);
    }
    result.gap = std::min(result.gap, gap);
    const double h = result.v.spacing();
    result.objective.push_back(best_ * h * h);
    return gap;
  }

  ResolventResult finish(std::size_t iterations) {
    result.iterations = iterations;
    result.z = DualField{lat.ex, lat.ey, std::move(zx), std::move(zy)};
    return std::move(result);
  }

  const Lattice lat;
  const WulffProjector wulff;
  const double a;
  const std::vector<double> psi_e;
  std::vector<double> v;
  std::vector<double> zx, zy;
  ResolventResult result;

 private:
  double primal(const std::vector<double>& e) const {
    double q = 0.0;
    for (std::size_t j = lat.py; j < lat.py + lat.ny; ++j)
      for (std::size_t i = lat.px; i < lat.px + lat.nx; ++i) {
        const std::size_t k = j * lat.ex + i;
        q += (e[k] - psi_e[k]) * (e[k] - psi_e[k]);
      }
    return q / (2.0 * a) + energy_sum(lat, wulff, e);
  }

  std::vector<double> div_;
  std::vector<double> candidate_;
  double best_ = std::numeric_limits<double>::infinity();
};

// Drives `step` and checks the gap at thinning intervals.
template <class Step>
ResolventResult iterate(Solve& st, const ResolventParams& params, Step&& step) {
  const std::size_t every = std::max<std::size_t>(1, params.check_every);
  std::size_t it = 0;
  std::size_t next_check = every;
  while (it < params.max_iters) {
    step();
    ++it;
    if (it >= next_check || it == params.max_iters) {
      // Checkpoints cost about three iterations, so they thin out as the run grows.
      next_check = it + std::max(every, it / 16);
      if (st.checkpoint() <= params.tolerance) {
        st.result.converged = true;
        break;
      }
    }
  }
  return st.finish(it);
}

ResolventResult solve_primal_dual(const GridField& psi, const Anisotropy& an, const ResolventParams& params,
                                  const DualField* warm) {
  Solve st(psi, an, params);
  const Lattice& lat = st.lat;
  const double a = params.a;
  const double h = psi.spacing();
  const double norm2 = 8.0 / (h * h);
  double tau = params.tau, sig = params.sigma;
  if (tau == 0.0 && sig == 0.0) {
    // Empirically the iteration count is smallest near sqrt(tau / sigma) = a / (20 h).
    const double ratio = std::clamp(0.05 * a / h, 1e-3, 1e3);
    tau = std::sqrt(0.99 / norm2) * ratio;
    sig = std::sqrt(0.99 / norm2) / ratio;
  } else if (tau == 0.0) tau = 0.99 / (norm2 * sig);
  else if (sig == 0.0) sig = 0.99 / (norm2 * tau);

  st.seed(warm);
  std::vector<double>& v = st.v;
  std::vector<double>& zx = st.zx;
  std::vector<double>& zy = st.zy;
  const std::vector<double>& psi_e = st.psi_e;
  std::vector<double> v_bar = v;

  return iterate(st, params, [&]() {
    // Dual ascent with exact projection.
    for (std::size_t j = 0; j < lat.ey; ++j) {
      const std::size_t row = j * lat.ex;
      const bool fast_row = !lat.periodic && j + 1 < lat.ey;
      std::size_t i = 0;
      if (fast_row) {
        for (; i + 1 < lat.ex; ++i) {
          const std::size_t k = row + i;
          zx[k] += sig * (v_bar[k + 1] - v_bar[k]) * lat.inv_h;
          zy[k] += sig * (v_bar[k + lat.ex] - v_bar[k]) * lat.inv_h;
          st.wulff.project(zx[k], zy[k]);
        }
      }
      for (; i < lat.ex; ++i) {
        const std::size_t k = row + i;
        double gx, gy;
        lat.gradient(v_bar, i, j, gx, gy);
        zx[k] += sig * gx;
        zy[k] += sig * gy;
        st.wulff.project(zx[k], zy[k]);
      }
    }
    // Proximal descent on the quadratic term, then over-relaxation.
    const double inv = 1.0 / (1.0 + tau / a);
    const double theta = params.accelerate ? 1.0 / std::sqrt(1.0 + 2.0 * tau / a) : 1.0;
    for (std::size_t j = lat.py; j < lat.py + lat.ny; ++j) {
      const std::size_t row = j * lat.ex;
      const bool fast_row = !lat.periodic && j > 0 && j + 1 < lat.ey;
      for (std::size_t i = lat.px; i < lat.px + lat.nx; ++i) {
        const std::size_t k = row + i;
        const double d = fast_row && i > 0 && i + 1 < lat.ex
                             ? (zx[k] - zx[k - 1] + zy[k] - zy[k - lat.ex]) * lat.inv_h
                             : lat.divergence(zx, zy, i, j);
        const double old = v[k];
        const double next = (old + tau * d + tau * psi_e[k] / a) * inv;
        v[k] = next;
        v_bar[k] = next + theta * (next - old);
      }
    }
    if (params.accelerate) {
      tau *= theta;
      sig /= theta;
    }
  });
}

// Exact 1-D solver for min 1/2 |v - y|^2 + sum up (v_{k+1} - v_k)_+ + down (v_{k+1} - v_k)_-,
// optionally with fixed ghost values at either end. Buffers are reused between calls.
class ChainSolver {
 public:
  // Writes v[0..n) and, if dual is non-null, one dual per difference including ghost ends.
  void solve(const double* y, std::size_t n, double up, double down, std::optional<double> left,
             std::optional<double> right, double* v, double* dual) {
    // The derivative of the running message is piecewise linear and nondecreasing;
    // knots carry the change of slope and intercept when crossed left to right.
    knots_.resize(2 * n + 4);
    head_ = tail_ = n + 2;
    lo_.resize(n);
    hi_.resize(n);
    double sl = 0.0, il = 0.0, sr = 0.0, ir = 0.0;
    if (left) {
      il = -down;
      ir = up;
      knots_[tail_++] = {*left, 0.0, up + down};
    }
    // Smallest b with D(b) >= t, scanning from the left; optionally consumes the knots.
    auto from_left = [&](double t, bool consume) {
      double s = sl, i = il;
      std::size_t at = head_;
      double root = 0.0;
      bool found = false;
      for (; at < tail_; ++at) {
        const Knot& k = knots_[at];
        if (s * k.pos + i >= t) {
          root = (t - i) / s;
          found = true;
          break;
        }
        s += k.ds;
        i += k.di;
        if (s * k.pos + i >= t) {
          root = k.pos;
          found = true;
          ++at;
          break;
        }
      }
      if (!found) root = (t - i) / s;
      if (consume) {
        head_ = at;
        knots_[--head_] = {root, s, i - t};
        sl = 0.0;
        il = t;
      }
      return root;
    };
    auto from_right = [&](double t) {
      double s = sr, i = ir;
      double root = 0.0;
      bool found = false;
      while (tail_ > head_) {
        const Knot k = knots_[tail_ - 1];
        if (s * k.pos + i <= t) {
          root = (t - i) / s;
          found = true;
          break;
        }
        s -= k.ds;
        i -= k.di;
        --tail_;
        if (s * k.pos + i <= t) {
          root = k.pos;
          found = true;
          break;
        }
      }
      if (!found) root = (t - i) / s;
      knots_[tail_++] = {root, -s, t - i};
      sr = 0.0;
      ir = t;
      return root;
    };

    for (std::size_t k = 0; k < n; ++k) {
      sl += 1.0;
      il -= y[k];
      sr += 1.0;
      ir -= y[k];
      if (k + 1 == n) break;
      lo_[k] = from_left(-down, true);
      hi_[k] = from_right(up);
    }
    if (right) {
      const double p = from_left(up, false), q = from_left(-down, false);
      v[n - 1] = p < *right ? p : (q > *right ? q : *right);
    } else {
      v[n - 1] = from_left(0.0, false);
    }
    for (std::size_t k = n - 1; k-- > 0;) v[k] = std::clamp(v[k + 1], lo_[k], hi_[k]);
    if (dual) duals(y, n, up, down, left, right, v, dual);
  }

 private:
  struct Knot {
    double pos, ds, di;
  };

  // u_{e+1} = u_e + v_e - y_e, starting from the left ghost difference. Free ends pin the
  // dual to zero there. With two ghosts the offset is otherwise free within the box, and
  // the dual objective depends on it only through (right - left) u_0.
  static void duals(const double* y, std::size_t n, double up, double down, std::optional<double> left,
                    std::optional<double> right, const double* v, double* dual) {
    double lower = -down, upper = up;
    auto admit = [&](double shift) {
      lower = std::max(lower, -down - shift);
      upper = std::min(upper, up - shift);
    };
    if (!left) lower = upper = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      shift += v[k] - y[k];
      admit(shift);
    }
    shift += v[n - 1] - y[n - 1];
    if (right) {
      admit(shift);
    } else {
      lower = std::max(lower, -shift);
      upper = std::min(upper, -shift);
    }
    double u;
    if (lower > upper) u = 0.5 * (lower + upper);
    else if (left && right && *right > *left) u = upper;
    else if (left && right && *right < *left) u = lower;
    else u = std::clamp(0.0, lower, upper);
    std::size_t e = 0;
    if (left) dual[e++] = std::clamp(u, -down, up);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      u += v[k] - y[k];
      dual[e++] = std::clamp(u, -down, up);
    }
    if (right) dual[e] = std::clamp(u + v[n - 1] - y[n - 1], -down, up);
  }

  std::vector<Knot> knots_;
  std::size_t head_ = 0, tail_ = 0;
  std::vector<double> lo_, hi_;
};

struct Box {
  double xmin, xmax, ymin, ymax;
};

std::optional<Box> box_of(const Anisotropy& an) {
  if (an.size() != 4) return std::nullopt;
  Box b{0, 0, 0, 0};
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 n = an.normal(k);
    if (std::abs(n.x) > 1e-15 && std::abs(n.y) > 1e-15) return std::nullopt;
    if (n.x > 0.5) b.xmax = an.support(k);
    else if (n.x < -0.5) b.xmin = -an.support(k);
    else if (n.y > 0.5) b.ymax = an.support(k);
    else b.ymin = -an.support(k);
  }
  return b;
}

bool splitting_applies(const GridField& psi, const Anisotropy& an) {
  return psi.boundary() != BoundaryMode::Periodic && box_of(an).has_value();
}

// Block-coordinate ascent on the dual: exact row solves for the x part of z, then exact
// column solves for the y part. The primal iterate is always psi + a div z.
ResolventResult solve_splitting(const GridField& psi, const Anisotropy& an, const ResolventParams& params,
                                const DualField* warm) {
  const Box box = *box_of(an);
  Solve st(psi, an, params);
  const Lattice& lat = st.lat;
  const double a = params.a;
  const double scale = a * lat.inv_h;
  st.seed(warm);
  std::vector<double>& v = st.v;
  std::vector<double>& zx = st.zx;
  std::vector<double>& zy = st.zy;
  const std::vector<double>& psi_e = st.psi_e;
  const bool ghost_x = lat.px > 0, ghost_y = lat.py > 0;
  const std::optional<double> gx = ghost_x ? std::optional<double>(lat.pad) : std::nullopt;
  const std::optional<double> gy = ghost_y ? std::optional<double>(lat.pad) : std::nullopt;

  ChainSolver chain;
  std::vector<double> buf, out, dual;
  // Re-solves one axis given the other: input = psi + a div_other z.
  auto sweep = [&](bool x_axis, const std::vector<double>& other) {
    const std::size_t lines = x_axis ? lat.ny : lat.nx;
    const std::size_t len = x_axis ? lat.nx : lat.ny;
    const double up = scale * (x_axis ? box.xmax : box.ymax);
    const double down = -scale * (x_axis ? box.xmin : box.ymin);
    const std::optional<double>& ghost = x_axis ? gx : gy;
    std::vector<double>& z = x_axis ? zx : zy;
    // Along the line nodes are `stride` apart; the other axis differences are `cross` apart.
    const std::size_t stride = x_axis ? 1 : lat.ex;
    const std::size_t cross = x_axis ? lat.ex : 1;
    const std::size_t cross_extent = x_axis ? lat.ey : lat.ex;
    buf.resize(len);
    out.resize(len);
    dual.resize(len + 1);
    for (std::size_t line = 0; line < lines; ++line) {
      const std::size_t c = line + (x_axis ? lat.py : lat.px);
      const std::size_t base = x_axis ? c * lat.ex + lat.px : lat.py * lat.ex + c;
      const bool has_next = c + 1 < cross_extent, has_prev = c > 0;
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t k = base + t * stride;
        double d = 0.0;
        if (has_next) d += other[k];
        if (has_prev) d -= other[k - cross];
        buf[t] = psi_e[k] + a * d * lat.inv_h;
      }
      if (len == 1 && !ghost) {
        v[base] = buf[0];
        continue;
      }
      chain.solve(buf.data(), len, up, down, ghost, ghost, out.data(), dual.data());
      // The first dual sits on the left ghost difference when there is one.
      const std::size_t edges = len - 1 + (ghost ? 2 : 0);
      const std::size_t first = ghost ? base - stride : base;
      for (std::size_t e = 0; e < edges; ++e) z[first + e * stride] = dual[e] / scale;
      for (std::size_t t = 0; t < len; ++t) v[base + t * stride] = out[t];
    }
  };

  // With two blocks, exact minimisation over the column block leaves a smooth problem in
  // the row block whose proximal-gradient step is one row sweep, so FISTA momentum applies.
  // Momentum restarts whenever it points against the latest step.
  if (lat.ex == 1 || lat.ey == 1) {
    const std::vector<double> none(lat.size(), 0.0);
    return iterate(st, params, [&]() { sweep(lat.ey == 1, none); });
  }
  std::vector<double> zx_prev = zx, zx_bar = zx;
  double t = 1.0;
  return iterate(st, params, [&]() {
    sweep(false, zx_bar);
    zx_prev.swap(zx);
    sweep(true, zy);
    double along = 0.0;
    for (std::size_t k = 0; k < zx.size(); ++k) along += (zx_bar[k] - zx[k]) * (zx[k] - zx_prev[k]);
    if (along > 0.0) t = 1.0;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    t = t_next;
    for (std::size_t k = 0; k < zx.size(); ++k) zx_bar[k] = zx[k] + beta * (zx[k] - zx_prev[k]);
  });
}

}  // namespace

ResolventResult resolvent_solve(const GridField& psi, const Anisotropy& an, const ResolventParams& params,
                                const DualField* warm) {
  check_params(psi, params);
  switch (params.method) {
    case ResolventMethod::PrimalDual:
      return solve_primal_dual(psi, an, params, warm);
    case ResolventMethod::Splitting:
      if (!splitting_applies(psi, an))
        throw Error(ErrorCode::InvalidArgument, "splitting needs a box Wulff shape and a non-periodic grid");
      return solve_splitting(psi, an, params, warm);
    case ResolventMethod::Auto:
      return splitting_applies(psi, an) ? solve_splitting(psi, an, params, warm)
                                        : solve_primal_dual(psi, an, params, warm);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown resolvent method");
}

std::vector<double> tv_denoise_chain(std::span<const double> y, double up, double down, std::optional<double> left,
                                     std::optional<double> right, std::vector<double>* dual) {
  const std::size_t n = y.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty chain");
  if (!(up >= 0.0) || !(down >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be non-negative");
  std::vector<double> v(n);
  if (dual) dual->assign(n - 1 + (left ? 1 : 0) + (right ? 1 : 0), 0.0);
  ChainSolver().solve(y.data(), n, up, down, left, right, v.data(), dual ? dual->data() : nullptr);
  return v;
}

GridField estimate_min_section(const GridField& psi, const Anisotropy& an, double a, ResolventParams params) {
  params.a = a;
  const ResolventResult r = resolvent_solve(psi, an, params);
  GridField out = psi;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (r.v[k] - psi[k]) / a;
  return out;
}

GridField estimate_min_section_richardson(const GridField& psi, const Anisotropy& an, double a,
                                          ResolventParams params) {
  const GridField coarse = estimate_min_section(psi, an, a, params);
  GridField fine = estimate_min_section(psi, an, 0.5 * a, params);
  for (std::size_t k = 0; k < fine.size(); ++k) fine[k] = 2.0 * fine[k] - coarse[k];
  return fine;
}

Vec2 project_wulff(Vec2 z, const Anisotropy& an) {
  const WulffProjector w(an);
  w.project(z.x, z.y);
  return z;
}

}  // namespace crystal
