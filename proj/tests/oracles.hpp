#pragma once

// Independent reference computations shared by the unit tests and the acceptance
// suite. Nothing here calls into the solvers under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "crystal/geometry.hpp"
#include "crystal/grid.hpp"

namespace oracle {

using crystal::Vec2;

// Intersection of the lines x.n1 = c1 and x.n2 = c2.
inline Vec2 meet(Vec2 n1, double c1, Vec2 n2, double c2) {
  const double det = n1.x * n2.y - n1.y * n2.x;
  return {(c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det};
}

// Polygon cut out by the half-planes x.n_k <= h_k with normals in increasing angle.
// Empty when some facet would have non-positive length.
inline std::vector<Vec2> polygon_from_support(const std::vector<double>& angles, const std::vector<double>& h,
                                              double min_length = 0.0) {
  const std::size_t m = angles.size();
  std::vector<Vec2> pts(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t p = (k + m - 1) % m;
    pts[k] = meet({std::cos(angles[p]), std::sin(angles[p])}, h[p], {std::cos(angles[k]), std::sin(angles[k])}, h[k]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2 t{-std::sin(angles[k]), std::cos(angles[k])};
    if (crystal::dot(pts[(k + 1) % m] - pts[k], t) <= min_length) return {};
  }
  return pts;
}

// Orthogonal "skyline": columns on [x_i, x_{i+1}] of heights H_i >= 1 standing on y = 0,
// counterclockwise. Neighbouring heights differ, so every vertex is a real corner.
inline std::vector<Vec2> skyline(std::mt19937_64& rng, std::size_t columns) {
  std::uniform_real_distribution<double> width(0.3, 1.5), height(1.0, 3.0);
  std::vector<double> x{0.0}, hgt;
  for (std::size_t i = 0; i < columns; ++i) {
    x.push_back(x.back() + width(rng));
    double hi = height(rng);
    while (!hgt.empty() && std::abs(hi - hgt.back()) < 0.1) hi = height(rng);
    hgt.push_back(hi);
  }
  std::vector<Vec2> pts{{x[0], 0.0}, {x[columns], 0.0}, {x[columns], hgt[columns - 1]}};
  for (std::size_t i = columns - 1; i >= 1; --i) {
    pts.push_back({x[i], hgt[i]});
    pts.push_back({x[i], hgt[i - 1]});
  }
  pts.push_back({x[0], hgt[0]});
  return pts;
}

// Signed lengths (x_{j+1} - x_j).t_j of the polygon bounded by the lines x.n_j = c_j.
inline std::vector<double> lengths_of_lines(const std::vector<Vec2>& normals, const std::vector<double>& c) {
  const std::size_t m = normals.size();
  std::vector<Vec2> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = meet(normals[(j + m - 1) % m], c[(j + m - 1) % m], normals[j], c[j]);
  std::vector<double> len(m);
  for (std::size_t j = 0; j < m; ++j) len[j] = crystal::dot(w[(j + 1) % m] - w[j], crystal::perp(normals[j]));
  return len;
}

// Axis box Wulff shape [-left, right] x [-down, up]: sigma(p) = right p_x^+ + left p_x^-
// + up p_y^+ + down p_y^-.
struct BoxWulff {
  double left = 1.0, right = 1.0, down = 1.0, up = 1.0;
};

// Minimiser of sum_i (v_i - psi_i)^2 / (2a) + sum over lattice edges of sigma(difference / h)
// for a box Wulff shape, by enumerating every ordered partition of the nodes into level
// sets. For each ordering the energy is linear, so each free block sits at
// (sum psi - a g) / |B|; the best candidate consistent with its ordering wins.
// Supports the three boundary modes on grids of at most a handful of nodes.
class BruteResolvent {
 public:
  BruteResolvent(const crystal::GridField& psi, BoxWulff box, double a) : psi_(psi), box_(box), a_(a) {
    const std::size_t w = psi.width(), hgt = psi.height();
    n_ = w * hgt;
    const bool pad = psi.boundary() == crystal::BoundaryMode::Pad;
    const bool periodic = psi.boundary() == crystal::BoundaryMode::Periodic;
    ghost_ = pad && (w > 1 || hgt > 1);
    const std::size_t g = n_;
    auto id = [&](std::size_t i, std::size_t j) { return j * w + i; };
    const double s = 1.0 / psi.spacing();
    // Edge src -> dst with weights for dst above / below src.
    auto edge = [&](std::size_t src, std::size_t dst, double rise, double fall) {
      if (src != dst) edges_.push_back({src, dst, rise * s, fall * s});
    };
    for (std::size_t j = 0; j < hgt; ++j) {
      for (std::size_t i = 0; i < w; ++i) {
        if (w > 1) {
          if (i + 1 < w) edge(id(i, j), id(i + 1, j), box.right, box.left);
          else if (periodic) edge(id(i, j), id(0, j), box.right, box.left);
          else if (pad) edge(id(i, j), g, box.right, box.left);
          if (i == 0 && pad) edge(g, id(i, j), box.right, box.left);
        }
        if (hgt > 1) {
          if (j + 1 < hgt) edge(id(i, j), id(i, j + 1), box.up, box.down);
          else if (periodic) edge(id(i, j), id(i, 0), box.up, box.down);
          else if (pad) edge(id(i, j), g, box.up, box.down);
          if (j == 0 && pad) edge(g, id(i, j), box.up, box.down);
        }
      }
    }
  }

  std::vector<double> solve() {
    const std::size_t total = n_ + (ghost_ ? 1 : 0);
    rank_.assign(total, 0);
    best_ = std::numeric_limits<double>::infinity();
    enumerate(0, total);
    return best_v_;
  }

  double objective(const std::vector<double>& v) const {
    double q = 0.0;
    for (std::size_t k = 0; k < n_; ++k) q += (v[k] - psi_[k]) * (v[k] - psi_[k]);
    q /= 2.0 * a_;
    for (const Edge& e : edges_) {
      const double d = value(v, e.dst) - value(v, e.src);
      q += d > 0 ? e.rise * d : -e.fall * d;
    }
    return q;
  }

 private:
  struct Edge {
    std::size_t src, dst;
    double rise, fall;
  };

  double value(const std::vector<double>& v, std::size_t k) const { return k < n_ ? v[k] : psi_.pad_value(); }

  // Assigns ranks so that the used ranks form 0..blocks-1 (surjective onto a prefix).
  void enumerate(std::size_t k, std::size_t total) {
    if (k == total) {
      const std::size_t blocks = *std::max_element(rank_.begin(), rank_.end()) + 1;
      std::vector<bool> used(blocks, false);
      for (std::size_t r : rank_) used[r] = true;
      if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) evaluate(blocks);
      return;
    }
    for (std::size_t r = 0; r < total; ++r) {
      rank_[k] = r;
      enumerate(k + 1, total);
    }
  }

  void evaluate(std::size_t blocks) {
    std::vector<double> sum(blocks, 0.0), grad(blocks, 0.0);
    std::vector<std::size_t> count(blocks, 0);
    for (std::size_t k = 0; k < n_; ++k) {
      sum[rank_[k]] += psi_[k];
      ++count[rank_[k]];
    }
    for (const Edge& e : edges_) {
      const std::size_t rs = rank_[e.src], rd = rank_[e.dst];
      if (rs == rd) continue;
      // d/dc of rise*(c_dst - c_src) when dst is above, fall*(c_src - c_dst) otherwise.
      if (rd > rs) {
        grad[rd] += e.rise;
        grad[rs] -= e.rise;
      } else {
        grad[rd] -= e.fall;
        grad[rs] += e.fall;
      }
    }
    std::vector<double> c(blocks);
    const std::optional<std::size_t> fixed = ghost_ ? std::optional<std::size_t>(rank_[n_]) : std::nullopt;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (fixed && b == *fixed) c[b] = psi_.pad_value();
      else if (count[b] == 0) return;  // a free block needs a node
      else c[b] = (sum[b] - a_ * grad[b]) / static_cast<double>(count[b]);
    }
    for (std::size_t b = 1; b < blocks; ++b)
      if (c[b] < c[b - 1] - 1e-12) return;
    std::vector<double> v(n_);
    for (std::size_t k = 0; k < n_; ++k) v[k] = c[rank_[k]];
    const double f = objective(v);
    if (f < best_) {
      best_ = f;
      best_v_ = v;
    }
  }

  const crystal::GridField& psi_;
  BoxWulff box_;
  double a_;
  std::size_t n_ = 0;
  bool ghost_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> rank_;
  double best_ = 0.0;
  std::vector<double> best_v_;
};

inline double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  double m = xs[mid];
  if (xs.size() % 2 == 0) m = 0.5 * (m + *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

// Euclidean distance from p to the closed rectangle [lo, hi].
inline double rect_distance(Vec2 p, Vec2 lo, Vec2 hi) {
  const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  return std::hypot(dx, dy);
}

}  // namespace oracle
