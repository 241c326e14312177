#include "crystal/facet_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crystal/error.hpp"

namespace crystal {

namespace {

void check_labels(const LabeledRing& ring) {
  if (ring.points.size() < 3) throw Error(ErrorCode::InvalidArgument, "facet rings need at least three vertices");
  if (ring.labels.size() != ring.points.size())
    throw Error(ErrorCode::UnlabeledSegment, "expected " + std::to_string(ring.points.size()) + " labels, got " +
                                                 std::to_string(ring.labels.size()));
  for (int l : ring.labels) {
    if (l != 1 && l != -1) throw Error(ErrorCode::UnlabeledSegment, "labels must be +1 or -1");
  }
}

// Reverses traversal; segment i of the result is segment n-2-i of the input.
void reverse_ring(LabeledRing& ring) {
  const std::size_t n = ring.points.size();
  std::vector<int> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = ring.labels[(2 * n - 2 - k) % n];
  std::reverse(ring.points.begin(), ring.points.end());
  ring.labels = std::move(labels);
}

double ring_scale(const Ring& ring) {
  double s = 1.0;
  for (Vec2 p : ring) s = std::max(s, norm(p));
  return s;
}

}  // namespace

FacetSpec FacetSpec::make(LabeledRing outer, std::vector<LabeledRing> holes) {
  check_labels(outer);
  for (const LabeledRing& h : holes) check_labels(h);
  if (!is_simple(outer.points)) throw Error(ErrorCode::NotSimple, "outer ring is not simple");
  if (signed_area(outer.points) < 0.0) reverse_ring(outer);
  for (LabeledRing& h : holes) {
    if (!is_simple(h.points)) throw Error(ErrorCode::NotSimple, "hole ring is not simple");
    if (signed_area(h.points) > 0.0) reverse_ring(h);
  }
  FacetSpec f;
  f.outer_ = std::move(outer);
  f.holes_ = std::move(holes);
  if (!(f.area() > 0.0)) throw Error(ErrorCode::ZeroArea, "facet has no area");
  return f;
}

FacetSpec FacetSpec::uniform(Ring outer, std::vector<Ring> holes, int label) {
  LabeledRing o{outer, std::vector<int>(outer.size(), label)};
  std::vector<LabeledRing> hs;
  for (Ring& h : holes) hs.push_back({h, std::vector<int>(h.size(), label)});
  return make(std::move(o), std::move(hs));
}

double FacetSpec::area() const {
  double a = signed_area(outer_.points);
  for (const LabeledRing& h : holes_) a += signed_area(h.points);
  return a;
}

double signed_perimeter(const FacetSpec& f, const Anisotropy& an) {
  double sp = 0.0;
  f.for_each_segment([&](Vec2 a, Vec2 b, int label) {
    // Outer normal scaled by the segment length.
    const Vec2 nu{b.y - a.y, -(b.x - a.x)};
    sp += label > 0 ? an.sigma(nu) : -an.sigma(-nu);
  });
  return sp;
}

double cheeger_ratio(const FacetSpec& f, const Anisotropy& an) {
  const double area = f.area();
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroArea, "facet has no area");
  return signed_perimeter(f, an) / area;
}

namespace {

bool in_region(Vec2 p, const FacetSpec& f, double tol, bool strict) {
  const Location lo = locate(p, f.outer().points, tol);
  if (lo == Location::Outside || (strict && lo == Location::Boundary)) return false;
  for (const LabeledRing& h : f.holes()) {
    const Location lh = locate(p, h.points, tol);
    if (lh == Location::Inside || (strict && lh == Location::Boundary)) return false;
  }
  return true;
}

template <class Fn>
void for_each_ring(const FacetSpec& f, Fn&& fn) {
  fn(f.outer().points);
  for (const LabeledRing& h : f.holes()) fn(h.points);
}

}  // namespace

bool contains(const FacetSpec& outer, const FacetSpec& inner) {
  const double tol = 1e-12 * ring_scale(outer.outer().points);
  bool ok = true;
  // Vertices and edge midpoints of the inner boundary stay in the closed outer region.
  for_each_ring(inner, [&](const Ring& ring) {
    for (std::size_t i = 0; i < ring.size() && ok; ++i) {
      const Vec2 a = ring[i], b = ring[(i + 1) % ring.size()];
      if (!in_region(a, outer, tol, false) || !in_region(0.5 * (a + b), outer, tol, false)) ok = false;
    }
  });
  if (!ok) return false;
  // No proper crossings.
  for_each_ring(inner, [&](const Ring& ri) {
    for_each_ring(outer, [&](const Ring& ro) {
      for (std::size_t i = 0; i < ri.size() && ok; ++i) {
        for (std::size_t j = 0; j < ro.size() && ok; ++j) {
          if (segments_cross(ri[i], ri[(i + 1) % ri.size()], ro[j], ro[(j + 1) % ro.size()])) ok = false;
        }
      }
    });
  });
  if (!ok) return false;
  // Holes of the outer facet may not be swallowed by the inner region.
  for (const LabeledRing& h : outer.holes()) {
    const std::size_t n = h.points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = h.points[i], b = h.points[(i + 1) % n];
      if (in_region(a, inner, tol, true) || in_region(0.5 * (a + b), inner, tol, true)) return false;
    }
    // A region whose boundary runs along the hole can still cover it; probe just inside the hole.
    const Vec2 a = h.points[0], b = h.points[1 % n];
    const Vec2 left{-(b.y - a.y), b.x - a.x};
    const double side = signed_area(h.points) > 0.0 ? 1.0 : -1.0;
    const Vec2 probe = 0.5 * (a + b) + (side * 1e-6) * left;
    if (locate(probe, inner.outer().points, tol) == Location::Inside) {
      bool in_inner_hole = false;
      for (const LabeledRing& ih : inner.holes()) in_inner_hole |= locate(probe, ih.points, tol) != Location::Outside;
      if (!in_inner_hole) return false;
    }
  }
  return true;
}

namespace {

// Label of the boundary segment of f that contains [a, b], if any.
std::optional<int> boundary_label(const FacetSpec& f, Vec2 a, Vec2 b, double tol) {
  std::optional<int> found;
  f.for_each_segment([&](Vec2 p, Vec2 q, int label) {
    if (found) return;
    if (distance_to_segment(a, p, q) <= tol && distance_to_segment(b, p, q) <= tol) found = label;
  });
  return found;
}

}  // namespace

FacetSpec inherit_labels(const FacetSpec& f, Ring outer, std::vector<Ring> holes) {
  const double tol = 1e-12 * ring_scale(f.outer().points);
  auto label_ring = [&](Ring ring) {
    LabeledRing lr;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) lr.labels.push_back(boundary_label(f, ring[i], ring[(i + 1) % n], tol).value_or(1));
    lr.points = std::move(ring);
    return lr;
  };
  // Orientation first, so the labels follow the final traversal.
  if (signed_area(outer) < 0.0) std::reverse(outer.begin(), outer.end());
  for (Ring& h : holes) {
    if (signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
  }
  LabeledRing lo = label_ring(std::move(outer));
  std::vector<LabeledRing> lh;
  for (Ring& h : holes) lh.push_back(label_ring(std::move(h)));
  return FacetSpec::make(std::move(lo), std::move(lh));
}

CalibrabilityReport calibrability_verdict(const FacetSpec& f, const Anisotropy& an,
                                          const std::vector<FacetSpec>& candidates) {
  CalibrabilityReport report;
  report.facet_ratio = cheeger_ratio(f, an);
  const double tol = 1e-12 * ring_scale(f.outer().points);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const FacetSpec& cand = candidates[c];
    if (!contains(f, cand))
      throw Error(ErrorCode::CandidateNotContained, "candidate " + std::to_string(c) + " is not inside the facet");
    bool labels_ok = true;
    cand.for_each_segment([&](Vec2 a, Vec2 b, int label) {
      if (label < 0 && boundary_label(f, a, b, tol) != -1) labels_ok = false;
    });
    if (!labels_ok)
      throw Error(ErrorCode::LabelMismatch,
                  "candidate " + std::to_string(c) + " has a '-' segment off the '-' boundary of the facet");
    const double ratio = cheeger_ratio(cand, an);
    if (!report.worst_candidate || ratio < report.worst_ratio) {
      report.worst_candidate = c;
      report.worst_ratio = ratio;
    }
  }
  if (report.worst_candidate && report.worst_ratio < report.facet_ratio - 1e-12)
    report.verdict = CalibrabilityVerdict::Violated;
  return report;
}

std::vector<FacetSpec> heuristic_candidates(const FacetSpec& f, const Anisotropy& an, int lattice) {
  if (lattice < 1) throw Error(ErrorCode::InvalidArgument, "lattice must be positive");
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (Vec2 p : f.outer().points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const auto n = static_cast<std::size_t>(lattice);
  std::vector<double> xs(n + 1), ys(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = lo.x + (hi.x - lo.x) * static_cast<double>(i) / static_cast<double>(n);
    ys[i] = lo.y + (hi.y - lo.y) * static_cast<double>(i) / static_cast<double>(n);
  }

  std::vector<FacetSpec> out;
  auto try_add = [&](Ring ring) {
    const FacetSpec probe = FacetSpec::uniform(ring);
    if (contains(f, probe)) out.push_back(inherit_labels(f, std::move(ring)));
  };
  for (std::size_t i0 = 0; i0 < n; ++i0)
    for (std::size_t i1 = i0 + 1; i1 <= n; ++i1)
      for (std::size_t j0 = 0; j0 < n; ++j0)
        for (std::size_t j1 = j0 + 1; j1 <= n; ++j1)
          try_add({{xs[i0], ys[j0]}, {xs[i1], ys[j0]}, {xs[i1], ys[j1]}, {xs[i0], ys[j1]}});

  double radius = 0.0;
  for (Vec2 v : an.wulff_vertices()) radius = std::max(radius, norm(v));
  const double extent = std::min(hi.x - lo.x, hi.y - lo.y);
  for (int s = 1; s <= 4; ++s) {
    const double scale = extent * s / (8.0 * radius);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j) {
        Ring ring;
        for (Vec2 v : an.wulff_vertices()) ring.push_back(Vec2{xs[i], ys[j]} + scale * v);
        try_add(std::move(ring));
      }
  }
  return out;
}

double lambda_closed_form(const FacetShape& shape, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  const double r = shape.r;
  if (!(r > 0.0)) throw Error(ErrorCode::BadRadii, "r must be positive");
  if (shape.family == FacetFamily::WulffFacet) return n / r;
  const double big = shape.big_r;
  if (!(big > r)) throw Error(ErrorCode::BadRadii, "need 0 < r < R");
  // R^k - r^k = (R - r) * sum_{i<k} R^i r^{k-1-i}
  auto geometric = [&](int k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += std::pow(big, i) * std::pow(r, k - 1 - i);
    return s;
  };
  const double denom = (big - r) * geometric(n);
  if (shape.family == FacetFamily::FacetWithHole) return n * (std::pow(big, n - 1) + std::pow(r, n - 1)) / denom;
  return n * geometric(n - 1) / geometric(n);
}

FacetSpec facet_of(const FacetShape& shape, const Anisotropy& an) {
  auto scaled = [&](double s) {
    Ring ring;
    for (Vec2 v : an.wulff_vertices()) ring.push_back(s * v);
    return ring;
  };
  lambda_closed_form(shape, 2);
  switch (shape.family) {
    case FacetFamily::WulffFacet:
      return FacetSpec::uniform(scaled(shape.r));
    case FacetFamily::FacetWithHole:
      return FacetSpec::uniform(scaled(shape.big_r), {scaled(shape.r)});
    case FacetFamily::ConvexConcave: {
      Ring outer = scaled(shape.big_r);
      Ring hole = scaled(shape.r);
      LabeledRing lo{outer, std::vector<int>(outer.size(), +1)};
      LabeledRing lh{hole, std::vector<int>(hole.size(), -1)};
      return FacetSpec::make(std::move(lo), {std::move(lh)});
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown facet family");
}

FacetSpec breaking_example_union() {
  return FacetSpec::uniform({{-1, -1}, {0, -1}, {0, 0.5}, {1, 0.5}, {1, 1}, {-1, 1}});
}

FacetSpec breaking_example_a() { return FacetSpec::uniform({{-1, -1}, {0, -1}, {0, 1}, {-1, 1}}); }

FacetSpec breaking_example_b() {
  // After breaking, B sits above A, so the profile falls across the shared cut.
  return FacetSpec::make({{{0, 0.5}, {1, 0.5}, {1, 1}, {0, 1}}, {+1, +1, +1, -1}});
}

}  // namespace crystal
