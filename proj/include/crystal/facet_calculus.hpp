#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crystal/anisotropy.hpp"
#include "crystal/geometry.hpp"

namespace crystal {

// A closed ring whose segment i (points[i] -> points[i+1]) carries labels[i]:
// +1 where the profile rises when leaving the facet, -1 where it falls.
struct LabeledRing {
  Ring points;
  std::vector<int> labels;
};

// Polygonal facet with holes. After `make`, the outer ring is counterclockwise and
// holes are clockwise, so the facet lies to the left of every segment.
class FacetSpec {
 public:
  static FacetSpec make(LabeledRing outer, std::vector<LabeledRing> holes = {});
  // Every segment labelled `label`.
  static FacetSpec uniform(Ring outer, std::vector<Ring> holes = {}, int label = +1);

  const LabeledRing& outer() const { return outer_; }
  const std::vector<LabeledRing>& holes() const { return holes_; }
  double area() const;

  // Calls fn(a, b, label) for every boundary segment.
  template <class Fn>
  void for_each_segment(Fn&& fn) const {
    visit(outer_, fn);
    for (const LabeledRing& h : holes_) visit(h, fn);
  }

 private:
  template <class Fn>
  static void visit(const LabeledRing& ring, Fn& fn) {
    const std::size_t n = ring.points.size();
    for (std::size_t i = 0; i < n; ++i) fn(ring.points[i], ring.points[(i + 1) % n], ring.labels[i]);
  }

  LabeledRing outer_;
  std::vector<LabeledRing> holes_;
};

// sum over + segments of sigma(nu) |S|  minus  sum over - segments of sigma(-nu) |S|,
// nu the outer normal of the facet.
double signed_perimeter(const FacetSpec& f, const Anisotropy& an);
double cheeger_ratio(const FacetSpec& f, const Anisotropy& an);

// Region containment of `inner` in `outer` (holes respected).
bool contains(const FacetSpec& outer, const FacetSpec& inner);

// Builds a candidate subset of `f`: segments lying on the boundary of `f` inherit its
// label, interior cuts get +1.
FacetSpec inherit_labels(const FacetSpec& f, Ring outer, std::vector<Ring> holes = {});

enum class CalibrabilityVerdict { Violated, ConsistentOnCandidates };

struct CalibrabilityReport {
  CalibrabilityVerdict verdict = CalibrabilityVerdict::ConsistentOnCandidates;
  double facet_ratio = 0.0;
  // Candidate with the smallest ratio, if any were given.
  std::optional<std::size_t> worst_candidate;
  double worst_ratio = 0.0;
};

// Witness-based check of SP(F)/|F| >= SP(U)/|U| over the given subsets F of U = f.
// A Violated verdict is a proof of non-calibrability; the other verdict is not a
// proof of calibrability.
CalibrabilityReport calibrability_verdict(const FacetSpec& f, const Anisotropy& an,
                                          const std::vector<FacetSpec>& candidates);

// Axis-aligned sub-rectangles on a lattice over the bounding box plus Wulff-shaped
// insets, all contained in f and labelled through inherit_labels.
std::vector<FacetSpec> heuristic_candidates(const FacetSpec& f, const Anisotropy& an, int lattice = 8);

enum class FacetFamily { WulffFacet, FacetWithHole, ConvexConcave };

struct FacetShape {
  FacetFamily family = FacetFamily::WulffFacet;
  double r = 0.0;
  double big_r = 0.0;  // outer radius R, unused for WulffFacet
};

// Closed-form value of the facet curvature in dimension n:
//   WulffFacet     n / r
//   FacetWithHole  n (R^{n-1} + r^{n-1}) / (R^n - r^n)
//   ConvexConcave  n (R^{n-1} - r^{n-1}) / (R^n - r^n)
// R^n - r^n is factored through R - r to avoid cancellation.
double lambda_closed_form(const FacetShape& shape, int n);

// The planar facet realising a closed-form family for the given Wulff shape.
FacetSpec facet_of(const FacetShape& shape, const Anisotropy& an);

// The facet U = A u B of the breaking example and its pieces.
FacetSpec breaking_example_union();
FacetSpec breaking_example_a();
FacetSpec breaking_example_b();

}  // namespace crystal
