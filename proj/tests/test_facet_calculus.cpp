#include <doctest.h>

#include <cmath>

#include "crystal/anisotropy.hpp"
#include "crystal/facet_calculus.hpp"
#include "support.hpp"

using namespace crystal;

namespace {

Ring scaled(Ring r, double s) {
  for (Vec2& p : r) p = s * p;
  return r;
}

Ring square(double half) { return {{-half, -half}, {half, -half}, {half, half}, {-half, half}}; }

}  // namespace

TEST_CASE("signed perimeters of the breaking example") {
  const Anisotropy an = Anisotropy::builtin("l1");
  CHECK(signed_perimeter(breaking_example_union(), an) == 8.0);
  CHECK(signed_perimeter(breaking_example_a(), an) == 6.0);
  // Annulus 2W \ W, outer +, inner -.
  const FacetSpec annulus = FacetSpec::make({square(2), {1, 1, 1, 1}}, {{square(1), {-1, -1, -1, -1}}});
  CHECK(signed_perimeter(annulus, an) == 8.0);
}

TEST_CASE("Cheeger ratios") {
  const Anisotropy an = Anisotropy::builtin("l1");
  CHECK(cheeger_ratio(breaking_example_union(), an) == 16.0 / 5.0);
  CHECK(cheeger_ratio(breaking_example_a(), an) == 3.0);
  for (double r : {0.25, 0.5, 3.0}) CHECK(cheeger_ratio(FacetSpec::uniform(square(r)), an) == doctest::Approx(2.0 / r));
}

TEST_CASE("calibrability verdicts") {
  const Anisotropy an = Anisotropy::builtin("l1");
  const FacetSpec u = breaking_example_union();
  const CalibrabilityReport broken = calibrability_verdict(u, an, {breaking_example_a()});
  CHECK(broken.verdict == CalibrabilityVerdict::Violated);
  CHECK(broken.worst_ratio == 3.0);
  CHECK(broken.facet_ratio == 3.2);

  const FacetSpec w = FacetSpec::uniform(square(1));
  const FacetSpec half = inherit_labels(w, square(0.5));
  CHECK(cheeger_ratio(half, an) == doctest::Approx(4.0));
  CHECK(calibrability_verdict(w, an, {half}).verdict == CalibrabilityVerdict::ConsistentOnCandidates);
  CHECK(calibrability_verdict(u, an, {u}).verdict == CalibrabilityVerdict::ConsistentOnCandidates);
}

TEST_CASE("heuristic candidates find the breaking witness") {
  const Anisotropy an = Anisotropy::builtin("l1");
  const FacetSpec u = breaking_example_union();
  const auto cands = heuristic_candidates(u, an, 4);
  REQUIRE_FALSE(cands.empty());
  for (const FacetSpec& c : cands) CHECK(contains(u, c));
  CHECK(calibrability_verdict(u, an, cands).verdict == CalibrabilityVerdict::Violated);
}

TEST_CASE("closed-form facet curvatures") {
  CHECK(lambda_closed_form({FacetFamily::WulffFacet, 0.25, 0.0}, 2) == 8.0);
  CHECK(lambda_closed_form({FacetFamily::FacetWithHole, 0.1, 0.3}, 2) == 10.0);
  CHECK(lambda_closed_form({FacetFamily::ConvexConcave, 1.0, 2.0}, 2) == 2.0 / 3.0);
  CHECK(lambda_closed_form({FacetFamily::WulffFacet, 0.5, 0.0}, 3) == 6.0);
  CHECK(error_of([] { lambda_closed_form({FacetFamily::FacetWithHole, 0.3, 0.1}, 2); }) == ErrorCode::BadRadii);
  CHECK(error_of([] { lambda_closed_form({FacetFamily::WulffFacet, -1.0, 0.0}, 2); }) == ErrorCode::BadRadii);
}

TEST_CASE("closed forms agree with the Cheeger ratio of the realised facet") {
  for (const char* name : {"l1", "hexagon", "linf"}) {
    const Anisotropy an = Anisotropy::builtin(name);
    const FacetShape shapes[] = {
        {FacetFamily::WulffFacet, 0.25, 0.0},
        {FacetFamily::FacetWithHole, 0.1, 0.3},
        {FacetFamily::ConvexConcave, 1.0, 2.0},
    };
    for (const FacetShape& s : shapes) {
      const double exact = lambda_closed_form(s, 2);
      CHECK(std::abs(cheeger_ratio(facet_of(s, an), an) - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("ratios scale inversely") {
  const Anisotropy an = Anisotropy::builtin("hexagon");
  const FacetSpec u = breaking_example_union();
  for (double s : {0.5, 3.0}) {
    const FacetSpec big = FacetSpec::make({scaled(u.outer().points, s), u.outer().labels});
    CHECK(cheeger_ratio(big, an) == doctest::Approx(cheeger_ratio(u, an) / s).epsilon(1e-13));
  }
}

TEST_CASE("l1 signed perimeter of rectilinear all-plus facets is the Euclidean perimeter") {
  const Anisotropy an = Anisotropy::builtin("l1");
  const Ring l{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {0, 2}};
  CHECK(signed_perimeter(FacetSpec::uniform(l), an) == doctest::Approx(perimeter(l)));
}

TEST_CASE("orientation is normalised and labels follow their segments") {
  Ring cw = square(1);
  std::reverse(cw.begin(), cw.end());
  const FacetSpec f = FacetSpec::make({cw, {1, -1, 1, 1}});
  CHECK(signed_area(f.outer().points) > 0);
  CHECK(f.area() == doctest::Approx(4.0));
  int minus = 0;
  f.for_each_segment([&](Vec2, Vec2, int label) { minus += label < 0; });
  CHECK(minus == 1);
}

TEST_CASE("a hole is not a subset of its facet") {
  const Anisotropy an = Anisotropy::builtin("l1");
  const FacetSpec annulus = FacetSpec::make({square(2), {1, 1, 1, 1}}, {{square(1), {-1, -1, -1, -1}}});
  CHECK_FALSE(contains(annulus, FacetSpec::uniform(square(1))));
  CHECK_FALSE(contains(annulus, FacetSpec::uniform(square(1.5))));
  const Ring strip{{-1, -2}, {1, -2}, {1, -1}, {-1, -1}};
  CHECK(contains(annulus, FacetSpec::uniform(strip)));
  // Every lattice rectangle of the convex-concave annulus has ratio at least the facet's.
  const auto cands = heuristic_candidates(annulus, an, 8);
  REQUIRE_FALSE(cands.empty());
  CHECK(calibrability_verdict(annulus, an, cands).verdict == CalibrabilityVerdict::ConsistentOnCandidates);
}

TEST_CASE("facet errors") {
  const Anisotropy an = Anisotropy::builtin("l1");
  CHECK(error_of([] { FacetSpec::make({square(1), {1, 1, 1}}); }) == ErrorCode::UnlabeledSegment);
  CHECK(error_of([] { FacetSpec::make({square(1), {1, 0, 1, 1}}); }) == ErrorCode::UnlabeledSegment);
  CHECK(error_of([] { FacetSpec::uniform(square(1), {square(1)}); }) == ErrorCode::ZeroArea);
  const FacetSpec w = FacetSpec::uniform(square(1));
  CHECK(error_of([&] { calibrability_verdict(w, an, {FacetSpec::uniform(square(2))}); }) ==
        ErrorCode::CandidateNotContained);
}
