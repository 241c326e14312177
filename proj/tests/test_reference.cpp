#include <doctest.h>

#include <cmath>

#include "crystal/anisotropy.hpp"
#include "crystal/facet_calculus.hpp"
#include "crystal/reference_solutions.hpp"
#include "support.hpp"

using namespace crystal;

TEST_CASE("Wulff radius") {
  CHECK(wulff_radius(1, 1, 0) == 1.0);
  CHECK(wulff_radius(1, 1, 0.5) == 0.0);
  CHECK(wulff_radius(2, 1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(wulff_extinction_time(1, 1) == 0.5);
  CHECK(error_of([] { wulff_radius(1, 1, 0.6); }) == ErrorCode::PastExtinction);
}

TEST_CASE("rectangle scale") {
  CHECK(rectangle_scale(1, 1, 0) == 1.0);
  CHECK(rectangle_scale(2, 1, 1) == 0.0);
  CHECK(rectangle_scale(2, 1, 0.5) == doctest::Approx(std::sqrt(0.5)));
  CHECK(rectangle_extinction_time(2, 1) == 1.0);
  CHECK(error_of([] { rectangle_scale(2, 1, 1.5); }) == ErrorCode::PastExtinction);
}

TEST_CASE("staircase facet speed") {
  CHECK(staircase_facet_speed(0, 1) == 2.0);
  CHECK(staircase_facet_speed(0, 2) == 1.0);
  CHECK(staircase_facet_speed(0, 1e12) < 1e-11);
  CHECK(error_of([] { staircase_facet_speed(1, 1); }) == ErrorCode::EmptyFacet);
}

TEST_CASE("breaking facet values") {
  CHECK(breaking_facet_value({-0.5, 0}, 0.1) == doctest::Approx(0.7));
  CHECK(breaking_facet_value({0.5, 0.75}, 0.1) == doctest::Approx(0.6));
  CHECK(breaking_facet_value({0.5, 0.0}, 0.1) == 0.0);
  CHECK(breaking_facet_value({-0.5, 0}, 1.0) == 0.0);
  const auto sol = ExactSolution::breaking_facet();
  CHECK(sol.evaluate(0.1, {-0.5, 0}) == doctest::Approx(0.7));
}

TEST_CASE("breaking coefficients are the Cheeger ratios of the pieces") {
  const Anisotropy an = Anisotropy::builtin("l1");
  CHECK(cheeger_ratio(breaking_example_a(), an) == kBreakingSpeedA);
  CHECK(cheeger_ratio(breaking_example_b(), an) == kBreakingSpeedB);
}

TEST_CASE("squared radii decrease linearly") {
  const double dt = 1e-4;
  for (double t : {0.05, 0.2, 0.4}) {
    const double w = (std::pow(wulff_radius(1, 1, t + dt), 2) - std::pow(wulff_radius(1, 1, t - dt), 2)) / (2 * dt);
    CHECK(std::abs(w + 2.0) <= 1e-8);
    const double r = (std::pow(rectangle_scale(2, 1, t + dt), 2) - std::pow(rectangle_scale(2, 1, t - dt), 2)) / (2 * dt);
    CHECK(std::abs(r + 1.0) <= 1e-8);
  }
}

TEST_CASE("exact solution objects") {
  CHECK(ExactSolution::wulff_homothetic(1, 1).extinction_time() == 0.5);
  CHECK(ExactSolution::rectangle(2, 1).evaluate(0.5) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::isinf(ExactSolution::staircase_facet(0, 1).extinction_time()));
}
