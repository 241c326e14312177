#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crystal/anisotropy.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crystal;
using std::numbers::pi;

namespace {

// Half-plane test against the Wulff edges, independent of the gauge.
bool inside_polygon(std::span<const Vec2> poly, Vec2 x) {
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (cross(poly[(k + 1) % poly.size()] - poly[k], x - poly[k]) < -1e-12) return false;
  }
  return true;
}

double max_vertex_dot(std::span<const Vec2> poly, Vec2 p) {
  double s = -INFINITY;
  for (Vec2 v : poly) s = std::max(s, dot(v, p));
  return s;
}

}  // namespace

TEST_CASE("square Wulff shape gives the l1 density") {
  const Anisotropy an = Anisotropy::crystalline({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
  REQUIRE(an.size() == 4);
  const double expected[] = {0.0, pi / 2, pi, 3 * pi / 2};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(an.angle(k) == doctest::Approx(expected[k]).epsilon(1e-15));
    CHECK(an.facet_length(k) == doctest::Approx(2.0));
  }
  CHECK(an.sigma({1, 0}) == doctest::Approx(1.0));
  CHECK(an.sigma({0, 0}) == 0.0);
  CHECK(an.sigma({3, 4}) == doctest::Approx(7.0));
  CHECK(an.sigma_polar({1, 1}) == doctest::Approx(1.0));
  CHECK(an.sigma_polar({0, 0}) == 0.0);
  CHECK(an.sigma_polar({2, 0}) == doctest::Approx(2.0));
}

TEST_CASE("regular hexagon has six equal gaps and facets") {
  const Anisotropy an = Anisotropy::builtin("hexagon");
  REQUIRE(an.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(an.gap(k) == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(an.facet_length(k) == doctest::Approx(an.facet_length(0)).epsilon(1e-12));
  }
}

TEST_CASE("doubling the Wulff shape doubles sigma and Delta") {
  const Anisotropy an = Anisotropy::crystalline({{2, 2}, {-2, 2}, {-2, -2}, {2, -2}});
  for (std::size_t k = 0; k < 4; ++k) CHECK(an.facet_length(k) == doctest::Approx(4.0));
  CHECK(an.sigma({1, 0}) == doctest::Approx(2.0));
}

TEST_CASE("invalid Wulff polygons are rejected") {
  CHECK(error_of([] { Anisotropy::crystalline({{1, 0}, {0, 1}, {0.1, 0.1}, {0, -1}}); }) == ErrorCode::NonConvex);
  CHECK(error_of([] { Anisotropy::crystalline({{1, 1}, {2, 1}, {2, 2}, {1, 2}}); }) == ErrorCode::OriginOutside);
  CHECK(error_of([] { Anisotropy::crystalline({{1, -1}, {1, 1}, {1, 1}, {-1, 1}, {-1, -1}}); }) ==
        ErrorCode::DegenerateEdge);
}

TEST_CASE("duality round trip on random points") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Anisotropy shapes[] = {
      Anisotropy::builtin("l1"), Anisotropy::builtin("hexagon"), Anisotropy::builtin("linf"),
      // Not centrally symmetric.
      Anisotropy::crystalline({{2, -0.5}, {1, 1.5}, {-0.5, 1}, {-1, -1}}),
  };
  for (const Anisotropy& an : shapes) {
    const auto poly = an.wulff_vertices();
    for (int i = 0; i < 1000; ++i) {
      const Vec2 p{u(rng), u(rng)};
      CHECK(std::abs(an.sigma(p) - max_vertex_dot(poly, p)) <= 1e-12 * (1.0 + std::abs(an.sigma(p))));
      const double g = an.sigma_polar(p);
      if (std::abs(g - 1.0) > 1e-9) CHECK((g <= 1.0) == inside_polygon(poly, p));
    }
  }
}

TEST_CASE("sigma and its polar are positively homogeneous") {
  const Anisotropy an = Anisotropy::crystalline({{2, -0.5}, {1, 1.5}, {-0.5, 1}, {-1, -1}});
  const Vec2 p{0.3, -1.7};
  for (double s : {0.1, 2.0, 37.0}) {
    CHECK(an.sigma(s * p) == doctest::Approx(s * an.sigma(p)).epsilon(1e-14));
    CHECK(an.sigma_polar(s * p) == doctest::Approx(s * an.sigma_polar(p)).epsilon(1e-14));
  }
}

TEST_CASE("Wulff facets close up") {
  for (const char* name : {"l1", "hexagon", "linf"}) {
    const Anisotropy an = Anisotropy::builtin(name);
    Vec2 sum{};
    for (std::size_t k = 0; k < an.size(); ++k) sum += an.facet_length(k) * perp(an.normal(k));
    CHECK(norm(sum) <= 1e-12);
  }
}

TEST_CASE("non-even density uses the one-sided support values") {
  const Anisotropy an = Anisotropy::crystalline({{3, -1}, {3, 1}, {-1, 1}, {-1, -1}});
  CHECK(an.sigma({1, 0}) == doctest::Approx(3.0));
  CHECK(an.sigma({-1, 0}) == doctest::Approx(1.0));
  CHECK(an.sigma_polar({3, 0}) == doctest::Approx(1.0));
  CHECK(an.sigma_polar({-1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("corner-preserving laws") {
  const Anisotropy an = Anisotropy::builtin("l1");
  const Anisotropy* pa = &an;
  CHECK(is_corner_preserving(an, SpeedLaw::linear(SpeedLaw::unit_mobility(), 0.0)).preserving);
  CHECK(is_corner_preserving(an, SpeedLaw::linear([pa](Vec2 n) { return pa->sigma(n); }, 1.0)).preserving);
  const CornerCheck eikonal = is_corner_preserving(an, SpeedLaw::linear(SpeedLaw::unit_mobility(), 1.0));
  CHECK_FALSE(eikonal.preserving);
  // Right side sqrt(2) against 1 midway between two normals: relative mismatch 1 - 1/sqrt(2).
  CHECK(eikonal.worst_violation == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-3));
}
