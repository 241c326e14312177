#include <doctest.h>

#include <cmath>
#include <random>

#include "crystal/chambolle.hpp"
#include "support.hpp"

using namespace crystal;

namespace {

Ring box(Vec2 lo, Vec2 hi) { return {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}}; }

ChambolleParams params_over(double half, double spacing) {
  ChambolleParams p;
  p.grid = grid_over({-half, -half}, {half, half}, static_cast<std::size_t>(std::lround(2 * half / spacing)) + 1);
  return p;
}

// Nodes inside `outer` grown by `slack` must cover every node inside `inner`.
bool covered(const EvolvingSet& inner, const EvolvingSet& outer, const GridField& g, double slack) {
  const Mobility euclid = Mobility::euclidean();
  const GridField d = signed_distance(outer, euclid, g);
  for (std::size_t j = 0; j < g.height(); ++j)
    for (std::size_t i = 0; i < g.width(); ++i)
      if (inner.contains(g.node(i, j)) && d.at(i, j) > slack) return false;
  return true;
}

}  // namespace

TEST_CASE("mobility polars") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  for (Vec2 x : {Vec2{0.3, -0.7}, Vec2{2, 1}, Vec2{-1, 0}}) CHECK(m.polar(x) == doctest::Approx(l1.sigma_polar(x)));
  CHECK(Mobility::euclidean().polar({3, 4}) == doctest::Approx(5.0));
  CHECK(Mobility::euclidean().is_euclidean());
}

TEST_CASE("signed distance to a square") {
  const auto sq = EvolvingSet::polygons({box({-1, -1}, {1, 1})});
  const GridField g = grid_over({-2, -2}, {2, 2}, 41);
  const GridField de = signed_distance(sq, Mobility::euclidean(), g);
  CHECK(de.at(40, 20) == doctest::Approx(1.0));
  CHECK(de.at(20, 20) == doctest::Approx(-1.0));

  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  const GridField dm = signed_distance(sq, m, g);
  for (std::size_t j = 0; j < g.height(); ++j)
    for (std::size_t i = 0; i < g.width(); ++i)
      CHECK(dm.at(i, j) == doctest::Approx(l1.sigma_polar(g.node(i, j)) - 1.0).epsilon(1e-12));

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> idx(0, 40);
  for (int k = 0; k < 500; ++k) {
    const std::size_t i1 = idx(rng), j1 = idx(rng), i2 = idx(rng), j2 = idx(rng);
    CHECK(dm.at(i1, j1) - dm.at(i2, j2) <= m.polar(g.node(i1, j1) - g.node(i2, j2)) + 1e-12);
  }
}

TEST_CASE("grid sets measure like their polygons") {
  const auto sq = EvolvingSet::polygons({box({-0.6, -0.4}, {0.5, 0.7})});
  const GridField g = grid_over({-1, -1}, {1, 1}, 81);
  const auto level = EvolvingSet::level_set(signed_distance(sq, Mobility::euclidean(), g));
  CHECK(level.area() == doctest::Approx(sq.area()).epsilon(1e-3));
  CHECK(level.perimeter() == doctest::Approx(sq.perimeter()).epsilon(2e-2));
  CHECK(error_of([&] { signed_distance(EvolvingSet::polygons({}), Mobility::euclidean(), g); }) == ErrorCode::EmptySet);
}

TEST_CASE("one step shrinks the Wulff square like the exact flow") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  const auto sq = EvolvingSet::polygons({box({-1, -1}, {1, 1})});
  const double h = 0.01;
  const EvolvingSet next = chambolle_step(sq, h, l1, m, params_over(1.6, 1.0 / 128));
  CHECK(next.area() == doctest::Approx(4.0 * (1.0 - 2.0 * h)).epsilon(5e-3));
}

TEST_CASE("large flat sets barely move") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const auto big = EvolvingSet::polygons({box({-3, -3}, {3, 3})});
  const EvolvingSet next = chambolle_step(big, 1e-4, l1, Mobility::of(l1), params_over(5.0, 1.0 / 16));
  const auto [lo, hi] = next.bounds();
  CHECK(std::abs(lo.x + 3) <= 1.0 / 16);
  CHECK(std::abs(hi.y - 3) <= 1.0 / 16);
}

TEST_CASE("steps preserve nesting up to a cell") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.3, 0.9), s(-0.2, 0.2);
  const ChambolleParams p = params_over(1.5, 1.0 / 32);
  for (int k = 0; k < 8; ++k) {
    const Vec2 lo{-u(rng), -u(rng)}, hi{u(rng), u(rng)};
    const Vec2 c{s(rng) * (hi.x - lo.x) * 0.2, s(rng) * (hi.y - lo.y) * 0.2};
    const auto outer = EvolvingSet::polygons({box(lo, hi)});
    const auto inner = EvolvingSet::polygons({box(c + 0.5 * lo, c + 0.5 * hi)});
    const EvolvingSet a = chambolle_step(outer, 0.01, l1, m, p), b = chambolle_step(inner, 0.01, l1, m, p);
    CHECK(covered(b, a, p.grid, 1.0 / 32));
  }
}

TEST_CASE("grid-aligned translation commutes with a step") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  const ChambolleParams p = params_over(1.5, 1.0 / 32);
  const Vec2 shift{4.0 / 32, -2.0 / 32};
  const auto e = EvolvingSet::polygons({box({-0.5, -0.3}, {0.4, 0.6})});
  const auto f = EvolvingSet::polygons({box(Vec2{-0.5, -0.3} + shift, Vec2{0.4, 0.6} + shift)});
  const EvolvingSet a = chambolle_step(e, 0.01, l1, m, p), b = chambolle_step(f, 0.01, l1, m, p);
  CHECK(a.area() == doctest::Approx(b.area()).epsilon(1e-6));
  const auto [alo, ahi] = a.bounds();
  const auto [blo, bhi] = b.bounds();
  CHECK(norm(alo + shift - blo) <= 1e-6);
  CHECK(norm(ahi + shift - bhi) <= 1e-6);
}

TEST_CASE("step errors") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Mobility m = Mobility::of(l1);
  const auto tiny = EvolvingSet::polygons({box({-0.05, -0.05}, {0.05, 0.05})});
  CHECK(error_of([&] { chambolle_step(tiny, 0.1, l1, m, params_over(1.0, 1.0 / 32)); }) == ErrorCode::Vanished);
  const auto wide = EvolvingSet::polygons({box({-1, -1}, {1, 1})});
  CHECK(error_of([&] { chambolle_step(wide, 0.01, l1, m, params_over(1.05, 1.0 / 32)); }).has_value());
}

TEST_CASE("evolution reports extinction near the exact time") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const auto sq = EvolvingSet::polygons({box({-0.5, -0.5}, {0.5, 0.5})});
  const ChambolleTrajectory tr = chambolle_evolve(sq, 0.01, 1.0, l1, Mobility::of(l1), params_over(1.0, 1.0 / 64));
  CHECK(tr.status == ChambolleStatus::Vanished);
  REQUIRE(tr.extinction_time);
  CHECK(std::abs(*tr.extinction_time - 0.125) <= 0.03);
  for (std::size_t k = 1; k < tr.records.size(); ++k) CHECK(tr.records[k].area < tr.records[k - 1].area);
}

TEST_CASE("fattening demo runs") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  ChambolleParams p;
  p.grid = grid_over({-1.6, -1.6}, {1.6, 1.6}, 65);
  const FatteningReport rep = fattening_demo(l1, Mobility::of(l1), 0.02, 0.06, p, 0.1);
  REQUIRE(rep.times.size() == rep.outer_area.size());
  REQUIRE(rep.times.size() == rep.inner_area.size());
  for (std::size_t k = 0; k < rep.times.size(); ++k) CHECK(rep.outer_area[k] >= rep.inner_area[k] - 1e-9);
  CHECK(rep.max_difference > 0.0);
}
