#include <doctest.h>

#include <random>

#include "crystal/io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crystal;
using io::Json;

TEST_CASE("numbers print in shortest round-trip form") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0}) CHECK(std::stod(io::number(x)) == x);
  CHECK(io::number(0.5) == "0.5");
}

TEST_CASE("emitted polygons re-parse into equal polygons") {
  std::mt19937_64 rng(13);
  const auto l1 = shared_builtin("l1");
  for (int i = 0; i < 20; ++i) {
    const auto p = AdmissiblePolygon::from_vertices(oracle::skyline(rng, 2 + i % 5), l1);
    const Json j = io::to_json(p);
    CHECK(io::polygon_from_json(Json::parse(j.dump()), l1) == p);
  }
  const auto hex = shared_builtin("hexagon");
  const auto w = AdmissiblePolygon::from_vertices(hex->wulff_vertices(), hex);
  CHECK(io::polygon_from_json(Json::parse(io::to_json(w).dump()), hex) == w);
  const Ring cut{{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 2}};
  const auto weak = AdmissiblePolygon::from_vertices(cut, l1, true);
  CHECK(io::polygon_from_json(Json::parse(io::to_json(weak).dump()), l1) == weak);
}

TEST_CASE("anisotropy descriptors") {
  const Anisotropy hex = Anisotropy::builtin("hexagon");
  const Anisotropy back = io::anisotropy_from_json(io::to_json(hex));
  REQUIRE(back.size() == hex.size());
  for (std::size_t k = 0; k < hex.size(); ++k) CHECK(back.support(k) == doctest::Approx(hex.support(k)));
  CHECK(io::anisotropy_from_json(Json("l1")).size() == 4);
  CHECK(error_of([] { io::anisotropy_from_json(Json{{"wulff", Json::array()}, {"colour", 1}}); }).has_value());
}

TEST_CASE("facet specs round trip with labels") {
  const FacetSpec u = breaking_example_union();
  const FacetSpec back = io::facet_from_json(io::to_json(u));
  CHECK(back.outer().points == u.outer().points);
  CHECK(back.outer().labels == u.outer().labels);
  // Candidates without labels inherit them.
  const Json cand = {{"outer", Json::array({{-1, -1}, {0, -1}, {0, 1}, {-1, 1}})}};
  const FacetSpec a = io::candidate_from_json(cand, u);
  const Anisotropy l1 = Anisotropy::builtin("l1");
  CHECK(cheeger_ratio(a, l1) == 3.0);
}

TEST_CASE("unknown keys are rejected") {
  const Json j = {{"outer", Json::array()}, {"colour", "red"}};
  CHECK(error_of([&] { io::require_keys(j, {"outer", "holes", "labels"}, "facet"); }) == ErrorCode::Parse);
  CHECK_FALSE(error_of([&] { io::require_keys(j, {"outer", "colour"}, "facet"); }).has_value());
}

TEST_CASE("trajectory outputs are deterministic") {
  const auto l1 = shared_builtin("l1");
  const auto p = AdmissiblePolygon::from_vertices(Ring{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, l1);
  const Trajectory a = evolve(p, SpeedLaw::kappa(), 5.0), b = evolve(p, SpeedLaw::kappa(), 5.0);
  CHECK(io::trajectory_csv(a) == io::trajectory_csv(b));
  CHECK(io::events_json(a).dump() == io::events_json(b).dump());
  const std::string csv = io::trajectory_csv(a);
  CHECK(csv.rfind("t,area,perimeter,facets,lengths\n", 0) == 0);
}

TEST_CASE("ring lists") {
  const std::vector<Ring> rings{{{0, 0}, {1, 0}, {1, 1}}, {{2, 2}, {3, 2}, {3, 3}, {2, 3}}};
  CHECK(io::rings_from_json(io::to_json(rings)) == rings);
  CHECK(io::rings_from_json(io::to_json(rings)["rings"]) == rings);
}

TEST_CASE("svg overlay is well formed") {
  const std::string svg = io::svg_overlay({{0.0, {{{0, 0}, {1, 0}, {1, 1}}}}, {0.5, {{{0.2, 0.2}, {0.8, 0.2}, {0.8, 0.8}}}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}
