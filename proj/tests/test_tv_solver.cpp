#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "crystal/facet_calculus.hpp"
#include "crystal/tv_solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crystal;

namespace {

ResolventParams tight(double a, ResolventMethod m = ResolventMethod::PrimalDual) {
  ResolventParams p;
  p.a = a;
  p.tolerance = 1e-14;
  p.max_iters = 200000;
  p.method = m;
  return p;
}

// Brute-force 1-D chain minimiser through the grid oracle: a chain is an n x 1 grid with
// unit spacing, and ghosts become pad values.
std::vector<double> chain_oracle(const std::vector<double>& y, double up, double down, std::optional<double> ghost) {
  GridField g(y.size(), 1, 1.0, {}, ghost ? BoundaryMode::Pad : BoundaryMode::Neumann, ghost.value_or(0.0));
  g.values() = y;
  return oracle::BruteResolvent(g, {down, up, 1.0, 1.0}, 1.0).solve();
}

}  // namespace

TEST_CASE("discrete energy") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  GridField c(8, 6, 0.5, {}, BoundaryMode::Pad, 3.0);
  c.values().assign(c.size(), 3.0);
  CHECK(discrete_energy(c, l1) == 0.0);

  // v = x with Neumann ends: every x-difference is one spacing.
  GridField ramp = GridField(11, 6, 0.1).sampled([](Vec2 x) { return x.x; });
  CHECK(discrete_energy(ramp, l1) == doctest::Approx(10 * 6 * 0.1 * 0.1));

  // Indicator of [0.3, 0.7]^2 on the unit square: Euclidean perimeter 1.6 up to a cell.
  const double h = 1.0 / 64;
  GridField ind = GridField(65, 65, h).sampled([](Vec2 x) {
    return x.x >= 0.3 && x.x <= 0.7 && x.y >= 0.3 && x.y <= 0.7 ? 1.0 : 0.0;
  });
  CHECK(std::abs(discrete_energy(ind, l1) - 1.6) <= 4 * h);
}

TEST_CASE("Wulff projection") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  const Vec2 p = project_wulff({2, 0.5}, l1);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(0.5));
  CHECK(project_wulff({0.2, -0.3}, l1) == Vec2{0.2, -0.3});
  const Anisotropy hex = Anisotropy::builtin("hexagon");
  const Vec2 v = hex.wulff_vertices()[0];
  const Vec2 q = project_wulff(100.0 * v, hex);
  CHECK(norm(q - v) <= 1e-12);
}

TEST_CASE("constants are fixed points") {
  for (const char* name : {"l1", "hexagon"}) {
    const Anisotropy an = Anisotropy::builtin(name);
    for (BoundaryMode mode : {BoundaryMode::Periodic, BoundaryMode::Neumann, BoundaryMode::Pad}) {
      GridField psi(6, 5, 0.2, {}, mode, 0.75);
      psi.values().assign(psi.size(), 0.75);
      for (double a : {0.01, 1.0}) {
        const ResolventResult r = resolvent_solve(psi, an, tight(a));
        for (std::size_t k = 0; k < psi.size(); ++k) CHECK(r.v[k] == doctest::Approx(0.75).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("five-node instance matches the oracle") {
  const Anisotropy l1 = Anisotropy::builtin("l1");
  GridField psi(5, 1, 1.0);
  psi.values() = {0, 1, 0, 1, 0};
  const std::vector<double> ref = oracle::BruteResolvent(psi, {}, 0.1).solve();
  for (ResolventMethod m : {ResolventMethod::PrimalDual, ResolventMethod::Splitting}) {
    const ResolventResult r = resolvent_solve(psi, l1, tight(0.1, m));
    CHECK(r.converged);
    for (std::size_t k = 0; k < 5; ++k) CHECK(r.v[k] == doctest::Approx(ref[k]).epsilon(1e-9));
  }
}

TEST_CASE("chain solver matches brute force") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> val(-2, 2);
  std::uniform_real_distribution<double> w(0.2, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::vector<double> y(n);
    for (double& x : y) x = val(rng);
    const double up = w(rng), down = w(rng);
    // A single node has no differences on the grid side, so ghosts need n > 1 there.
    const std::optional<double> ghost = trial % 2 && n > 1 ? std::optional<double>(val(rng)) : std::nullopt;
    std::vector<double> dual;
    const std::vector<double> v = tv_denoise_chain(y, up, down, ghost, ghost, &dual);
    const std::vector<double> ref = chain_oracle(y, up, down, ghost);
    for (std::size_t k = 0; k < n; ++k) CHECK(v[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    // Dual: v_k = y_k - u_{k-1} + u_k with every u in [-down, up].
    REQUIRE(dual.size() == n - 1 + (ghost ? 2 : 0));
    for (double u : dual) CHECK((u >= -down - 1e-12 && u <= up + 1e-12));
    const std::size_t off = ghost ? 1 : 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double left = k + off >= 1 ? dual[k + off - 1] : 0.0;
      const double right = k + off < dual.size() ? dual[k + off] : 0.0;
      CHECK(v[k] == doctest::Approx(y[k] - left + right).epsilon(1e-12));
    }
  }
  CHECK(error_of([] { tv_denoise_chain(std::vector<double>{}, 1, 1); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([] { tv_denoise_chain(std::vector<double>{1.0}, -1, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("dual feasibility and objective descent") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const char* name : {"hexagon", "l1"}) {
    const Anisotropy an = Anisotropy::builtin(name);
    GridField psi(12, 10, 0.1, {}, BoundaryMode::Pad, 0.0);
    for (double& x : psi.values()) x = u(rng);
    ResolventParams p = tight(0.05);
    p.method = ResolventMethod::Auto;
    const ResolventResult r = resolvent_solve(psi, an, p);
    for (std::size_t k = 0; k < r.z.x.size(); ++k) CHECK(an.sigma_polar({r.z.x[k], r.z.y[k]}) <= 1.0 + 1e-12);
    for (std::size_t k = 1; k < r.objective.size(); ++k) CHECK(r.objective[k] <= r.objective[k - 1]);
    CHECK(r.objective.back() == doctest::Approx(resolvent_objective(r.v, psi, an, 0.05)).epsilon(1e-12));
  }
}

TEST_CASE("methods agree") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const Anisotropy box = Anisotropy::crystalline({{1.5, -0.5}, {1.5, 2}, {-1, 2}, {-1, -0.5}});
  for (BoundaryMode mode : {BoundaryMode::Neumann, BoundaryMode::Pad}) {
    GridField psi(9, 7, 0.25, {}, mode, 0.3);
    for (double& x : psi.values()) x = u(rng);
    const ResolventResult a = resolvent_solve(psi, box, tight(0.3, ResolventMethod::PrimalDual));
    const ResolventResult b = resolvent_solve(psi, box, tight(0.3, ResolventMethod::Splitting));
    for (std::size_t k = 0; k < psi.size(); ++k) CHECK(a.v[k] == doctest::Approx(b.v[k]).epsilon(1e-6));
  }
}

TEST_CASE("unconverged solves are flagged, not thrown") {
  const Anisotropy an = Anisotropy::builtin("hexagon");
  GridField psi = GridField(32, 32, 1.0 / 31).sampled([](Vec2 x) { return std::sin(9 * x.x) * x.y; });
  ResolventParams p;
  p.a = 0.1;
  p.max_iters = 5;
  const ResolventResult r = resolvent_solve(psi, an, p);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 5);
}

TEST_CASE("parameter validation") {
  const Anisotropy an = Anisotropy::builtin("l1");
  GridField psi(4, 4, 1.0);
  ResolventParams p;
  CHECK(error_of([&] { resolvent_solve(psi, an, p); }) == ErrorCode::InvalidArgument);
  p.a = 1.0;
  p.tau = 1.0;
  p.sigma = 1.0;
  CHECK(error_of([&] { resolvent_solve(psi, an, p); }) == ErrorCode::InvalidArgument);
  psi[3] = NAN;
  p.tau = p.sigma = 0.0;
  CHECK(error_of([&] { resolvent_solve(psi, an, p); }) == ErrorCode::InvalidArgument);
  const Anisotropy hex = Anisotropy::builtin("hexagon");
  psi[3] = 0.0;
  p.method = ResolventMethod::Splitting;
  CHECK(error_of([&] { resolvent_solve(psi, hex, p); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("minimal section of a flat field is zero") {
  const Anisotropy an = Anisotropy::builtin("hexagon");
  GridField psi(16, 16, 0.1, {}, BoundaryMode::Pad, 0.0);
  const GridField lam = estimate_min_section(psi, an, 0.2);
  for (double x : lam.values()) CHECK(std::abs(x) <= 1e-9);
}

TEST_CASE("facet speed estimates improve under refinement") {
  // Each closed-form family on three grids with a = 2 spacings. The thin annulus
  // needs finer grids before the estimate leaves its coarse-grid plateau.
  const Anisotropy an = Anisotropy::builtin("l1");
  auto gauge = [](Vec2 x) { return std::max(std::abs(x.x), std::abs(x.y)); };
  const FacetShape shapes[] = {
      {FacetFamily::WulffFacet, 0.25, 0.0},
      {FacetFamily::FacetWithHole, 0.1, 0.3},
      {FacetFamily::ConvexConcave, 0.15, 0.3},
  };
  for (const FacetShape& s : shapes) {
    const double exact = lambda_closed_form(s, 2);
    double previous = INFINITY;
    const bool thin = s.family == FacetFamily::ConvexConcave;
    for (std::size_t n : thin ? std::vector<std::size_t>{129, 257, 513} : std::vector<std::size_t>{33, 65, 129}) {
      const double half = s.family == FacetFamily::WulffFacet ? 0.5 : 0.45;
      GridField psi(n, n, 2 * half / static_cast<double>(n - 1), {-half, -half}, BoundaryMode::Pad, 0.0);
      psi = psi.sampled([&](Vec2 x) {
        const double g = gauge(x);
        if (s.family == FacetFamily::WulffFacet) return std::max(g - s.r, 0.0);
        const double inner = std::max(s.r - g, 0.0);
        return std::max(g - s.big_r, 0.0) + (s.family == FacetFamily::FacetWithHole ? inner : -inner);
      });
      psi.set_boundary(BoundaryMode::Pad, psi.at(0, 0));
      ResolventParams p;
      p.method = ResolventMethod::Auto;
      const GridField lam = estimate_min_section(psi, an, 2 * psi.spacing(), p);
      std::vector<double> on_facet;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          const double g = gauge(psi.node(i, j));
          const bool inside = s.family == FacetFamily::WulffFacet
                                  ? g <= 0.5 * s.r
                                  : g >= s.r + 0.25 * (s.big_r - s.r) && g <= s.big_r - 0.25 * (s.big_r - s.r);
          if (inside) on_facet.push_back(lam.at(i, j));
        }
      const double err = std::abs(oracle::median(on_facet) - exact);
      CHECK(err < previous);
      previous = err;
    }
  }
}
