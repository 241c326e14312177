// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance 3 5 11     run a subset
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crystal/anisotropy.hpp"
#include "crystal/chambolle.hpp"
#include "crystal/facet_calculus.hpp"
#include "crystal/polygon_flow.hpp"
#include "crystal/tv_solver.hpp"
#include "oracles.hpp"

using namespace crystal;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const Anisotropy> shared(const char* name) {
  return std::make_shared<const Anisotropy>(Anisotropy::builtin(name));
}

// Nodes of `g` satisfying `inside`.
std::vector<double> values_where(const GridField& g, auto&& inside) {
  std::vector<double> out;
  for (std::size_t j = 0; j < g.height(); ++j)
    for (std::size_t i = 0; i < g.width(); ++i)
      if (inside(g.node(i, j))) out.push_back(g.at(i, j));
  return out;
}

ResolventParams splitting_params() {
  ResolventParams p;
  p.method = ResolventMethod::Auto;
  return p;
}

// ---------------------------------------------------------------- 1, 2: polygon flow

Outcome wulff_extinction() {
  const auto an = shared("l1");
  const auto t0 = Clock::now();
  const auto square = AdmissiblePolygon::from_vertices(an->wulff_vertices(), an);
  const Trajectory tr = evolve(square, SpeedLaw::sigma_kappa(*an), 1.0);
  const double dt = seconds_since(t0);
  const double t_star = 0.5;  // R0^2 / (2 (n - 1)), R0 = 1, n = 2
  if (!tr.extinction_time) return {false, "no extinction"};
  const double err = std::abs(*tr.extinction_time - t_star);
  return {err <= 1e-6 && dt < 1.0, fmt("extinction %.12f, |error| %.2e, %.3f s", *tr.extinction_time, err, dt)};
}

Outcome rectangle_homothety() {
  const auto an = shared("l1");
  const double a = 2.0, b = 1.0;
  FlowOptions opts;
  for (int k = 1; k <= 20; ++k) opts.sample_times.push_back(0.95 * k / 20.0);
  const auto t0 = Clock::now();
  const Ring rect{{-a, -b}, {a, -b}, {a, b}, {-a, b}};
  const Trajectory tr = evolve(AdmissiblePolygon::from_vertices(rect, an), SpeedLaw::kappa(), 2.0, opts);
  const double dt = seconds_since(t0);
  if (!tr.extinction_time) return {false, "no extinction"};
  const double ext_err = std::abs(*tr.extinction_time - 1.0);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const Snapshot& s : tr.samples) {
    if (std::find(opts.sample_times.begin(), opts.sample_times.end(), s.time) == opts.sample_times.end()) continue;
    const double r = std::sqrt(1.0 - 2.0 * s.time / (a * b));
    for (std::size_t j = 0; j < s.polygon.size(); ++j) {
      const bool horizontal = std::abs(s.polygon.normal(j).y) > 0.5;
      worst = std::max(worst, std::abs(s.polygon.facet(j).length - 2.0 * r * (horizontal ? a : b)));
    }
    ++checked;
  }
  const bool pass = ext_err <= 1e-6 && worst <= 1e-6 && checked == 20 && dt < 1.0;
  return {pass, fmt("extinction %.12f, |error| %.2e, max length error %.2e over %zu samples, %.3f s",
                    *tr.extinction_time, ext_err, worst, checked, dt)};
}

// ---------------------------------------------------------------- 3, 4: closed forms

Outcome breaking_ratios() {
  const Anisotropy an = Anisotropy::builtin("l1");
  const double u = cheeger_ratio(breaking_example_union(), an);
  const double a = cheeger_ratio(breaking_example_a(), an);
  return {u == 16.0 / 5.0 && a == 3.0, fmt("SP(U)/|U| = %.17g, SP(A)/|A| = %.17g", u, a)};
}

Outcome lambda_values() {
  const double w = lambda_closed_form({FacetFamily::WulffFacet, 0.25, 0.0}, 2);
  const double h = lambda_closed_form({FacetFamily::FacetWithHole, 0.1, 0.3}, 2);
  const double c = lambda_closed_form({FacetFamily::ConvexConcave, 1.0, 2.0}, 2);
  return {w == 8.0 && h == 10.0 && c == 2.0 / 3.0, fmt("%.17g, %.17g, %.17g", w, h, c)};
}

// ---------------------------------------------------------------- 5, 6, 7: grid facet speeds

Outcome wulff_facet_lambda() {
  const Anisotropy an = Anisotropy::builtin("l1");
  const double r = 0.25;
  const std::size_t n = 256;
  const double h = 1.0 / static_cast<double>(n - 1);
  auto gauge = [](Vec2 x) { return std::max(std::abs(x.x), std::abs(x.y)); };
  GridField psi(n, n, h, {-0.5, -0.5}, BoundaryMode::Pad, 0.5 - r);
  psi = psi.sampled([&](Vec2 x) { return std::max(gauge(x) - r, 0.0); });
  const auto t0 = Clock::now();
  const GridField lam = estimate_min_section_richardson(psi, an, 2.0 * h, splitting_params());
  const double dt = seconds_since(t0);
  const double med = oracle::median(values_where(lam, [&](Vec2 x) { return gauge(x) <= 0.5 * r; }));
  const double rel = std::abs(med - 8.0) / 8.0;
  return {rel <= 0.05 && dt < 30.0, fmt("median %.5f, relative error %.4f, %.2f s", med, rel, dt)};
}

Outcome breaking_speeds() {
  const Anisotropy an = Anisotropy::builtin("l1");
  const Vec2 a_lo{-1.0, -1.0}, a_hi{0.0, 1.0}, b_lo{0.0, 0.5}, b_hi{1.0, 1.0};
  const double cap = 0.4;
  const std::size_t n = 256;
  const double h = 3.0 / static_cast<double>(n - 1);
  GridField psi(n, n, h, {-1.5, -1.5}, BoundaryMode::Pad, cap);
  psi = psi.sampled([&](Vec2 x) {
    return std::min({oracle::rect_distance(x, a_lo, a_hi), oracle::rect_distance(x, b_lo, b_hi), cap});
  });
  const auto t0 = Clock::now();
  const GridField lam = estimate_min_section_richardson(psi, an, 2.0 * h, splitting_params());
  const double dt = seconds_since(t0);
  // Concentric half-scale rectangles.
  auto half = [](Vec2 lo, Vec2 hi) {
    const Vec2 c = 0.5 * (lo + hi), e = 0.25 * (hi - lo);
    return std::pair{c - e, c + e};
  };
  auto in = [](Vec2 x, std::pair<Vec2, Vec2> r) {
    return x.x >= r.first.x && x.x <= r.second.x && x.y >= r.first.y && x.y <= r.second.y;
  };
  const auto ra = half(a_lo, a_hi), rb = half(b_lo, b_hi);
  const double ma = oracle::median(values_where(lam, [&](Vec2 x) { return in(x, ra); }));
  const double mb = oracle::median(values_where(lam, [&](Vec2 x) { return in(x, rb); }));
  const double ea = std::abs(ma - 3.0) / 3.0, eb = std::abs(mb - 4.0) / 4.0;
  return {ea <= 0.10 && eb <= 0.10,
          fmt("A median %.4f (rel %.4f), B median %.4f (rel %.4f), %.2f s", ma, ea, mb, eb, dt)};
}

Outcome facet_1d() {
  const Anisotropy an = Anisotropy::builtin("l1");
  const std::size_t n = 4096;
  const double h = 3.0 / static_cast<double>(n - 1);
  GridField psi(n, 1, h, {-1.0, 0.0}, BoundaryMode::Pad, 1.0);
  psi = psi.sampled([](Vec2 x) { return std::max({-x.x, 0.0, x.x - 1.0}); });
  const GridField lam = estimate_min_section(psi, an, 2.0 * h, splitting_params());
  const double med = oracle::median(values_where(lam, [](Vec2 x) { return x.x >= 0.25 && x.x <= 0.75; }));
  const double rel = std::abs(med - 2.0) / 2.0;
  return {rel <= 0.02, fmt("median %.6f, relative error %.5f", med, rel)};
}

// ---------------------------------------------------------------- 8, 9: resolvent properties

// The forward-difference energy is submodular only for box Wulff shapes (pairwise
// terms); coupled shapes such as linf can break the discrete order, so the property
// is checked on random boxes and reported for the coupled shapes without gating.
Outcome resolvent_order() {
  std::mt19937_64 rng(8);
  const BoundaryMode modes[] = {BoundaryMode::Neumann, BoundaryMode::Pad, BoundaryMode::Periodic};
  std::uniform_real_distribution<double> u(-1.0, 1.0), gap(0.0, 0.5), step(0.05, 1.0), side(0.3, 2.0);
  std::bernoulli_distribution tie(0.3);
  auto run = [&](const Anisotropy& an, int trial) {
    const BoundaryMode mode = modes[trial % 3];
    const std::size_t w = 4 + trial % 5, hgt = trial % 7 == 0 ? 1 : 3 + trial % 4;
    const double pad = u(rng);
    GridField lo(w, hgt, 0.25, {}, mode, pad), hi(w, hgt, 0.25, {}, mode, pad);
    for (std::size_t k = 0; k < lo.size(); ++k) {
      lo[k] = u(rng);
      hi[k] = lo[k] + (tie(rng) ? 0.0 : gap(rng));
    }
    ResolventParams p;
    p.a = step(rng);
    p.tolerance = 1e-15;
    p.max_iters = 200000;
    p.method = trial % 2 == 0 ? ResolventMethod::Auto : ResolventMethod::PrimalDual;
    const ResolventResult rl = resolvent_solve(lo, an, p), rh = resolvent_solve(hi, an, p);
    double worst = -INFINITY;
    for (std::size_t k = 0; k < lo.size(); ++k) worst = std::max(worst, rl.v[k] - rh.v[k]);
    return worst;
  };
  double worst = -INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const double l = side(rng), r = side(rng), d = side(rng), t = side(rng);
    const Anisotropy box = trial % 5 == 0 ? Anisotropy::builtin("l1")
                                          : Anisotropy::crystalline({{r, -d}, {r, t}, {-l, t}, {-l, -d}});
    worst = std::max(worst, run(box, trial));
  }
  double coupled = -INFINITY;
  for (int trial = 0; trial < 10; ++trial)
    coupled = std::max(coupled, run(Anisotropy::builtin(trial % 2 ? "hexagon" : "linf"), trial));
  return {worst <= 1e-8, fmt("max(v_lo - v_hi) = %.3e over 50 box pairs; hexagon/linf pairs (not gated) %.3e",
                             worst, coupled)};
}

Outcome oracle_equivalence() {
  const std::vector<std::pair<const char*, oracle::BoxWulff>> shapes{
      {"l1", {1.0, 1.0, 1.0, 1.0}}, {"skew", {0.5, 1.5, 2.0, 0.75}}};
  const BoundaryMode modes[] = {BoundaryMode::Neumann, BoundaryMode::Pad, BoundaryMode::Periodic};
  const std::pair<std::size_t, std::size_t> shapes_wh[] = {{3, 1}, {2, 2}};
  const ResolventMethod methods[] = {ResolventMethod::PrimalDual, ResolventMethod::Auto};
  double worst = 0.0;
  std::size_t instances = 0;
  for (const auto& [name, box] : shapes) {
    const Anisotropy an = Anisotropy::crystalline(
        {{box.right, -box.down}, {box.right, box.up}, {-box.left, box.up}, {-box.left, -box.down}}, name);
    for (BoundaryMode mode : modes)
      for (auto [w, hgt] : shapes_wh) {
        const std::size_t nodes = w * hgt;
        std::size_t combos = 1;
        for (std::size_t k = 0; k < nodes; ++k) combos *= 3;
        for (double a : {0.1, 1.0})
          for (double pad : {-1.0, 0.0, 1.0}) {
            if (mode != BoundaryMode::Pad && pad != 0.0) continue;
            for (std::size_t code = 0; code < combos; ++code) {
              GridField psi(w, hgt, 1.0, {}, mode, pad);
              std::size_t c = code;
              for (std::size_t k = 0; k < nodes; ++k, c /= 3) psi[k] = static_cast<double>(c % 3) - 1.0;
              const std::vector<double> ref = oracle::BruteResolvent(psi, box, a).solve();
              for (ResolventMethod m : methods) {
                ResolventParams p;
                p.a = a;
                p.tolerance = 1e-14;
                p.max_iters = 200000;
                p.method = m;
                const ResolventResult res = resolvent_solve(psi, an, p);
                for (std::size_t k = 0; k < nodes; ++k) worst = std::max(worst, std::abs(res.v[k] - ref[k]));
                ++instances;
              }
            }
          }
      }
  }
  return {worst <= 1e-6, fmt("max |v - v_oracle| = %.3e over %zu solves", worst, instances)};
}

// ---------------------------------------------------------------- 10, 12: polygon properties

// Random support numbers around the Wulff supports, resampled until every facet is present.
std::vector<double> random_supports(std::mt19937_64& rng, const Anisotropy& an, double scale, double spread) {
  std::uniform_real_distribution<double> u(1.0 - spread, 1.0 + spread);
  std::vector<double> angles(an.angles().begin(), an.angles().end());
  for (;;) {
    std::vector<double> h(an.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = scale * an.support(k) * u(rng);
    if (!oracle::polygon_from_support(angles, h, 1e-3 * scale).empty()) return h;
  }
}

Outcome polygon_comparison() {
  std::mt19937_64 rng(10);
  const char* names[] = {"l1", "hexagon", "linf"};
  std::uniform_real_distribution<double> mob(0.5, 2.0), shrink(0.3, 0.9), shift(-0.2, 0.2);
  std::size_t checks = 0, failures = 0, stopped = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto an = shared(names[trial % 3]);
    const std::vector<double> angles(an->angles().begin(), an->angles().end());
    std::vector<double> m(an->size());
    for (double& x : m) x = mob(rng);
    const SpeedLaw law = SpeedLaw::linear([an, m](Vec2 n) {
      const auto k = an->direction_index(wrap_angle(std::atan2(n.y, n.x)), 1e-6);
      return k ? m[*k] : 1.0;
    });
    const std::vector<double> ho = random_supports(rng, *an, 1.0, 0.3);
    // Inner supports strictly below the outer ones, with a random offset.
    const Vec2 c{shift(rng), shift(rng)};
    std::vector<double> hi;
    for (;;) {
      const double s = shrink(rng);
      const std::vector<double> g = random_supports(rng, *an, s, 0.3);
      hi.assign(g.size(), 0.0);
      bool ok = true;
      for (std::size_t k = 0; k < g.size(); ++k) {
        hi[k] = g[k] + dot(c, an->normal(k));
        ok = ok && hi[k] < ho[k] - 0.02;
      }
      if (ok && !oracle::polygon_from_support(angles, hi, 1e-3).empty()) break;
    }
    const auto outer = AdmissiblePolygon::from_vertices(oracle::polygon_from_support(angles, ho), an);
    const auto inner = AdmissiblePolygon::from_vertices(oracle::polygon_from_support(angles, hi), an);
    const Trajectory ti = evolve(inner, law, 100.0);
    const double end = ti.samples.back().time;
    FlowOptions opts;
    for (int k = 0; k <= 40; ++k) opts.sample_times.push_back(end * k / 40.0);
    const Trajectory a = evolve(outer, law, end, opts), b = evolve(inner, law, end, opts);
    stopped += ti.status == FlowStatus::NonAdmissibleStop;
    for (const Snapshot& si : b.samples)
      for (const Snapshot& so : a.samples) {
        if (so.time != si.time || si.polygon.area() <= 0.0) continue;
        ++checks;
        failures += !encloses(so.polygon, si.polygon);
      }
  }
  return {failures == 0 && checks > 0,
          fmt("%zu nesting checks, %zu failures (%zu inner runs stopped early)", checks, failures, stopped)};
}

Outcome length_rates() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  const auto l1 = shared("l1");
  const char* convex_names[] = {"l1", "hexagon", "linf"};
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> pts;
    std::shared_ptr<const Anisotropy> an;
    if (trial % 2 == 0) {
      an = l1;
      pts = oracle::skyline(rng, 2 + trial % 6);
    } else {
      an = shared(convex_names[(trial / 2) % 3]);
      const std::vector<double> angles(an->angles().begin(), an->angles().end());
      pts = oracle::polygon_from_support(angles, random_supports(rng, *an, 1.0, 0.3));
    }
    const auto poly = AdmissiblePolygon::from_vertices(pts, an);
    const std::size_t m = poly.size();
    std::vector<double> v(m);
    for (double& x : v) x = vel(rng);
    const std::vector<double> rate = length_derivative(poly, v);

    // Shift every facet line by +-eps V_j and difference the resulting lengths.
    const std::vector<Vec2> verts = poly.vertices();
    std::vector<Vec2> normals(m);
    std::vector<double> c(m), cp(m), cm(m);
    const double eps = 1e-5;
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 e = verts[(j + 1) % m] - verts[j];
      normals[j] = Vec2{e.y, -e.x} / norm(e);
      c[j] = dot(normals[j], verts[j]);
      cp[j] = c[j] + eps * v[j];
      cm[j] = c[j] - eps * v[j];
    }
    const std::vector<double> lp = oracle::lengths_of_lines(normals, cp), lm = oracle::lengths_of_lines(normals, cm);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double fd = (lp[j] - lm[j]) / (2.0 * eps);
      num = std::max(num, std::abs(rate[j] - fd));
      den = std::max(den, std::abs(fd));
    }
    worst = std::max(worst, num / den);
  }
  return {worst <= 1e-6, fmt("max relative error %.3e over 200 polygons", worst)};
}

// ---------------------------------------------------------------- 11: Chambolle scheme

Outcome chambolle_trend() {
  const Anisotropy an = Anisotropy::builtin("l1");
  const Mobility mob = Mobility::of(an);
  const double half = 1.625;  // a whole number of cells at every level
  const std::pair<double, int> levels[] = {{0.02, 64}, {0.01, 128}, {0.005, 256}};
  const auto t0 = Clock::now();
  std::vector<double> errors;
  std::string detail;
  for (auto [h, per_unit] : levels) {
    ChambolleParams p;
    const auto nodes = static_cast<std::size_t>(std::lround(2.0 * half * per_unit)) + 1;
    p.grid = grid_over({-half, -half}, {half, half}, nodes);
    const auto set = EvolvingSet::polygons({{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}});
    const ChambolleTrajectory tr = chambolle_evolve(set, h, 1.0, an, mob, p);
    const double err = tr.extinction_time ? std::abs(*tr.extinction_time - 0.5) : INFINITY;
    errors.push_back(err);
    detail += fmt("(h %g, 1/%d) |error| %.4f; ", h, per_unit, err);
  }
  const double dt = seconds_since(t0);
  const bool decreasing = errors[1] < errors[0] && errors[2] < errors[1];
  return {decreasing && errors[2] <= 0.05 && dt < 300.0, detail + fmt("%.1f s", dt)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Wulff extinction time", wulff_extinction},
      {"rectangle homothety", rectangle_homothety},
      {"breaking Cheeger ratios", breaking_ratios},
      {"closed-form facet curvatures", lambda_values},
      {"grid facet curvature on the Wulff facet", wulff_facet_lambda},
      {"facet breaking speeds", breaking_speeds},
      {"1-D facet speed", facet_1d},
      {"resolvent comparison principle", resolvent_order},
      {"small-instance oracle equivalence", oracle_equivalence},
      {"polygonal comparison principle", polygon_comparison},
      {"Chambolle convergence trend", chambolle_trend},
      {"length-rate oracle equivalence", length_rates},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
    selected.insert(k);
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(k)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-40s %s\n", o.pass ? "PASS" : "FAIL", k, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
