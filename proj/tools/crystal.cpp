// Command-line front end. Every subcommand prints one JSON line on stdout; diagnostics go
// to stderr. Exit codes: 0 success, 2 invalid input, 3 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crystal/anisotropy.hpp"
#include "crystal/chambolle.hpp"
#include "crystal/error.hpp"
#include "crystal/facet_calculus.hpp"
#include "crystal/grid.hpp"
#include "crystal/io.hpp"
#include "crystal/polygon_flow.hpp"
#include "crystal/reference_solutions.hpp"
#include "crystal/tv_solver.hpp"

using namespace crystal;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kSolverFailure = 3;

// Input problems versus failures of a solver on valid input.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StiffnessFailure:
    case ErrorCode::NoConvergence:
    case ErrorCode::TouchedBoundary:
    case ErrorCode::Vanished:
      return kSolverFailure;
    default:
      return kInvalid;
  }
}

struct Summary {
  Json body = Json::object();
  std::vector<std::string> outputs;

  void print(const std::string& command, const std::string& status) {
    body["command"] = command;
    body["status"] = status;
    body["outputs"] = outputs;
    std::cout << body.dump() << '\n';
  }
  void write(const std::string& path, std::string_view text) {
    if (path.empty()) return;
    io::write_text(path, text);
    outputs.push_back(path);
  }
};

// Values from --config fill every option not given on the command line.
void apply_config(CLI::App& sub, const std::string& path) {
  const Json cfg = io::read_json(path);
  if (!cfg.is_object()) throw Error(ErrorCode::Parse, path + ": config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (!opt) opt = sub.get_option_no_throw(key);
    if (!opt || key == "config") throw Error(ErrorCode::Parse, path + ": unknown key \"" + key + "\"");
    if (opt->count() > 0) continue;
    auto text = [&](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return io::number(v.get<double>());
      throw Error(ErrorCode::Parse, path + ": value of \"" + key + "\" must be a string, number or boolean");
    };
    if (value.is_array())
      for (const Json& v : value) opt->add_result(text(v));
    else
      opt->add_result(text(value));
    opt->run_callback();
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

std::vector<Vec2> scaled(std::span<const Vec2> pts, double s) {
  std::vector<Vec2> out;
  for (Vec2 p : pts) out.push_back(s * p);
  return out;
}

Ring rectangle_ring(double a, double b) { return {{-a, -b}, {a, -b}, {a, b}, {-a, b}}; }

std::vector<double> linspace(double t_end, std::size_t samples) {
  std::vector<double> t;
  for (std::size_t k = 0; k <= samples; ++k) t.push_back(t_end * static_cast<double>(k) / static_cast<double>(samples));
  return t;
}

Mobility mobility_named(const std::string& name, const Anisotropy& an) {
  if (name == "sigma") return Mobility::of(an);
  if (name == "euclidean") return Mobility::euclidean();
  throw Error(ErrorCode::InvalidArgument, "mobility must be sigma or euclidean");
}

ResolventMethod method_named(const std::string& name) {
  if (name == "auto") return ResolventMethod::Auto;
  if (name == "primal-dual") return ResolventMethod::PrimalDual;
  if (name == "splitting") return ResolventMethod::Splitting;
  throw Error(ErrorCode::InvalidArgument, "method must be auto, primal-dual or splitting");
}

// ---------------------------------------------------------------- flow

struct FlowArgs {
  std::string anisotropy = "l1", law = "sigma_kappa", mobility = "unit", init = "wulff", polygon;
  double forcing = 0.0, alpha = 1.0, r0 = 1.0, a = 1.0, b = 1.0, t_end = 1.0, rel_tol = 1e-8;
  bool weak = false;
  std::size_t samples = 20;
  std::string csv, events, svg, final_polygon;
};

int run_flow(const FlowArgs& f) {
  auto an = std::make_shared<const Anisotropy>(io::load_anisotropy(f.anisotropy));
  require(f.t_end > 0.0, "--t-end must be positive");
  SpeedLaw::MobilityFn mob = SpeedLaw::unit_mobility();
  if (f.mobility == "sigma") mob = [an](Vec2 n) { return an->sigma(n); };
  else require(f.mobility == "unit", "--mobility must be unit or sigma");
  std::optional<SpeedLaw> law;
  if (f.law == "sigma_kappa") law = SpeedLaw::sigma_kappa(*an);
  else if (f.law == "kappa") law = SpeedLaw::kappa();
  else if (f.law == "linear") law = SpeedLaw::linear(mob, f.forcing);
  else if (f.law == "power") law = SpeedLaw::power(f.alpha, mob);
  else throw Error(ErrorCode::InvalidArgument, "--law must be sigma_kappa, kappa, linear or power");

  std::optional<AdmissiblePolygon> p0;
  if (f.init == "wulff") {
    require(f.r0 > 0.0, "--r0 must be positive");
    p0 = AdmissiblePolygon::from_vertices(scaled(an->wulff_vertices(), f.r0), an);
  } else if (f.init == "rectangle") {
    require(f.a > 0.0 && f.b > 0.0, "--a and --b must be positive");
    p0 = AdmissiblePolygon::from_vertices(rectangle_ring(f.a, f.b), an);
  } else if (f.init == "polygon") {
    require(!f.polygon.empty(), "--init polygon needs --polygon FILE");
    Json j = io::read_json(f.polygon);
    if (f.weak && j.is_object() && !j.contains("weak")) j["weak"] = true;
    p0 = io::polygon_from_json(j, an);
  } else {
    throw Error(ErrorCode::InvalidArgument, "--init must be wulff, rectangle or polygon");
  }

  FlowOptions opts;
  opts.rel_tol = f.rel_tol;
  if (f.samples > 0) opts.sample_times = linspace(f.t_end, f.samples);
  const Trajectory tr = evolve(*p0, *law, f.t_end, opts);

  Summary s;
  s.write(f.csv, io::trajectory_csv(tr));
  s.write(f.events, io::events_json(tr).dump(2) + "\n");
  if (!f.svg.empty()) {
    std::vector<io::SvgFrame> frames;
    for (const Snapshot& snap : tr.samples) frames.push_back({snap.time, {snap.polygon.vertices()}});
    s.write(f.svg, io::svg_overlay(frames));
  }
  if (!f.final_polygon.empty() && !tr.samples.empty())
    s.write(f.final_polygon, io::to_json(tr.samples.back().polygon).dump(2) + "\n");
  s.body["extinction_time"] = tr.extinction_time ? Json(*tr.extinction_time) : Json(nullptr);
  s.body["events"] = tr.events.size();
  s.body["flow_status"] = to_string(tr.status);
  if (!tr.samples.empty()) s.body["final_facets"] = tr.samples.back().polygon.size();
  s.print("flow", "ok");
  return kOk;
}

// ---------------------------------------------------------------- chambolle

struct ChambolleArgs {
  std::string anisotropy = "l1", mobility = "sigma", init = "wulff", set, method = "auto";
  double r0 = 1.0, a = 1.0, b = 1.0, h = 0.01, t_end = 1.0, spacing = 1.0 / 64.0, box = 0.0, band = 0.0, tol = 1e-7;
  std::size_t max_iters = 20000, frame_every = 10;
  std::string csv, svg, final_set;
};

int run_chambolle(const ChambolleArgs& c) {
  const Anisotropy an = io::load_anisotropy(c.anisotropy);
  const Mobility mob = mobility_named(c.mobility, an);
  require(c.h > 0.0 && c.t_end > 0.0 && c.spacing > 0.0, "--h, --t-end and --spacing must be positive");
  std::vector<Ring> rings;
  if (c.init == "wulff") rings = {scaled(an.wulff_vertices(), c.r0)};
  else if (c.init == "rectangle") rings = {rectangle_ring(c.a, c.b)};
  else if (c.init == "set") {
    require(!c.set.empty(), "--init set needs --set FILE");
    rings = io::rings_from_json(io::read_json(c.set));
  } else {
    throw Error(ErrorCode::InvalidArgument, "--init must be wulff, rectangle or set");
  }
  const EvolvingSet e0 = EvolvingSet::polygons(rings);
  double half = c.box;
  if (half <= 0.0) {
    // Default box: the set's bounding square enlarged by 60%.
    const auto [lo, hi] = e0.bounds();
    half = 1.6 * std::max({std::abs(lo.x), std::abs(lo.y), std::abs(hi.x), std::abs(hi.y)});
  }
  const auto nodes = static_cast<std::size_t>(std::lround(2.0 * half / c.spacing)) + 1;
  require(nodes >= 3 && nodes <= 8193, "grid must have between 3 and 8193 nodes per side");

  ChambolleParams params;
  params.grid = grid_over({-half, -half}, {half, half}, nodes);
  params.band = c.band;
  params.resolvent.tolerance = c.tol;
  params.resolvent.max_iters = c.max_iters;
  params.resolvent.method = method_named(c.method);
  const ChambolleTrajectory tr = chambolle_evolve(e0, c.h, c.t_end, an, mob, params, c.frame_every);

  Summary s;
  s.write(c.csv, io::chambolle_csv(tr));
  if (!c.svg.empty()) {
    std::vector<io::SvgFrame> frames{{0.0, rings}};
    for (const EvolvingSet& f : tr.frames) {
      std::vector<Ring> segs;
      for (const Segment& seg : f.boundary()) segs.push_back({seg.a, seg.b});
      frames.push_back({f.time(), std::move(segs)});
    }
    s.write(c.svg, io::svg_overlay(frames));
  }
  if (!c.final_set.empty() && tr.final_set) {
    std::vector<Ring> segs;
    for (const Segment& seg : tr.final_set->boundary()) segs.push_back({seg.a, seg.b});
    s.write(c.final_set, io::to_json(segs).dump() + "\n");
  }
  std::size_t unconverged = 0;
  for (const ChambolleRecord& r : tr.records) unconverged += r.converged ? 0 : 1;
  s.body["scheme_status"] = std::string(to_string(tr.status));
  s.body["vanish_time"] = tr.vanish_time ? Json(*tr.vanish_time) : Json(nullptr);
  s.body["extinction_time"] = tr.extinction_time ? Json(*tr.extinction_time) : Json(nullptr);
  s.body["steps"] = tr.records.empty() ? 0 : tr.records.back().k;
  s.body["unconverged_steps"] = unconverged;
  s.print("chambolle", tr.status == ChambolleStatus::TouchedBoundary ? "touched_boundary" : "ok");
  return tr.status == ChambolleStatus::TouchedBoundary ? kSolverFailure : kOk;
}

// ---------------------------------------------------------------- profiles shared by resolvent and lambda

struct ProfileArgs {
  std::string anisotropy = "l1", profile = "wulff-facet", input, method = "auto";
  double r = 0.25, big_r = 0.5, a = 0.0, a_cells = 2.0, tol = 1e-8;
  std::size_t n = 256, max_iters = 20000;
};

// The profile and, for the built-in ones, the nodes over which facet speeds are summarised.
struct Profile {
  GridField psi;
  std::map<std::string, std::vector<std::size_t>> regions;
  std::map<std::string, double> exact;
};

Profile make_profile(const ProfileArgs& p, const Anisotropy& an) {
  Profile out;
  auto collect = [&](const std::string& name, auto&& inside) {
    std::vector<std::size_t>& idx = out.regions[name];
    for (std::size_t j = 0; j < out.psi.height(); ++j)
      for (std::size_t i = 0; i < out.psi.width(); ++i)
        if (inside(out.psi.node(i, j))) idx.push_back(j * out.psi.width() + i);
  };
  if (!p.input.empty()) {
    out.psi = read_binary(p.input);
    return out;
  }
  require(p.n >= 4 && p.n <= 8192, "--n must lie in [4, 8192]");
  if (p.profile == "wulff-facet") {
    require(p.r > 0.0 && p.r < 0.5, "--r must lie in (0, 0.5)");
    out.psi = grid_over({-0.5, -0.5}, {0.5, 0.5}, p.n, BoundaryMode::Pad, 0.0)
                  .sampled([&](Vec2 x) { return std::max(an.sigma_polar(x) - p.r, 0.0); });
    out.psi.set_boundary(BoundaryMode::Pad, 0.5 - p.r);
    collect("facet", [&](Vec2 x) { return an.sigma_polar(x) <= 0.5 * p.r; });
    out.exact["facet"] = lambda_closed_form({FacetFamily::WulffFacet, p.r, 0.0}, 2);
  } else if (p.profile == "facet-with-hole" || p.profile == "convex-concave") {
    require(p.r > 0.0 && p.big_r > p.r, "need 0 < --r < --R");
    const bool hole = p.profile == "facet-with-hole";
    const double half = 1.5 * p.big_r;
    out.psi = grid_over({-half, -half}, {half, half}, p.n, BoundaryMode::Pad, 0.0).sampled([&](Vec2 x) {
      const double s = an.sigma_polar(x);
      const double inner = std::max(p.r - s, 0.0);
      return std::max(s - p.big_r, 0.0) + (hole ? inner : -inner);
    });
    out.psi.set_boundary(BoundaryMode::Pad, 0.5 * p.big_r);
    const double q = 0.25 * (p.big_r - p.r);
    collect("facet", [&](Vec2 x) {
      const double s = an.sigma_polar(x);
      return s >= p.r + q && s <= p.big_r - q;
    });
    out.exact["facet"] = lambda_closed_form(
        {hole ? FacetFamily::FacetWithHole : FacetFamily::ConvexConcave, p.r, p.big_r}, 2);
  } else if (p.profile == "facet-1d") {
    // dist(x, [0, 1]) on [-1, 2].
    const double h = 3.0 / static_cast<double>(p.n - 1);
    out.psi = GridField(p.n, 1, h, {-1.0, 0.0}, BoundaryMode::Pad, 1.0)
                  .sampled([](Vec2 x) { return std::max({-x.x, 0.0, x.x - 1.0}); });
    collect("facet", [](Vec2 x) { return x.x >= 0.25 && x.x <= 0.75; });
    out.exact["facet"] = staircase_facet_speed(0.0, 1.0);
  } else if (p.profile == "breaking") {
    // Euclidean distance to U = A u B, capped.
    const double cap = 0.4;
    const FacetSpec u = breaking_example_union();
    out.psi = grid_over({-1.5, -1.5}, {1.5, 1.5}, p.n, BoundaryMode::Pad, cap).sampled([&](Vec2 x) {
      const Ring& ring = u.outer().points;
      if (locate(x, ring) != Location::Outside) return 0.0;
      double d = INFINITY;
      for (std::size_t k = 0; k < ring.size(); ++k) d = std::min(d, distance_to_segment(x, ring[k], ring[(k + 1) % ring.size()]));
      return std::min(d, cap);
    });
    collect("A", [](Vec2 x) { return x.x >= -0.75 && x.x <= -0.25 && x.y >= -0.5 && x.y <= 0.5; });
    collect("B", [](Vec2 x) { return x.x >= 0.25 && x.x <= 0.75 && x.y >= 0.625 && x.y <= 0.875; });
    out.exact["A"] = kBreakingSpeedA;
    out.exact["B"] = kBreakingSpeedB;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "--profile must be wulff-facet, facet-with-hole, convex-concave, facet-1d or breaking");
  }
  return out;
}

ResolventParams resolvent_params(const ProfileArgs& p, const GridField& psi) {
  ResolventParams params;
  params.a = p.a > 0.0 ? p.a : p.a_cells * psi.spacing();
  params.tolerance = p.tol;
  params.max_iters = p.max_iters;
  params.method = method_named(p.method);
  return params;
}

double median_of(const GridField& g, const std::vector<std::size_t>& idx) {
  std::vector<double> v;
  for (std::size_t k : idx) v.push_back(g[k]);
  if (v.empty()) return NAN;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

// ---------------------------------------------------------------- resolvent

struct ResolventArgs : ProfileArgs {
  std::string output, csv;
};

int run_resolvent(const ResolventArgs& r) {
  const Anisotropy an = io::load_anisotropy(r.anisotropy);
  const Profile prof = make_profile(r, an);
  const ResolventParams params = resolvent_params(r, prof.psi);
  const ResolventResult res = resolvent_solve(prof.psi, an, params);
  Summary s;
  if (!r.output.empty()) {
    write_binary(res.v, r.output);
    s.outputs.push_back(r.output);
  }
  if (!r.csv.empty()) {
    write_csv(res.v, r.csv);
    s.outputs.push_back(r.csv);
  }
  s.body["a"] = params.a;
  s.body["gap"] = res.gap;
  s.body["converged"] = res.converged;
  s.body["iterations"] = res.iterations;
  s.body["objective"] = res.objective.empty() ? Json(nullptr) : Json(res.objective.back());
  s.print("resolvent", res.converged ? "ok" : "no_convergence");
  return res.converged ? kOk : kSolverFailure;
}

// ---------------------------------------------------------------- lambda

struct LambdaArgs : ProfileArgs {
  bool richardson = false;
  std::string output, csv;
};

int run_lambda(const LambdaArgs& l) {
  const Anisotropy an = io::load_anisotropy(l.anisotropy);
  const Profile prof = make_profile(l, an);
  const ResolventParams params = resolvent_params(l, prof.psi);
  const GridField lam = l.richardson ? estimate_min_section_richardson(prof.psi, an, params.a, params)
                                     : estimate_min_section(prof.psi, an, params.a, params);
  Summary s;
  if (!l.output.empty()) {
    write_binary(lam, l.output);
    s.outputs.push_back(l.output);
  }
  if (!l.csv.empty()) {
    write_csv(lam, l.csv);
    s.outputs.push_back(l.csv);
  }
  Json medians = Json::object(), exact = Json::object();
  for (const auto& [name, idx] : prof.regions) medians[name] = median_of(lam, idx);
  for (const auto& [name, value] : prof.exact) exact[name] = value;
  s.body["a"] = params.a;
  s.body["richardson"] = l.richardson;
  s.body["median"] = medians;
  s.body["exact"] = exact;
  s.print("lambda", "ok");
  return kOk;
}

// ---------------------------------------------------------------- facet

struct FacetArgs {
  std::string spec, example, anisotropy = "l1";
  double r = 0.25, big_r = 0.5;
  int heuristic = 0;
};

int run_facet(const FacetArgs& f) {
  const Anisotropy an = io::load_anisotropy(f.anisotropy);
  std::optional<FacetSpec> facet;
  std::vector<FacetSpec> candidates;
  if (!f.spec.empty()) {
    require(f.example.empty(), "give either --spec or --example");
    const Json j = io::read_json(f.spec);
    if (j.is_object() && j.contains("facet")) {
      io::require_keys(j, {"facet", "candidates"}, "facet file");
      facet = io::facet_from_json(j["facet"]);
      if (auto it = j.find("candidates"); it != j.end())
        for (const Json& c : *it) candidates.push_back(io::candidate_from_json(c, *facet));
    } else {
      facet = io::facet_from_json(j);
    }
  } else if (f.example == "breaking") {
    facet = breaking_example_union();
    candidates = {breaking_example_a()};
  } else if (f.example == "wulff") {
    facet = facet_of({FacetFamily::WulffFacet, f.r, 0.0}, an);
  } else if (f.example == "facet-with-hole") {
    facet = facet_of({FacetFamily::FacetWithHole, f.r, f.big_r}, an);
  } else if (f.example == "convex-concave") {
    facet = facet_of({FacetFamily::ConvexConcave, f.r, f.big_r}, an);
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "give --spec FILE or --example breaking|wulff|facet-with-hole|convex-concave");
  }
  if (f.heuristic > 0) {
    std::vector<FacetSpec> extra = heuristic_candidates(*facet, an, f.heuristic);
    candidates.insert(candidates.end(), extra.begin(), extra.end());
  }
  const CalibrabilityReport rep = calibrability_verdict(*facet, an, candidates);
  Json ratios = Json::array({rep.facet_ratio});
  for (const FacetSpec& c : candidates) ratios.push_back(cheeger_ratio(c, an));
  Summary s;
  s.body["signed_perimeter"] = signed_perimeter(*facet, an);
  s.body["area"] = facet->area();
  s.body["ratios"] = ratios;
  s.body["candidates"] = candidates.size();
  s.body["verdict"] = rep.verdict == CalibrabilityVerdict::Violated ? "violated" : "consistent_on_candidates";
  s.body["worst_candidate"] = rep.worst_candidate ? Json(*rep.worst_candidate) : Json(nullptr);
  s.print("facet", "ok");
  return kOk;
}

// ---------------------------------------------------------------- exact

struct ExactArgs {
  std::string kind;
  double r0 = 1.0, c = 1.0, a = 1.0, b = 1.0, t = 0.0, x = 0.0, y = 0.0, t_end = 0.0;
  std::size_t samples = 0;
  std::string csv;
};

int run_exact(const ExactArgs& e) {
  std::optional<ExactSolution> sol;
  if (e.kind == "wulff") sol = ExactSolution::wulff_homothetic(e.r0, e.c);
  else if (e.kind == "rectangle") sol = ExactSolution::rectangle(e.a, e.b);
  else if (e.kind == "staircase") sol = ExactSolution::staircase_facet(e.a, e.b);
  else if (e.kind == "breaking") sol = ExactSolution::breaking_facet();
  else throw Error(ErrorCode::InvalidArgument, "kind must be wulff, rectangle, staircase or breaking");
  const Vec2 x{e.x, e.y};
  Summary s;
  if (e.samples > 0) {
    double t_end = e.t_end;
    if (t_end <= 0.0) {
      t_end = sol->extinction_time();
      require(std::isfinite(t_end), "--t-end is required for solutions without extinction");
    }
    std::string table = "t,value\n";
    for (double t : linspace(t_end, e.samples)) table += io::number(t) + ',' + io::number(sol->evaluate(t, x)) + '\n';
    if (e.csv.empty()) std::cout << table;
    else s.write(e.csv, table);
  }
  s.body["kind"] = e.kind;
  s.body["t"] = e.t;
  s.body["value"] = sol->evaluate(e.t, x);
  const double ext = sol->extinction_time();
  s.body["extinction_time"] = std::isfinite(ext) ? Json(ext) : Json(nullptr);
  if (e.kind == "staircase") s.body["facet_speed"] = staircase_facet_speed(e.a, e.b);
  s.print("exact", "ok");
  return kOk;
}

// ---------------------------------------------------------------- demo-fattening

struct FatteningArgs {
  std::string anisotropy = "l1", mobility = "sigma";
  double h = 0.01, t_end = 0.1, spacing = 1.0 / 64.0, gap = 0.0, box = 1.6, tol = 1e-7;
  std::string csv;
};

int run_fattening(const FatteningArgs& f) {
  const Anisotropy an = io::load_anisotropy(f.anisotropy);
  const Mobility mob = mobility_named(f.mobility, an);
  require(f.h > 0.0 && f.t_end > 0.0 && f.spacing > 0.0 && f.box > 1.0, "invalid --h, --t-end, --spacing or --box");
  ChambolleParams params;
  params.grid = grid_over({-f.box, -f.box}, {f.box, f.box}, static_cast<std::size_t>(std::lround(2.0 * f.box / f.spacing)) + 1);
  params.resolvent.tolerance = f.tol;
  const double gap = f.gap > 0.0 ? f.gap : 2.0 * f.spacing;
  const FatteningReport rep = fattening_demo(an, mob, f.h, f.t_end, params, gap);
  Summary s;
  std::string table = "t,outer_area,inner_area\n";
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    table += io::number(rep.times[k]) + ',' + io::number(rep.outer_area[k]) + ',' + io::number(rep.inner_area[k]) + '\n';
  s.write(f.csv, table);
  s.body["gap"] = gap;
  s.body["max_area_difference"] = rep.max_difference;
  s.body["steps"] = rep.times.size();
  s.print("demo-fattening", "ok");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crystalline curvature flow toolkit"};
  app.require_subcommand(1);
  // "--h" is the time step, so help answers to the long form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", "crystal 1.0");

  std::map<CLI::App*, std::string> configs;
  auto config_option = [&](CLI::App* sub) {
    sub->add_option("--config", configs[sub], "JSON file of option values; command-line flags take precedence")
        ->check(CLI::ExistingFile);
  };

  FlowArgs flow;
  CLI::App* c_flow = app.add_subcommand("flow", "Evolve an admissible polygon by V = g(n, kappa)");
  config_option(c_flow);
  c_flow->add_option("--anisotropy", flow.anisotropy, "Built-in name (l1, hexagon, linf) or JSON file");
  c_flow->add_option("--law", flow.law, "sigma_kappa, kappa, linear or power");
  c_flow->add_option("--mobility", flow.mobility, "unit or sigma (linear and power laws)");
  c_flow->add_option("--forcing", flow.forcing, "Constant C of the linear law");
  c_flow->add_option("--alpha", flow.alpha, "Exponent of the power law");
  c_flow->add_option("--init", flow.init, "wulff, rectangle or polygon");
  c_flow->add_option("--r0", flow.r0, "Scale of the Wulff initial datum");
  c_flow->add_option("--a", flow.a, "Rectangle half-width");
  c_flow->add_option("--b", flow.b, "Rectangle half-height");
  c_flow->add_option("--polygon", flow.polygon, "Polygon JSON for --init polygon");
  c_flow->add_flag("--weak", flow.weak, "Accept non-admissible edge directions (Delta = 0)");
  c_flow->add_option("--t-end", flow.t_end, "Final time");
  c_flow->add_option("--rel-tol", flow.rel_tol, "Integrator relative tolerance");
  c_flow->add_option("--samples", flow.samples, "Equispaced output samples (0: every step)");
  c_flow->add_option("--csv", flow.csv, "Trajectory CSV");
  c_flow->add_option("--events", flow.events, "Event log JSON");
  c_flow->add_option("--svg", flow.svg, "Overlaid snapshots");
  c_flow->add_option("--final", flow.final_polygon, "Last polygon as JSON");

  ChambolleArgs ch;
  CLI::App* c_ch = app.add_subcommand("chambolle", "Minimizing-movement level-set flow V = M(n) kappa");
  config_option(c_ch);
  c_ch->add_option("--anisotropy", ch.anisotropy, "Built-in name or JSON file");
  c_ch->add_option("--mobility", ch.mobility, "sigma or euclidean");
  c_ch->add_option("--init", ch.init, "wulff, rectangle or set");
  c_ch->add_option("--r0", ch.r0, "Scale of the Wulff initial set");
  c_ch->add_option("--a", ch.a, "Rectangle half-width");
  c_ch->add_option("--b", ch.b, "Rectangle half-height");
  c_ch->add_option("--set", ch.set, "Set JSON ({\"rings\": ...}) for --init set");
  c_ch->add_option("--h", ch.h, "Time step");
  c_ch->add_option("--t-end", ch.t_end, "Horizon");
  c_ch->add_option("--spacing", ch.spacing, "Grid spacing");
  c_ch->add_option("--box", ch.box, "Half-width of the square domain (0: automatic)");
  c_ch->add_option("--band", ch.band, "Distance clamp (0: quarter of the box side)");
  c_ch->add_option("--tol", ch.tol, "Resolvent gap tolerance per node");
  c_ch->add_option("--max-iters", ch.max_iters, "Resolvent iteration cap per step");
  c_ch->add_option("--method", ch.method, "auto, primal-dual or splitting");
  c_ch->add_option("--frame-every", ch.frame_every, "Keep every n-th set for the SVG");
  c_ch->add_option("--csv", ch.csv, "Per-step CSV");
  c_ch->add_option("--svg", ch.svg, "Overlaid frames");
  c_ch->add_option("--final", ch.final_set, "Boundary of the last set as JSON");

  auto profile_options = [](CLI::App* sub, ProfileArgs& p) {
    sub->add_option("--anisotropy", p.anisotropy, "Built-in name or JSON file");
    sub->add_option("--profile", p.profile, "wulff-facet, facet-with-hole, convex-concave, facet-1d or breaking");
    sub->add_option("--input", p.input, "Binary grid file instead of a built-in profile");
    sub->add_option("--r", p.r, "Inner radius");
    sub->add_option("--R", p.big_r, "Outer radius");
    sub->add_option("--n", p.n, "Nodes per side");
    sub->add_option("--a", p.a, "Resolvent step (overrides --a-cells)");
    sub->add_option("--a-cells", p.a_cells, "Resolvent step in grid spacings");
    sub->add_option("--tol", p.tol, "Gap tolerance per node");
    sub->add_option("--max-iters", p.max_iters, "Iteration cap");
    sub->add_option("--method", p.method, "auto, primal-dual or splitting");
  };

  ResolventArgs rs;
  CLI::App* c_rs = app.add_subcommand("resolvent", "Solve v + a dE(v) = psi on a grid");
  config_option(c_rs);
  profile_options(c_rs, rs);
  c_rs->add_option("--output", rs.output, "Solution as a binary grid");
  c_rs->add_option("--csv", rs.csv, "Solution as CSV");

  LambdaArgs lm;
  CLI::App* c_lm = app.add_subcommand("lambda", "Estimate the facet speed field (v - psi)/a");
  config_option(c_lm);
  profile_options(c_lm, lm);
  c_lm->add_flag("--richardson", lm.richardson, "Extrapolate over a and a/2");
  c_lm->add_option("--output", lm.output, "Estimate as a binary grid");
  c_lm->add_option("--csv", lm.csv, "Estimate as CSV");

  FacetArgs fc;
  CLI::App* c_fc = app.add_subcommand("facet", "Signed perimeter, Cheeger ratios and calibrability witnesses");
  config_option(c_fc);
  c_fc->add_option("--spec", fc.spec, "Facet JSON, optionally {\"facet\": ..., \"candidates\": [...]}");
  c_fc->add_option("--example", fc.example, "breaking, wulff, facet-with-hole or convex-concave");
  c_fc->add_option("--anisotropy", fc.anisotropy, "Built-in name or JSON file");
  c_fc->add_option("--r", fc.r, "Inner radius of the example families");
  c_fc->add_option("--R", fc.big_r, "Outer radius of the example families");
  c_fc->add_option("--heuristic", fc.heuristic, "Add heuristic candidates on an n-lattice (0: none)");

  ExactArgs ex;
  CLI::App* c_ex = app.add_subcommand("exact", "Closed-form solutions");
  config_option(c_ex);
  c_ex->add_option("kind", ex.kind, "wulff, rectangle, staircase or breaking")->required();
  c_ex->add_option("--r0", ex.r0, "Initial Wulff scale");
  c_ex->add_option("--c", ex.c, "Mobility factor of the Wulff solution");
  c_ex->add_option("--a", ex.a, "Rectangle half-width or facet start");
  c_ex->add_option("--b", ex.b, "Rectangle half-height or facet end");
  c_ex->add_option("--t", ex.t, "Evaluation time");
  c_ex->add_option("--x", ex.x, "Evaluation point (breaking)");
  c_ex->add_option("--y", ex.y, "Evaluation point (breaking)");
  c_ex->add_option("--samples", ex.samples, "Tabulate at this many intervals up to --t-end");
  c_ex->add_option("--t-end", ex.t_end, "End of the table (default: extinction)");
  c_ex->add_option("--csv", ex.csv, "Table file (default: standard output)");

  FatteningArgs ft;
  CLI::App* c_ft = app.add_subcommand("demo-fattening", "Two squares touching at a corner, with and without a neck");
  config_option(c_ft);
  c_ft->add_option("--anisotropy", ft.anisotropy, "Built-in name or JSON file");
  c_ft->add_option("--mobility", ft.mobility, "sigma or euclidean");
  c_ft->add_option("--h", ft.h, "Time step");
  c_ft->add_option("--t-end", ft.t_end, "Horizon");
  c_ft->add_option("--spacing", ft.spacing, "Grid spacing");
  c_ft->add_option("--gap", ft.gap, "Neck half-width (0: two spacings)");
  c_ft->add_option("--box", ft.box, "Half-width of the domain");
  c_ft->add_option("--tol", ft.tol, "Resolvent gap tolerance per node");
  c_ft->add_option("--csv", ft.csv, "Area table");

  std::string command = "?";
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      std::cout << Json{{"command", command}, {"status", "invalid"}, {"error", e.what()}}.dump() << '\n';
      return kInvalid;
    }
    CLI::App* sub = app.get_subcommands().front();
    command = sub->get_name();
    if (!configs[sub].empty()) apply_config(*sub, configs[sub]);

    if (sub == c_flow) return run_flow(flow);
    if (sub == c_ch) return run_chambolle(ch);
    if (sub == c_rs) return run_resolvent(rs);
    if (sub == c_lm) return run_lambda(lm);
    if (sub == c_fc) return run_facet(fc);
    if (sub == c_ex) return run_exact(ex);
    return run_fattening(ft);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const int code = exit_code_for(e.code());
    std::cout << Json{{"command", command},
                      {"status", code == kInvalid ? "invalid" : "solver_failure"},
                      {"error", std::string(to_string(e.code()))}}
                     .dump()
              << '\n';
    return code;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cout << Json{{"command", command}, {"status", "invalid"}, {"error", e.what()}}.dump() << '\n';
    return kInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cout << Json{{"command", command}, {"status", "invalid"}, {"error", "Parse"}}.dump() << '\n';
    return kInvalid;
  }
}
