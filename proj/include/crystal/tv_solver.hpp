#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crystal/anisotropy.hpp"
#include "crystal/grid.hpp"

namespace crystal {

// Cahn-Hoffman field on the difference lattice of a grid: one vector per lattice node,
// paired with the forward differences leaving that node. In Pad mode the lattice
// includes the ghost frame, so it is two nodes wider along every non-degenerate axis.
struct DualField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> x;
  std::vector<double> y;
};

enum class ResolventMethod {
  // First-order primal-dual iteration; any Wulff polygon and boundary.
  PrimalDual,
  // Alternating exact row and column solves; axis-aligned box Wulff shapes, Pad or
  // Neumann boundary.
  Splitting,
  // Splitting where it applies, PrimalDual otherwise.
  Auto,
};

struct ResolventParams {
  double a = 0.0;
  std::size_t max_iters = 20000;
  // Primal-dual gap per node, in the units of the objective density.
  double tolerance = 1e-8;
  // Primal and dual steps. Zero picks tau * sigma * 8 / h^2 = 0.99 with a ratio
  // tau / sigma scaled by a / h.
  double tau = 0.0;
  double sigma = 0.0;
  // Shrinks tau as 1/k using the strong convexity of the quadratic term.
  bool accelerate = false;
  // Minimum spacing of gap checks; later checks are spaced by iterations / 16.
  std::size_t check_every = 10;
  ResolventMethod method = ResolventMethod::PrimalDual;
};

struct ResolventResult {
  GridField v;
  DualField z;
  double gap = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  // Best objective |v - psi|^2 / (2a) + E(v) seen at each checkpoint.
  std::vector<double> objective;
};

// Sum over lattice nodes of sigma(forward-difference gradient) * spacing^2.
double discrete_energy(const GridField& v, const Anisotropy& an);
double resolvent_objective(const GridField& v, const GridField& psi, const Anisotropy& an, double a);

// Minimises |v - psi|^2 / (2a) + E(v) by a first-order primal-dual iteration with exact
// projection onto the Wulff polygon. Never throws for slow convergence; check `converged`.
// `warm` seeds the dual field when its shape matches.
ResolventResult resolvent_solve(const GridField& psi, const Anisotropy& an, const ResolventParams& params,
                                const DualField* warm = nullptr);

// (v - psi) / a for the resolvent v at step a.
GridField estimate_min_section(const GridField& psi, const Anisotropy& an, double a, ResolventParams params = {});
// 2 L(a/2) - L(a), cancelling the first-order bias in a.
GridField estimate_min_section_richardson(const GridField& psi, const Anisotropy& an, double a,
                                          ResolventParams params = {});

// Exact minimiser of 1/2 sum (v_i - y_i)^2 + sum_i phi(v_{i+1} - v_i) on a chain, where
// phi(t) = up * max(t, 0) + down * max(-t, 0). A fixed ghost value at either end adds
// the difference to it. `dual`, when given, receives one subgradient per difference
// (ghost differences included, left to right), each within [-down, up].
std::vector<double> tv_denoise_chain(std::span<const double> y, double up, double down,
                                     std::optional<double> left = std::nullopt,
                                     std::optional<double> right = std::nullopt,
                                     std::vector<double>* dual = nullptr);

// Nearest point of the Wulff polygon.
Vec2 project_wulff(Vec2 z, const Anisotropy& an);

}  // namespace crystal
