#pragma once

// Singular initial value problem
//   y' = s P(s, L, y),  s L' = Q(s, L, y),  y(0) = beta, L(0) = 0,
// with Q = -alpha L + Qt. Picard iteration in integral form near s = 0, then
// adaptive Dormand–Prince stepping out to s_max.

#include <functional>
#include <utility>
#include <vector>

namespace shockform {

struct SingularIvpSpec {
  /// Returns (P, Q) at (s, L, y); only called with s > 0.
  std::function<std::pair<double, double>(double s, double lambda, double y)> rhs;
  double alpha = 2.0;
  double M = 2.0;
  double s_max = 0.2;

  int picard_nodes = 16;      // Lobatto nodes on [0, s0]
  int quadrature_nodes = 24;  // Gauss–Jacobi nodes per integral
  double picard_tol = 1e-12;
  /// Iterates that stop contracting below this distance are accepted: the
  /// rhs has no more resolution than that.
  double stagnation_tol = 1e-8;
  int picard_max_iterations = 30;
  double ode_tol = 1e-13;
  /// Below this s the rhs is extrapolated linearly from (s_floor, 2 s_floor).
  double s_floor = 0.0;
};

struct IvpSolution {
  std::vector<double> s;
  std::vector<double> y;
  std::vector<double> lambda;
  double s0 = 0.0;                      // Picard / ODE handoff
  std::vector<double> picard_distances;  // sup distance between iterates
  double max_contraction_ratio = 0.0;
  bool picard_stalled = false;  // ended at the noise floor rather than picard_tol
  double max_bound_ratio = 0.0;  // max |L| / (M s)
  int ode_steps = 0;
};

/// Solves on [0, s_max] and reports the solution at `s_out` (ascending, in
/// [0, s_max]). Throws ContractionFailed, BoundViolated.
IvpSolution solve_singular_ivp(const SingularIvpSpec& spec, double beta,
                               const std::vector<double>& s_out);

/// -dQ/dL at L = 0, measured by central differences at (s, y).
double measure_alpha(const SingularIvpSpec& spec, double s, double y, double h = 1e-4);

}  // namespace shockform
