#pragma once

// Shock front x = w(t, y) emanating from the blowup curve: the
// Rankine–Hugoniot equation rewritten in s = sqrt(t - T*(y)) and the
// normalized offset L = (w - x*(y) - kappa(y) s^2) / s^3, solved along
// characteristics (s, beta) with the singular IVP engine.

#include <limits>
#include <utility>
#include <vector>

#include "shockform/blowup.hpp"
#include "shockform/numerics.hpp"
#include "shockform/singular_ivp.hpp"

namespace shockform {

/// Divided difference [F]/[u] between two states (the secant average of the
/// speed), computed as the mean of F' over the segment.
double jump_average(const FluxEvaluator& flux, double u_minus, double u_plus);
double jump_average_x(const Problem& p, double u_minus, double u_plus);
double jump_average_y(const Problem& p, double u_minus, double u_plus);

struct FrontCoeffs {
  double C0 = 0.0, C1 = 0.0, C2 = 0.0;
  double F_avg = 0.0, G_avg = 0.0;
  double dTstar_dy = 0.0;
  double u_minus = 0.0, u_plus = 0.0;
  double cancellation = 0.0;  // the bracket that vanishes identically on the curve
};

/// Coefficients of s C0 dL/ds + s^2 C1 dL/dy = C2 at (s, L, y), s > 0.
/// Throws BranchUnavailable, CancellationResidual.
FrontCoeffs front_coefficients(const BlowupCurve& curve, double s, double lambda, double y);
FrontCoeffs front_coefficients(const BlowupCurve& curve, const GammaData& gd, double s,
                               double lambda);

struct FrontOptions {
  double epsilon = 0.04;  // time window t - T*(y) <= epsilon
  double beta_lo = -0.1;
  double beta_hi = 0.1;
  int n_beta = 12;  // Lobatto intervals in beta
  int n_s = 16;     // Lobatto intervals in s
  double M = 10.0;  // a priori bound |L| <= M s
  int picard_nodes = 12;
  int quadrature_nodes = 16;
  double ode_tol = 1e-12;
  /// Right-hand sides are extrapolated below s_floor_fraction * s_max, where
  /// the root inversion loses its conditioning.
  double s_floor_fraction = 1e-3;
  /// Picard iterates may stall at the rounding level of the coefficients,
  /// which scales like ulp(x) / s^3; stalls below this are accepted.
  double picard_noise_tol = 1e-7;
  int threads = 1;
};

struct FrontPoint {
  double t = 0.0, y = 0.0;
  double s = 0.0, beta = 0.0;
  double lambda = 0.0;
  double w = 0.0;
  double dw_dt = 0.0, dw_dy = 0.0;
};

struct FrontState {
  double t = 0.0, y = 0.0, w = 0.0;
  double tau = 0.0;  // t - T*(y)
  double u_minus = 0.0, u_plus = 0.0;
  double dw_dt = 0.0, dw_dy = 0.0;
  double rh_residual = 0.0;
  double entropy_margin_plus = 0.0, entropy_margin_minus = 0.0;
};

struct BetaDiagnostics {
  double beta = 0.0;
  double alpha = 0.0;
  double s0 = 0.0;
  double contraction_ratio = 0.0;
  double bound_ratio = 0.0;
  int picard_iterations = 0;
  bool picard_stalled = false;
  double picard_final_distance = 0.0;
};

class ShockFront {
 public:
  /// Throws MonotonicityLost and the IVP / coefficient errors.
  static ShockFront solve(const BlowupCurve& curve, const FrontOptions& opts = {});

  const BlowupCurve& curve() const { return *curve_; }
  const FrontOptions& options() const { return opts_; }
  double s_max() const { return s_max_; }

  /// Front position and derivatives at (t, y), T*(y) <= t <= T*(y) + epsilon.
  /// Throws BeforeBlowup, WindowExceeded.
  FrontPoint eval(double t, double y) const;

  /// (y, L) on the characteristic through beta at s.
  std::pair<double, double> characteristic(double s, double beta) const;

  const std::vector<BetaDiagnostics>& diagnostics() const { return diag_; }
  double min_dy_dbeta() const { return min_dy_dbeta_; }
  double max_dy_dbeta() const { return max_dy_dbeta_; }
  /// max |L| / s over the grid (the fitted a priori constant).
  double fitted_M() const { return fitted_M_; }

 private:
  const BlowupCurve* curve_ = nullptr;
  FrontOptions opts_;
  double s_max_ = 0.0;
  num::Chebyshev2D ymap_, lmap_;  // over (s, beta)
  std::vector<BetaDiagnostics> diag_;
  double min_dy_dbeta_ = 0.0, max_dy_dbeta_ = 0.0;
  double fitted_M_ = 0.0;
};

/// Traces u_minus / u_plus on the front and the RH / entropy diagnostics.
/// Throws BranchUnavailable.
FrontState front_states(const ShockFront& front, double t, double y);

/// |dw_dt [u] - [F] + dw_dy [G]| / max(|[u]|, 1e-14). Throws DegenerateJump.
double check_rh(const FrontState& st, const Problem& p);

/// (margin_plus, margin_minus); throws EntropyViolated past the curve.
std::pair<double, double> check_entropy(const FrontState& st, const Problem& p);

}  // namespace shockform
