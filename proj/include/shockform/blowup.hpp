#pragma once

// First blowup point, the nondegeneracy check, the blowup curve traced by
// Newton continuation on (D, dD/dxi) = 0, and the cusp coefficients.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shockform/errors.hpp"
#include "shockform/problem.hpp"

namespace shockform {

struct GncReport {
  double xi0 = 0.0;
  double eta0 = 0.0;
  double min_h = 0.0;
  double grid_min_h = 0.0;
  double gradient_norm = 0.0;
  std::array<double, 3> hessian{};      // (hxx, hxy, hyy)
  std::array<double, 2> eigenvalues{};  // ascending
  bool unique_min = false;
  double t_star0 = 0.0;
  int candidates = 0;
  // Set when a clause of the condition fails.
  std::optional<ErrorCode> failure;
  std::string failure_detail;
};

/// Never throws for condition failures; they are recorded in the report.
GncReport analyze_gnc(const Problem& p, int grid = 128);

/// Throws NoNegativeMin or GncViolated when the condition fails.
GncReport find_first_blowup(const Problem& p, int grid = 128);

struct GammaSample {
  double y = 0.0;
  double t_star = 0.0;
  double xi_star = 0.0;
  double y_star = 0.0;  // foot eta on the curve
  double x_star = 0.0;
  double tangent_slope = 0.0;
  double newton_residual = 0.0;
  int newton_iterations = 0;

  // Derivatives along the curve (d/dy).
  double dt_star = 0.0;
  double dxi_star = 0.0;
  double dy_star = 0.0;
  double dx_star = 0.0;
  double dtangent = 0.0;

  double u_star = 0.0;  // u0 at the foot
  double phi_star = 0.0, psi_star = 0.0;
  double dphi_dxi = 0.0, dphi_deta = 0.0, dpsi_dxi = 0.0, dpsi_deta = 0.0;
  double dY_dt = 0.0;  // dY/dt at the foot
  double jacobian_det = 0.0;
};

struct CuspCoeffs {
  double y = 0.0;
  double D0 = 0.0, D1 = 0.0, D2 = 0.0, D3 = 0.0;
  double A1 = 0.0, A2 = 0.0;
  double a_star = 0.0, b_star = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double theta0 = 0.0;
};

/// One point of the curve together with its coefficients.
struct GammaData {
  GammaSample gamma;
  CuspCoeffs coeffs;
};

struct CurveOptions {
  double accept_residual = 1e-10;
  double target_residual = 1e-12;
  int max_iterations = 50;
  double singular_det = 1e-6;
  int max_halvings = 20;
};

/// Newton solve of (D, D') = 0 at one y from a seed (t, xi).
GammaSample solve_gamma_point(const Problem& p, double y, double t_seed, double xi_seed,
                              double t_limit, const CurveOptions& opts = {});

/// D/dt of the curve time by the implicit-derivative formula of the
/// (D, D') system (equal to GammaSample::dt_star; exposed for checks).
double dtstar_dy_formula(const Problem& p, const GammaSample& g, double t_limit);

/// Sign violations throw SignViolation.
CuspCoeffs cusp_coeffs(const Problem& p, const GammaSample& g, double t_limit);

/// Unchecked variant (no sign validation).
CuspCoeffs cusp_coeffs_raw(const Problem& p, const GammaSample& g, double t_limit);

class BlowupCurve {
 public:
  /// Traces the curve over y_grid by continuation from the first blowup
  /// point in both directions.
  static BlowupCurve build(const Problem& p, const GncReport& gnc, std::span<const double> y_grid,
                           const CurveOptions& opts = {});

  const Problem& problem() const { return *problem_; }
  const GncReport& gnc() const { return gnc_; }
  const std::vector<GammaSample>& samples() const { return samples_; }
  /// Admissible time window for implicit solves: (4/3) T_star0.
  double t_limit() const { return t_limit_; }
  double y0() const { return y0_; }

  /// Exact curve point at arbitrary y, continued from the nearest sample.
  GammaSample at(double y) const;
  GammaData data_at(double y) const;

 private:
  const Problem* problem_ = nullptr;
  GncReport gnc_;
  std::vector<GammaSample> samples_;  // sorted by y
  std::vector<GammaSample> anchors_;  // samples plus the seed
  CurveOptions opts_;
  double t_limit_ = 0.0;
  double y0_ = 0.0;
};

/// Convenience wrapper returning just the samples.
std::vector<GammaSample> blowup_curve(const Problem& p, const GncReport& gnc,
                                      std::span<const double> y_grid);

struct CuspFolds {
  double xi_left = 0.0;   // fold whose image is x_plus
  double xi_right = 0.0;  // fold whose image is x_minus
  double x_minus = 0.0;
  double x_plus = 0.0;
};

/// Fold points of xi -> x at fixed (t, y), t >= T*(y). Throws BeforeBlowup,
/// FoldNotFound.
CuspFolds cusp_boundary(const Problem& p, const GammaData& g, double t, double t_limit);

/// Leading-order prediction (x_minus, x_plus) of the boundary.
std::pair<double, double> cusp_boundary_expansion(const GammaData& g, double t);

/// Largest delta (starting from delta0, halving) for which the curve and all
/// sign conditions hold on a y grid of `count` points in (-delta, delta).
double select_delta(const Problem& p, const GncReport& gnc, double delta0, int count = 9);

}  // namespace shockform
