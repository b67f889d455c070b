#pragma once

// The entropy solution u(t, x, y) near the blowup curve: single-valued
// inversion before blowup and outside the cusp, branch selection by the side
// of the shock front inside it. Also exponent fits and the weighted sup
// checks of the singular behaviour near the curve.

#include <limits>
#include <optional>
#include <vector>

#include "shockform/inversion.hpp"
#include "shockform/shock_front.hpp"

namespace shockform {

struct FieldSample {
  double t = 0.0, x = 0.0, y = 0.0;
  double u = 0.0;
  double u_t = 0.0, u_x = 0.0, u_y = 0.0;
  double u_T = 0.0;  // derivative along (1, kappa(y), 0), kappa the tangent speed
  Region region = Region::pre_blowup;
  Branch branch = Branch::center;
  double xi = 0.0, eta = 0.0;
  double jacobian_D = 0.0;
  bool has_gradient = false;
};

/// u only. `front` may be null when no point inside the cusp is queried
/// (BranchUnavailable otherwise). Throws OnShock within 1e-12 of the front.
FieldSample eval_solution(const BlowupCurve& curve, const ShockFront* front, double t, double x,
                          double y);

/// u and its exact gradient at the selected root. Throws JacobianVanishing.
FieldSample eval_gradient(const BlowupCurve& curve, const ShockFront* front, double t, double x,
                          double y);

/// u before the first blowup time, anywhere in the box (no curve needed).
FieldSample eval_smooth(const Problem& p, double t, double x, double y,
                        double t_limit = std::numeric_limits<double>::infinity());

/// Same selection against an explicitly given shock position (used by the
/// weak-form check to probe misplaced fronts).
FieldSample eval_with_front(const BlowupCurve& curve, double w, double t, double x, double y,
                            bool gradient);

enum class RayDirection {
  x_at_fixed_t,  // t = T*(y), x = x*(y) + r
  t_at_fixed_x,  // x = x*(y), t = T*(y) - r
  tangent,       // t = T*(y) - r, x = x*(y) - kappa r
};
enum class RayQuantity { u_increment, du_dx, grad_norm, tangential };

struct RaySpec {
  double y = 0.0;
  RayDirection direction = RayDirection::x_at_fixed_t;
  RayQuantity quantity = RayQuantity::u_increment;
  double r_min = 1e-7;
  double r_max = 1e-3;
  int samples = 12;  // dyadic-ish (geometric) samples
};

struct ExponentFit {
  RaySpec ray;
  double slope = 0.0;
  double stderr_ = 0.0;
  double r2 = 0.0;
  double intercept = 0.0;
  std::vector<double> r, value;
};

/// Log–log fit along a ray. Throws InsufficientDecades, ShockCrossed.
ExponentFit fit_exponent(const BlowupCurve& curve, const ShockFront* front, const RaySpec& ray);

std::string_view to_string(RayDirection d);
std::string_view to_string(RayQuantity q);

enum class Gauge { e0, e1, eT };
std::string_view to_string(Gauge g);

struct GaugeSup {
  double sup = 0.0;
  double at_t = 0.0, at_x = 0.0;
  int samples = 0;
};

/// Sup over a midpoint grid of n x n offsets (dt, varsigma) in
/// [-dt_max, dt_max] x [-dx_max, dx_max] around (T*(y), x**(t, y)) of
///   e0: |u - u*| / g,  e1: |grad u| g^2,  eT: |d_T u| g,
/// with g = |t - T*|^(1/2) + |varsigma|^(1/3).
GaugeSup gauge_sup(const BlowupCurve& curve, const ShockFront* front, double y, Gauge kind,
                   double dt_max, double dx_max, int n);

struct WeakFormReport {
  double residual = 0.0;  // integral of u phi_t + F(u) phi_x + G(u) phi_y
  double scale = 0.0;     // same integral of absolute values
  double relative = 0.0;
};

/// Integral form of the conservation law against a polynomial bump centred
/// at (tc, xc, yc) with radii (rt, rx, ry); the x integrals are split at the
/// shock. `front_shift` displaces the shock used for branch selection.
WeakFormReport weak_form_check(const ShockFront& front, double tc, double xc, double yc,
                               double rt, double rx, double ry, int nodes = 16,
                               double front_shift = 0.0);

}  // namespace shockform
