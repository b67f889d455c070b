#pragma once

// Conservation-law problem instance: u_t + F(u)_x + G(u)_y = 0, u(0) = u0.
//
// Jets are supplied analytically by the caller; finite differences are used
// only to validate them when a Problem is assembled.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "shockform/series.hpp"

namespace shockform {

struct Box {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  bool empty() const { return !(x_hi > x_lo) || !(y_hi > y_lo); }
  bool contains(double x, double y, double slack = 1e-12) const {
    return x >= x_lo - slack && x <= x_hi + slack && y >= y_lo - slack && y <= y_hi + slack;
  }
  double half_width() const {
    const double hx = 0.5 * (x_hi - x_lo);
    const double hy = 0.5 * (y_hi - y_lo);
    return hx < hy ? hx : hy;
  }
};

/// Flux primitive and the derivatives of its characteristic speed at one
/// state u: primitive = F(u), speed[k] = F^(k+1)(u).
struct FluxJet {
  double primitive = 0.0;
  std::array<double, 5> speed{};
};

using FluxEvaluator = std::function<FluxJet(double u)>;

/// Taylor series of u0 around (x, y) in (dx, dy), exact through `order`.
using DataEvaluator = std::function<Series2(double x, double y, int order)>;

struct ProblemDefinition {
  FluxEvaluator flux_x;  // F
  FluxEvaluator flux_y;  // G
  DataEvaluator initial;
  Box box;
  std::optional<std::string> preset_id;
};

struct ValidationOptions {
  int samples = 128;
  double rel_tol = 1e-6;
  std::uint32_t seed = 0;
};

class Problem {
 public:
  /// Validates every analytic jet against Richardson-extrapolated central
  /// differences of the next-lower entry at quasi-random samples.
  /// Throws JetMismatch or DomainEmpty.
  static Problem make(ProblemDefinition def, const ValidationOptions& opts = {});

  FluxJet flux_x(double u) const { return def_.flux_x(u); }
  FluxJet flux_y(double u) const { return def_.flux_y(u); }

  /// Throws OutOfDomain outside the box.
  Series2 initial_data(double x, double y, int order = kSeriesMaxOrder) const;
  double u0(double x, double y) const { return initial_data(x, y, 0).value(); }

  const Box& box() const { return def_.box; }
  const std::optional<std::string>& preset_id() const { return def_.preset_id; }

  /// Largest relative jet discrepancy seen during validation.
  double validation_error() const { return validation_error_; }

 private:
  explicit Problem(ProblemDefinition def) : def_(std::move(def)) {}

  ProblemDefinition def_;
  double validation_error_ = 0.0;
};

/// phi = f(u0), psi = g(u0) as Taylor series in (dxi, deta).
struct PhiPsiJet {
  Series2 phi;
  Series2 psi;

  double phi_d(int i, int j) const { return phi.partial({i, j}); }
  double psi_d(int i, int j) const { return psi.partial({i, j}); }
};

/// H = d_xi phi + d_eta psi with partials through third order.
struct HJet {
  Series2 series{3};

  double value() const { return series.value(); }
  double d(int i, int j) const { return series.partial({i, j}); }
  std::array<double, 2> gradient() const { return {d(1, 0), d(0, 1)}; }
  std::array<double, 3> hessian() const { return {d(2, 0), d(1, 1), d(0, 2)}; }
};

PhiPsiJet eval_phi_psi(const Problem& p, double xi, double eta, int order = kSeriesMaxOrder);
HJet eval_H(const Problem& p, double xi, double eta);

/// H assembled as f'(u0) u0_x + g'(u0) u0_y, an independent route used to
/// cross-check eval_H.
HJet eval_H_chain_rule(const Problem& p, double xi, double eta);

/// Built-in presets: "preset-a" (F = u^2/2, G = 0) and "preset-b"
/// (F = u^2/2, G = u^3/3), both with u0 = -x + x^3 + 3 x y^2 on [-1/2,1/2]^2.
/// "preset-skew" adds u^3/10 to F; that breaks the (x, u) -> (-x, -u)
/// symmetry that pins the front of the other two at x = 0.
Problem make_preset(std::string_view name);
Problem preset_a();
Problem preset_b();
Problem preset_skew();

/// Building blocks for presets and tests.
FluxEvaluator polynomial_flux(std::array<double, 6> coeffs);  // F(u) = sum c_k u^k
DataEvaluator cubic_preset_data();

}  // namespace shockform
