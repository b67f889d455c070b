#include "shockform/shock_front.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/char_geometry.hpp"
#include "shockform/inversion.hpp"

namespace shockform {

double jump_average(const FluxEvaluator& flux, double u_minus, double u_plus) {
  const double du = u_plus - u_minus;
  if (std::fabs(du) <= 1e-14) return flux(0.5 * (u_plus + u_minus)).speed[0];
  // Mean of F' over the segment. Same value as (F(u+) - F(u-)) / [u], but
  // without the cancellation that the 1/s scaling of the front equation
  // would otherwise amplify.
  static const num::Quadrature q = num::gauss_legendre(8, 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    acc += q.weights[i] * flux(u_minus + q.nodes[i] * du).speed[0];
  return acc;
}

double jump_average_x(const Problem& p, double u_minus, double u_plus) {
  return jump_average([&](double u) { return p.flux_x(u); }, u_minus, u_plus);
}

double jump_average_y(const Problem& p, double u_minus, double u_plus) {
  return jump_average([&](double u) { return p.flux_y(u); }, u_minus, u_plus);
}

namespace {

std::pair<const Root*, const Root*> outer_roots(const CharRoots& r) {
  return {r.find(Branch::minus), r.find(Branch::plus)};
}

CharRoots invert_outer(const BlowupCurve& curve, const GammaData& gd, double t, double x) {
  try {
    return invert_point(curve.problem(), gd, t, x, gd.gamma.y,
                        {.skip_center = true, .t_limit = curve.t_limit()});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RootCountUnexpected || e.code() == ErrorCode::ResidualTooLarge ||
        e.code() == ErrorCode::FoldNotFound)
      throw Error(ErrorCode::BranchUnavailable, e.what());
    throw;
  }
}

}  // namespace

FrontCoeffs front_coefficients(const BlowupCurve& curve, const GammaData& gd, double s,
                               double lambda) {
  const Problem& p = curve.problem();
  const GammaSample& g = gd.gamma;
  const double tau_coef = g.tangent_slope;
  const double t = g.t_star + s * s;
  const double x = g.x_star + tau_coef * s * s + s * s * s * lambda;

  const CharRoots r = invert_outer(curve, gd, t, x);
  const auto [rm, rp] = outer_roots(r);
  if (!rm || !rp) {
    std::ostringstream os;
    os << "outer branches missing at (s, lambda, y) = (" << s << ", " << lambda << ", " << g.y
       << "), region " << to_string(r.region);
    throw Error(ErrorCode::BranchUnavailable, os.str());
  }

  FrontCoeffs c;
  c.u_minus = p.u0(rm->xi, rm->eta);
  c.u_plus = p.u0(rp->xi, rp->eta);
  c.F_avg = jump_average_x(p, c.u_minus, c.u_plus);
  c.G_avg = jump_average_y(p, c.u_minus, c.u_plus);
  c.dTstar_dy = g.dt_star;

  c.cancellation = g.phi_star - (1.0 - g.psi_star * g.dt_star) * tau_coef - g.psi_star * g.dx_star;
  if (!(std::fabs(c.cancellation) <= 1e-6)) {
    std::ostringstream os;
    os << "vanishing bracket evaluates to " << c.cancellation << " at y = " << g.y;
    throw Error(ErrorCode::CancellationResidual, os.str());
  }

  const double k = 1.0 - c.G_avg * c.dTstar_dy;
  c.C0 = 0.5 * k;
  c.C1 = c.G_avg;
  const double bracket = c.F_avg - k * tau_coef - c.G_avg * g.dx_star;
  c.C2 = -1.5 * lambda * k - s * c.G_avg * g.dtangent + bracket / s;
  return c;
}

FrontCoeffs front_coefficients(const BlowupCurve& curve, double s, double lambda, double y) {
  return front_coefficients(curve, curve.data_at(y), s, lambda);
}

ShockFront ShockFront::solve(const BlowupCurve& curve, const FrontOptions& opts) {
  ShockFront f;
  f.curve_ = &curve;
  f.opts_ = opts;
  f.s_max_ = std::sqrt(opts.epsilon);
  const auto s_nodes = num::chebyshev_lobatto(opts.n_s, 0.0, f.s_max_);
  const auto b_nodes = num::chebyshev_lobatto(opts.n_beta, opts.beta_lo, opts.beta_hi);
  const int ns = opts.n_s + 1, nb = opts.n_beta + 1;

  std::vector<double> yv(ns * nb), lv(ns * nb);
  f.diag_.resize(nb);
  num::parallel_for(nb, opts.threads, [&](int j) {
    SingularIvpSpec spec;
    spec.rhs = [&](double s, double l, double y) {
      const FrontCoeffs c = front_coefficients(curve, s, l, y);
      return std::pair{c.C1 / c.C0, c.C2 / c.C0};
    };
    spec.M = opts.M;
    spec.s_max = f.s_max_;
    spec.picard_nodes = opts.picard_nodes;
    spec.quadrature_nodes = opts.quadrature_nodes;
    spec.ode_tol = opts.ode_tol;
    spec.s_floor = opts.s_floor_fraction * f.s_max_;
    spec.stagnation_tol = opts.picard_noise_tol;
    BetaDiagnostics& d = f.diag_[j];
    d.beta = b_nodes[j];
    spec.alpha = measure_alpha(spec, f.s_max_ / 64.0, d.beta);
    d.alpha = spec.alpha;
    const IvpSolution sol = solve_singular_ivp(spec, d.beta, s_nodes);
    d.s0 = sol.s0;
    d.contraction_ratio = sol.max_contraction_ratio;
    d.bound_ratio = sol.max_bound_ratio;
    d.picard_iterations = static_cast<int>(sol.picard_distances.size());
    d.picard_stalled = sol.picard_stalled;
    d.picard_final_distance = sol.picard_distances.empty() ? 0.0 : sol.picard_distances.back();
    for (int i = 0; i < ns; ++i) {
      yv[i * nb + j] = sol.y[i];
      lv[i * nb + j] = sol.lambda[i];
    }
  });

  f.ymap_ = num::Chebyshev2D({0.0, f.s_max_}, {opts.beta_lo, opts.beta_hi}, opts.n_s, opts.n_beta, yv);
  f.lmap_ = num::Chebyshev2D({0.0, f.s_max_}, {opts.beta_lo, opts.beta_hi}, opts.n_s, opts.n_beta, lv);

  f.min_dy_dbeta_ = INFINITY;
  f.max_dy_dbeta_ = -INFINITY;
  for (int i = 0; i < 2 * ns - 1; ++i) {
    const double s = f.s_max_ * i / (2.0 * (ns - 1));
    for (int j = 0; j < 2 * nb - 1; ++j) {
      const double b = opts.beta_lo + (opts.beta_hi - opts.beta_lo) * j / (2.0 * (nb - 1));
      const double dyb = f.ymap_(s, b).d1;
      f.min_dy_dbeta_ = std::min(f.min_dy_dbeta_, dyb);
      f.max_dy_dbeta_ = std::max(f.max_dy_dbeta_, dyb);
    }
  }
  if (!(f.min_dy_dbeta_ >= 0.25 && f.max_dy_dbeta_ <= 4.0)) {
    std::ostringstream os;
    os << "dy/dbeta ranges over [" << f.min_dy_dbeta_ << ", " << f.max_dy_dbeta_ << "]";
    throw Error(ErrorCode::MonotonicityLost, os.str());
  }
  f.fitted_M_ = 0.0;
  for (int i = 1; i < ns; ++i)
    for (int j = 0; j < nb; ++j)
      f.fitted_M_ = std::max(f.fitted_M_, std::fabs(lv[i * nb + j]) / s_nodes[i]);
  return f;
}

std::pair<double, double> ShockFront::characteristic(double s, double beta) const {
  return {ymap_(s, beta).value, lmap_(s, beta).value};
}

FrontPoint ShockFront::eval(double t, double y) const {
  const GammaSample g = curve_->at(y);
  FrontPoint fp;
  fp.t = t;
  fp.y = y;
  const double tau = t - g.t_star;
  if (tau < -1e-14 * (1.0 + g.t_star)) {
    std::ostringstream os;
    os.precision(12);
    os << "t = " << t << " precedes T*(" << y << ") = " << g.t_star;
    throw Error(ErrorCode::BeforeBlowup, os.str());
  }
  if (tau > opts_.epsilon * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "t - T*(y) = " << tau << " exceeds the front window " << opts_.epsilon;
    throw Error(ErrorCode::WindowExceeded, os.str());
  }
  const double s = std::sqrt(std::max(tau, 0.0));
  fp.s = s;

  // beta with y(s; beta) = y
  double b = y;
  const double lo = opts_.beta_lo, hi = opts_.beta_hi;
  for (int it = 0; it < 60; ++it) {
    const auto e = ymap_(s, std::clamp(b, lo, hi));
    const double step = (e.value - y) / e.d1;
    b = std::clamp(b, lo, hi) - step;
    if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(b))) break;
  }
  if (b < lo - 1e-12 || b > hi + 1e-12) {
    std::ostringstream os;
    os << "y = " << y << " is not covered by the characteristic fan at s = " << s;
    throw Error(ErrorCode::WindowExceeded, os.str());
  }
  b = std::clamp(b, lo, hi);
  fp.beta = b;

  const auto Y = ymap_(s, b);
  const auto L = lmap_(s, b);
  const double lam_s = L.d0 - L.d1 * Y.d0 / Y.d1;
  const double lam_y = L.d1 / Y.d1;
  fp.lambda = L.value;
  const double k = g.tangent_slope;
  fp.w = g.x_star + k * s * s + s * s * s * L.value;
  fp.dw_dt = k + 1.5 * s * L.value + 0.5 * s * s * lam_s;
  fp.dw_dy = g.dx_star + g.dtangent * s * s + s * s * s * lam_y - g.dt_star * fp.dw_dt;
  return fp;
}

namespace {

double rh_value(const FrontState& st, const Problem& p) {
  const double du = st.u_plus - st.u_minus;
  const double dF = p.flux_x(st.u_plus).primitive - p.flux_x(st.u_minus).primitive;
  const double dG = p.flux_y(st.u_plus).primitive - p.flux_y(st.u_minus).primitive;
  return std::fabs(st.dw_dt * du - dF + st.dw_dy * dG) / std::max(std::fabs(du), 1e-14);
}

std::pair<double, double> entropy_margins(const FrontState& st, const Problem& p) {
  const double fp = p.flux_x(st.u_plus).speed[0], gp = p.flux_y(st.u_plus).speed[0];
  const double fm = p.flux_x(st.u_minus).speed[0], gm = p.flux_y(st.u_minus).speed[0];
  return {st.dw_dt - (fp - st.dw_dy * gp), (fm - st.dw_dy * gm) - st.dw_dt};
}

}  // namespace

FrontState front_states(const ShockFront& front, double t, double y) {
  const BlowupCurve& curve = front.curve();
  const Problem& p = curve.problem();
  const FrontPoint fp = front.eval(t, y);
  const GammaData gd = curve.data_at(y);
  FrontState st;
  st.t = t;
  st.y = y;
  st.w = fp.w;
  st.tau = t - gd.gamma.t_star;
  st.dw_dt = fp.dw_dt;
  st.dw_dy = fp.dw_dy;
  if (fp.s == 0.0) {
    // Zero-strength shock on the curve itself; the foot is the (triple) root
    // Xi*, taken from the curve rather than re-solved.
    st.u_minus = st.u_plus = gd.gamma.u_star;
  } else {
    const CharRoots r = invert_outer(curve, gd, t, fp.w);
    const auto [rm, rp] = outer_roots(r);
    if (!rm || !rp) {
      std::ostringstream os;
      os << "front point (" << t << ", " << fp.w << ", " << y << ") lies in region "
         << to_string(r.region);
      throw Error(ErrorCode::BranchUnavailable, os.str());
    }
    st.u_minus = p.u0(rm->xi, rm->eta);
    st.u_plus = p.u0(rp->xi, rp->eta);
  }
  st.rh_residual = rh_value(st, p);
  std::tie(st.entropy_margin_plus, st.entropy_margin_minus) = entropy_margins(st, p);
  return st;
}

double check_rh(const FrontState& st, const Problem& p) {
  if (std::fabs(st.u_plus - st.u_minus) <= 1e-14 && st.tau > 1e-6) {
    std::ostringstream os;
    os << "no jump across the front at (t, y) = (" << st.t << ", " << st.y << ")";
    throw Error(ErrorCode::DegenerateJump, os.str());
  }
  return rh_value(st, p);
}

std::pair<double, double> check_entropy(const FrontState& st, const Problem& p) {
  const auto m = entropy_margins(st, p);
  if (st.tau > 1e-6 && (m.first <= -1e-12 || m.second <= -1e-12)) {
    std::ostringstream os;
    os << "entropy margins (" << m.first << ", " << m.second << ") at (t, y) = (" << st.t << ", "
       << st.y << ")";
    throw Error(ErrorCode::EntropyViolated, os.str());
  }
  return m;
}

}  // namespace shockform
