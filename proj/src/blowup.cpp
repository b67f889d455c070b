#include "shockform/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/char_geometry.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

namespace {

std::string fmt_point(const char* label, double a, double b) {
  std::ostringstream os;
  os.precision(10);
  os << label << " (" << a << ", " << b << ")";
  return os.str();
}

struct Polished {
  double xi = 0.0, eta = 0.0, h = 0.0, grad = 0.0;
  std::array<double, 3> hess{};
  bool ok = false;
};

Polished polish_min(const Problem& p, double xi, double eta) {
  Polished r;
  const Box& box = p.box();
  for (int it = 0; it < 50; ++it) {
    const HJet h = eval_H(p, xi, eta);
    const auto g = h.gradient();
    const auto H2 = h.hessian();
    r.xi = xi;
    r.eta = eta;
    r.h = h.value();
    r.grad = std::hypot(g[0], g[1]);
    r.hess = H2;
    const double det = H2[0] * H2[2] - H2[1] * H2[1];
    const double scale = std::max({1.0, std::fabs(H2[0]), std::fabs(H2[2])});
    if (std::fabs(det) < 1e-10 * scale * scale) return r;  // singular Hessian
    if (r.grad <= 1e-14) {
      r.ok = true;
      return r;
    }
    const double dx = -(H2[2] * g[0] - H2[1] * g[1]) / det;
    const double dy = -(-H2[1] * g[0] + H2[0] * g[1]) / det;
    const double nx = xi + dx, ny = eta + dy;
    if (!box.contains(nx, ny, 0.0)) return r;
    if (std::hypot(dx, dy) <= 1e-15 * (1.0 + std::hypot(xi, eta))) {
      xi = nx;
      eta = ny;
      r.ok = true;
      break;
    }
    xi = nx;
    eta = ny;
  }
  const HJet h = eval_H(p, xi, eta);
  const auto g = h.gradient();
  r.xi = xi;
  r.eta = eta;
  r.h = h.value();
  r.grad = std::hypot(g[0], g[1]);
  r.hess = h.hessian();
  r.ok = r.grad <= 1e-8;
  return r;
}

std::array<double, 2> sym_eigenvalues(const std::array<double, 3>& m) {
  const double mean = 0.5 * (m[0] + m[2]);
  const double rad = std::hypot(0.5 * (m[0] - m[2]), m[1]);
  return {mean - rad, mean + rad};
}

}  // namespace

GncReport analyze_gnc(const Problem& p, int grid) {
  GncReport rep;
  const int n = std::max(128, grid);
  const Box& b = p.box();
  std::vector<double> hv(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double& { return hv[static_cast<std::size_t>(i) * n + j]; };
  auto xi_of = [&](int i) { return b.x_lo + (b.x_hi - b.x_lo) * i / (n - 1); };
  auto eta_of = [&](int j) { return b.y_lo + (b.y_hi - b.y_lo) * j / (n - 1); };
  double gmin = INFINITY;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const PhiPsiJet jt = eval_phi_psi(p, xi_of(i), eta_of(j), 1);
      at(i, j) = jt.phi_d(1, 0) + jt.psi_d(0, 1);
      gmin = std::min(gmin, at(i, j));
    }
  rep.grid_min_h = gmin;

  struct Cand {
    double h;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, c = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || c < 0 || a >= n || c >= n) continue;
          if (at(a, c) < at(i, j)) {
            local = false;
            break;
          }
        }
      if (local) cands.push_back({at(i, j), i, j});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& c) { return a.h < c.h; });
  rep.candidates = static_cast<int>(cands.size());
  if (cands.size() > 16) cands.resize(16);

  std::vector<Polished> mins;
  for (const Cand& c : cands) {
    const Polished pm = polish_min(p, xi_of(c.i), eta_of(c.j));
    if (!pm.ok) continue;
    bool dup = false;
    for (const auto& m : mins)
      if (std::hypot(m.xi - pm.xi, m.eta - pm.eta) < 1e-6) dup = true;
    if (!dup) mins.push_back(pm);
  }
  double global = gmin;
  for (const auto& m : mins) global = std::min(global, m.h);
  rep.min_h = global;

  // Default report fields from the best grid candidate.
  const Cand& best_grid = cands.front();
  rep.xi0 = xi_of(best_grid.i);
  rep.eta0 = eta_of(best_grid.j);

  if (!(global < 0.0)) {
    rep.failure = ErrorCode::NoNegativeMin;
    std::ostringstream os;
    os << "min H = " << global << " >= 0: no blowup in the domain box";
    rep.failure_detail = os.str();
    return rep;
  }

  const Polished* best = nullptr;
  int attaining = 0;
  for (const auto& m : mins) {
    if (m.h <= global + 1e-9) {
      ++attaining;
      if (!best || m.h < best->h) best = &m;
    }
  }
  rep.unique_min = attaining == 1;
  if (!best) {
    const Polished pm = polish_min(p, rep.xi0, rep.eta0);
    rep.gradient_norm = pm.grad;
    rep.hessian = pm.hess;
    rep.eigenvalues = sym_eigenvalues(pm.hess);
    rep.failure = ErrorCode::GncViolated;
    rep.failure_detail = fmt_point("no nondegenerate critical point attains min H near", rep.xi0,
                                   rep.eta0) +
                         " (Hessian singular or gradient nonzero)";
    return rep;
  }
  rep.xi0 = best->xi;
  rep.eta0 = best->eta;
  rep.min_h = best->h;
  rep.gradient_norm = best->grad;
  rep.hessian = best->hess;
  rep.eigenvalues = sym_eigenvalues(best->hess);
  rep.t_star0 = -1.0 / best->h;
  if (rep.gradient_norm > 1e-8) {
    rep.failure = ErrorCode::GncViolated;
    rep.failure_detail = "gradient of H nonzero at the minimum";
  } else if (!(rep.eigenvalues[0] > 0.0)) {
    rep.failure = ErrorCode::GncViolated;
    rep.failure_detail = "Hessian of H not positive definite at the minimum";
  } else if (!rep.unique_min) {
    rep.failure = ErrorCode::GncViolated;
    rep.failure_detail = "multiple global minima of H";
  }
  return rep;
}

GncReport find_first_blowup(const Problem& p, int grid) {
  GncReport r = analyze_gnc(p, grid);
  if (r.failure) throw Error(*r.failure, r.failure_detail);
  return r;
}

namespace {

struct Residual {
  double D, Dp;  // D and dD/dxi
  double norm() const { return std::max(std::fabs(D), std::fabs(Dp)); }
};

Residual gamma_residual(const Problem& p, double t, double xi, double y, double t_limit) {
  const double eta = solve_eta(p, t, xi, y, t_limit);
  const PhiPsiJet j = eval_phi_psi(p, xi, eta, 2);
  const double J = 1.0 + t * j.psi_d(0, 1);
  const double Yx = -t * j.psi_d(1, 0) / J;
  const double H = j.phi_d(1, 0) + j.psi_d(0, 1);
  const double Hx = j.phi_d(2, 0) + j.psi_d(1, 1);
  const double Hy = j.phi_d(1, 1) + j.psi_d(0, 2);
  return {1.0 + t * H, t * (Hx + Hy * Yx)};
}

void fill_sample(const Problem& p, GammaSample& g, const CharComposite& c) {
  const Series3& h = c.H;
  const double t = c.t;
  const double ht = h.partial({1, 0, 0}), hx = h.partial({0, 1, 0}), hy = h.partial({0, 0, 1});
  const double htx = h.partial({1, 1, 0}), hxx = h.partial({0, 2, 0}), hxy = h.partial({0, 1, 1});
  (void)hx;
  const double a11 = h.value() + t * ht, a12 = t * h.partial({0, 1, 0});
  const double a21 = htx, a22 = hxx;
  const double det = a11 * a22 - a12 * a21;
  const double r1 = -t * hy, r2 = -hxy;
  g.dt_star = (r1 * a22 - a12 * r2) / det;
  g.dxi_star = (a11 * r2 - a21 * r1) / det;
  g.jacobian_det = det;

  const auto& jt = c.jet;
  g.y_star = c.eta;
  g.phi_star = jt.phi.value();
  g.psi_star = jt.psi.value();
  g.dphi_dxi = jt.phi_d(1, 0);
  g.dphi_deta = jt.phi_d(0, 1);
  g.dpsi_dxi = jt.psi_d(1, 0);
  g.dpsi_deta = jt.psi_d(0, 1);
  g.x_star = g.xi_star + t * g.phi_star;
  g.tangent_slope = g.phi_star + g.psi_star * g.dphi_deta / g.dphi_dxi;
  g.u_star = c.u0.value();

  const double Yt = c.Y.partial({1, 0, 0}), Yx = c.Y.partial({0, 1, 0}),
               Yy = c.Y.partial({0, 0, 1});
  g.dY_dt = Yt;
  g.dy_star = Yt * g.dt_star + Yx * g.dxi_star + Yy;
  g.dx_star = g.dxi_star + g.dt_star * g.phi_star +
              t * (g.dphi_dxi * g.dxi_star + g.dphi_deta * g.dy_star);

  // kappa(xi, eta) = phi + psi phi_eta / phi_xi
  const double px = g.dphi_dxi, pe = g.dphi_deta;
  const double pxx = jt.phi_d(2, 0), pxe = jt.phi_d(1, 1), pee = jt.phi_d(0, 2);
  const double ratio = pe / px;
  const double k_xi = px + g.dpsi_dxi * ratio + g.psi_star * (pxe * px - pe * pxx) / (px * px);
  const double k_eta = pe + g.dpsi_deta * ratio + g.psi_star * (pee * px - pe * pxe) / (px * px);
  g.dtangent = k_xi * g.dxi_star + k_eta * g.dy_star;
  (void)p;
}

}  // namespace

GammaSample solve_gamma_point(const Problem& p, double y, double t_seed, double xi_seed,
                              double t_limit, const CurveOptions& opts) {
  double t = t_seed, xi = xi_seed;
  Residual res = gamma_residual(p, t, xi, y, t_limit);
  int it = 0;
  // Past the target, full steps are kept only while they still reduce the
  // residual: downstream scalings divide curve errors by s^3.
  for (; it < opts.max_iterations && res.norm() > 0.0; ++it) {
    const bool polishing = res.norm() <= opts.target_residual;
    const CharComposite c = char_composite(p, t, xi, y, t_limit);
    const Series3& h = c.H;
    const double a11 = h.value() + t * h.partial({1, 0, 0});
    const double a12 = t * h.partial({0, 1, 0});
    const double a21 = h.partial({1, 1, 0});
    const double a22 = h.partial({0, 2, 0});
    const double det = a11 * a22 - a12 * a21;
    if (std::fabs(det) < opts.singular_det) {
      std::ostringstream os;
      os << "Jacobian determinant " << det << " at y = " << y;
      throw Error(ErrorCode::JacobianNearSingular, os.str());
    }
    // second equation uses dD/dxi / t = h_xi
    const double f1 = res.D, f2 = res.Dp / t;
    const double dt = -(a22 * f1 - a12 * f2) / det;
    const double dx = -(-a21 * f1 + a11 * f2) / det;
    double lam = 1.0;
    Residual trial{};
    bool accepted = false;
    for (int k = 0; k < (polishing ? 1 : 12); ++k, lam *= 0.5) {
      try {
        trial = gamma_residual(p, t + lam * dt, xi + lam * dx, y, t_limit);
      } catch (const Error&) {
        continue;
      }
      if (trial.norm() < res.norm() || (!polishing && trial.norm() <= opts.target_residual)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    t += lam * dt;
    xi += lam * dx;
    res = trial;
  }
  if (!(res.norm() <= opts.accept_residual)) {
    std::ostringstream os;
    os << "curve Newton residual " << res.norm() << " at y = " << y;
    throw Error(ErrorCode::NewtonDiverged, os.str());
  }
  GammaSample g;
  g.y = y;
  g.t_star = t;
  g.xi_star = xi;
  g.newton_residual = res.norm();
  g.newton_iterations = it;
  fill_sample(p, g, char_composite(p, t, xi, y, t_limit));
  return g;
}

double dtstar_dy_formula(const Problem& p, const GammaSample& g, double t_limit) {
  const CharComposite c = char_composite(p, g.t_star, g.xi_star, g.y, t_limit);
  // -T H_eta Y_y / (H + T H_eta Y_t), with H_eta Y_y = h_y and H_eta Y_t = h_t
  return -g.t_star * c.H.partial({0, 0, 1}) / (c.H.value() + g.t_star * c.H.partial({1, 0, 0}));
}

CuspCoeffs cusp_coeffs_raw(const Problem& p, const GammaSample& g, double t_limit) {
  const CharComposite c = char_composite(p, g.t_star, g.xi_star, g.y, t_limit);
  const Series3& h = c.H;
  const Series3& ph = c.phi;
  const double T = g.t_star;
  CuspCoeffs k;
  k.y = g.y;
  k.D0 = -(h.value() + T * h.partial({1, 0, 0}));
  k.D1 = 0.5 * T * h.partial({0, 2, 0});
  k.D2 = T * h.partial({1, 1, 0});
  k.a_star = h.partial({0, 3, 0}) / 6.0;
  k.D3 = k.a_star * T;
  k.A1 = std::sqrt(k.D0 / k.D1);
  k.A2 = -(k.D1 * k.D2 + k.D0 * k.D3) / (2.0 * k.D1 * k.D1);
  const double p_tx = ph.partial({1, 1, 0});
  const double p_x = ph.partial({0, 1, 0});
  const double p_xxx = ph.partial({0, 3, 0});
  k.c1 = -(T * p_tx + p_x);
  k.c2 = T / 6.0 * p_xxx;
  k.b_star = -k.A1 * T * p_tx - k.A1 * h.value() - T / 6.0 * k.A1 * k.A1 * k.A1 * p_xxx;
  const double r = g.dpsi_dxi / g.dphi_dxi;
  k.theta0 = r * r;
  return k;
}

CuspCoeffs cusp_coeffs(const Problem& p, const GammaSample& g, double t_limit) {
  const CuspCoeffs k = cusp_coeffs_raw(p, g, t_limit);
  const std::pair<const char*, double> checks[] = {
      {"D0", k.D0}, {"D1", k.D1}, {"b*", k.b_star}, {"c1", k.c1}, {"c2", k.c2}};
  for (const auto& [name, v] : checks) {
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << name << " = " << v << " <= 0 at y = " << g.y;
      throw Error(ErrorCode::SignViolation, os.str());
    }
  }
  return k;
}

namespace {

GammaSample continue_to(const Problem& p, const GammaSample& from, double y, double t_limit,
                        const CurveOptions& opts, int depth) {
  const double dy = y - from.y;
  try {
    return solve_gamma_point(p, y, from.t_star + from.dt_star * dy,
                             from.xi_star + from.dxi_star * dy, t_limit, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::JacobianNearSingular || depth >= opts.max_halvings) throw;
  }
  const GammaSample mid = continue_to(p, from, from.y + 0.5 * dy, t_limit, opts, depth + 1);
  return continue_to(p, mid, y, t_limit, opts, depth + 1);
}

}  // namespace

BlowupCurve BlowupCurve::build(const Problem& p, const GncReport& gnc,
                               std::span<const double> y_grid, const CurveOptions& opts) {
  BlowupCurve c;
  c.problem_ = &p;
  c.gnc_ = gnc;
  c.opts_ = opts;
  c.t_limit_ = 4.0 / 3.0 * gnc.t_star0;
  const auto [x0, y0] = forward_char(p, gnc.t_star0, gnc.xi0, gnc.eta0);
  (void)x0;
  c.y0_ = y0;
  const GammaSample seed = solve_gamma_point(p, y0, gnc.t_star0, gnc.xi0, c.t_limit_, opts);

  std::vector<double> ys(y_grid.begin(), y_grid.end());
  std::sort(ys.begin(), ys.end());
  std::vector<GammaSample> up, down;
  GammaSample prev = seed;
  for (double y : ys) {
    if (y < y0) continue;
    prev = continue_to(p, prev, y, c.t_limit_, opts, 0);
    up.push_back(prev);
  }
  prev = seed;
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) {
    if (*it >= y0) continue;
    prev = continue_to(p, prev, *it, c.t_limit_, opts, 0);
    down.push_back(prev);
  }
  c.samples_.assign(down.rbegin(), down.rend());
  c.samples_.insert(c.samples_.end(), up.begin(), up.end());
  if (c.samples_.empty() || std::none_of(c.samples_.begin(), c.samples_.end(),
                                         [&](const GammaSample& g) { return g.y == y0; }))
    c.anchors_.push_back(seed);
  c.anchors_.insert(c.anchors_.end(), c.samples_.begin(), c.samples_.end());
  return c;
}

GammaSample BlowupCurve::at(double y) const {
  const GammaSample* best = nullptr;
  for (const auto& g : anchors_)
    if (!best || std::fabs(g.y - y) < std::fabs(best->y - y)) best = &g;
  if (best->y == y) return *best;
  return continue_to(*problem_, *best, y, t_limit_, opts_, 0);
}

GammaData BlowupCurve::data_at(double y) const {
  GammaData d;
  d.gamma = at(y);
  d.coeffs = cusp_coeffs(*problem_, d.gamma, t_limit_);
  return d;
}

std::vector<GammaSample> blowup_curve(const Problem& p, const GncReport& gnc,
                                      std::span<const double> y_grid) {
  return BlowupCurve::build(p, gnc, y_grid).samples();
}

CuspFolds cusp_boundary(const Problem& p, const GammaData& gd, double t, double t_limit) {
  const GammaSample& g = gd.gamma;
  const CuspCoeffs& k = gd.coeffs;
  const double tau = t - g.t_star;
  if (tau < -1e-14 * (1.0 + g.t_star)) {
    std::ostringstream os;
    os.precision(12);
    os << "t = " << t << " precedes the blowup time " << g.t_star << " at y = " << g.y;
    throw Error(ErrorCode::BeforeBlowup, os.str());
  }
  CuspFolds f;
  if (tau <= 0.0) {
    const MapSample m = char_map(p, t, g.xi_star, g.y, 0, t_limit);
    f = {g.xi_star, g.xi_star, m.x, m.x};
    return f;
  }
  const double s = std::sqrt(tau);
  const Box& box = p.box();
  auto dX = [&](double xi) {
    const MapSample m = char_map(p, t, xi, g.y, 2, t_limit);
    return std::pair{m.dx, m.d2x};
  };
  double center = g.xi_star + k.A2 * tau;
  double dc = dX(center).first;
  if (!(dc < 0.0)) {
    center = g.xi_star;
    dc = dX(center).first;
  }
  if (!(dc < 0.0)) throw Error(ErrorCode::FoldNotFound, "map is not folded at the curve foot");

  auto fold = [&](double dir) {
    double step = 1.5 * k.A1 * s;
    for (int i = 0; i < 40; ++i, step *= 2.0) {
      double b = center + dir * step;
      b = std::clamp(b, box.x_lo, box.x_hi);
      const double fb = dX(b).first;
      if (fb > 0.0) {
        const auto r = num::bracketed_newton(dX, center, b, dc, fb, 1e-16);
        if (!r.converged) break;
        return r.x;
      }
      if (b == box.x_lo || b == box.x_hi) break;
    }
    throw Error(ErrorCode::FoldNotFound, "no fold point found within the domain box");
  };
  f.xi_left = fold(-1.0);
  f.xi_right = fold(+1.0);
  f.x_plus = char_map(p, t, f.xi_left, g.y, 0, t_limit).x;
  f.x_minus = char_map(p, t, f.xi_right, g.y, 0, t_limit).x;
  return f;
}

std::pair<double, double> cusp_boundary_expansion(const GammaData& gd, double t) {
  const double tau = std::max(0.0, t - gd.gamma.t_star);
  const double xss = gd.gamma.x_star + gd.gamma.tangent_slope * tau;
  const double half = gd.coeffs.b_star * tau * std::sqrt(tau);
  return {xss - half, xss + half};
}

double select_delta(const Problem& p, const GncReport& gnc, double delta0, int count) {
  double delta = delta0;
  for (int attempt = 0; attempt < 12; ++attempt, delta *= 0.5) {
    try {
      const auto [x0, y0] = forward_char(p, gnc.t_star0, gnc.xi0, gnc.eta0);
      (void)x0;
      std::vector<double> ys(count);
      for (int i = 0; i < count; ++i)
        ys[i] = y0 + 0.9 * delta * (count == 1 ? 0.0 : -1.0 + 2.0 * i / (count - 1));
      const BlowupCurve c = BlowupCurve::build(p, gnc, ys);
      for (const auto& g : c.samples()) cusp_coeffs(p, g, c.t_limit());
      return delta;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::SignViolation, "no admissible delta found by halving");
}

}  // namespace shockform
