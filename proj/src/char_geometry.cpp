#include "shockform/char_geometry.hpp"

#include <cmath>
#include <sstream>

#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

namespace {

struct PsiSample {
  double psi;
  double psi_eta;
};

PsiSample psi_sample(const Problem& p, double xi, double eta) {
  const Series2 u = p.initial_data(xi, eta, 1);
  const FluxJet g = p.flux_y(u.value());
  return {g.speed[0], g.speed[1] * u.partial({0, 1})};
}

void check_time(double t, double t_limit) {
  if (!(t >= 0.0) || t > t_limit) {
    std::ostringstream os;
    os << "time " << t << " outside the admissible window [0, " << t_limit << "]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
}

constexpr double kResidualTarget = 1e-14;
constexpr double kResidualAccept = 1e-12;

double bracket_solve(const Problem& p, double t, double xi, double y) {
  const Box& box = p.box();
  auto r = [&](double eta) {
    const PsiSample s = psi_sample(p, xi, eta);
    return std::pair{eta + t * s.psi - y, 1.0 + t * s.psi_eta};
  };
  const double e0 = std::clamp(y, box.y_lo, box.y_hi);
  const double r0 = r(e0).first;
  if (r0 == 0.0) return e0;
  const double dir = r0 > 0 ? -1.0 : 1.0;
  double step = 1e-3 * (box.y_hi - box.y_lo);
  double a = e0, fa = r0;
  for (int k = 0; k < 60; ++k) {
    double b = a + dir * step;
    b = std::clamp(b, box.y_lo, box.y_hi);
    const double fb = r(b).first;
    if ((fb > 0) != (fa > 0) || fb == 0.0) {
      const auto res = num::bracketed_newton(r, a, b, fa, fb, 1e-16, kResidualTarget);
      return res.x;
    }
    if (b == box.y_lo || b == box.y_hi)
      throw Error(ErrorCode::OutOfDomain, "implicit foot eta leaves the domain box");
    a = b;
    fa = fb;
    step *= 2.0;
  }
  throw Error(ErrorCode::NewtonDiverged, "could not bracket the implicit foot eta");
}

}  // namespace

std::pair<double, double> forward_char(const Problem& p, double t, double xi, double eta) {
  if (!(t >= 0.0)) throw Error(ErrorCode::OutOfDomain, "negative time");
  const PhiPsiJet j = eval_phi_psi(p, xi, eta, 0);
  return {xi + t * j.phi.value(), eta + t * j.psi.value()};
}

double solve_eta(const Problem& p, double t, double xi, double y, double t_limit) {
  check_time(t, t_limit);
  if (t == 0.0) return y;
  const Box& box = p.box();
  double eta = std::clamp(y, box.y_lo, box.y_hi);
  double last = INFINITY;
  for (int it = 0; it < 30; ++it) {
    const PsiSample s = psi_sample(p, xi, eta);
    const double r = eta + t * s.psi - y;
    if (std::fabs(r) <= kResidualTarget * (1.0 + std::fabs(y))) return eta;
    const double J = 1.0 + t * s.psi_eta;
    if (std::fabs(J) < 1e-6) {
      std::ostringstream os;
      os << "1 + t psi_eta = " << J << " at (t, xi, eta) = (" << t << ", " << xi << ", " << eta
         << ")";
      throw Error(ErrorCode::DegenerateImplicit, os.str());
    }
    if (std::fabs(r) >= last) break;  // not contracting; fall back
    last = std::fabs(r);
    const double next = eta - r / J;
    if (!box.contains(xi, next)) break;
    if (next == eta) return eta;
    eta = next;
  }
  const double e = bracket_solve(p, t, xi, y);
  const PsiSample s = psi_sample(p, xi, e);
  const double r = e + t * s.psi - y;
  if (std::fabs(r) > kResidualAccept) {
    std::ostringstream os;
    os << "implicit foot residual " << r;
    throw Error(ErrorCode::NewtonDiverged, os.str());
  }
  return e;
}

YJet solve_Y(const Problem& p, double t, double xi, double y, double t_limit) {
  YJet Y;
  Y.eta = solve_eta(p, t, xi, y, t_limit);
  const PhiPsiJet j = eval_phi_psi(p, xi, Y.eta, 3);
  const auto ps = [&](int a, int b) { return j.psi_d(a, b); };
  const double psi = ps(0, 0);
  Y.residual = Y.eta + t * psi - y;
  const double J = 1.0 + t * ps(0, 1);
  if (std::fabs(J) < 1e-6) throw Error(ErrorCode::DegenerateImplicit, "1 + t psi_eta vanishes");

  // G(t, xi, Y) = Y + t psi(xi, Y) - y = 0, differentiated implicitly.
  Y.dt = -psi / J;
  Y.dxi = -t * ps(1, 0) / J;
  Y.dy = 1.0 / J;
  const double Gxx = t * ps(2, 0), GxY = t * ps(1, 1), GYY = t * ps(0, 2);
  Y.dxi_dxi = -(Gxx + 2.0 * GxY * Y.dxi + GYY * Y.dxi * Y.dxi) / J;
  Y.dt_dxi = -(ps(1, 0) + ps(0, 1) * Y.dxi + GxY * Y.dt + GYY * Y.dt * Y.dxi) / J;
  const double Gxxx = t * ps(3, 0), GxxY = t * ps(2, 1), GxYY = t * ps(1, 2),
               GYYY = t * ps(0, 3);
  const double yx = Y.dxi, yxx = Y.dxi_dxi;
  Y.dxi3 = -(Gxxx + 3.0 * GxxY * yx + 3.0 * GxYY * yx * yx + GYYY * yx * yx * yx +
             3.0 * GxY * yxx + 3.0 * GYY * yx * yxx) /
           J;
  return Y;
}

double jacobian_D(const Problem& p, double t, double xi, double eta) {
  const PhiPsiJet j = eval_phi_psi(p, xi, eta, 1);
  return 1.0 + t * (j.phi_d(1, 0) + j.psi_d(0, 1));
}

CharComposite char_composite(const Problem& p, double t, double xi, double y, double t_limit) {
  CharComposite c;
  c.t = t;
  c.xi = xi;
  c.y = y;
  c.eta = solve_eta(p, t, xi, y, t_limit);
  c.jet = eval_phi_psi(p, xi, c.eta, kSeriesMaxOrder);
  const Series3 T = Series3::variable(0, t);
  const Series3 dxi = Series3::variable(1, 0.0);
  const Series3 rhs = Series3::variable(2, y);
  const double J0 = 1.0 + t * c.jet.psi_d(0, 1);
  if (std::fabs(J0) < 1e-6) throw Error(ErrorCode::DegenerateImplicit, "1 + t psi_eta vanishes");

  // Chord iteration on series: each sweep fixes at least one more degree.
  Series3 Yser = Series3::constant(c.eta);
  for (int it = 0; it <= kSeriesMaxOrder + 1; ++it) {
    const Series3 dY = Yser - c.eta;
    const Series3 G = Yser + T * compose<3>(c.jet.psi, dxi, dY) - rhs;
    Yser = Yser - G * (1.0 / J0);
    Yser.raw(0) = c.eta;
  }
  c.Y = Yser;
  const Series3 dY = Yser - c.eta;
  const Series2 H = c.jet.phi.derivative(0) + c.jet.psi.derivative(1);
  c.H = compose<3>(H, dxi, dY);
  c.H.raw(0) = H.value();
  c.phi = compose<3>(c.jet.phi, dxi, dY);
  c.phi.raw(0) = c.jet.phi.value();
  c.psi = compose<3>(c.jet.psi, dxi, dY);
  c.psi.raw(0) = c.jet.psi.value();
  const Series2 u = p.initial_data(xi, c.eta, kSeriesMaxOrder);
  c.u0 = compose<3>(u, dxi, dY);
  c.u0.raw(0) = u.value();
  return c;
}

MapSample char_map(const Problem& p, double t, double xi, double y, int derivatives,
                   double t_limit) {
  MapSample m;
  m.eta = solve_eta(p, t, xi, y, t_limit);
  const PhiPsiJet j = eval_phi_psi(p, xi, m.eta, derivatives);
  m.x = xi + t * j.phi.value();
  if (derivatives < 1) return m;
  const double J = 1.0 + t * j.psi_d(0, 1);
  const double Yx = -t * j.psi_d(1, 0) / J;
  m.dx = 1.0 + t * (j.phi_d(1, 0) + j.phi_d(0, 1) * Yx);
  if (derivatives < 2) return m;
  const double Yxx = -t * (j.psi_d(2, 0) + 2.0 * j.psi_d(1, 1) * Yx + j.psi_d(0, 2) * Yx * Yx) / J;
  m.d2x = t * (j.phi_d(2, 0) + 2.0 * j.phi_d(1, 1) * Yx + j.phi_d(0, 2) * Yx * Yx +
               j.phi_d(0, 1) * Yxx);
  return m;
}

}  // namespace shockform
