#include "shockform/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/char_geometry.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

namespace {

const Root& select_root(const CharRoots& r, double x, std::optional<double> w) {
  if (r.roots.size() == 1) return r.roots.front();
  if (!w) {
    std::ostringstream os;
    os << "point (" << r.t << ", " << x << ", " << r.y << ") is multivalued ("
       << to_string(r.region) << ") and no shock front is available";
    throw Error(ErrorCode::BranchUnavailable, os.str());
  }
  const Root* pick = r.find(x < *w ? Branch::minus : Branch::plus);
  if (!pick) throw Error(ErrorCode::BranchUnavailable, "selected branch missing");
  return *pick;
}

void fill_gradient(const Problem& p, const BlowupCurve& curve, const GammaSample& g,
                   FieldSample& s) {
  const Series2 u0 = p.initial_data(s.xi, s.eta, 1);
  const double ux = u0.partial({1, 0}), uy = u0.partial({0, 1});
  const double phi = p.flux_x(s.u).speed[0], psi = p.flux_y(s.u).speed[0];
  if (!(s.jacobian_D > 1e-12)) {
    std::ostringstream os;
    os << "1 + tH = " << s.jacobian_D << " at (" << s.t << ", " << s.x << ", " << s.y << ")";
    throw Error(ErrorCode::JacobianVanishing, os.str());
  }
  // The map (xi, eta) -> (x, y) has determinant 1 + tH exactly, since
  // phi, psi are both functions of u0.
  s.u_x = ux / s.jacobian_D;
  s.u_y = uy / s.jacobian_D;
  s.u_t = -(phi * ux + psi * uy) / s.jacobian_D;
  const double kappa = g.phi_star + g.t_star * g.dphi_deta * g.dY_dt;
  s.u_T = s.u_t + kappa * s.u_x;
  s.has_gradient = true;
  (void)curve;
}

FieldSample evaluate(const BlowupCurve& curve, const GammaData& gd, std::optional<double> w,
                     double t, double x, double y, bool gradient) {
  const Problem& p = curve.problem();
  const CharRoots r = invert_point(p, gd, t, x, y, {.t_limit = curve.t_limit()});
  if (w && r.roots.size() > 1 && std::fabs(x - *w) <= 1e-12) {
    std::ostringstream os;
    os.precision(15);
    os << "(" << t << ", " << x << ", " << y << ") lies on the shock; use the front traces";
    throw Error(ErrorCode::OnShock, os.str());
  }
  const Root& root = select_root(r, x, w);
  FieldSample s;
  s.t = t;
  s.x = x;
  s.y = y;
  s.region = r.region;
  s.branch = root.branch;
  s.xi = root.xi;
  s.eta = root.eta;
  s.jacobian_D = root.jacobian_D;
  s.u = p.u0(root.xi, root.eta);
  if (gradient) fill_gradient(p, curve, gd.gamma, s);
  return s;
}

FieldSample eval_impl(const BlowupCurve& curve, const ShockFront* front, double t, double x,
                      double y, bool gradient) {
  const GammaData gd = curve.data_at(y);
  std::optional<double> w;
  if (t > gd.gamma.t_star) {
    // The front is only needed when the point turns out to be multivalued;
    // look it up lazily so that points beyond its window still work outside
    // the cusp.
    const CuspFolds f = cusp_boundary(curve.problem(), gd, t, curve.t_limit());
    if (x >= f.x_minus - 1e-8 && x <= f.x_plus + 1e-8 && front) w = front->eval(t, y).w;
  }
  return evaluate(curve, gd, w, t, x, y, gradient);
}

}  // namespace

FieldSample eval_solution(const BlowupCurve& curve, const ShockFront* front, double t, double x,
                          double y) {
  return eval_impl(curve, front, t, x, y, false);
}

FieldSample eval_gradient(const BlowupCurve& curve, const ShockFront* front, double t, double x,
                          double y) {
  return eval_impl(curve, front, t, x, y, true);
}

FieldSample eval_smooth(const Problem& p, double t, double x, double y, double t_limit) {
  const Root r = invert_smooth(p, t, x, y, t_limit);
  FieldSample s;
  s.t = t;
  s.x = x;
  s.y = y;
  s.xi = r.xi;
  s.eta = r.eta;
  s.jacobian_D = r.jacobian_D;
  s.u = p.u0(r.xi, r.eta);
  return s;
}

FieldSample eval_with_front(const BlowupCurve& curve, double w, double t, double x, double y,
                            bool gradient) {
  return evaluate(curve, curve.data_at(y), w, t, x, y, gradient);
}

std::string_view to_string(RayDirection d) {
  switch (d) {
    case RayDirection::x_at_fixed_t: return "x_at_fixed_t";
    case RayDirection::t_at_fixed_x: return "t_at_fixed_x";
    case RayDirection::tangent: return "tangent";
  }
  return "?";
}

std::string_view to_string(RayQuantity q) {
  switch (q) {
    case RayQuantity::u_increment: return "u_increment";
    case RayQuantity::du_dx: return "du_dx";
    case RayQuantity::grad_norm: return "grad_norm";
    case RayQuantity::tangential: return "tangential";
  }
  return "?";
}

std::string_view to_string(Gauge g) {
  switch (g) {
    case Gauge::e0: return "e0";
    case Gauge::e1: return "e1";
    case Gauge::eT: return "eT";
  }
  return "?";
}

ExponentFit fit_exponent(const BlowupCurve& curve, const ShockFront* front, const RaySpec& ray) {
  if (ray.samples < 8 || !(ray.r_min > 0.0) || std::log10(ray.r_max / ray.r_min) < 2.5) {
    std::ostringstream os;
    os << ray.samples << " samples over [" << ray.r_min << ", " << ray.r_max
       << "]; need >= 8 samples spanning >= 2.5 decades";
    throw Error(ErrorCode::InsufficientDecades, os.str());
  }
  const GammaSample g = curve.at(ray.y);
  ExponentFit fit;
  fit.ray = ray;
  std::optional<bool> side;
  for (int i = 0; i < ray.samples; ++i) {
    const double r = ray.r_min * std::pow(ray.r_max / ray.r_min, double(i) / (ray.samples - 1));
    double t = g.t_star, x = g.x_star;
    switch (ray.direction) {
      case RayDirection::x_at_fixed_t: x += r; break;
      case RayDirection::t_at_fixed_x: t -= r; break;
      case RayDirection::tangent:
        t -= r;
        x -= g.tangent_slope * r;
        break;
    }
    const bool need_grad = ray.quantity != RayQuantity::u_increment;
    const FieldSample s = need_grad ? eval_gradient(curve, front, t, x, ray.y)
                                    : eval_solution(curve, front, t, x, ray.y);
    if (s.region == Region::inside_cusp || s.region == Region::boundary) {
      const bool right = s.branch == Branch::plus;
      if (side && *side != right) throw Error(ErrorCode::ShockCrossed, "ray crosses the shock");
      side = right;
    }
    double v = 0.0;
    switch (ray.quantity) {
      case RayQuantity::u_increment: v = std::fabs(s.u - g.u_star); break;
      case RayQuantity::du_dx: v = std::fabs(s.u_x); break;
      case RayQuantity::grad_norm: v = std::hypot(s.u_t, s.u_x, s.u_y); break;
      case RayQuantity::tangential: v = std::fabs(s.u_T); break;
    }
    fit.r.push_back(r);
    fit.value.push_back(v);
  }
  const num::LinearFit lf = num::loglog_fit(fit.r, fit.value);
  fit.slope = lf.slope;
  fit.stderr_ = lf.slope_stderr;
  fit.r2 = lf.r2;
  fit.intercept = lf.intercept;
  return fit;
}

GaugeSup gauge_sup(const BlowupCurve& curve, const ShockFront* front, double y, Gauge kind,
                   double dt_max, double dx_max, int n) {
  const GammaSample g = curve.at(y);
  GaugeSup out;
  for (int i = 0; i < 2 * n; ++i) {
    const double dt = dt_max * ((i + 0.5) / n - 1.0);
    for (int j = 0; j < 2 * n; ++j) {
      const double vs = dx_max * ((j + 0.5) / n - 1.0);
      const double t = g.t_star + dt;
      const double x = g.x_star + g.tangent_slope * dt + vs;
      FieldSample s;
      try {
        s = kind == Gauge::e0 ? eval_solution(curve, front, t, x, y)
                              : eval_gradient(curve, front, t, x, y);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::OnShock) continue;
        throw;
      }
      const double gauge = std::sqrt(std::fabs(dt)) + std::cbrt(std::fabs(vs));
      double v = 0.0;
      switch (kind) {
        case Gauge::e0: v = std::fabs(s.u - g.u_star) / gauge; break;
        case Gauge::e1: v = std::hypot(s.u_t, s.u_x, s.u_y) * gauge * gauge; break;
        case Gauge::eT: v = std::fabs(s.u_T) * gauge; break;
      }
      ++out.samples;
      if (v > out.sup) {
        out.sup = v;
        out.at_t = t;
        out.at_x = x;
      }
    }
  }
  return out;
}

namespace {

struct Bump {
  double c, r;
  double value(double z) const {
    const double q = (z - c) / r;
    if (std::fabs(q) >= 1.0) return 0.0;
    const double a = 1.0 - q * q;
    return a * a * a * a;
  }
  double deriv(double z) const {
    const double q = (z - c) / r;
    if (std::fabs(q) >= 1.0) return 0.0;
    const double a = 1.0 - q * q;
    return 4.0 * a * a * a * (-2.0 * q / r);
  }
};

}  // namespace

WeakFormReport weak_form_check(const ShockFront& front, double tc, double xc, double yc,
                               double rt, double rx, double ry, int nodes, double front_shift) {
  const BlowupCurve& curve = front.curve();
  const Problem& p = curve.problem();
  const Bump bt{tc, rt}, bx{xc, rx}, by{yc, ry};
  const auto qt = num::gauss_legendre(nodes, tc - rt, tc + rt);
  const auto qy = num::gauss_legendre(nodes, yc - ry, yc + ry);
  WeakFormReport rep;
  for (std::size_t a = 0; a < qt.nodes.size(); ++a) {
    const double t = qt.nodes[a];
    for (std::size_t b = 0; b < qy.nodes.size(); ++b) {
      const double y = qy.nodes[b];
      // no shock yet at this (t, y): every point has a single root
      const bool shocked = t > curve.at(y).t_star;
      const double w = shocked ? front.eval(t, y).w + front_shift : 0.0;
      std::vector<std::pair<double, double>> pieces;
      const double lo = xc - rx, hi = xc + rx;
      if (shocked && w > lo && w < hi)
        pieces = {{lo, w}, {w, hi}};
      else
        pieces = {{lo, hi}};
      for (const auto& [x0, x1] : pieces) {
        const auto qx = num::gauss_legendre(nodes, x0, x1);
        for (std::size_t c = 0; c < qx.nodes.size(); ++c) {
          const double x = qx.nodes[c];
          const double u = shocked ? eval_with_front(curve, w, t, x, y, false).u
                                   : eval_solution(curve, nullptr, t, x, y).u;
          const double wt = qt.weights[a] * qy.weights[b] * qx.weights[c];
          const double ft = bt.deriv(t) * bx.value(x) * by.value(y);
          const double fx = bt.value(t) * bx.deriv(x) * by.value(y);
          const double fy = bt.value(t) * bx.value(x) * by.deriv(y);
          const double F = p.flux_x(u).primitive, G = p.flux_y(u).primitive;
          rep.residual += wt * (u * ft + F * fx + G * fy);
          rep.scale += wt * (std::fabs(u * ft) + std::fabs(F * fx) + std::fabs(G * fy));
        }
      }
    }
  }
  rep.relative = rep.scale > 0.0 ? std::fabs(rep.residual) / rep.scale : 0.0;
  return rep;
}

}  // namespace shockform
