#include "shockform/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/char_geometry.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::pre_blowup: return "pre_blowup";
    case Region::inside_cusp: return "inside_cusp";
    case Region::outside_left: return "outside_left";
    case Region::outside_right: return "outside_right";
    case Region::boundary: return "boundary";
  }
  return "?";
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::minus: return "minus";
    case Branch::center: return "center";
    case Branch::plus: return "plus";
  }
  return "?";
}

ScaledCoords scaled_coords(const GammaSample& g, double t, double x, std::optional<double> xi) {
  ScaledCoords c;
  const double tau = t - g.t_star;
  c.post = tau > 0.0;
  c.s = std::sqrt(std::fabs(tau));
  c.x_ss = g.x_star + g.tangent_slope * tau;
  c.varsigma = x - c.x_ss;
  c.lambda = c.s > 0.0 ? c.varsigma / (c.s * c.s * c.s) : 0.0;
  c.zeta = std::cbrt(c.varsigma);
  c.eta_scaled = c.zeta != 0.0 ? tau / (c.zeta * c.zeta) : 0.0;
  if (xi && c.zeta != 0.0) c.nu = (*xi - g.xi_star) / c.zeta;
  return c;
}

double inversion_residual(const Problem& p, double t, double xi, double x, double y,
                          double t_limit) {
  return x - char_map(p, t, xi, y, 0, t_limit).x;
}

namespace {

struct Piece {
  double a, b;    // xi interval
  double ra, rb;  // residuals at the ends
};

std::optional<double> solve_piece(const Problem& p, double t, double x, double y,
                                  double t_limit, const Piece& pc) {
  if (pc.ra == 0.0) return pc.a;
  if (pc.rb == 0.0) return pc.b;
  if ((pc.ra > 0) == (pc.rb > 0)) return std::nullopt;
  auto fdf = [&](double xi) {
    const MapSample m = char_map(p, t, xi, y, 1, t_limit);
    return std::pair{x - m.x, -m.dx};
  };
  const auto r = num::bracketed_newton(fdf, pc.a, pc.b, pc.ra, pc.rb, 1e-16);
  return r.x;
}

Root make_root(const Problem& p, double t, double x, double y, double xi, Branch b,
               double t_limit) {
  Root r;
  r.xi = xi;
  r.branch = b;
  const MapSample m = char_map(p, t, xi, y, 0, t_limit);
  r.eta = m.eta;
  r.residual = x - m.x;
  r.jacobian_D = jacobian_D(p, t, xi, r.eta);
  return r;
}

}  // namespace

Root invert_smooth(const Problem& p, double t, double x, double y, double t_limit) {
  const Box& box = p.box();
  auto R = [&](double xi) { return inversion_residual(p, t, xi, x, y, t_limit); };
  const auto r = solve_piece(p, t, x, y, t_limit, {box.x_lo, box.x_hi, R(box.x_lo), R(box.x_hi)});
  if (!r) {
    std::ostringstream os;
    os.precision(12);
    os << "no characteristic foot inside the domain box at (t, x, y) = (" << t << ", " << x
       << ", " << y << ")";
    throw Error(ErrorCode::RootCountUnexpected, os.str());
  }
  return make_root(p, t, x, y, *r, Branch::center, t_limit);
}

CharRoots invert_point(const Problem& p, const GammaData& gd, double t, double x, double y,
                       const InversionOptions& opts) {
  CharRoots out;
  out.t = t;
  out.x = x;
  out.y = y;
  const Box& box = p.box();
  const GammaSample& g = gd.gamma;
  auto R = [&](double xi) { return inversion_residual(p, t, xi, x, y, opts.t_limit); };
  const double lo = box.x_lo, hi = box.x_hi;
  const double r_lo = R(lo), r_hi = R(hi);

  auto fail_count = [&](const char* why) {
    std::ostringstream os;
    os.precision(12);
    os << why << " at (t, x, y) = (" << t << ", " << x << ", " << y << ")";
    throw Error(ErrorCode::RootCountUnexpected, os.str());
  };

  const double tau = t - g.t_star;
  if (tau <= 0.0) {
    out.region = Region::pre_blowup;
    const auto r = solve_piece(p, t, x, y, opts.t_limit, {lo, hi, r_lo, r_hi});
    if (!r) fail_count("no characteristic foot inside the domain box");
    out.roots.push_back(make_root(p, t, x, y, *r, Branch::center, opts.t_limit));
    const double xf = char_map(p, t, g.xi_star, y, 0, opts.t_limit).x;
    out.folds = {g.xi_star, g.xi_star, xf, xf};
  } else {
    const CuspFolds f = cusp_boundary(p, gd, t, opts.t_limit);
    out.folds = f;
    const double tol = opts.boundary_tol;
    const bool near_plus = std::fabs(x - f.x_plus) <= tol;
    const bool near_minus = std::fabs(x - f.x_minus) <= tol;
    if (near_plus || near_minus)
      out.region = Region::boundary;
    else if (x < f.x_minus)
      out.region = Region::outside_left;
    else if (x > f.x_plus)
      out.region = Region::outside_right;
    else
      out.region = Region::inside_cusp;

    const double r_left = x - f.x_plus;    // R at xi_left
    const double r_right = x - f.x_minus;  // R at xi_right
    const Piece left{lo, f.xi_left, r_lo, r_left};
    const Piece mid{f.xi_left, f.xi_right, r_left, r_right};
    const Piece right{f.xi_right, hi, r_right, r_hi};

    auto push = [&](const std::optional<double>& xi, Branch b) {
      if (xi) out.roots.push_back(make_root(p, t, x, y, *xi, b, opts.t_limit));
    };
    switch (out.region) {
      case Region::inside_cusp: {
        const auto a = solve_piece(p, t, x, y, opts.t_limit, left);
        const auto c = opts.skip_center ? std::optional<double>{}
                                        : solve_piece(p, t, x, y, opts.t_limit, mid);
        const auto b = solve_piece(p, t, x, y, opts.t_limit, right);
        if (!a || !b || (!opts.skip_center && !c)) fail_count("expected three roots inside the cusp");
        push(a, Branch::minus);
        push(c, Branch::center);
        push(b, Branch::plus);
        break;
      }
      case Region::outside_left: {
        const auto a = solve_piece(p, t, x, y, opts.t_limit, left);
        if (!a) fail_count("no root left of the cusp");
        if (solve_piece(p, t, x, y, opts.t_limit, right)) fail_count("extra root right of the cusp");
        push(a, Branch::minus);
        break;
      }
      case Region::outside_right: {
        const auto b = solve_piece(p, t, x, y, opts.t_limit, right);
        if (!b) fail_count("no root right of the cusp");
        if (solve_piece(p, t, x, y, opts.t_limit, left)) fail_count("extra root left of the cusp");
        push(b, Branch::plus);
        break;
      }
      case Region::boundary: {
        // The merged double root is reported once, with its outer label.
        std::optional<double> a, b;
        if (near_plus) {
          a = r_left == 0.0 ? f.xi_left : solve_piece(p, t, x, y, opts.t_limit, left);
          if (!a) a = f.xi_left;
          b = solve_piece(p, t, x, y, opts.t_limit, right);
        } else {
          b = r_right == 0.0 ? f.xi_right : solve_piece(p, t, x, y, opts.t_limit, right);
          if (!b) b = f.xi_right;
          a = solve_piece(p, t, x, y, opts.t_limit, left);
        }
        if (!a || !b) fail_count("expected two roots on the cusp boundary");
        push(a, Branch::minus);
        push(b, Branch::plus);
        break;
      }
      default: break;
    }
  }

  for (const auto& r : out.roots) {
    const double tol = out.region == Region::boundary ? std::max(opts.residual_tol, 1e-10)
                                                      : opts.residual_tol;
    if (!(std::fabs(r.residual) <= tol * std::max(1.0, std::fabs(x)))) {
      std::ostringstream os;
      os << "root residual " << r.residual << " at xi = " << r.xi;
      throw Error(ErrorCode::ResidualTooLarge, os.str());
    }
  }
  return out;
}

namespace {

void check_window(const ExpansionWindow& w, double a, double b, const char* what) {
  if (std::fabs(a) >= w.eps || std::fabs(b) >= w.eps) {
    std::ostringstream os;
    os << what << " outside the validity window " << w.eps;
    throw Error(ErrorCode::WindowExceeded, os.str());
  }
}

}  // namespace

std::pair<double, double> xi_pm_expansion(const GammaData& gd, double s, double lambda,
                                          const ExpansionWindow& w) {
  check_window(w, s, lambda, "(s, lambda)");
  const CuspCoeffs& k = gd.coeffs;
  const double r = std::sqrt(k.c1 / k.c2);
  const double shift = lambda / (2.0 * k.c1);
  return {gd.gamma.xi_star + s * (-r + shift), gd.gamma.xi_star + s * (r + shift)};
}

double xi_offset_expansion(const GammaData& gd, double c, double s, double lambda, Branch branch,
                           const ExpansionWindow& w, double denominator_floor) {
  check_window(w, s, lambda - c, "(s, lambda - c)");
  const CuspCoeffs& k = gd.coeffs;
  // -c1 mu + c2 mu^3 = c ; the outer branch exists beyond the local extremum
  const double crit = (2.0 / 3.0) * k.c1 * std::sqrt(k.c1 / (3.0 * k.c2));
  const bool plus = branch == Branch::plus;
  if (branch == Branch::center || (plus && !(c > -crit)) || (!plus && !(c < crit))) {
    std::ostringstream os;
    os << "no real cubic root on the requested branch for c = " << c;
    throw Error(ErrorCode::CubicBranchMissing, os.str());
  }
  const auto roots = num::cubic_real_roots(k.c2, 0.0, -k.c1, -c);
  const double mu = plus ? roots.back() : roots.front();
  const double den = -k.c1 + 3.0 * k.c2 * mu * mu;
  if (!(den >= denominator_floor)) {
    std::ostringstream os;
    os << "-c1 + 3 c2 mu^2 = " << den;
    throw Error(ErrorCode::DenominatorSmall, os.str());
  }
  return gd.gamma.xi_star + s * (mu + (lambda - c) / den);
}

double xi_center_expansion(const GammaData& gd, double zeta, double eta_scaled,
                           const ExpansionWindow& w) {
  check_window(w, zeta, eta_scaled, "(zeta, eta)");
  const CuspCoeffs& k = gd.coeffs;
  const double c13 = std::cbrt(k.c2);
  return gd.gamma.xi_star + zeta * (1.0 / c13 + k.c1 / (3.0 * c13 * c13) * eta_scaled);
}

double xi_pre_expansion(const GammaData& gd, double c, double s, double lambda,
                        const ExpansionWindow& w) {
  check_window(w, s, lambda - c, "(s, lambda - c)");
  const CuspCoeffs& k = gd.coeffs;
  const auto roots = num::cubic_real_roots(k.c2, 0.0, k.c1, -c);
  const double mu = roots.front();
  return gd.gamma.xi_star + s * (mu + (lambda - c) / (k.c1 + 3.0 * k.c2 * mu * mu));
}

}  // namespace shockform
