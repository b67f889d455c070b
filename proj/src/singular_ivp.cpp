#include "shockform/singular_ivp.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

namespace {

struct PicardResult {
  bool ok = false;
  num::LobattoInterpolant y, lambda;
  std::vector<double> distances;
  double max_ratio = 0.0;
  bool stalled = false;
};

// rhs with linear extrapolation in s below the floor (the right-hand sides
// are smooth in s, but callers may not be able to evaluate them there).
std::pair<double, double> eval_rhs(const SingularIvpSpec& spec, double s, double l, double y) {
  const double f = spec.s_floor;
  if (!(s < f)) return spec.rhs(s, l, y);
  const auto a = spec.rhs(f, l, y), b = spec.rhs(2.0 * f, l, y);
  const double w = (s - f) / f;
  return {a.first + w * (b.first - a.first), a.second + w * (b.second - a.second)};
}

// Fixed point of the integral form on [0, s0]:
//   y(s) = beta + s^2 int_0^1 r P(s r) dr,
//   L(s) = int_0^1 r^(alpha-1) Qt(s r) dr.
PicardResult picard(const SingularIvpSpec& spec, double beta, double s0) {
  PicardResult out;
  const int n = spec.picard_nodes;
  const auto nodes = num::chebyshev_lobatto(n, 0.0, s0);
  const auto qy = num::gauss_jacobi_unit(spec.quadrature_nodes, 2.0);
  const auto ql = num::gauss_jacobi_unit(spec.quadrature_nodes, spec.alpha);

  std::vector<double> yv(n + 1, beta), lv(n + 1, 0.0), prev_y, prev_l;
  num::LobattoInterpolant yi(0.0, s0, yv), li(0.0, s0, lv);
  for (int k = 0; k < spec.picard_max_iterations; ++k) {
    std::vector<double> yn(n + 1, beta), ln(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
      const double s = nodes[i];
      double iy = 0.0, il = 0.0;
      for (std::size_t q = 0; q < qy.nodes.size(); ++q) {
        const double th = s * qy.nodes[q];
        iy += qy.weights[q] * eval_rhs(spec, th, li(th), yi(th)).first;
      }
      for (std::size_t q = 0; q < ql.nodes.size(); ++q) {
        const double th = s * ql.nodes[q];
        const double lam = li(th);
        il += ql.weights[q] * (eval_rhs(spec, th, lam, yi(th)).second + spec.alpha * lam);
      }
      yn[i] = beta + s * s * iy;
      ln[i] = il;
    }
    double d = 0.0;
    for (int i = 0; i <= n; ++i)
      d = std::max({d, std::fabs(yn[i] - yv[i]), std::fabs(ln[i] - lv[i])});
    if (!std::isfinite(d)) return out;
    prev_y = std::move(yv);
    prev_l = std::move(lv);
    yv = std::move(yn);
    lv = std::move(ln);
    yi = num::LobattoInterpolant(0.0, s0, yv);
    li = num::LobattoInterpolant(0.0, s0, lv);
    out.distances.push_back(d);
    const std::size_t m = out.distances.size();
    if (d <= spec.picard_tol) {
      out.ok = true;
      out.y = yi;
      out.lambda = li;
      return out;
    }
    if (m >= 2 && out.distances[m - 2] > 0.0) {
      const double ratio = d / out.distances[m - 2];
      if (ratio > 0.5) {
        // Stalled at the rounding level of the rhs: accept, but do not count
        // the stalled step as a contraction ratio.
        if (out.distances[m - 2] <= spec.stagnation_tol) {
          out.ok = true;
          out.stalled = true;
          out.distances.pop_back();  // keep the last contracting iterate
          out.y = num::LobattoInterpolant(0.0, s0, prev_y);
          out.lambda = num::LobattoInterpolant(0.0, s0, prev_l);
          return out;
        }
        return out;
      }
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  return out;
}

}  // namespace

IvpSolution solve_singular_ivp(const SingularIvpSpec& spec, double beta,
                               const std::vector<double>& s_out) {
  if (!(spec.alpha >= 2.0)) {
    std::ostringstream os;
    os << "alpha = " << spec.alpha << " < 2";
    throw Error(ErrorCode::ContractionFailed, os.str());
  }
  IvpSolution sol;

  // Largest dyadic s0 <= s_max / 4 on which Picard contracts.
  double s0 = std::exp2(std::floor(std::log2(spec.s_max / 4.0)));
  PicardResult pr;
  for (int tries = 0;; ++tries) {
    pr = picard(spec, beta, s0);
    if (pr.ok) break;
    if (tries >= 10) {
      std::ostringstream os;
      os << "Picard iteration did not contract down to s0 = " << s0 << " (beta = " << beta << ")";
      throw Error(ErrorCode::ContractionFailed, os.str());
    }
    s0 *= 0.5;
  }
  sol.s0 = s0;
  sol.picard_distances = pr.distances;
  sol.max_contraction_ratio = pr.max_ratio;
  sol.picard_stalled = pr.stalled;

  using State = std::array<double, 2>;
  auto system = [&](const State& x, State& dx, double s) {
    const auto [P, Q] = spec.rhs(s, x[1], x[0]);
    dx[0] = s * P;
    dx[1] = Q / s;
  };

  sol.s = s_out;
  sol.y.resize(s_out.size());
  sol.lambda.resize(s_out.size());
  std::vector<double> times{s0};
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < s_out.size(); ++i) {
    const double s = s_out[i];
    if (s <= s0) {
      sol.y[i] = s > 0.0 ? pr.y(s) : beta;
      sol.lambda[i] = s > 0.0 ? pr.lambda(s) : 0.0;
    } else {
      times.push_back(s);
      slots.push_back(i);
    }
  }
  if (times.size() > 1) {
    namespace odeint = boost::numeric::odeint;
    State x{pr.y(s0), pr.lambda(s0)};
    std::size_t k = 0;
    auto observer = [&](const State& st, double) {
      if (k > 0) {
        sol.y[slots[k - 1]] = st[0];
        sol.lambda[slots[k - 1]] = st[1];
      }
      ++k;
    };
    auto stepper = odeint::make_dense_output(spec.ode_tol, spec.ode_tol,
                                             odeint::runge_kutta_dopri5<State>());
    sol.ode_steps = static_cast<int>(odeint::integrate_times(
        stepper, system, x, times.begin(), times.end(), (times.back() - s0) / 64.0, observer));
  }

  for (std::size_t i = 0; i < s_out.size(); ++i) {
    const double s = s_out[i];
    if (!std::isfinite(sol.y[i]) || !std::isfinite(sol.lambda[i])) {
      std::ostringstream os;
      os << "non-finite solution at s = " << s;
      throw Error(ErrorCode::BoundViolated, os.str());
    }
    if (s <= 0.0) continue;
    const double ratio = std::fabs(sol.lambda[i]) / (spec.M * s);
    sol.max_bound_ratio = std::max(sol.max_bound_ratio, ratio);
    if (ratio > 1.0) {
      std::ostringstream os;
      os << "|Lambda| = " << std::fabs(sol.lambda[i]) << " > M s = " << spec.M * s;
      throw Error(ErrorCode::BoundViolated, os.str());
    }
  }
  return sol;
}

double measure_alpha(const SingularIvpSpec& spec, double s, double y, double h) {
  return -num::central_difference([&](double l) { return spec.rhs(s, l, y).second; }, 0.0, h);
}

}  // namespace shockform
