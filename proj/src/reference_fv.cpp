#include "shockform/reference_fv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "outflow";
}

double FieldGrid::mass() const {
  // pairwise-ish: long double accumulation is enough here
  long double m = 0.0L;
  for (double v : u) m += v;
  return static_cast<double>(m) * hx * hy;
}

namespace {

Box domain_of(const Problem& p, const FvSpec& spec) { return spec.domain.value_or(p.box()); }

void check_spec(const FvSpec& spec) {
  if (!(spec.cfl > 0.0 && spec.cfl <= 0.45)) {
    std::ostringstream os;
    os << "CFL number " << spec.cfl << " outside (0, 0.45]";
    throw Error(ErrorCode::CflViolation, os.str());
  }
  if (spec.nx < 64 || spec.ny < 64) throw Error(ErrorCode::ConfigInvalid, "need at least 64 cells per axis");
}

}  // namespace

FieldGrid initial_grid(const Problem& p, const FvSpec& spec) {
  check_spec(spec);
  const Box b = domain_of(p, spec);
  FieldGrid g;
  g.nx = spec.nx;
  g.ny = spec.ny;
  g.x_lo = b.x_lo;
  g.y_lo = b.y_lo;
  g.hx = (b.x_hi - b.x_lo) / spec.nx;
  g.hy = (b.y_hi - b.y_lo) / spec.ny;
  g.cfl = spec.cfl;
  g.boundary = spec.boundary;
  g.u.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
  const auto q = num::gauss_legendre(3, -0.5, 0.5);
  num::parallel_for(g.ny, spec.threads, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
          s += q.weights[a] * q.weights[c] *
               p.u0(g.x(i) + q.nodes[a] * g.hx, g.y(j) + q.nodes[c] * g.hy);
      g.u[static_cast<std::size_t>(j) * g.nx + i] = s;
    }
  });
  const auto [mn, mx] = std::minmax_element(g.u.begin(), g.u.end());
  g.initial_min = *mn;
  g.initial_max = *mx;
  return g;
}

std::vector<double> flux_critical_points(const FluxEvaluator& flux, double lo, double hi) {
  std::vector<double> out;
  if (!(hi > lo)) return out;
  const int n = 32 * std::max(1, static_cast<int>(std::ceil(hi - lo)));
  auto fdf = [&](double u) {
    const FluxJet j = flux(u);
    return std::pair{j.speed[0], j.speed[1]};
  };
  double a = lo, fa = flux(lo).speed[0];
  for (int k = 1; k <= n; ++k) {
    const double b = lo + (hi - lo) * k / n;
    const double fb = flux(b).speed[0];
    if (fa == 0.0 && k > 1) out.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
      out.push_back(num::bracketed_newton(fdf, a, b, fa, fb, 1e-15).x);
    a = b;
    fa = fb;
  }
  return out;
}

double godunov_flux(const std::function<double(double)>& flux, const std::vector<double>& critical,
                    double left, double right) {
  // min over [l, r] when l <= r, max over [r, l] otherwise
  const bool rising = left <= right;
  const double lo = rising ? left : right, hi = rising ? right : left;
  double best = rising ? std::min(flux(left), flux(right)) : std::max(flux(left), flux(right));
  const auto first = std::upper_bound(critical.begin(), critical.end(), lo);
  for (auto it = first; it != critical.end() && *it < hi; ++it) {
    const double f = flux(*it);
    best = rising ? std::min(best, f) : std::max(best, f);
  }
  return best;
}

namespace {

struct Sweeper {
  const FluxEvaluator& flux;
  std::vector<double> critical;
  Boundary bc;

  // One conservative update of a line of n cells with stride, ratio dt/h.
  // Returns face[n] - face[0], the net flux out through the two ends.
  double line(double* u, int n, std::ptrdiff_t stride, double ratio, std::vector<double>& f,
              std::vector<double>& face) const {
    f.resize(n);
    face.resize(n + 1);
    for (int i = 0; i < n; ++i) f[i] = flux(u[i * stride]).primitive;
    auto F = [&](double v) { return flux(v).primitive; };
    auto face_flux = [&](int l, int r) {
      const double ul = u[l * stride], ur = u[r * stride];
      if (ul == ur) return f[l];
      // cheap exact cases: no critical point between the states
      const double lo = std::min(ul, ur), hi = std::max(ul, ur);
      const auto it = std::upper_bound(critical.begin(), critical.end(), lo);
      if (it == critical.end() || *it >= hi) return ul <= ur ? std::min(f[l], f[r]) : std::max(f[l], f[r]);
      return godunov_flux(F, critical, ul, ur);
    };
    for (int i = 1; i < n; ++i) face[i] = face_flux(i - 1, i);
    if (bc == Boundary::periodic) {
      face[0] = face[n] = face_flux(n - 1, 0);
    } else {
      // zero-gradient ghosts
      face[0] = f[0];
      face[n] = f[n - 1];
    }
    for (int i = 0; i < n; ++i) u[i * stride] -= ratio * (face[i + 1] - face[i]);
    return face[n] - face[0];
  }
};

double max_speed(const FluxEvaluator& flux, const std::vector<double>& u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::fabs(flux(v).speed[0]));
  return s;
}

}  // namespace

FieldGrid run_fv(const Problem& p, const FvSpec& spec, double t_end,
                 const std::function<void(const FieldGrid&)>& on_snapshot) {
  if (spec.t_blowup && t_end > 1.5 * *spec.t_blowup) {
    std::ostringstream os;
    os << "t_end " << t_end << " exceeds 1.5 x first blowup time " << *spec.t_blowup;
    throw Error(ErrorCode::ConfigInvalid, os.str());
  }
  FieldGrid g = initial_grid(p, spec);
  const double pad = 1e-9 + 1e-6 * (g.initial_max - g.initial_min);
  const FluxEvaluator fx = [&p](double v) { return p.flux_x(v); };
  const FluxEvaluator fy = [&p](double v) { return p.flux_y(v); };
  // by the maximum principle every state stays in the initial range
  const Sweeper sx{fx, flux_critical_points(fx, g.initial_min - pad, g.initial_max + pad), spec.boundary};
  const Sweeper sy{fy, flux_critical_points(fy, g.initial_min - pad, g.initial_max + pad), spec.boundary};

  double next_snapshot = spec.snapshot_every > 0.0 ? spec.snapshot_every : INFINITY;
  while (g.t < t_end) {
    const double ax = max_speed(fx, g.u) / g.hx, ay = max_speed(fy, g.u) / g.hy;
    const double rate = std::max(ax, ay);
    double dt = rate > 0.0 ? spec.cfl / rate : t_end - g.t;
    if (!std::isfinite(dt) || dt <= 0.0)
      throw Error(ErrorCode::CflViolation, "no admissible time step");
    dt = std::min(dt, t_end - g.t);
    if (dt * rate > spec.cfl * (1 + 1e-12))
      throw Error(ErrorCode::CflViolation, "time step exceeds the CFL bound");
    const double m0 = g.mass();

    // boundary outflow per line, summed in a fixed order afterwards
    std::vector<double> out_x(g.ny), out_y(g.nx);
    auto sweep_x = [&] {
      num::parallel_for(g.ny, spec.threads, [&](int j) {
        thread_local std::vector<double> f, face;
        out_x[j] = sx.line(g.u.data() + static_cast<std::size_t>(j) * g.nx, g.nx, 1, dt / g.hx, f, face);
      });
    };
    auto sweep_y = [&] {
      num::parallel_for(g.nx, spec.threads, [&](int i) {
        thread_local std::vector<double> f, face;
        out_y[i] = sy.line(g.u.data() + i, g.ny, g.nx, dt / g.hy, f, face);
      });
    };
    // alternate the sweep order between steps
    if (g.steps % 2 == 0) {
      sweep_x();
      sweep_y();
    } else {
      sweep_y();
      sweep_x();
    }
    g.t += dt;
    if (t_end - g.t < 1e-14 * std::max(1.0, t_end)) g.t = t_end;
    ++g.steps;

    for (double v : g.u)
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite cell average at t = " << g.t;
        throw Error(ErrorCode::NonFiniteState, os.str());
      }
    const double m1 = g.mass();
    long double outflow = 0.0L;
    for (double v : out_x) outflow += static_cast<long double>(v) * dt * g.hy;
    for (double v : out_y) outflow += static_cast<long double>(v) * dt * g.hx;
    g.max_step_mass_change = std::max(g.max_step_mass_change, std::fabs(m1 - m0));
    g.max_conservation_defect =
        std::max(g.max_conservation_defect,
                 static_cast<double>(std::fabs(static_cast<long double>(m1) - m0 + outflow)));
    if (on_snapshot && g.t >= next_snapshot) {
      on_snapshot(g);
      while (next_snapshot <= g.t) next_snapshot += spec.snapshot_every;
    }
  }
  return g;
}

std::optional<double> detect_row_shock(const FieldGrid& fv, int j) {
  std::vector<double> q(fv.nx - 1);
  for (int i = 0; i + 1 < fv.nx; ++i) q[i] = std::fabs(fv.at(i + 1, j) - fv.at(i, j)) / fv.hx;
  const auto peak = std::max_element(q.begin(), q.end());
  const double top = *peak;
  const auto idx = peak - q.begin();
  std::vector<double> sorted = q;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(top > 5.0 * median)) return std::nullopt;
  return fv.x(static_cast<int>(idx)) + 0.5 * fv.hx;
}

namespace {

bool foot_inside(const Box& box, const FieldSample& s, double margin) {
  return s.xi >= box.x_lo + margin && s.xi <= box.x_hi - margin && s.eta >= box.y_lo + margin &&
         s.eta <= box.y_hi - margin;
}

}  // namespace

FvComparison compare_fv(const FieldGrid& fv, const ShockFront& front, double foot_margin,
                        int band_cells) {
  const BlowupCurve& curve = front.curve();
  const Box& box = curve.problem().box();
  FvComparison c;
  c.t = fv.t;
  c.band_cells = band_cells;
  double err_sum = 0.0;
  bool any_required = false;
  for (int j = 0; j < fv.ny; ++j) {
    const double y = fv.y(j);
    if (y < curve.samples().front().y || y > curve.samples().back().y) continue;
    const GammaSample g = curve.at(y);
    RowShock row;
    row.y = y;
    row.t_star = g.t_star;
    row.required = fv.t > g.t_star + 0.02;
    std::optional<double> w;
    if (fv.t > g.t_star) {
      try {
        w = front.eval(fv.t, y).w;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WindowExceeded) throw;
        continue;  // row outside the front's range
      }
    }
    any_required = any_required || row.required;
    if (const auto xd = detect_row_shock(fv, j); xd && w) {
      row.detected = true;
      row.x_detected = *xd;
      row.w = *w;
      row.offset_cells = (*xd - *w) / fv.hx;
      if (row.required) c.max_offset_cells = std::max(c.max_offset_cells, std::fabs(row.offset_cells));
    } else if (w) {
      row.w = *w;
    }
    if (row.required && !row.detected) {
      std::ostringstream os;
      os << "no cell exceeds the gradient threshold in row y = " << y << " at t = " << fv.t;
      throw Error(ErrorCode::ShockNotDetected, os.str());
    }
    c.rows.push_back(row);

    for (int i = 0; i < fv.nx; ++i) {
      const double x = fv.x(i);
      if (w && std::fabs(x - *w) <= band_cells * fv.hx) continue;
      try {
        const FieldSample s = eval_solution(curve, &front, fv.t, x, y);
        if (!foot_inside(box, s, foot_margin)) {
          ++c.skipped_cells;
          continue;
        }
        const double e = std::fabs(fv.at(i, j) - s.u);
        err_sum += e;
        c.max_error = std::max(c.max_error, e);
        ++c.compared_cells;
      } catch (const Error&) {
        ++c.skipped_cells;  // no characteristic foot in the box, or outside the inversion's reach
      }
    }
  }
  if (!any_required) {
    std::ostringstream os;
    os << "t = " << fv.t << " is not past the blowup curve by 0.02 in any compared row";
    throw Error(ErrorCode::ShockNotDetected, os.str());
  }
  c.l1_error = c.compared_cells > 0 ? err_sum / c.compared_cells : 0.0;
  return c;
}

SmoothComparison compare_fv_smooth(const Problem& p, const FieldGrid& fv, double foot_margin) {
  SmoothComparison c;
  double sum = 0.0;
  for (int j = 0; j < fv.ny; ++j)
    for (int i = 0; i < fv.nx; ++i) {
      try {
        const FieldSample s = eval_smooth(p, fv.t, fv.x(i), fv.y(j));
        if (!foot_inside(p.box(), s, foot_margin)) continue;
        const double e = std::fabs(fv.at(i, j) - s.u);
        c.max_error = std::max(c.max_error, e);
        sum += e;
        ++c.compared_cells;
      } catch (const Error&) {
      }
    }
  c.l1_error = c.compared_cells > 0 ? sum / c.compared_cells : 0.0;
  return c;
}

}  // namespace shockform
