#include <doctest.h>

#include <cmath>
#include <vector>

#include "shockform/field.hpp"

using namespace shockform;

namespace {

struct Fixture {
  Problem p;
  GncReport gnc;
  BlowupCurve curve;
  ShockFront front;
  Fixture(Problem prob, int n_beta)
      : p(std::move(prob)),
        gnc(find_first_blowup(p)),
        curve(BlowupCurve::build(p, gnc, std::vector<double>{-0.1, -0.05, 0.0, 0.05, 0.1})),
        front(ShockFront::solve(curve, [&] {
          FrontOptions o;
          o.epsilon = 0.04;
          o.beta_lo = -0.12;
          o.beta_hi = 0.12;
          o.n_beta = n_beta;
          return o;
        }())) {}
};

Fixture& fa() {
  static Fixture f(preset_a(), 6);
  return f;
}
Fixture& fb() {
  static Fixture f(preset_b(), 8);
  return f;
}
Fixture& fskew() {
  static Fixture f(preset_skew(), 8);
  return f;
}

}  // namespace

TEST_CASE("closed-form values for the G = 0 problem") {
  const auto& f = fa();
  // on y = 0 at t = 1 the characteristics give x = xi^3
  auto s = eval_gradient(f.curve, &f.front, 1.0, 1e-3, 0.0);
  CHECK(s.u == doctest::Approx(-0.099).epsilon(1e-10));
  CHECK(s.xi == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(s.u_x == doctest::Approx(-0.97 / 0.03).epsilon(1e-8));
  CHECK(s.u_t == doctest::Approx(-s.u * s.u_x).epsilon(1e-10));
  CHECK(s.u_y == doctest::Approx(0.0));

  s = eval_solution(f.curve, nullptr, 0.5, 0.0, 0.0);
  CHECK(std::fabs(s.u) < 1e-14);
  CHECK(s.region == Region::pre_blowup);

  s = eval_gradient(f.curve, nullptr, 0.99, 0.0, 0.0);
  CHECK(s.u_x == doctest::Approx(-100.0).epsilon(1e-8));
  CHECK(std::fabs(s.u_T) < 1e-12);

  // inside the cusp the side of the front decides
  const double w = f.front.eval(1.01, 0.0).w;
  CHECK(std::fabs(w) < 1e-8);
  const auto left = eval_solution(f.curve, &f.front, 1.01, -1e-4, 0.0);
  const auto right = eval_solution(f.curve, &f.front, 1.01, 1e-4, 0.0);
  CHECK(left.branch == Branch::minus);
  CHECK(right.branch == Branch::plus);
  CHECK(left.u > 0.09);
  CHECK(right.u < -0.09);
}

TEST_CASE("field errors") {
  const auto& f = fa();
  CHECK_THROWS_WITH_AS(eval_solution(f.curve, nullptr, 1.01, 0.0, 0.0), doctest::Contains("BranchUnavailable"),
                       Error);
  try {
    eval_solution(f.curve, &f.front, 1.01, f.front.eval(1.01, 0.0).w, 0.0);
    FAIL("expected OnShock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OnShock);
  }
  try {
    eval_gradient(f.curve, nullptr, 1.0, 0.0, 0.0);
    FAIL("expected JacobianVanishing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JacobianVanishing);
  }
  RaySpec short_ray;
  short_ray.r_min = 1e-4;
  short_ray.r_max = 1e-2;
  try {
    fit_exponent(f.curve, &f.front, short_ray);
    FAIL("expected InsufficientDecades");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientDecades);
  }
}

TEST_CASE("gradient matches finite differences") {
  for (Fixture* f : {&fa(), &fb(), &fskew()}) {
    const GammaSample g = f->curve.at(0.03);
    const double pts[][2] = {{-0.05, 0.01}, {-0.01, -0.004}, {0.02, 0.003}, {0.03, 0.02}};
    for (const auto& [dt, dx] : pts) {
      const double t = g.t_star + dt, x = g.x_star + dx, y = 0.03;
      const auto s = eval_gradient(f->curve, &f->front, t, x, y);
      const double h = 1e-6;
      auto u = [&](double tt, double xx, double yy) {
        return eval_with_front(f->curve, s.branch == Branch::minus ? 1.0 : -1.0, tt, xx, yy, false).u;
      };
      if (s.region == Region::inside_cusp || s.region == Region::boundary) {
        // stay on the same sheet while differencing
        const double ut = (u(t + h, x, y) - u(t - h, x, y)) / (2 * h);
        const double ux = (u(t, x + h, y) - u(t, x - h, y)) / (2 * h);
        CHECK(ut == doctest::Approx(s.u_t).epsilon(1e-4));
        CHECK(ux == doctest::Approx(s.u_x).epsilon(1e-4));
        continue;
      }
      auto v = [&](double tt, double xx, double yy) {
        return eval_solution(f->curve, nullptr, tt, xx, yy).u;
      };
      CHECK((v(t + h, x, y) - v(t - h, x, y)) / (2 * h) == doctest::Approx(s.u_t).epsilon(1e-4));
      CHECK((v(t, x + h, y) - v(t, x - h, y)) / (2 * h) == doctest::Approx(s.u_x).epsilon(1e-4));
      CHECK((v(t, x, y + h) - v(t, x, y - h)) / (2 * h) == doctest::Approx(s.u_y).epsilon(1e-4));
    }
  }
}

TEST_CASE("singular exponents along rays") {
  const auto& f = fa();
  auto fit = [&](RayDirection d, RayQuantity q) {
    RaySpec r;
    r.direction = d;
    r.quantity = q;
    r.r_min = 1e-9;
    r.r_max = 1e-4;
    r.samples = 16;
    return fit_exponent(f.curve, &f.front, r);
  };
  const auto a = fit(RayDirection::x_at_fixed_t, RayQuantity::u_increment);
  CHECK(std::fabs(a.slope - 1.0 / 3.0) <= 0.02);
  CHECK(a.r2 > 0.999);
  const auto b = fit(RayDirection::x_at_fixed_t, RayQuantity::du_dx);
  CHECK(std::fabs(b.slope + 2.0 / 3.0) <= 0.03);
  const auto c = fit(RayDirection::t_at_fixed_x, RayQuantity::du_dx);
  CHECK(std::fabs(c.slope + 1.0) <= 0.03);

  // the skewed problem has a nonzero tangent speed. Below r ~ 1e-6 the
  // foot-point root carries rounding of order 1e-16 / D, so stay above it.
  const auto& s = fskew();
  RaySpec r;
  r.direction = RayDirection::tangent;
  r.quantity = RayQuantity::grad_norm;
  r.r_min = 1e-5;
  r.r_max = 1e-2;
  r.samples = 12;
  const auto d = fit_exponent(s.curve, &s.front, r);
  CHECK(std::fabs(d.slope + 1.0) <= 0.05);
  // d_T u is bounded by the inverse gauge, r^(-1/2) on this ray
  r.quantity = RayQuantity::tangential;
  const auto e = fit_exponent(s.curve, &s.front, r);
  CHECK(e.slope >= -0.55);
  // and by r^(-1/3) across the curve, where d_x u grows like r^(-2/3)
  r.direction = RayDirection::x_at_fixed_t;
  r.r_min = 1e-7;
  r.r_max = 1e-3;
  const auto f1 = fit_exponent(s.curve, &s.front, r);
  r.quantity = RayQuantity::du_dx;
  const auto f2 = fit_exponent(s.curve, &s.front, r);
  CHECK(std::fabs(f2.slope + 2.0 / 3.0) <= 0.05);
  CHECK(f1.slope >= -1.0 / 3.0 - 0.05);
}

TEST_CASE("weighted sups stay bounded under refinement") {
  for (Fixture* f : {&fa(), &fb(), &fskew()}) {
    for (Gauge g : {Gauge::e0, Gauge::e1, Gauge::eT}) {
      const auto coarse = gauge_sup(f->curve, &f->front, 0.0, g, 0.02, 0.01, 8);
      const auto fine = gauge_sup(f->curve, &f->front, 0.0, g, 0.02, 0.01, 16);
      INFO(f->p.preset_id().value(), " ", to_string(g), " ", coarse.sup, " -> ", fine.sup);
      CHECK(std::isfinite(fine.sup));
      CHECK(fine.sup > 0.0);
      CHECK(std::fabs(fine.sup - coarse.sup) <= 0.1 * coarse.sup);
    }
  }
}

TEST_CASE("integral form holds across the front") {
  for (Fixture* f : {&fb(), &fskew()}) {
    const double t0 = f->curve.at(0.0).t_star;
    const double x0 = f->curve.at(0.0).x_star;
    // three bumps crossing the shock, all starting after the curve
    const double bumps[][3] = {{0.0, 0.0, 0.03}, {0.004, 0.02, 0.03}, {-0.006, -0.03, 0.025}};
    for (const auto& [dx, yc, ry] : bumps) {
      const auto ok = weak_form_check(f->front, t0 + 0.025, x0 + dx, yc, 0.01, 0.02, ry, 16);
      INFO(f->p.preset_id().value(), " bump at y=", yc, ": ", ok.relative);
      CHECK(ok.relative <= 1e-6);
      // a misplaced shock violates Rankine–Hugoniot
      const auto bad = weak_form_check(f->front, t0 + 0.025, x0 + dx, yc, 0.01, 0.02, ry, 16, 1e-3);
      CHECK(bad.relative > 1e-4);
    }
  }
}
