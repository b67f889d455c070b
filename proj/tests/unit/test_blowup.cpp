#include <doctest.h>

#include <cmath>
#include <vector>

#include "shockform/blowup.hpp"
#include "shockform/char_geometry.hpp"
#include "shockform/expr.hpp"
#include "shockform/numerics.hpp"

using namespace shockform;

namespace {

const Problem& pa() {
  static const Problem p = preset_a();
  return p;
}
const Problem& pb() {
  static const Problem p = preset_b();
  return p;
}

std::vector<double> grid() { return {-0.15, -0.1, -0.05, 0.0, 0.05, 0.1, 0.15}; }

}  // namespace

TEST_CASE("first blowup point of preset-a") {
  const GncReport r = find_first_blowup(pa());
  CHECK(std::fabs(r.xi0) <= 1e-8);
  CHECK(std::fabs(r.eta0) <= 1e-8);
  CHECK(std::fabs(r.min_h + 1.0) <= 1e-10);
  CHECK(std::fabs(r.eigenvalues[0] - 6.0) <= 1e-6);
  CHECK(std::fabs(r.eigenvalues[1] - 6.0) <= 1e-6);
  CHECK(std::fabs(r.t_star0 - 1.0) <= 1e-10);
  CHECK(r.unique_min);
  CHECK(r.gradient_norm <= 1e-8);
}

TEST_CASE("condition failures are reported by clause") {
  auto make = [](const char* u0) {
    return Problem::make(expression_problem("u^2/2", "0", u0, {-0.5, 0.5, -0.5, 0.5}));
  };
  const Problem plus = make("x");
  GncReport r = analyze_gnc(plus);
  REQUIRE(r.failure.has_value());
  CHECK(*r.failure == ErrorCode::NoNegativeMin);
  CHECK_THROWS_AS(find_first_blowup(plus), Error);

  const Problem minus = make("-x");
  r = analyze_gnc(minus);
  REQUIRE(r.failure.has_value());
  CHECK(*r.failure == ErrorCode::GncViolated);

  // two symmetric wells: H = -1 + (x^2 - 0.04)^2 * 100 + 3 y^2 type data
  const Problem twin = make("-x + 100*(x^5/5 - 0.08*x^3/3 + 0.0016*x) + 3*x*y^2");
  r = analyze_gnc(twin);
  REQUIRE(r.failure.has_value());
  CHECK(*r.failure == ErrorCode::GncViolated);
}

TEST_CASE("blowup curve of preset-a matches the closed form") {
  const GncReport r = find_first_blowup(pa());
  const auto ys = grid();
  const BlowupCurve c = BlowupCurve::build(pa(), r, ys);
  REQUIRE(c.samples().size() == ys.size());
  for (const auto& g : c.samples()) {
    CHECK(std::fabs(g.t_star - 1.0 / (1.0 - 3.0 * g.y * g.y)) <= 1e-8);
    CHECK(std::fabs(g.x_star) <= 1e-8);
    CHECK(std::fabs(g.xi_star) <= 1e-8);
    CHECK(g.y_star == doctest::Approx(g.y));
    CHECK(std::fabs(g.tangent_slope) <= 1e-8);
    CHECK(g.newton_residual <= 1e-10);
    CHECK(g.t_star >= r.t_star0 - 1e-12);
    // dT*/dy = 6y / (1 - 3y^2)^2
    const double d = 1.0 - 3.0 * g.y * g.y;
    CHECK(g.dt_star == doctest::Approx(6.0 * g.y / (d * d)).epsilon(1e-9));
  }
  const GammaSample g = c.at(0.2);
  CHECK(g.t_star == doctest::Approx(1.0 / 0.88).epsilon(1e-10));
}

TEST_CASE("cusp coefficients of preset-a") {
  const GncReport r = find_first_blowup(pa());
  const BlowupCurve c = BlowupCurve::build(pa(), r, grid());
  CuspCoeffs k = c.data_at(0.0).coeffs;
  CHECK(k.c1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k.c2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::fabs(k.theta0) <= 1e-12);
  CHECK(k.A1 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(k.b_star == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-10));

  k = c.data_at(0.1).coeffs;
  CHECK(k.c1 == doctest::Approx(0.97).epsilon(1e-10));
  CHECK(k.c2 == doctest::Approx(1.0 / 0.97).epsilon(1e-10));
  CHECK(k.A1 == doctest::Approx(0.97 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(k.D0 == doctest::Approx(0.97).epsilon(1e-10));
  CHECK(k.D1 == doctest::Approx(3.0 / 0.97).epsilon(1e-10));
}

TEST_CASE("curve invariants for preset-b") {
  const GncReport r = find_first_blowup(pb());
  CHECK(r.t_star0 == doctest::Approx(1.0));
  const auto ys = grid();
  const BlowupCurve c = BlowupCurve::build(pb(), r, ys);
  double tmin = 1e9, ymin = 1e9;
  for (const auto& g : c.samples()) {
    CHECK(g.newton_residual <= 1e-10);
    CHECK(g.t_star >= r.t_star0 - 1e-12);
    if (g.t_star < tmin) {
      tmin = g.t_star;
      ymin = g.y;
    }
    const CuspCoeffs k = cusp_coeffs(pb(), g, c.t_limit());
    CHECK(k.D0 > 0);
    CHECK(k.D1 > 0);
    CHECK(k.A1 > 0);
    CHECK(k.b_star > 0);
    CHECK(k.c1 > 0);
    CHECK(k.c2 > 0);
    // identities of the local cubic normal form
    CHECK(k.A1 * k.A1 == doctest::Approx(k.c1 / (3.0 * k.c2)).epsilon(1e-8));
    CHECK(k.b_star == doctest::Approx(k.A1 * (k.c1 - k.c2 * k.A1 * k.A1)).epsilon(1e-8));
    // leading-order forms hold up to O(y); psi = u0^2 makes the slope large
    const double band = 8.0 * std::fabs(g.y) + 1e-8;
    CHECK(std::fabs(k.c1 - 1.0) <= band);
    CHECK(std::fabs(k.c2 - (1.0 + k.theta0)) <= band);
    CHECK(std::fabs(k.A1 - 1.0 / std::sqrt(3.0 + 3.0 * k.theta0)) <= band);
    // implicit derivative vs differencing of the curve
    const double h = 1e-5;
    const double fd = (c.at(g.y + h).t_star - c.at(g.y - h).t_star) / (2 * h);
    CHECK(dtstar_dy_formula(pb(), g, c.t_limit()) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(g.dt_star == doctest::Approx(fd).epsilon(1e-6));
    const double fdx = (c.at(g.y + h).x_star - c.at(g.y - h).x_star) / (2 * h);
    CHECK(std::fabs(g.dx_star - fdx) <= 1e-6);
    const double fdk = (c.at(g.y + h).tangent_slope - c.at(g.y - h).tangent_slope) / (2 * h);
    CHECK(std::fabs(g.dtangent - fdk) <= 1e-6);
  }
  CHECK(ymin == doctest::Approx(0.0));
}

TEST_CASE("monotone squeeze: dD/dt < 0 on the fold surface") {
  const GncReport r = find_first_blowup(pb());
  const BlowupCurve c = BlowupCurve::build(pb(), r, grid());
  for (double y : grid()) {
    const GammaData gd = c.data_at(y);
    for (double tau : {1e-4, 1e-3, 1e-2}) {
      const double t = gd.gamma.t_star + tau;
      const CuspFolds f = cusp_boundary(pb(), gd, t, c.t_limit());
      for (double xi : {f.xi_left, f.xi_right}) {
        const CharComposite cc = char_composite(pb(), t, xi, y);
        const double dDdt = cc.H.value() + t * cc.H.partial({1, 0, 0});
        CHECK(dDdt < 0.0);
      }
    }
  }
}

TEST_CASE("cusp boundary of preset-a") {
  const GncReport r = find_first_blowup(pa());
  const BlowupCurve c = BlowupCurve::build(pa(), r, grid());
  const GammaData gd = c.data_at(0.0);
  const CuspFolds f = cusp_boundary(pa(), gd, 1.01, c.t_limit());
  const double xf = std::sqrt(0.01 / 3.03);
  CHECK(f.xi_right == doctest::Approx(xf).epsilon(1e-10));
  CHECK(f.xi_left == doctest::Approx(-xf).epsilon(1e-10));
  const double width = f.x_plus - f.x_minus;
  CHECK(width == doctest::Approx(2.0 * gd.coeffs.b_star * 1e-3).epsilon(0.05));
  const CuspFolds tip = cusp_boundary(pa(), gd, 1.0, c.t_limit());
  CHECK(tip.x_plus - tip.x_minus == 0.0);
  CHECK_THROWS_AS(cusp_boundary(pa(), gd, 0.99, c.t_limit()), Error);

  std::vector<double> taus, widths;
  for (double tau = 1e-4; tau <= 1.0001e-2; tau *= std::sqrt(10.0)) {
    const CuspFolds ff = cusp_boundary(pa(), gd, 1.0 + tau, c.t_limit());
    taus.push_back(tau);
    widths.push_back(ff.x_plus - ff.x_minus);
  }
  const auto fit = num::loglog_fit(taus, widths);
  CHECK(std::fabs(fit.slope - 1.5) <= 0.02);
}

TEST_CASE("cusp width scaling for preset-b") {
  const GncReport r = find_first_blowup(pb());
  const BlowupCurve c = BlowupCurve::build(pb(), r, grid());
  for (double y : {-0.1, 0.0, 0.1}) {
    const GammaData gd = c.data_at(y);
    std::vector<double> taus, widths;
    for (double tau = 1e-4; tau <= 1.0001e-2; tau *= std::sqrt(10.0)) {
      const CuspFolds ff = cusp_boundary(pb(), gd, gd.gamma.t_star + tau, c.t_limit());
      taus.push_back(tau);
      widths.push_back(ff.x_plus - ff.x_minus);
    }
    const auto fit = num::loglog_fit(taus, widths);
    CHECK(fit.slope >= 1.45);
    CHECK(fit.slope <= 1.55);
    const double prefactor = std::exp(fit.intercept);
    CHECK(prefactor == doctest::Approx(2.0 * gd.coeffs.b_star).epsilon(0.1));
  }
}

TEST_CASE("delta selection") {
  const GncReport r = find_first_blowup(pa());
  CHECK(select_delta(pa(), r, 0.1) == doctest::Approx(0.1));
}
