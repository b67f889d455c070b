#include <doctest.h>

#include <cmath>

#include "shockform/char_geometry.hpp"
#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"

using namespace shockform;

TEST_CASE("forward characteristics") {
  const Problem p = preset_a();
  auto [x, y] = forward_char(p, 1.0, 0.0, 0.0);
  CHECK(x == 0.0);
  CHECK(y == 0.0);
  std::tie(x, y) = forward_char(p, 0.5, 0.2, 0.0);
  CHECK(x == doctest::Approx(0.104).epsilon(1e-14));
  CHECK(y == 0.0);
  std::tie(x, y) = forward_char(preset_b(), 0.0, 0.3, -0.2);
  CHECK(x == 0.3);
  CHECK(y == -0.2);
}

TEST_CASE("implicit foot for preset-a is the identity in y") {
  const Problem p = preset_a();
  const YJet Y = solve_Y(p, 0.8, 0.1, 0.23);
  CHECK(Y.eta == 0.23);
  CHECK(Y.dt == 0.0);
  CHECK(Y.dxi == 0.0);
  CHECK(Y.dy == 1.0);
}

TEST_CASE("implicit foot for preset-b") {
  const Problem p = preset_b();
  CHECK(solve_Y(p, 0.0, 0.1, 0.2).eta == 0.2);
  const YJet Y = solve_Y(p, 0.5, 0.0, 0.1);
  // psi(0, eta) = u0(0, eta)^2 = 0, so eta = y here
  CHECK(std::fabs(Y.residual) <= 1e-12);
  const YJet Z = solve_Y(p, 0.9, 0.3, 0.1);
  const auto j = eval_phi_psi(p, 0.3, Z.eta);
  CHECK(std::fabs(Z.eta + 0.9 * j.psi.value() - 0.1) <= 1e-12);
}

TEST_CASE("Y jet matches finite differences and the series solve") {
  const Problem p = preset_b();
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.2 + 0.9 * num::halton(i, 2);
    const double xi = -0.3 + 0.6 * num::halton(i, 3);
    const double y = -0.3 + 0.6 * num::halton(i, 5);
    const YJet Y = solve_Y(p, t, xi, y);
    const double h = 1e-5;
    const double fd_t = (solve_eta(p, t + h, xi, y) - solve_eta(p, t - h, xi, y)) / (2 * h);
    const double fd_x = (solve_eta(p, t, xi + h, y) - solve_eta(p, t, xi - h, y)) / (2 * h);
    const double fd_y = (solve_eta(p, t, xi, y + h) - solve_eta(p, t, xi, y - h)) / (2 * h);
    CHECK(Y.dt == doctest::Approx(fd_t).epsilon(1e-6));
    CHECK(Y.dxi == doctest::Approx(fd_x).epsilon(1e-6));
    CHECK(Y.dy == doctest::Approx(fd_y).epsilon(1e-6));

    const CharComposite c = char_composite(p, t, xi, y);
    CHECK(c.Y.partial({1, 0, 0}) == doctest::Approx(Y.dt).epsilon(1e-12));
    CHECK(c.Y.partial({0, 1, 0}) == doctest::Approx(Y.dxi).epsilon(1e-12));
    CHECK(c.Y.partial({0, 0, 1}) == doctest::Approx(Y.dy).epsilon(1e-12));
    CHECK(c.Y.partial({1, 1, 0}) == doctest::Approx(Y.dt_dxi).epsilon(1e-10));
    CHECK(c.Y.partial({0, 2, 0}) == doctest::Approx(Y.dxi_dxi).epsilon(1e-10));
    CHECK(c.Y.partial({0, 3, 0}) == doctest::Approx(Y.dxi3).epsilon(1e-9));
  }
}

TEST_CASE("Jacobian determinant") {
  const Problem p = preset_a();
  CHECK(jacobian_D(p, 1.0, 0.0, 0.0) == doctest::Approx(0.0));
  CHECK(jacobian_D(p, 0.5, 0.0, 0.0) == doctest::Approx(0.5));
  CHECK(jacobian_D(preset_b(), 0.0, 0.2, 0.1) == 1.0);
}

TEST_CASE("round trip and constancy along characteristics") {
  for (const Problem& p : {preset_a(), preset_b()}) {
    int used = 0;
    for (int i = 1; i <= 200; ++i) {
      const double t = 0.95 * num::halton(i, 2);
      const double xi = -0.3 + 0.6 * num::halton(i, 3);
      const double eta = -0.3 + 0.6 * num::halton(i, 5);
      if (jacobian_D(p, t, xi, eta) <= 0.05) continue;
      ++used;
      const auto [x, y] = forward_char(p, t, xi, eta);
      const double e = solve_eta(p, t, xi, y);
      const auto [x2, y2] = forward_char(p, t, xi, e);
      CHECK(std::fabs(x2 - x) <= 1e-10);
      CHECK(std::fabs(y2 - y) <= 1e-10);
      CHECK(std::fabs(p.u0(xi, e) - p.u0(xi, eta)) <= 1e-10);
    }
    CHECK(used > 100);
  }
}

TEST_CASE("characteristic map derivatives") {
  const Problem p = preset_b();
  const double t = 1.02, y = 0.05;
  for (double xi : {-0.1, 0.0, 0.07}) {
    const MapSample m = char_map(p, t, xi, y, 2);
    const double h = 1e-5;
    const double xp = char_map(p, t, xi + h, y, 0).x, xm = char_map(p, t, xi - h, y, 0).x;
    CHECK(m.dx == doctest::Approx((xp - xm) / (2 * h)).epsilon(1e-7));
    const double dp = char_map(p, t, xi + h, y, 1).dx, dm = char_map(p, t, xi - h, y, 1).dx;
    CHECK(m.d2x == doctest::Approx((dp - dm) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("time guard") {
  const Problem p = preset_a();
  CHECK_THROWS_AS(solve_eta(p, 2.0, 0.0, 0.0, 4.0 / 3.0), Error);
  CHECK_THROWS_AS(forward_char(p, -0.1, 0.0, 0.0), Error);
}
