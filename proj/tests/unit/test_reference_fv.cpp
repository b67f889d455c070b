#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "shockform/reference_fv.hpp"

using namespace shockform;

namespace {

struct FrontFixture {
  Problem p = preset_a();
  GncReport gnc = find_first_blowup(p);
  BlowupCurve curve = BlowupCurve::build(p, gnc, std::vector<double>{-0.1, -0.05, 0.0, 0.05, 0.1});
  ShockFront front = ShockFront::solve(curve, [] {
    FrontOptions o;
    o.epsilon = 0.22;  // reaches t = 1.2
    o.beta_lo = -0.1;
    o.beta_hi = 0.1;
    o.n_beta = 6;
    return o;
  }());
};

FrontFixture& fixture() {
  static FrontFixture f;
  return f;
}

Problem constant_problem(double c) {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.flux_y = polynomial_flux({0, 0, 0, 1.0 / 3.0, 0, 0});
  d.initial = [c](double, double, int order) {
    Series2 s(order);
    s.set_partial({0, 0}, c);
    return s;
  };
  d.box = {-0.5, 0.5, -0.5, 0.5};
  return Problem::make(std::move(d));
}

Problem wave_problem() {
  // smooth periodic data, non-convex flux in x
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0, 0, 0.25, 0});  // u^4/4
  d.flux_y = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.initial = [](double x, double y, int order) {
    const double k = 2 * M_PI;
    Series2 s(order);
    // 0.3 sin(kx) + 0.2 cos(ky)
    const double sx[] = {std::sin(k * x), std::cos(k * x), -std::sin(k * x), -std::cos(k * x), std::sin(k * x)};
    const double cy[] = {std::cos(k * y), -std::sin(k * y), -std::cos(k * y), std::sin(k * y), std::cos(k * y)};
    for (int i = 0; i <= order; ++i) {
      if (i == 0)
        s.set_partial({0, 0}, 0.3 * sx[0] + 0.2 * cy[0]);
      else {
        s.set_partial({i, 0}, 0.3 * std::pow(k, i) * sx[i]);
        s.set_partial({0, i}, 0.2 * std::pow(k, i) * cy[i]);
      }
    }
    return s;
  };
  d.box = {-0.5, 0.5, -0.5, 0.5};
  return Problem::make(std::move(d));
}

}  // namespace

TEST_CASE("Godunov flux") {
  auto f = [](double u) { return 0.5 * u * u; };
  const std::vector<double> crit{0.0};
  CHECK(godunov_flux(f, crit, -1.0, 2.0) == 0.0);  // transonic rarefaction
  CHECK(godunov_flux(f, crit, 2.0, -1.0) == 2.0);  // shock: max
  CHECK(godunov_flux(f, crit, 0.5, 1.0) == 0.125);
  CHECK(godunov_flux(f, crit, 1.0, 0.5) == 0.5);
  // non-convex: u^3/3 - u has critical points at +-1
  const FluxEvaluator cubic = polynomial_flux({0, -1, 0, 1.0 / 3.0, 0, 0});
  const auto cp = flux_critical_points(cubic, -3.0, 3.0);
  REQUIRE(cp.size() == 2);
  CHECK(cp[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(cp[1] == doctest::Approx(1.0).epsilon(1e-14));
  auto g = [&](double u) { return cubic(u).primitive; };
  CHECK(godunov_flux(g, cp, -2.0, 2.0) == doctest::Approx(-2.0 / 3.0));  // min at u = -2 and u = 1
  CHECK(godunov_flux(g, cp, 2.0, -2.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("initial averages and constants") {
  const Problem p = preset_a();
  FvSpec s;
  s.nx = s.ny = 64;
  const FieldGrid g = run_fv(p, s, 0.0);
  CHECK(g.steps == 0);
  // 3-point Gauss is exact for the cubic data
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j), h = g.hx;
      const double avg = -x + x * x * x + x * h * h / 4 + 3 * x * (y * y + h * h / 12);
      worst = std::max(worst, std::fabs(g.at(i, j) - avg));
    }
  CHECK(worst <= 1e-8);

  const Problem c = constant_problem(0.3);
  for (Boundary b : {Boundary::outflow, Boundary::periodic}) {
    s.boundary = b;
    const FieldGrid k = run_fv(c, s, 0.4);
    CHECK(k.steps > 0);
    double dev = 0.0;
    for (double v : k.u) dev = std::max(dev, std::fabs(v - 0.3));
    CHECK(dev <= 1e-15);
  }
}

TEST_CASE("spec validation") {
  const Problem p = preset_a();
  FvSpec s;
  s.nx = s.ny = 64;
  s.cfl = 0.5;
  CHECK_THROWS_WITH_AS(run_fv(p, s, 0.1), doctest::Contains("CflViolation"), Error);
  s.cfl = 0.45;
  s.nx = 32;
  CHECK_THROWS_AS(run_fv(p, s, 0.1), Error);
  s.nx = 64;
  s.t_blowup = 1.0;
  CHECK_THROWS_AS(run_fv(p, s, 1.6), Error);
}

TEST_CASE("conservation and maximum principle") {
  const Problem p = wave_problem();
  FvSpec s;
  s.nx = s.ny = 96;
  s.boundary = Boundary::periodic;
  int snapshots = 0;
  s.snapshot_every = 0.1;
  const FieldGrid start = initial_grid(p, s);
  const FieldGrid g = run_fv(p, s, 0.6, [&](const FieldGrid&) { ++snapshots; });
  CHECK(snapshots >= 5);
  CHECK(g.max_step_mass_change <= 1e-12);
  CHECK(g.max_conservation_defect <= 1e-12);
  CHECK(std::fabs(g.mass() - start.mass()) <= 1e-12);
  const auto [mn, mx] = std::minmax_element(g.u.begin(), g.u.end());
  CHECK(*mn >= g.initial_min - 1e-14);
  CHECK(*mx <= g.initial_max + 1e-14);
  // steepened into shocks by now
  CHECK(*mx - *mn > 0.5);
}

TEST_CASE("smooth regime agrees with characteristics") {
  const Problem p = preset_a();
  FvSpec s;
  s.nx = s.ny = 256;
  const FieldGrid g = run_fv(p, s, 0.5);
  const auto c = compare_fv_smooth(p, g);
  CHECK(c.compared_cells > 30000);
  CHECK(c.max_error <= 0.01);
  auto& f = fixture();
  try {
    compare_fv(g, f.front);
    FAIL("expected ShockNotDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShockNotDetected);
  }
}

TEST_CASE("shock position and banded error converge") {
  auto& f = fixture();
  double prev = INFINITY;
  for (int n : {128, 256, 512}) {
    FvSpec s;
    s.nx = s.ny = n;
    const FieldGrid g = run_fv(f.p, s, 1.2);
    const auto c = compare_fv(g, f.front);
    INFO(n, ": offset ", c.max_offset_cells, " cells, L1 ", c.l1_error, " over ", c.compared_cells);
    CHECK(c.max_offset_cells <= 2.0);
    CHECK(c.l1_error <= 0.02);
    CHECK(c.compared_cells > 0);
    // outflow boundaries: mass changes only through the boundary fluxes
    CHECK(g.max_conservation_defect <= 1e-12);
    CHECK(c.l1_error < prev);
    prev = c.l1_error;
    for (const auto& r : c.rows)
      if (r.required) CHECK(r.detected);
  }
}
