#include <doctest.h>

#include <cmath>

#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"
#include "shockform/problem.hpp"

using namespace shockform;

TEST_CASE("preset-a phi/psi oracle values") {
  const Problem p = preset_a();
  auto j = eval_phi_psi(p, 0.0, 0.0);
  CHECK(j.phi.value() == doctest::Approx(0.0));
  CHECK(j.psi.value() == doctest::Approx(0.0));
  CHECK(j.phi_d(1, 0) == doctest::Approx(-1.0));
  CHECK(j.psi_d(0, 1) == doctest::Approx(0.0));

  j = eval_phi_psi(p, 0.1, 0.0);
  CHECK(j.phi.value() == doctest::Approx(-0.099).epsilon(1e-14));
  CHECK(j.phi_d(1, 0) == doctest::Approx(-0.97).epsilon(1e-14));

  j = eval_phi_psi(p, 0.0, 0.1);
  CHECK(j.psi.value() == 0.0);
  CHECK(j.psi_d(1, 0) == 0.0);
}

TEST_CASE("preset-a H oracle values and normalisation") {
  const Problem p = preset_a();
  HJet h = eval_H(p, 0.0, 0.0);
  CHECK(h.value() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(h.d(1, 0) == doctest::Approx(0.0));
  CHECK(h.d(0, 1) == doctest::Approx(0.0));
  CHECK(h.d(2, 0) == doctest::Approx(6.0));
  CHECK(h.d(1, 1) == doctest::Approx(0.0));
  CHECK(h.d(0, 2) == doctest::Approx(6.0));
  // d_eta psi(0,0) = 0 >= -1/2 >= d_xi phi(0,0) = -1
  const auto j = eval_phi_psi(p, 0.0, 0.0);
  CHECK(j.psi_d(0, 1) >= -0.5);
  CHECK(-0.5 >= j.phi_d(1, 0));

  h = eval_H(p, 0.1, 0.2);
  CHECK(h.value() == doctest::Approx(-0.85).epsilon(1e-14));
}

TEST_CASE("H agrees with the chain-rule path at sampled points") {
  for (const Problem& p : {preset_a(), preset_b()}) {
    for (int i = 1; i <= 200; ++i) {
      const double xi = -0.45 + 0.9 * num::halton(i, 2);
      const double eta = -0.45 + 0.9 * num::halton(i, 3);
      const HJet a = eval_H(p, xi, eta);
      const HJet b = eval_H_chain_rule(p, xi, eta);
      for (int k = 0; k < Series2::kSize; ++k) {
        const double scale = std::max(1.0, std::fabs(a.series.raw(k)));
        CHECK(std::fabs(a.series.raw(k) - b.series.raw(k)) <= 1e-10 * scale);
      }
      const auto j = eval_phi_psi(p, xi, eta);
      CHECK(std::fabs(a.value() - (j.phi_d(1, 0) + j.psi_d(0, 1))) <= 1e-10 * std::max(1.0, std::fabs(a.value())));
    }
  }
}

TEST_CASE("preset-b jets: psi = u0^2") {
  const Problem p = preset_b();
  const double x = 0.2, y = -0.1;
  const double u = -x + x * x * x + 3 * x * y * y;
  const auto j = eval_phi_psi(p, x, y);
  CHECK(j.psi.value() == doctest::Approx(u * u));
  const double ux = -1 + 3 * x * x + 3 * y * y;
  CHECK(j.psi_d(1, 0) == doctest::Approx(2 * u * ux));
}

TEST_CASE("corrupted flux jet is rejected") {
  ProblemDefinition d;
  d.flux_x = [](double u) {
    FluxJet j = polynomial_flux({0, 0, 0.5, 0, 0, 0})(u);
    j.speed[1] *= 2.0;  // f' off by a factor of two
    return j;
  };
  d.flux_y = polynomial_flux({});
  d.initial = cubic_preset_data();
  d.box = {-0.5, 0.5, -0.5, 0.5};
  try {
    Problem::make(d);
    FAIL("expected JetMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JetMismatch);
  }
}

TEST_CASE("corrupted data jet is rejected") {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.flux_y = polynomial_flux({});
  d.initial = [](double x, double y, int order) {
    Series2 s = cubic_preset_data()(x, y, order);
    if (order >= 3) s.set_partial({1, 2}, 5.0);
    return s;
  };
  d.box = {-0.5, 0.5, -0.5, 0.5};
  CHECK_THROWS_AS(Problem::make(d), Error);
}

TEST_CASE("empty box is rejected") {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.flux_y = polynomial_flux({});
  d.initial = cubic_preset_data();
  d.box = {0.5, 0.5, -0.5, 0.5};
  try {
    Problem::make(d);
    FAIL("expected DomainEmpty");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainEmpty);
  }
}

TEST_CASE("evaluation outside the box raises OutOfDomain") {
  const Problem p = preset_a();
  try {
    eval_H(p, 0.6, 0.0);
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
}

TEST_CASE("jets are pure") {
  const Problem p = preset_b();
  const auto a = eval_phi_psi(p, 0.13, -0.27);
  const auto b = eval_phi_psi(p, 0.13, -0.27);
  for (int k = 0; k < Series2::kSize; ++k) {
    CHECK(a.phi.raw(k) == b.phi.raw(k));
    CHECK(a.psi.raw(k) == b.psi.raw(k));
  }
}
