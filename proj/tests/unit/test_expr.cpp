#include <doctest.h>

#include <cmath>

#include "shockform/errors.hpp"
#include "shockform/expr.hpp"

using namespace shockform;

TEST_CASE("parse and evaluate with precedence") {
  const Expr e = Expr::parse("1 + 2*x^2 - -3/x", {"x"});
  CHECK(e.eval({{"x", 2.0}}) == doctest::Approx(1 + 8 + 1.5));
  CHECK(Expr::parse("2^3^2", {}).eval({}) == doctest::Approx(512.0));
  CHECK(Expr::parse("-x^2", {"x"}).eval({{"x", 3.0}}) == doctest::Approx(-9.0));
}

TEST_CASE("symbolic derivatives") {
  const Expr e = Expr::parse("sin(x)*exp(2*x) + x^3", {"x"});
  const Expr d = e.derivative("x");
  const double x = 0.7;
  const double expect = std::cos(x) * std::exp(2 * x) + 2 * std::sin(x) * std::exp(2 * x) + 3 * x * x;
  CHECK(d.eval({{"x", x}}) == doctest::Approx(expect).epsilon(1e-14));
  const Expr dd = Expr::parse("cos(x*y)", {"x", "y"}).derivative("y");
  CHECK(dd.eval({{"x", 2.0}, {"y", 0.5}}) == doctest::Approx(-2 * std::sin(1.0)));
}

TEST_CASE("invalid expressions") {
  CHECK_THROWS_AS(Expr::parse("1 + ", {"x"}), Error);
  CHECK_THROWS_AS(Expr::parse("z", {"x"}), Error);
  CHECK_THROWS_AS(Expr::parse("sin x", {"x"}), Error);
  CHECK_THROWS_AS(Expr::parse("(x", {"x"}), Error);
}

TEST_CASE("expression problem reproduces preset-b jets") {
  const auto def = expression_problem("u^2/2", "u^3/3", "-x + x^3 + 3*x*y^2", {-0.5, 0.5, -0.5, 0.5});
  const Problem p = Problem::make(def);
  const Problem q = preset_b();
  const auto a = eval_phi_psi(p, 0.21, -0.13);
  const auto b = eval_phi_psi(q, 0.21, -0.13);
  for (int k = 0; k < Series2::kSize; ++k) {
    CHECK(a.phi.raw(k) == doctest::Approx(b.phi.raw(k)).epsilon(1e-13));
    CHECK(a.psi.raw(k) == doctest::Approx(b.psi.raw(k)).epsilon(1e-13));
  }
}

TEST_CASE("transcendental custom problem validates") {
  const auto def = expression_problem("u^2/2 + sin(u)/10", "0", "-sin(x)*exp(y*y/4)", {-0.5, 0.5, -0.5, 0.5});
  CHECK_NOTHROW(Problem::make(def));
}
