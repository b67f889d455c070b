#include <doctest.h>

#include <cmath>

#include "shockform/series.hpp"

using namespace shockform;

TEST_CASE("series product matches polynomial expansion") {
  // (1 + a + b)^2 = 1 + 2a + 2b + a^2 + 2ab + b^2
  const Series2 s = Series2::variable(0, 1.0) + Series2::variable(1, 0.0);
  const Series2 sq = s * s;
  CHECK(sq.value() == doctest::Approx(1.0));
  CHECK(sq.coeff({1, 0}) == doctest::Approx(2.0));
  CHECK(sq.coeff({0, 1}) == doctest::Approx(2.0));
  CHECK(sq.coeff({1, 1}) == doctest::Approx(2.0));
  CHECK(sq.partial({1, 1}) == doctest::Approx(2.0));
  CHECK(sq.partial({2, 0}) == doctest::Approx(2.0));
}

TEST_CASE("reciprocal inverts a series to full order") {
  const Series3 s = Series3::variable(0, 2.0) + Series3::variable(1, 0.0) * 3.0 +
                    Series3::variable(2, 0.0) * Series3::variable(0, 0.0);
  const Series3 one = s * s.reciprocal();
  CHECK(one.value() == doctest::Approx(1.0));
  for (int i = 1; i < Series3::kSize; ++i) CHECK(std::fabs(one.raw(i)) < 1e-13);
}

TEST_CASE("univariate composition reproduces exp") {
  const Series2 x = Series2::variable(0, 0.3) + Series2::variable(1, 0.0) * 2.0;
  const double e = std::exp(0.3);
  const std::array<double, 5> d{e, e, e, e, e};
  const Series2 ex = compose_univariate<2>(d, x);
  // d^4/dx^4 exp(x + 2y) = e; d^4/dy^4 = 16 e; mixed (2,2) = 4 e
  CHECK(ex.partial({4, 0}) == doctest::Approx(e));
  CHECK(ex.partial({0, 4}) == doctest::Approx(16 * e));
  CHECK(ex.partial({2, 2}) == doctest::Approx(4 * e));
}

TEST_CASE("derivative lowers order and differentiates coefficients") {
  Series2 s(4);
  s.set_partial({3, 1}, 5.0);
  s.set_partial({2, 0}, 7.0);
  const Series2 d = s.derivative(0);
  CHECK(d.order() == 3);
  CHECK(d.partial({2, 1}) == doctest::Approx(5.0));
  CHECK(d.partial({1, 0}) == doctest::Approx(7.0));
}

TEST_CASE("bivariate composition chains partials") {
  // P(a, b) = a*b at (0,0); a = x^2, b = x + y  ->  x^3 + x^2 y
  Series2 P(4);
  P.coeff({1, 1}) = 1.0;
  const Series2 X = Series2::variable(0, 0.0);
  const Series2 Y = Series2::variable(1, 0.0);
  const Series2 r = compose<2>(P, X * X, X + Y);
  CHECK(r.coeff({3, 0}) == doctest::Approx(1.0));
  CHECK(r.coeff({2, 1}) == doctest::Approx(1.0));
  CHECK(r.coeff({1, 1}) == doctest::Approx(0.0));
}
