#pragma once

// Small numerical utilities shared across modules.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace shockform::num {

/// Radical-inverse (Halton) sequence value of index i in the given prime base.
double halton(std::uint64_t i, unsigned base);

/// Five-point central difference of f at x with step h, Richardson-extrapolated
/// once against step h/2.
double central_difference(const std::function<double(double)>& f, double x, double h);

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Safeguarded Newton on a sign-changing bracket [a, b]. `fdf` returns
/// (f, f'). Falls back to bisection whenever the Newton step leaves the
/// bracket or fails to shrink it fast enough.
RootResult bracketed_newton(const std::function<std::pair<double, double>(double)>& fdf, double a,
                            double b, double fa, double fb, double xtol = 1e-15,
                            double ftol = 0.0, int max_iter = 200);

/// Real roots of a*x^3 + b*x^2 + c*x + d (a != 0), ascending, polished by
/// Newton.
std::vector<double> cubic_real_roots(double a, double b, double c, double d);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// log|y| against log|x|.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// Gauss–Jacobi nodes/weights on [0, 1] for the weight r^(a-1), a > 0
/// (Golub–Welsch).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_jacobi_unit(int n, double a);

/// Gauss–Legendre on [lo, hi].
Quadrature gauss_legendre(int n, double lo, double hi);

/// Chebyshev–Lobatto points on [lo, hi], ascending (x_0 = lo, x_n = hi).
std::vector<double> chebyshev_lobatto(int n, double lo, double hi);

/// Barycentric interpolation on Chebyshev–Lobatto points.
class LobattoInterpolant {
 public:
  LobattoInterpolant() = default;
  LobattoInterpolant(double lo, double hi, std::vector<double> values);

  double operator()(double x) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> values_;
};

/// Tensor Chebyshev series built from values on a Lobatto grid, with exact
/// first derivatives.
class Chebyshev2D {
 public:
  struct Eval {
    double value = 0.0;
    double d0 = 0.0;  // derivative along the first axis
    double d1 = 0.0;  // along the second
  };

  Chebyshev2D() = default;
  /// values[i * (n1 + 1) + j] at (lobatto_i on axis 0, lobatto_j on axis 1).
  Chebyshev2D(std::array<double, 2> range0, std::array<double, 2> range1, int n0, int n1,
              std::span<const double> values);

  Eval operator()(double a, double b) const;

  int n0() const { return n0_; }
  int n1() const { return n1_; }
  std::array<double, 2> range0() const { return r0_; }
  std::array<double, 2> range1() const { return r1_; }

 private:
  std::array<double, 2> r0_{}, r1_{};
  int n0_ = 0, n1_ = 0;
  std::vector<double> coeffs_;  // (n0+1) x (n1+1)
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers (static blocks).
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace shockform::num
