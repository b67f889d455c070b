#include "shockform/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace shockform::num {

double halton(std::uint64_t i, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

namespace {

double five_point(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

double central_difference(const std::function<double(double)>& f, double x, double h) {
  const double coarse = five_point(f, x, h);
  const double fine = five_point(f, x, 0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

RootResult bracketed_newton(const std::function<std::pair<double, double>(double)>& fdf, double a,
                            double b, double fa, double fb, double xtol, double ftol,
                            int max_iter) {
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  if ((fa > 0) == (fb > 0)) return {a, fa, 0, false};
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  RootResult r;
  double x = std::fabs(fa) < std::fabs(fb) ? a : b;
  double prev_width = b - a;
  int slow = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const auto [fx, dfx] = fdf(x);
    r = {x, fx, it, false};
    if (fx == 0.0 || std::fabs(fx) <= ftol) {
      r.converged = true;
      return r;
    }
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    const double width = b - a;
    slow = width > 0.5 * prev_width ? slow + 1 : 0;
    prev_width = width;
    double next = x - fx / dfx;
    if (!std::isfinite(next) || next <= a || next >= b || slow >= 3) {
      next = 0.5 * (a + b);
      slow = 0;
    }
    const double step = std::fabs(next - x);
    x = next;
    const double scale = xtol * (1.0 + std::fabs(x));
    if (step <= scale || width <= scale) {
      const double fin = fdf(x).first;
      // keep whichever of x and the bracket ends has the smallest residual
      r = {x, fin, it + 1, true};
      if (std::fabs(fa) < std::fabs(r.fx)) r = {a, fa, it + 1, true};
      if (std::fabs(fb) < std::fabs(r.fx)) r = {b, fb, it + 1, true};
      return r;
    }
  }
  return r;
}

std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
  // Normalise, then use the trigonometric / Cardano form.
  const double B = b / a, C = c / a, Dd = d / a;
  const double q = (3 * C - B * B) / 9.0;
  const double r = (9 * B * C - 27 * Dd - 2 * B * B * B) / 54.0;
  const double disc = q * q * q + r * r;
  std::vector<double> roots;
  const double shift = -B / 3.0;
  if (disc > 0) {
    const double sq = std::sqrt(disc);
    roots.push_back(shift + std::cbrt(r + sq) + std::cbrt(r - sq));
  } else {
    const double theta = (q == 0.0) ? 0.0 : std::acos(std::clamp(r / std::sqrt(-q * q * q), -1.0, 1.0));
    const double m = 2.0 * std::sqrt(-q);
    for (int k = 0; k < 3; ++k)
      roots.push_back(shift + m * std::cos((theta + 2.0 * std::numbers::pi * k) / 3.0));
  }
  for (double& x : roots) {
    for (int it = 0; it < 4; ++it) {
      const double f = ((a * x + b) * x + c) * x + d;
      const double df = (3 * a * x + 2 * b) * x + c;
      if (df == 0.0) break;
      x -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("least_squares: need >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    sse += e * e;
  }
  fit.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return fit;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(std::fabs(x[i]));
    ly[i] = std::log(std::fabs(y[i]));
  }
  return least_squares(lx, ly);
}

Quadrature gauss_jacobi_unit(int n, double a) {
  // Jacobi weight (1-x)^al (1+x)^be on [-1,1] with al = 0, be = a-1, mapped
  // to r = (1+x)/2 which gives r^(a-1) on [0,1].
  const double al = 0.0, be = a - 1.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + al + be;
    double diag;
    if (k == 0 && std::fabs(al + be) < 1e-14)
      diag = (be - al) / (al + be + 2.0);
    else
      diag = (be * be - al * al) / (s * (s + 2.0));
    J(k, k) = diag;
    if (k + 1 < n) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + al + be;
      const double off = std::sqrt(4.0 * k1 * (k1 + al) * (k1 + be) * (k1 + al + be) /
                                   (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  // mu0 = int_0^1 r^(a-1) dr = 1/a
  const double mu0 = 1.0 / a;
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    q.nodes[i] = 0.5 * (1.0 + x);
    q.weights[i] = mu0 * v0 * v0;
  }
  return q;
}

Quadrature gauss_legendre(int n, double lo, double hi) {
  Quadrature u = gauss_jacobi_unit(n, 1.0);
  for (int i = 0; i < n; ++i) {
    u.nodes[i] = lo + (hi - lo) * u.nodes[i];
    u.weights[i] *= (hi - lo);
  }
  return u;
}

std::vector<double> chebyshev_lobatto(int n, double lo, double hi) {
  std::vector<double> x(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double c = -std::cos(std::numbers::pi * j / n);
    x[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
  }
  x[0] = lo;
  x[n] = hi;
  return x;
}

LobattoInterpolant::LobattoInterpolant(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  const int n = static_cast<int>(values_.size()) - 1;
  nodes_ = chebyshev_lobatto(n, lo, hi);
  weights_.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    weights_[j] = w;
  }
}

double LobattoInterpolant::operator()(double x) const {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double dx = x - nodes_[j];
    if (dx == 0.0) return values_[j];
    const double w = weights_[j] / dx;
    num += w * values_[j];
    den += w;
  }
  return num / den;
}

namespace {

// Chebyshev coefficients of the interpolant through Lobatto values ordered
// from lo to hi (i.e. x_j = -cos(pi j / n)).
std::vector<double> lobatto_coeffs(std::span<const double> v) {
  const int n = static_cast<int>(v.size()) - 1;
  std::vector<double> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      // T_k(-cos(a)) = (-1)^k cos(k a)
      double term = v[j] * std::cos(std::numbers::pi * k * j / n);
      if (j == 0 || j == n) term *= 0.5;
      sum += term;
    }
    double ck = 2.0 * sum / n;
    if (k == 0 || k == n) ck *= 0.5;
    if (k % 2 == 1) ck = -ck;
    c[k] = ck;
  }
  return c;
}

// T_k(x) and T_k'(x), k = 0..n.
void cheb_basis(double x, int n, std::vector<double>& t, std::vector<double>& dt) {
  t.assign(n + 1, 0.0);
  dt.assign(n + 1, 0.0);
  std::vector<double> u(n + 1, 0.0);  // U_k
  t[0] = 1.0;
  u[0] = 1.0;
  if (n >= 1) {
    t[1] = x;
    u[1] = 2.0 * x;
  }
  for (int k = 2; k <= n; ++k) {
    t[k] = 2.0 * x * t[k - 1] - t[k - 2];
    u[k] = 2.0 * x * u[k - 1] - u[k - 2];
  }
  for (int k = 1; k <= n; ++k) dt[k] = k * u[k - 1];
}

}  // namespace

Chebyshev2D::Chebyshev2D(std::array<double, 2> range0, std::array<double, 2> range1, int n0,
                         int n1, std::span<const double> values)
    : r0_(range0), r1_(range1), n0_(n0), n1_(n1), coeffs_((n0 + 1) * (n1 + 1), 0.0) {
  // Transform along axis 1 then axis 0.
  std::vector<double> tmp((n0 + 1) * (n1 + 1));
  for (int i = 0; i <= n0; ++i) {
    auto c = lobatto_coeffs(values.subspan(i * (n1 + 1), n1 + 1));
    for (int j = 0; j <= n1; ++j) tmp[i * (n1 + 1) + j] = c[j];
  }
  std::vector<double> col(n0 + 1);
  for (int j = 0; j <= n1; ++j) {
    for (int i = 0; i <= n0; ++i) col[i] = tmp[i * (n1 + 1) + j];
    auto c = lobatto_coeffs(col);
    for (int i = 0; i <= n0; ++i) coeffs_[i * (n1 + 1) + j] = c[i];
  }
}

Chebyshev2D::Eval Chebyshev2D::operator()(double a, double b) const {
  const double sa = 2.0 / (r0_[1] - r0_[0]);
  const double sb = 2.0 / (r1_[1] - r1_[0]);
  const double xa = (a - r0_[0]) * sa - 1.0;
  const double xb = (b - r1_[0]) * sb - 1.0;
  std::vector<double> ta, dta, tb, dtb;
  cheb_basis(xa, n0_, ta, dta);
  cheb_basis(xb, n1_, tb, dtb);
  Eval e;
  for (int i = 0; i <= n0_; ++i) {
    double row = 0.0, drow = 0.0;
    for (int j = 0; j <= n1_; ++j) {
      const double c = coeffs_[i * (n1_ + 1) + j];
      row += c * tb[j];
      drow += c * dtb[j];
    }
    e.value += ta[i] * row;
    e.d0 += dta[i] * row;
    e.d1 += ta[i] * drow;
  }
  e.d0 *= sa;
  e.d1 *= sb;
  return e;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace shockform::num
