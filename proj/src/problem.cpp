#include "shockform/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "shockform/errors.hpp"
#include "shockform/numerics.hpp"

namespace shockform {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct Checker {
  double rel_tol;
  double worst = 0.0;

  void check(double analytic, double fd, const std::string& what) {
    const double scale = std::max({1.0, std::fabs(analytic), std::fabs(fd)});
    const double err = std::fabs(analytic - fd) / scale;
    worst = std::max(worst, err);
    if (!(err <= rel_tol))
      throw Error(ErrorCode::JetMismatch,
                  what + ": analytic " + fmt(analytic) + " vs finite difference " + fmt(fd));
  }
};

double fd_step(double at) { return 1e-4 * (1.0 + std::fabs(at)); }

void validate_flux(const FluxEvaluator& flux, const char* name, double u_lo, double u_hi,
                   int samples, Checker& chk) {
  for (int i = 0; i < samples; ++i) {
    const double u = u_lo + (u_hi - u_lo) * num::halton(i + 1, 2);
    const FluxJet j = flux(u);
    for (int k = 0; k < 5; ++k) {
      // d/du of entry k-1 (primitive for k == 0) must equal entry k
      auto lower = [&](double v) {
        const FluxJet jj = flux(v);
        return k == 0 ? jj.primitive : jj.speed[k - 1];
      };
      const double fd = num::central_difference(lower, u, fd_step(u));
      chk.check(j.speed[k], fd,
                std::string(name) + " derivative " + std::to_string(k + 1) + " at u=" + fmt(u));
    }
  }
}

void validate_data(const DataEvaluator& data, const Box& box, int samples, std::uint32_t seed,
                   Checker& chk, double& u_lo, double& u_hi) {
  u_lo = INFINITY;
  u_hi = -INFINITY;
  // keep the stencil inside the box
  const double mx = 0.02 * (box.x_hi - box.x_lo);
  const double my = 0.02 * (box.y_hi - box.y_lo);
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t idx = static_cast<std::uint64_t>(i) + 1 + seed;
    const double x = box.x_lo + mx + (box.x_hi - box.x_lo - 2 * mx) * num::halton(idx, 2);
    const double y = box.y_lo + my + (box.y_hi - box.y_lo - 2 * my) * num::halton(idx, 3);
    const Series2 jet = data(x, y, kSeriesMaxOrder);
    u_lo = std::min(u_lo, jet.value());
    u_hi = std::max(u_hi, jet.value());
    for (int n = 0; n < Series2::kSize; ++n) {
      const auto e = Series2::exponents(n);
      if (Series2::degree(n) == 0) continue;
      const int v = e[0] > 0 ? 0 : 1;
      auto lo = e;
      lo[v] -= 1;
      auto lower = [&](double z) {
        const Series2 s = v == 0 ? data(z, y, kSeriesMaxOrder) : data(x, z, kSeriesMaxOrder);
        return s.partial(lo);
      };
      const double at = v == 0 ? x : y;
      const double fd = num::central_difference(lower, at, fd_step(at));
      chk.check(jet.partial(e), fd,
                "u0 partial (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ") at (" +
                    fmt(x) + "," + fmt(y) + ")");
    }
  }
}

}  // namespace

Problem Problem::make(ProblemDefinition def, const ValidationOptions& opts) {
  if (def.box.empty()) throw Error(ErrorCode::DomainEmpty, "domain box has no interior");
  if (!def.flux_x || !def.flux_y || !def.initial)
    throw Error(ErrorCode::JetMismatch, "missing jet evaluator");
  const int samples = std::max(100, opts.samples);
  Checker chk{opts.rel_tol};
  double u_lo = 0.0, u_hi = 0.0;
  validate_data(def.initial, def.box, samples, opts.seed, chk, u_lo, u_hi);
  const double pad = 0.1 * (u_hi - u_lo) + 1e-3;
  validate_flux(def.flux_x, "F", u_lo - pad, u_hi + pad, samples, chk);
  validate_flux(def.flux_y, "G", u_lo - pad, u_hi + pad, samples, chk);
  Problem p(std::move(def));
  p.validation_error_ = chk.worst;
  return p;
}

Series2 Problem::initial_data(double x, double y, int order) const {
  if (!def_.box.contains(x, y))
    throw Error(ErrorCode::OutOfDomain,
                "point (" + fmt(x) + ", " + fmt(y) + ") outside the domain box");
  return def_.initial(x, y, order);
}

PhiPsiJet eval_phi_psi(const Problem& p, double xi, double eta, int order) {
  const Series2 u = p.initial_data(xi, eta, order);
  const FluxJet fx = p.flux_x(u.value());
  const FluxJet fy = p.flux_y(u.value());
  return {compose_univariate<2>(fx.speed, u), compose_univariate<2>(fy.speed, u)};
}

HJet eval_H(const Problem& p, double xi, double eta) {
  const PhiPsiJet j = eval_phi_psi(p, xi, eta, kSeriesMaxOrder);
  return {j.phi.derivative(0) + j.psi.derivative(1)};
}

HJet eval_H_chain_rule(const Problem& p, double xi, double eta) {
  const Series2 u = p.initial_data(xi, eta, kSeriesMaxOrder);
  const FluxJet fx = p.flux_x(u.value());
  const FluxJet fy = p.flux_y(u.value());
  const std::span<const double> dfx(fx.speed.data() + 1, 4);
  const std::span<const double> dfy(fy.speed.data() + 1, 4);
  const Series2 fprime = compose_univariate<2>(dfx, u.truncated(3));
  const Series2 gprime = compose_univariate<2>(dfy, u.truncated(3));
  return {fprime * u.derivative(0) + gprime * u.derivative(1)};
}

FluxEvaluator polynomial_flux(std::array<double, 6> c) {
  return [c](double u) {
    FluxJet j;
    // derivatives of sum_k c_k u^k by Horner on the differentiated coefficients
    std::array<double, 6> d = c;
    auto eval = [&](int len) {
      double r = 0.0;
      for (int k = len - 1; k >= 0; --k) r = r * u + d[k];
      return r;
    };
    j.primitive = eval(6);
    for (int m = 0; m < 5; ++m) {
      for (int k = 0; k + 1 < 6 - m; ++k) d[k] = d[k + 1] * (k + 1);
      d[5 - m] = 0.0;
      j.speed[m] = eval(5 - m);
    }
    return j;
  };
}

DataEvaluator cubic_preset_data() {
  // u0 = -x + x^3 + 3 x y^2
  return [](double x, double y, int order) {
    Series2 s(order);
    const auto set = [&](int i, int j, double v) {
      if (i + j <= order) s.set_partial({i, j}, v);
    };
    set(0, 0, -x + x * x * x + 3 * x * y * y);
    set(1, 0, -1 + 3 * x * x + 3 * y * y);
    set(0, 1, 6 * x * y);
    set(2, 0, 6 * x);
    set(1, 1, 6 * y);
    set(0, 2, 6 * x);
    set(3, 0, 6.0);
    set(1, 2, 6.0);
    return s;
  };
}

Problem preset_a() {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.flux_y = polynomial_flux({0, 0, 0, 0, 0, 0});
  d.initial = cubic_preset_data();
  d.box = {-0.5, 0.5, -0.5, 0.5};
  d.preset_id = "preset-a";
  return Problem::make(std::move(d));
}

Problem preset_b() {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0, 0, 0});
  d.flux_y = polynomial_flux({0, 0, 0, 1.0 / 3.0, 0, 0});
  d.initial = cubic_preset_data();
  d.box = {-0.5, 0.5, -0.5, 0.5};
  d.preset_id = "preset-b";
  return Problem::make(std::move(d));
}

Problem preset_skew() {
  ProblemDefinition d;
  d.flux_x = polynomial_flux({0, 0, 0.5, 0.1, 0, 0});
  d.flux_y = polynomial_flux({0, 0, 0, 1.0 / 3.0, 0, 0});
  d.initial = cubic_preset_data();
  d.box = {-0.5, 0.5, -0.5, 0.5};
  d.preset_id = "preset-skew";
  return Problem::make(std::move(d));
}

Problem make_preset(std::string_view name) {
  if (name == "preset-a") return preset_a();
  if (name == "preset-b") return preset_b();
  if (name == "preset-skew") return preset_skew();
  throw Error(ErrorCode::ConfigInvalid, "unknown preset '" + std::string(name) + "'");
}

}  // namespace shockform
