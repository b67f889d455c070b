#include "shockform/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "shockform/csv.hpp"
#include "shockform/field.hpp"
#include "shockform/inversion.hpp"
#include "shockform/pipeline.hpp"
#include "shockform/reference_fv.hpp"
#include "shockform/singular_ivp.hpp"

namespace shockform {

namespace {

namespace fs = std::filesystem;

// Collects named measurements against limits; the verdict is the
// conjunction.
class Verdict {
 public:
  void le(const std::string& what, double value, double limit) {
    add(what, value, "<=", limit, value <= limit);
  }
  void ge(const std::string& what, double value, double limit) {
    add(what, value, ">=", limit, value >= limit);
  }
  void ok(const std::string& what, bool cond) {
    if (!cond) {
      ok_ = false;
      failed_.push_back(what);
    } else {
      notes_.push_back(what);
    }
  }
  bool passed() const { return ok_; }
  std::string detail() const {
    std::ostringstream os;
    if (!failed_.empty()) {
      os << "failed: ";
      for (std::size_t i = 0; i < failed_.size(); ++i) os << (i ? "; " : "") << failed_[i];
      if (!notes_.empty()) os << " | ";
    }
    for (std::size_t i = 0; i < notes_.size(); ++i) os << (i ? "; " : "") << notes_[i];
    return os.str();
  }

 private:
  void add(const std::string& what, double v, const char* op, double limit, bool pass) {
    std::ostringstream os;
    os.precision(3);
    os << what << " " << v << " " << op << " " << limit;
    ok(os.str(), pass);
  }
  bool ok_ = true;
  std::vector<std::string> failed_, notes_;
};

struct Setup {
  Problem p;
  GncReport gnc;
  BlowupCurve curve;
  Setup(Problem prob, const std::vector<double>& ys)
      : p(std::move(prob)), gnc(find_first_blowup(p)), curve(BlowupCurve::build(p, gnc, ys)) {}
};

const std::vector<double> kBand{-0.15, -0.1, -0.05, 0.0, 0.05, 0.1, 0.15};

FrontOptions front_window(double eps, double beta, int n_beta, int threads) {
  FrontOptions o;
  o.epsilon = eps;
  o.beta_lo = -beta;
  o.beta_hi = beta;
  o.n_beta = n_beta;
  o.threads = threads;
  return o;
}

// ---------------------------------------------------------------- criteria

Verdict check_blowup_identification() {
  Verdict v;
  const GncReport r = find_first_blowup(preset_a());
  v.le("|argmin|", std::hypot(r.xi0, r.eta0), 1e-8);
  v.le("|minH + 1|", std::fabs(r.min_h + 1.0), 1e-10);
  v.le("|eig1 - 6|", std::fabs(r.eigenvalues[0] - 6.0), 1e-6);
  v.le("|eig2 - 6|", std::fabs(r.eigenvalues[1] - 6.0), 1e-6);
  v.le("|T* - 1|", std::fabs(r.t_star0 - 1.0), 1e-10);
  return v;
}

Verdict check_blowup_curve() {
  Verdict v;
  const Setup s(preset_a(), kBand);
  double et = 0.0, ex = 0.0, res = 0.0;
  for (const GammaSample& g : s.curve.samples()) {
    et = std::max(et, std::fabs(g.t_star - 1.0 / (1.0 - 3.0 * g.y * g.y)));
    ex = std::max(ex, std::fabs(g.x_star));
    res = std::max(res, g.newton_residual);
  }
  v.ok("points " + std::to_string(s.curve.samples().size()), s.curve.samples().size() == kBand.size());
  v.le("max |T* - 1/(1-3y^2)|", et, 1e-8);
  v.le("max |x*|", ex, 1e-8);
  v.le("max Newton residual", res, 1e-10);
  return v;
}

Verdict check_cusp_coefficients() {
  Verdict v;
  const Setup s(preset_a(), kBand);
  const CuspCoeffs k = s.curve.data_at(0.0).coeffs;
  v.le("|c1 - 1|", std::fabs(k.c1 - 1.0), 1e-8);
  v.le("|c2 - 1|", std::fabs(k.c2 - 1.0), 1e-8);
  v.le("|theta0|", std::fabs(k.theta0), 1e-8);
  v.le("|A1 - 1/sqrt3|", std::fabs(k.A1 - 1.0 / std::sqrt(3.0)), 1e-8);
  v.le("|b* - 2/(3 sqrt3)|", std::fabs(k.b_star - 2.0 / (3.0 * std::sqrt(3.0))), 1e-8);

  // leading-order forms from the data at the first blowup point
  const PhiPsiJet j = eval_phi_psi(s.p, s.gnc.xi0, s.gnc.eta0);
  const double fx = j.phi_d(1, 0);
  const double th = std::pow(j.psi_d(1, 0) / fx, 2);
  const double c1 = -1.0 / fx, c2 = -(1.0 + th) / fx, a1 = 1.0 / std::sqrt(3.0 + 3.0 * th);
  const double bs = -2.0 / (3.0 * fx * std::sqrt(3.0 + 3.0 * th));
  double w1 = 0, w2 = 0, wa = 0, wb = 0, yb = 0;
  for (const GammaSample& g : s.curve.samples()) {
    const CuspCoeffs q = cusp_coeffs(s.p, g, s.curve.t_limit());
    w1 = std::max(w1, std::fabs(q.c1 - c1) / std::fabs(c1));
    w2 = std::max(w2, std::fabs(q.c2 - c2) / std::fabs(c2));
    wa = std::max(wa, std::fabs(q.A1 - a1) / a1);
    const double eb = std::fabs(q.b_star - bs) / bs;
    if (eb > wb) {
      wb = eb;
      yb = g.y;
    }
  }
  v.le("band |y|<=0.15: c1 rel", w1, 0.1);
  v.le("c2 rel", w2, 0.1);
  v.le("A1 rel", wa, 0.1);
  std::ostringstream at;
  at << "b* rel (worst at y=" << yb << ")";
  v.le(at.str(), wb, 0.1);
  return v;
}

Verdict check_root_inversion() {
  Verdict v;
  const Setup s(preset_a(), kBand);
  const GammaData gd = s.curve.data_at(0.0);
  const CharRoots r = invert_point(s.p, gd, 1.01, 0.0, 0.0);
  v.ok("3 roots", r.roots.size() == 3);
  if (r.roots.size() == 3) {
    const double a = std::sqrt(0.01 / 1.01);
    const double expect[] = {-a, 0.0, a};
    double err = 0.0, res = 0.0;
    for (int i = 0; i < 3; ++i) {
      err = std::max(err, std::fabs(r.roots[i].xi - expect[i]));
      res = std::max(res, std::fabs(r.roots[i].residual));
    }
    v.le("max root error", err, 1e-9);
    v.le("max residual", res, 1e-12);
  }
  int wrong = 0, inside = 0;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.98 + 0.06 * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double x = -0.004 + 0.008 * j / 49.0;
      const CharRoots q = invert_point(s.p, gd, t, x, 0.0);
      Region expect = Region::pre_blowup;
      if (t > 1.0) {
        // folds at xi = +-sqrt((t - 1) / 3t), x = -+(2/3)(t - 1) xi
        const double half = 2.0 / 3.0 * (t - 1.0) * std::sqrt((t - 1.0) / (3.0 * t));
        if (std::fabs(std::fabs(x) - half) <= 1e-8)
          expect = Region::boundary;
        else
          expect = x < -half ? Region::outside_left
                   : x > half ? Region::outside_right
                              : Region::inside_cusp;
      }
      const std::size_t n = q.roots.size();
      const bool count_ok = q.region == Region::inside_cusp ? n == 3
                            : q.region == Region::boundary  ? n == 2
                                                            : n == 1;
      if (q.region != expect || !count_ok) ++wrong;
      if (q.region == Region::inside_cusp) ++inside;
    }
  }
  v.le("mis-tagged probe points (of 2500)", wrong, 0);
  v.ok("inside-cusp probes " + std::to_string(inside), inside > 0);
  return v;
}

double root_of(const Setup& s, const GammaData& gd, double t, double x, Branch b) {
  const CharRoots r = invert_point(s.p, gd, t, x, gd.gamma.y, {.t_limit = s.curve.t_limit()});
  const Root* root = r.find(b);
  if (!root) throw Error(ErrorCode::RootCountUnexpected, "missing branch");
  return root->xi;
}

Verdict check_expansion_orders() {
  Verdict v;
  const std::vector<double> scales{0.2, 0.1, 0.05, 0.025};
  auto order = [&](const std::function<double(double)>& err) {
    std::vector<double> e;
    for (double sc : scales) e.push_back(err(sc));
    return num::loglog_fit(scales, e);
  };
  auto window = [](double s) {
    std::vector<double> w;
    for (int i = -2; i <= 2; ++i) w.push_back(s * i / 2.0);
    return w;
  };
  double min_order = INFINITY, min_r2 = INFINITY;
  for (auto make : {preset_a, preset_b}) {
    const Setup s(make(), {-0.1, -0.05, 0.0, 0.05, 0.1});
    for (double y : {0.0, 0.05}) {
      const GammaData gd = s.curve.data_at(y);
      const GammaSample& g = gd.gamma;
      auto xpost = [&](double s2, double l) { return g.x_star + g.tangent_slope * s2 * s2 + l * s2 * s2 * s2; };
      std::vector<num::LinearFit> fits;
      fits.push_back(order([&](double sc) {  // both outer branches after blowup
        double e = 0.0;
        for (double l : window(sc)) {
          const auto [m, p] = xi_pm_expansion(gd, sc, l);
          e = std::max(e, std::fabs(m - root_of(s, gd, g.t_star + sc * sc, xpost(sc, l), Branch::minus)));
          e = std::max(e, std::fabs(p - root_of(s, gd, g.t_star + sc * sc, xpost(sc, l), Branch::plus)));
        }
        return e;
      }));
      fits.push_back(order([&](double sc) {  // offset family outside the cusp
        double e = 0.0;
        for (double d : window(sc)) {
          const double a = xi_offset_expansion(gd, 1.0, sc, 1.0 + d, Branch::plus);
          e = std::max(e, std::fabs(a - root_of(s, gd, g.t_star + sc * sc, xpost(sc, 1.0 + d), Branch::plus)));
        }
        return e;
      }));
      fits.push_back(order([&](double z) {  // centre, in (zeta, eta)
        double e = 0.0;
        for (double eta : window(z)) {
          const double tau = eta * z * z;
          const CharRoots r = invert_point(s.p, gd, g.t_star + tau, g.x_star + g.tangent_slope * tau + z * z * z, y);
          e = std::max(e, std::fabs(xi_center_expansion(gd, z, eta) - r.roots.at(0).xi));
        }
        return e;
      }));
      fits.push_back(order([&](double sc) {  // before blowup
        double e = 0.0;
        for (double d : window(sc)) {
          const double t = g.t_star - sc * sc;
          const double x = g.x_star - g.tangent_slope * sc * sc + (1.0 + d) * sc * sc * sc;
          const CharRoots r = invert_point(s.p, gd, t, x, y);
          e = std::max(e, std::fabs(xi_pre_expansion(gd, 1.0, sc, 1.0 + d) - r.roots.at(0).xi));
        }
        return e;
      }));
      for (const auto& f : fits) {
        min_order = std::min(min_order, f.slope);
        min_r2 = std::min(min_r2, f.r2);
      }
    }
  }
  v.ge("min fitted order (4 expansions x 2 presets x 2 y)", min_order, 1.8);
  v.ge("min R^2", min_r2, 0.99);
  return v;
}

Verdict check_front_correctness(int threads) {
  Verdict v;
  const Setup s(preset_a(), {-0.12, -0.1, -0.05, 0.0, 0.05, 0.1, 0.12});
  const ShockFront f = ShockFront::solve(s.curve, front_window(0.04, 0.12, 6, threads));
  double ww = 0.0, rh = 0.0, dm = 0.0, strength0 = 0.0, min_margin = INFINITY;
  for (double y : {-0.1, -0.075, -0.05, -0.025, 0.0, 0.025, 0.05, 0.075, 0.1}) {
    const double ts = s.curve.at(y).t_star;
    for (int k = 0; k <= 16; ++k) {
      const double tau = 0.04 * k / 16;
      const FrontState st = front_states(f, ts + tau, y);
      ww = std::max(ww, std::fabs(st.w));
      if (k == 0) {
        strength0 = std::max(strength0, std::fabs(st.u_plus - st.u_minus));
        continue;
      }
      rh = std::max(rh, st.rh_residual);
      min_margin = std::min({min_margin, st.entropy_margin_plus, st.entropy_margin_minus});
      dm = std::max({dm, std::fabs(st.entropy_margin_plus - std::fabs(st.u_plus)),
                     std::fabs(st.entropy_margin_minus - std::fabs(st.u_minus))});
    }
  }
  v.le("max |w|", ww, 1e-8);
  v.le("max RH residual", rh, 1e-8);
  v.ok("min entropy margin " + format_double(min_margin) + " > 0", min_margin > 0.0);
  v.le("max |margin - |u+-||", dm, 1e-8);
  v.le("max strength at T*", strength0, 1e-10);
  return v;
}

double max_cancellation(const ShockFront& f) {
  double z = 0.0;
  const double sm = f.s_max();
  for (int i = 1; i <= 8; ++i) {
    const double s = sm * i / 8;
    for (int j = 0; j <= 6; ++j) {
      const double beta = f.options().beta_lo + (f.options().beta_hi - f.options().beta_lo) * j / 6;
      const auto [y, lambda] = f.characteristic(s, beta);
      z = std::max(z, std::fabs(front_coefficients(f.curve(), s, lambda, y).cancellation));
    }
  }
  return z;
}

Verdict check_front_expansion_order(int threads) {
  Verdict v;
  const std::vector<double> ys{-0.1, -0.05, 0.0, 0.05, 0.1};
  // preset-b: odd symmetry pins the front to x = 0 = x*, kappa = 0, so
  // the expansion error vanishes identically
  {
    const Setup s(preset_b(), ys);
    const ShockFront f = ShockFront::solve(s.curve, front_window(0.04, 0.12, 8, threads));
    double e = 0.0;
    for (double y : {-0.08, 0.0, 0.05})
      for (double dt = 0.04; dt > 1e-4; dt /= 2) {
        const GammaSample g = s.curve.at(y);
        e = std::max(e, std::fabs(f.eval(g.t_star + dt, y).w - g.x_star - g.tangent_slope * dt));
      }
    v.le("preset-b max |w - x* - kappa dt| (identically zero)", e, 1e-10);
    v.le("preset-b max |C2 bracket|", max_cancellation(f), 1e-6);
  }
  // the skewed problem has a genuine second-order term
  {
    const Setup s(preset_skew(), ys);
    const ShockFront f = ShockFront::solve(s.curve, front_window(0.04, 0.12, 8, threads));
    double min_order = INFINITY;
    for (double y : {-0.08, 0.0, 0.05}) {
      const GammaSample g = s.curve.at(y);
      std::vector<double> dts, errs;
      for (double dt = 0.04; dt > 1e-4; dt /= 2) {
        dts.push_back(dt);
        errs.push_back(std::fabs(f.eval(g.t_star + dt, y).w - g.x_star - g.tangent_slope * dt));
      }
      min_order = std::min(min_order, num::loglog_fit(dts, errs).slope);
    }
    v.ge("preset-skew min fitted order", min_order, 1.9);
    v.le("preset-skew max |C2 bracket|", max_cancellation(f), 1e-6);
  }
  return v;
}

Verdict check_singular_ivp() {
  Verdict v;
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.2 * i / 40);
  auto linear = [](double alpha, std::function<double(double)> forcing) {
    SingularIvpSpec sp;
    sp.alpha = alpha;
    sp.M = 2.0;
    sp.s_max = 0.2;
    sp.rhs = [=](double s, double l, double) { return std::pair{0.0, -alpha * l + forcing(s)}; };
    return sp;
  };
  struct Case {
    const char* name;
    double alpha;
    std::function<double(double)> forcing, exact;
  };
  const Case cases[] = {
      {"s/5", 4.0, [](double s) { return s; }, [](double s) { return s / 5.0; }},
      {"s^2/4", 2.0, [](double s) { return s * s; }, [](double s) { return s * s / 4.0; }},
  };
  for (const Case& c : cases) {
    const IvpSolution sol = solve_singular_ivp(linear(c.alpha, c.forcing), 0.0, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.s.size(); ++i) err = std::max(err, std::fabs(sol.lambda[i] - c.exact(sol.s[i])));
    v.le(std::string(c.name) + " max error", err, 1e-10);
    v.le(std::string(c.name) + " contraction ratio", sol.max_contraction_ratio, 0.5);
    v.le(std::string(c.name) + " |L|/(M s)", sol.max_bound_ratio, 1.0);
  }
  return v;
}

Verdict check_exponents(int threads) {
  Verdict v;
  const Setup s(preset_a(), {-0.1, -0.05, 0.0, 0.05, 0.1});
  const ShockFront f = ShockFront::solve(s.curve, front_window(0.04, 0.12, 6, threads));
  auto fit = [&](RayDirection d, RayQuantity q) {
    RaySpec r;
    r.direction = d;
    r.quantity = q;
    r.r_min = 1e-9;
    r.r_max = 1e-4;
    r.samples = 16;
    return fit_exponent(s.curve, &f, r).slope;
  };
  v.le("|u slope - 1/3|", std::fabs(fit(RayDirection::x_at_fixed_t, RayQuantity::u_increment) - 1.0 / 3.0), 0.02);
  v.le("|du/dx slope along x + 2/3|", std::fabs(fit(RayDirection::x_at_fixed_t, RayQuantity::du_dx) + 2.0 / 3.0), 0.03);
  v.le("|du/dx slope along t + 1|", std::fabs(fit(RayDirection::t_at_fixed_x, RayQuantity::du_dx) + 1.0), 0.03);
  double worst = 0.0;
  for (Gauge g : {Gauge::e0, Gauge::e1, Gauge::eT}) {
    const GaugeSup a = gauge_sup(s.curve, &f, 0.0, g, 0.02, 0.01, 8);
    const GaugeSup b = gauge_sup(s.curve, &f, 0.0, g, 0.02, 0.01, 16);
    v.ok(std::string(to_string(g)) + " sup " + format_double(b.sup), std::isfinite(b.sup) && b.sup > 0);
    worst = std::max(worst, std::fabs(b.sup - a.sup) / a.sup);
  }
  v.le("max sup change under 2x refinement", worst, 0.1);
  return v;
}

Verdict check_fv_cross_check(int cells, int threads) {
  Verdict v;
  const Setup s(preset_a(), {-0.1, -0.05, 0.0, 0.05, 0.1});
  const ShockFront f = ShockFront::solve(s.curve, front_window(0.22, 0.1, 6, threads));
  FvSpec spec;
  spec.nx = spec.ny = cells;
  spec.threads = threads;
  spec.t_blowup = s.gnc.t_star0;
  const FieldGrid g = run_fv(s.p, spec, 1.2);
  const FvComparison c = compare_fv(g, f);
  // rows straddling y = 0
  double off0 = INFINITY;
  for (const RowShock& r : c.rows)
    if (std::fabs(r.y) <= g.hy && r.detected) off0 = std::min(off0, std::fabs(r.offset_cells));
  v.le("shock offset at y=0 (cells)", off0, 2.0);
  v.le("max offset over required rows (cells)", c.max_offset_cells, 2.0);
  v.le("banded L1 error (" + std::to_string(c.compared_cells) + " cells)", c.l1_error, 0.02);
  v.le("conservation defect per step", g.max_conservation_defect, 1e-12);
  const auto [mn, mx] = std::minmax_element(g.u.begin(), g.u.end());
  v.ok("max principle [" + format_double(*mn) + ", " + format_double(*mx) + "] within [" +
           format_double(g.initial_min) + ", " + format_double(g.initial_max) + "]",
       *mn >= g.initial_min - 1e-14 && *mx <= g.initial_max + 1e-14);
  return v;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict check_determinism(const fs::path& out, int threads) {
  Verdict v;
  RunConfig cfg;
  cfg.problem.preset = "preset-a";
  cfg.threads = threads;
  cfg.fv.nx = cfg.fv.ny = 64;
  cfg.field_samples = 12;
  std::vector<fs::path> runs{out / "determinism" / "run1", out / "determinism" / "run2"};
  std::vector<std::vector<fs::path>> files;
  std::ostringstream sink;
  for (const auto& dir : runs) {
    fs::remove_all(dir);
    Pipeline p(cfg);
    std::vector<fs::path> f;
    for (auto step : {&Pipeline::write_analysis, &Pipeline::write_curve, &Pipeline::write_front,
                      &Pipeline::write_field, &Pipeline::write_reference}) {
      const auto written = (p.*step)(dir, sink);
      f.insert(f.end(), written.begin(), written.end());
    }
    files.push_back(f);
  }
  int differing = 0;
  for (std::size_t i = 0; i < files[0].size(); ++i)
    if (read_file(files[0][i]) != read_file(files[1][i])) ++differing;
  v.ok(std::to_string(files[0].size()) + " CSV files compared", files[0].size() == files[1].size() && !files[0].empty());
  v.le("files differing", differing, 0);
  return v;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "AC" << r.id << (r.id < 10 ? "  " : " ") << (r.passed ? "PASS" : "FAIL") << "  " << r.name
     << " -- " << r.detail;
  return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
  const int th = opts.threads;
  struct Entry {
    std::string name;
    std::function<Verdict()> run;
  };
  const std::vector<Entry> suite = {
      {"blowup identification (preset-a)", check_blowup_identification},
      {"blowup curve closed form", check_blowup_curve},
      {"cusp coefficients and leading forms", check_cusp_coefficients},
      {"root inversion", check_root_inversion},
      {"expansion orders", check_expansion_orders},
      {"front correctness (preset-a)", [th] { return check_front_correctness(th); }},
      {"front expansion order", [th] { return check_front_expansion_order(th); }},
      {"singular IVP engine", check_singular_ivp},
      {"singular exponents and gauges", [th] { return check_exponents(th); }},
      {"finite-volume cross-check", [&opts, th] { return check_fv_cross_check(opts.fv_cells, th); }},
      {"CSV determinism", [&opts, th] { return check_determinism(opts.out_dir, th); }},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
      continue;
    CriterionResult r;
    r.id = id;
    r.name = suite[i].name;
    try {
      const Verdict v = suite[i].run();
      r.passed = v.passed();
      r.detail = v.detail();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

void write_acceptance_csv(const fs::path& path, const std::vector<CriterionResult>& results) {
  CsvWriter w(path, {"id", "name", "passed", "detail"});
  for (const auto& r : results) w.row({std::int64_t{r.id}, r.name, std::int64_t{r.passed}, r.detail});
}

}  // namespace shockform
