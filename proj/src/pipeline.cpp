#include "shockform/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockform/csv.hpp"
#include "shockform/errors.hpp"

namespace shockform {

namespace fs = std::filesystem;

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
  validate_config(cfg_);
  problem_ = std::make_unique<Problem>(make_problem(cfg_));
}

Pipeline::~Pipeline() = default;

const GncReport& Pipeline::gnc() {
  if (!gnc_) gnc_ = std::make_unique<GncReport>(analyze_gnc(*problem_, cfg_.gnc_grid));
  return *gnc_;
}

const BlowupCurve& Pipeline::curve() {
  if (!curve_) {
    const GncReport& r = gnc();
    if (r.failure) throw Error(*r.failure, r.failure_detail);
    CurveOptions o;
    o.accept_residual = cfg_.newton_residual;
    curve_ = std::make_unique<BlowupCurve>(BlowupCurve::build(*problem_, r, cfg_.y_grid, o));
  }
  return *curve_;
}

const ShockFront& Pipeline::front() {
  if (!front_) {
    const BlowupCurve& c = curve();
    if (cfg_.front.epsilon > 0.25 * c.gnc().t_star0) {
      std::ostringstream os;
      os << "epsilon " << cfg_.front.epsilon << " exceeds T*0/4 = " << 0.25 * c.gnc().t_star0;
      throw Error(ErrorCode::ConfigInvalid, os.str());
    }
    FrontOptions o = cfg_.front;
    o.threads = cfg_.threads;
    front_ = std::make_unique<ShockFront>(ShockFront::solve(c, o));
  }
  return *front_;
}

Pipeline::Files Pipeline::write_analysis(const fs::path& dir, std::ostream& log) {
  const GncReport& r = gnc();
  CsvWriter w(dir / "gnc.csv", {"xi0", "eta0", "min_h", "grid_min_h", "gradient_norm", "hess_xx",
                                "hess_xy", "hess_yy", "eig_min", "eig_max", "unique_min",
                                "t_star0", "status", "detail"});
  const std::string status = r.failure ? std::string(to_string(*r.failure)) : "PASS";
  w.row({r.xi0, r.eta0, r.min_h, r.grid_min_h, r.gradient_norm, r.hessian[0], r.hessian[1],
         r.hessian[2], r.eigenvalues[0], r.eigenvalues[1], std::int64_t{r.unique_min}, r.t_star0,
         status, r.failure_detail});
  log << "problem: " << problem_->preset_id().value_or("custom") << "\n"
      << "minH = " << format_double(r.min_h) << " at (" << format_double(r.xi0) << ", "
      << format_double(r.eta0) << ")\n"
      << "Hessian eigenvalues = " << format_double(r.eigenvalues[0]) << ", "
      << format_double(r.eigenvalues[1]) << "\n";
  if (!r.failure) log << "T* = " << format_double(r.t_star0) << "\n";
  log << "GNC: " << (r.failure ? "FAIL (" + status + ": " + r.failure_detail + ")" : "PASS") << "\n";
  return {w.path()};
}

Pipeline::Files Pipeline::write_curve(const fs::path& dir, std::ostream& log) {
  const BlowupCurve& c = curve();
  CsvWriter g(dir / "curve.csv", {"y", "t_star", "xi_star", "eta_star", "x_star", "tangent_slope",
                                  "u_star", "dt_star_dy", "dx_star_dy", "newton_residual",
                                  "newton_iterations"});
  CsvWriter k(dir / "cusp.csv", {"y", "D0", "D1", "D2", "D3", "A1", "A2", "a_star", "b_star", "c1",
                                 "c2", "theta0"});
  for (const GammaSample& s : c.samples()) {
    g.row({s.y, s.t_star, s.xi_star, s.y_star, s.x_star, s.tangent_slope, s.u_star, s.dt_star,
           s.dx_star, s.newton_residual, std::int64_t{s.newton_iterations}});
    const CuspCoeffs q = cusp_coeffs(*problem_, s, c.t_limit());
    k.row({q.y, q.D0, q.D1, q.D2, q.D3, q.A1, q.A2, q.a_star, q.b_star, q.c1, q.c2, q.theta0});
  }
  log << "blowup curve: " << c.samples().size() << " points, T* in ["
      << format_double(std::min_element(c.samples().begin(), c.samples().end(),
                                         [](auto& a, auto& b) { return a.t_star < b.t_star; })
                           ->t_star)
      << ", "
      << format_double(std::max_element(c.samples().begin(), c.samples().end(),
                                         [](auto& a, auto& b) { return a.t_star < b.t_star; })
                           ->t_star)
      << "]\n";
  return {g.path(), k.path()};
}

Pipeline::Files Pipeline::write_front(const fs::path& dir, std::ostream& log) {
  const ShockFront& f = front();
  CsvWriter w(dir / "front.csv", {"t", "y", "tau", "w", "dw_dt", "dw_dy", "u_minus", "u_plus",
                                  "rh_residual", "entropy_margin_minus", "entropy_margin_plus"});
  double worst_rh = 0.0, min_margin = INFINITY;
  for (double y : cfg_.front_y) {
    const double ts = curve().at(y).t_star;
    for (int k = 0; k <= cfg_.front_time_samples; ++k) {
      const double t = ts + f.options().epsilon * k / cfg_.front_time_samples;
      const FrontState s = front_states(f, t, y);
      w.row({s.t, s.y, s.tau, s.w, s.dw_dt, s.dw_dy, s.u_minus, s.u_plus, s.rh_residual,
             s.entropy_margin_minus, s.entropy_margin_plus});
      worst_rh = std::max(worst_rh, s.rh_residual);
      if (s.tau > 1e-6) min_margin = std::min({min_margin, s.entropy_margin_minus, s.entropy_margin_plus});
    }
  }
  CsvWriter d(dir / "front_diagnostics.csv",
              {"beta", "alpha", "s0", "contraction_ratio", "bound_ratio", "picard_iterations",
               "picard_stalled", "picard_final_distance"});
  for (const BetaDiagnostics& b : f.diagnostics())
    d.row({b.beta, b.alpha, b.s0, b.contraction_ratio, b.bound_ratio,
           std::int64_t{b.picard_iterations}, std::int64_t{b.picard_stalled},
           b.picard_final_distance});
  log << "shock front: window " << format_double(f.options().epsilon) << ", max RH residual "
      << format_double(worst_rh) << ", min entropy margin " << format_double(min_margin)
      << ", dy/dbeta in [" << format_double(f.min_dy_dbeta()) << ", "
      << format_double(f.max_dy_dbeta()) << "]\n";
  return {w.path(), d.path()};
}

Pipeline::Files Pipeline::write_field(const fs::path& dir, std::ostream& log) {
  const BlowupCurve& c = curve();
  const ShockFront* f = &front();
  CsvWriter w(dir / "field.csv", {"t", "x", "y", "region", "branch", "u", "u_t", "u_x", "u_y",
                                  "u_T", "jacobian_D"});
  const int n = cfg_.field_samples;
  int on_shock = 0;
  for (double y : cfg_.field_y) {
    const GammaSample g = c.at(y);
    for (int i = 0; i < n; ++i) {
      const double dt = cfg_.field_dt * (2.0 * (i + 0.5) / n - 1.0);
      for (int j = 0; j < n; ++j) {
        const double t = g.t_star + dt;
        const double x = g.x_star + g.tangent_slope * dt + cfg_.field_dx * (2.0 * (j + 0.5) / n - 1.0);
        try {
          const FieldSample s = eval_gradient(c, f, t, x, y);
          w.row({s.t, s.x, s.y, std::string(to_string(s.region)), std::string(to_string(s.branch)),
                 s.u, s.u_t, s.u_x, s.u_y, s.u_T, s.jacobian_D});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::OnShock) throw;
          ++on_shock;
        }
      }
    }
  }
  CsvWriter x(dir / "exponents.csv", {"y", "direction", "quantity", "r_min", "r_max", "samples",
                                      "slope", "stderr", "r2"});
  const std::pair<RayDirection, RayQuantity> rays[] = {
      {RayDirection::x_at_fixed_t, RayQuantity::u_increment},
      {RayDirection::x_at_fixed_t, RayQuantity::du_dx},
      {RayDirection::x_at_fixed_t, RayQuantity::tangential},
      {RayDirection::t_at_fixed_x, RayQuantity::du_dx},
      {RayDirection::tangent, RayQuantity::grad_norm},
      {RayDirection::tangent, RayQuantity::tangential},
  };
  for (double y : cfg_.field_y)
    for (const auto& [dirn, q] : rays) {
      RaySpec r;
      r.y = y;
      r.direction = dirn;
      r.quantity = q;
      r.r_min = cfg_.ray_r_min;
      r.r_max = cfg_.ray_r_max;
      r.samples = cfg_.ray_samples;
      const ExponentFit e = fit_exponent(c, f, r);
      x.row({y, std::string(to_string(dirn)), std::string(to_string(q)), r.r_min, r.r_max,
             std::int64_t{r.samples}, e.slope, e.stderr_, e.r2});
      log << "exponent y=" << format_double(y) << " " << to_string(dirn) << "/" << to_string(q)
          << ": " << format_double(e.slope) << "\n";
    }
  CsvWriter gs(dir / "gauges.csv", {"y", "gauge", "samples", "sup", "sup_refined", "change", "at_t", "at_x"});
  for (double y : cfg_.field_y)
    for (Gauge kind : {Gauge::e0, Gauge::e1, Gauge::eT}) {
      const GaugeSup a = gauge_sup(c, f, y, kind, cfg_.field_dt, cfg_.field_dx, cfg_.gauge_samples);
      const GaugeSup b = gauge_sup(c, f, y, kind, cfg_.field_dt, cfg_.field_dx, 2 * cfg_.gauge_samples);
      gs.row({y, std::string(to_string(kind)), std::int64_t{b.samples}, a.sup, b.sup,
              std::fabs(b.sup - a.sup) / a.sup, b.at_t, b.at_x});
    }
  log << "field: " << w.rows() << " samples (" << on_shock << " on the shock skipped)\n";
  return {w.path(), x.path(), gs.path()};
}

Pipeline::Files Pipeline::write_reference(const fs::path& dir, std::ostream& log) {
  const GncReport& r = gnc();
  if (r.failure) throw Error(*r.failure, r.failure_detail);
  const double t_end = cfg_.fv_t_end.value_or(r.t_star0 + 0.2);
  FvSpec spec = cfg_.fv;
  spec.t_blowup = r.t_star0;
  spec.threads = cfg_.threads;
  spec.domain = problem_->box();

  Files files;
  CsvWriter field(dir / "fv_field.csv", {"t", "x", "y", "u"});
  double dumped = -1.0;
  auto dump = [&](const FieldGrid& g) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) field.row({g.t, g.x(i), g.y(j), g.at(i, j)});
    dumped = g.t;
  };
  const FieldGrid g = run_fv(*problem_, spec, t_end, dump);
  if (dumped != g.t) dump(g);
  files.push_back(field.path());

  const auto [mn, mx] = std::minmax_element(g.u.begin(), g.u.end());
  CsvWriter sum(dir / "fv_summary.csv",
                {"t", "nx", "ny", "steps", "max_step_mass_change", "max_conservation_defect",
                 "min", "max", "initial_min", "initial_max", "max_offset_cells", "l1_error",
                 "max_error", "compared_cells", "skipped_cells"});
  files.push_back(sum.path());
  log << "reference: " << g.nx << "x" << g.ny << " cells, " << g.steps << " steps to t = "
      << format_double(g.t) << ", conservation defect/step " << format_double(g.max_conservation_defect) << "\n";

  if (t_end <= r.t_star0) {
    const SmoothComparison c = compare_fv_smooth(*problem_, g, cfg_.foot_margin);
    sum.row({g.t, std::int64_t{g.nx}, std::int64_t{g.ny}, std::int64_t{g.steps},
             g.max_step_mass_change, g.max_conservation_defect, *mn, *mx, g.initial_min, g.initial_max, 0.0, c.l1_error,
             c.max_error, std::int64_t{c.compared_cells}, std::int64_t{0}});
    log << "smooth comparison: max error " << format_double(c.max_error) << ", mean "
        << format_double(c.l1_error) << "\n";
    return files;
  }

  // a front long enough to reach t_end, on the curve's own y range
  if (!fv_front_) {
    const BlowupCurve& c = curve();
    FrontOptions o = cfg_.front;
    o.threads = cfg_.threads;
    double t_min = INFINITY;
    for (const auto& s : c.samples()) t_min = std::min(t_min, s.t_star);
    o.epsilon = std::max(o.epsilon, t_end - t_min + 0.01);
    fv_front_ = std::make_unique<ShockFront>(ShockFront::solve(c, o));
  }
  const FvComparison c = compare_fv(g, *fv_front_, cfg_.foot_margin, cfg_.band_cells);
  sum.row({g.t, std::int64_t{g.nx}, std::int64_t{g.ny}, std::int64_t{g.steps},
           g.max_step_mass_change, g.max_conservation_defect, *mn, *mx, g.initial_min, g.initial_max, c.max_offset_cells,
           c.l1_error, c.max_error, std::int64_t{c.compared_cells}, std::int64_t{c.skipped_cells}});
  CsvWriter rows(dir / "fv_compare.csv",
                 {"y", "t_star", "required", "detected", "x_detected", "w", "offset_cells"});
  for (const RowShock& s : c.rows)
    rows.row({s.y, s.t_star, std::int64_t{s.required}, std::int64_t{s.detected}, s.x_detected, s.w,
              s.offset_cells});
  files.push_back(rows.path());
  log << "shock vs front: max offset " << format_double(c.max_offset_cells) << " cells, banded L1 "
      << format_double(c.l1_error) << " over " << c.compared_cells << " cells\n";
  return files;
}

}  // namespace shockform
