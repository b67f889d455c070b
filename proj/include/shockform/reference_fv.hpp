#pragma once

// First-order Godunov finite volumes with dimensional splitting: an
// independent entropy solution to check the tracked front against.

#include <functional>
#include <optional>
#include <vector>

#include "shockform/field.hpp"
#include "shockform/problem.hpp"

namespace shockform {

enum class Boundary { outflow, periodic };
std::string_view to_string(Boundary b);

struct FvSpec {
  int nx = 256;
  int ny = 256;
  std::optional<Box> domain;  // defaults to the problem box
  double cfl = 0.45;
  Boundary boundary = Boundary::outflow;
  /// If set, t_end must not exceed 1.5 times this (the first blowup time).
  std::optional<double> t_blowup;
  double snapshot_every = 0.0;  // 0: no intermediate snapshots
  int threads = 1;
};

struct FieldGrid {
  int nx = 0, ny = 0;
  double x_lo = 0.0, y_lo = 0.0;
  double hx = 0.0, hy = 0.0;
  double t = 0.0;
  double cfl = 0.0;
  Boundary boundary = Boundary::outflow;
  std::vector<double> u;  // row-major: u[j * nx + i]
  int steps = 0;
  double initial_min = 0.0, initial_max = 0.0;
  double max_step_mass_change = 0.0;     // |change of total mass| per step
  double max_conservation_defect = 0.0;  // same, net of the boundary fluxes

  double x(int i) const { return x_lo + (i + 0.5) * hx; }
  double y(int j) const { return y_lo + (j + 0.5) * hy; }
  double at(int i, int j) const { return u[static_cast<std::size_t>(j) * nx + i]; }
  double mass() const;
};

/// Cell averages of u0 by 3-point Gauss per axis.
FieldGrid initial_grid(const Problem& p, const FvSpec& spec);

/// Throws CflViolation, NonFiniteState, ConfigInvalid.
FieldGrid run_fv(const Problem& p, const FvSpec& spec, double t_end,
                 const std::function<void(const FieldGrid&)>& on_snapshot = {});

/// Exact Godunov flux for a scalar flux function, given its interior
/// critical points (sorted).
double godunov_flux(const std::function<double(double)>& flux, const std::vector<double>& critical,
                    double left, double right);

/// Interior zeros of f' on [lo, hi]: 33-sample sign scan per unit width, refined by
/// bracketed Newton on the (f', f'') jet.
std::vector<double> flux_critical_points(const FluxEvaluator& flux, double lo, double hi);

struct RowShock {
  double y = 0.0;
  double t_star = 0.0;
  bool required = false;  // t > T*(y) + 0.02
  bool detected = false;
  double x_detected = 0.0;
  double w = 0.0;
  double offset_cells = 0.0;  // (x_detected - w) / hx
};

struct FvComparison {
  double t = 0.0;
  std::vector<RowShock> rows;
  double max_offset_cells = 0.0;
  double l1_error = 0.0;  // mean |u_fv - u| over compared cells
  double max_error = 0.0;
  int compared_cells = 0;
  int skipped_cells = 0;
  int band_cells = 5;
};

/// Shock rows and banded L1 error against the constructed solution, over
/// rows inside the front's range. Cells whose characteristic foot is within
/// `foot_margin` of the box edge (reachable by boundary data) are skipped.
/// Throws ShockNotDetected.
FvComparison compare_fv(const FieldGrid& fv, const ShockFront& front, double foot_margin = 0.02,
                        int band_cells = 5);

/// Max and mean error against the smooth solution before the first blowup.
struct SmoothComparison {
  double max_error = 0.0;
  double l1_error = 0.0;
  int compared_cells = 0;
};
SmoothComparison compare_fv_smooth(const Problem& p, const FieldGrid& fv, double foot_margin = 0.02);

/// Per row: location of the largest difference quotient if it exceeds 5x
/// the row median.
std::optional<double> detect_row_shock(const FieldGrid& fv, int j);

}  // namespace shockform
