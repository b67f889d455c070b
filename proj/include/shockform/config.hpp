#pragma once

// Run configuration: one INI-style file (key = value, one section per
// module). Every key has a default; unknown sections or keys are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shockform/field.hpp"
#include "shockform/problem.hpp"
#include "shockform/reference_fv.hpp"
#include "shockform/shock_front.hpp"

namespace shockform {

struct ProblemConfig {
  std::string preset = "preset-a";
  // A custom problem replaces the preset when all three are given.
  std::optional<std::string> flux_x, flux_y, initial;
  Box box{-0.5, 0.5, -0.5, 0.5};
};

struct RunConfig {
  ProblemConfig problem;
  std::uint32_t seed = 0;  // quasi-random offset for jet validation samples
  int threads = 1;

  // [curve]
  double delta = 0.2;  // half-width of the y band around the first blowup point
  std::vector<double> y_grid{-0.15, -0.1, -0.05, 0.0, 0.05, 0.1, 0.15};
  int gnc_grid = 128;
  double newton_residual = 1e-10;

  // [front]
  FrontOptions front;  // epsilon, beta range, grids, bound M, noise floor
  int front_time_samples = 8;
  std::vector<double> front_y{-0.1, -0.05, 0.0, 0.05, 0.1};

  // [field]
  std::vector<double> field_y{0.0};
  int field_samples = 24;  // per axis of the (t, x) grid
  double field_dt = 0.02;
  double field_dx = 0.01;
  double ray_r_min = 1e-8;
  double ray_r_max = 1e-4;
  int ray_samples = 12;
  int gauge_samples = 8;

  // [reference]
  FvSpec fv;
  std::optional<double> fv_t_end;  // defaults to T*0 + 0.2
  double foot_margin = 0.02;
  int band_cells = 5;
};

/// Throws ConfigInvalid with the offending line or key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Range and consistency checks that do not need the problem solved.
void validate_config(const RunConfig& cfg);

/// The problem named by the configuration (preset or custom expressions).
Problem make_problem(const RunConfig& cfg);

}  // namespace shockform
