#pragma once

// All real characteristic feet xi of a spacetime point near the blowup
// curve, region classification, and the asymptotic expansions of the roots
// (used as independent oracles and seeds).

#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "shockform/blowup.hpp"

namespace shockform {

enum class Region { pre_blowup, inside_cusp, outside_left, outside_right, boundary };
enum class Branch { minus, center, plus };

std::string_view to_string(Region r);
std::string_view to_string(Branch b);

struct ScaledCoords {
  double s = 0.0;       // sqrt|t - T*|
  double lambda = 0.0;  // varsigma / s^3
  double zeta = 0.0;    // cbrt(varsigma)
  double eta_scaled = 0.0;  // (t - T*) / zeta^2
  double nu = 0.0;      // (xi - Xi*) / zeta, when a root is supplied
  double varsigma = 0.0;  // x - x**(t, y)
  double x_ss = 0.0;      // x**(t, y)
  bool post = false;      // t > T*
};

ScaledCoords scaled_coords(const GammaSample& g, double t, double x,
                           std::optional<double> xi = std::nullopt);

struct Root {
  double xi = 0.0;
  double eta = 0.0;
  Branch branch = Branch::center;
  double residual = 0.0;
  double jacobian_D = 0.0;
};

struct CharRoots {
  double t = 0.0, x = 0.0, y = 0.0;
  Region region = Region::pre_blowup;
  std::vector<Root> roots;  // ascending in xi
  CuspFolds folds;          // meaningful after blowup

  const Root* find(Branch b) const {
    for (const auto& r : roots)
      if (r.branch == b) return &r;
    return nullptr;
  }
};

struct InversionOptions {
  double residual_tol = 1e-12;
  double boundary_tol = 1e-8;
  bool skip_center = false;  // only outer branches are needed by the front
  double t_limit = std::numeric_limits<double>::infinity();
};

/// Inverts x = xi + t phi(xi, Y(t, xi, y)) at fixed (t, y).
CharRoots invert_point(const Problem& p, const GammaData& g, double t, double x, double y,
                       const InversionOptions& opts = {});

/// The unique foot at times before the first blowup, found over the whole
/// box without reference to the curve. Throws RootCountUnexpected when the
/// backward characteristic leaves the box.
Root invert_smooth(const Problem& p, double t, double x, double y,
                   double t_limit = std::numeric_limits<double>::infinity());

/// Residual x - xi - t phi(xi, Y(t, xi, y)).
double inversion_residual(const Problem& p, double t, double xi, double x, double y,
                          double t_limit = std::numeric_limits<double>::infinity());

struct ExpansionWindow {
  double eps = std::numeric_limits<double>::infinity();
};

/// Xi* + s (-/+ sqrt(c1/c2) + lambda/(2 c1)); returns (minus, plus).
std::pair<double, double> xi_pm_expansion(const GammaData& g, double s, double lambda,
                                          const ExpansionWindow& w = {});

/// Offset family around the cubic root mu_c of -c1 mu + c2 mu^3 = c (largest
/// root for plus, smallest for minus).
double xi_offset_expansion(const GammaData& g, double c, double s, double lambda, Branch branch,
                           const ExpansionWindow& w = {}, double denominator_floor = 1e-8);

/// Xi* + zeta (c2^(-1/3) + c1/(3 c2^(2/3)) eta_scaled).
double xi_center_expansion(const GammaData& g, double zeta, double eta_scaled,
                           const ExpansionWindow& w = {});

/// Before blowup: Xi* + s (mu + (lambda - c)/(c1 + 3 c2 mu^2)), mu the unique
/// real root of c1 mu + c2 mu^3 = c, s = sqrt(T* - t).
double xi_pre_expansion(const GammaData& g, double c, double s, double lambda,
                        const ExpansionWindow& w = {});

}  // namespace shockform
