#pragma once

// Straight characteristics x = xi + t phi, y = eta + t psi; the implicit
// foot eta = Y(t, xi, y); and the Jacobian determinant 1 + t H.

#include <limits>
#include <utility>

#include "shockform/problem.hpp"

namespace shockform {

struct YJet {
  double eta = 0.0;
  double dt = 0.0;
  double dxi = 0.0;
  double dy = 0.0;
  double dt_dxi = 0.0;
  double dxi_dxi = 0.0;
  double dxi3 = 0.0;
  double residual = 0.0;
};

std::pair<double, double> forward_char(const Problem& p, double t, double xi, double eta);

/// Solves y = eta + t psi(xi, eta) for eta. `t_limit` bounds the admissible
/// time range (pass the problem's guard window; infinite disables it).
double solve_eta(const Problem& p, double t, double xi, double y,
                 double t_limit = std::numeric_limits<double>::infinity());

/// solve_eta plus the closed-form implicit derivatives.
YJet solve_Y(const Problem& p, double t, double xi, double y,
             double t_limit = std::numeric_limits<double>::infinity());

double jacobian_D(const Problem& p, double t, double xi, double eta);

/// Functions of (t, xi, y) restricted to eta = Y(t, xi, y), as Taylor series
/// in (dt, dxi, dy) around a base point.
struct CharComposite {
  double t = 0.0, xi = 0.0, y = 0.0, eta = 0.0;
  Series3 Y;    // order 4
  Series3 H;    // order 3: H(xi, Y)
  Series3 phi;  // order 4: phi(xi, Y)
  Series3 psi;  // order 4
  Series3 u0;   // order 4
  PhiPsiJet jet;  // at (xi, eta)
};

/// Builds the composite by Newton iteration on series. The closed-form YJet
/// and this series agree; tests cross-check them.
CharComposite char_composite(const Problem& p, double t, double xi, double y,
                             double t_limit = std::numeric_limits<double>::infinity());

/// The characteristic map restricted to fixed (t, y) as a function of xi:
/// X(xi) = xi + t phi(xi, Y(t, xi, y)) with its first two xi-derivatives.
struct MapSample {
  double x = 0.0;
  double dx = 0.0;   // = D / J
  double d2x = 0.0;
  double eta = 0.0;
};
MapSample char_map(const Problem& p, double t, double xi, double y, int derivatives = 1,
                   double t_limit = std::numeric_limits<double>::infinity());

}  // namespace shockform
