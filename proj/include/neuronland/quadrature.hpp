#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace neuronland {

// Globally adaptive Gauss-Legendre quadrature with known-breakpoint seeding.
// The loss integrands are piecewise smooth with features along known lines
// (activation kinks, label constructions); splitting the domain at those
// locations keeps every panel smooth, where the h-refinement error estimate
// is trustworthy and the 8-point rule converges fast.

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, std::size_t max_panels = 100000);

// As integrate_1d, but the initial panels are split at the given breakpoints
// (values outside (a, b) are ignored).
QuadResult integrate_1d_pieces(const std::function<double(double)>& f, double a, double b,
                               std::vector<double> breaks, double abs_tol,
                               std::size_t max_panels = 100000);

// Iterated integral of f over [ax,bx] x [ay,by]: the inner (y) integral is
// split at inner_breaks(x), the outer at outer_breaks. Inner tolerance is
// tied to the outer one via the domain width.
QuadResult integrate_2d_nested(const std::function<double(double, double)>& f, double ax,
                               double bx, double ay, double by,
                               const std::vector<double>& outer_breaks,
                               const std::function<std::vector<double>(double)>& inner_breaks,
                               double abs_tol, std::size_t max_panels = 100000);

}  // namespace neuronland
