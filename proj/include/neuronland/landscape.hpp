#pragma once

#include <optional>
#include <string>

#include "neuronland/common.hpp"
#include "neuronland/instances.hpp"
#include "neuronland/loss.hpp"

namespace neuronland {

enum class PopOracle { kQuadrature, kMonteCarlo };

// Shared knobs for the stationarity diagnostics. The density/activation
// constants are the certified ones for the instance at hand; c, c_prime and
// the implied-loss exponent p are the committed working constants.
struct LandscapeParams {
  double L = 1.0, R = 1.0;
  double tau = 1.0, mu = 1.0, xi = 1.0;
  double kappa = 1.0;          // conditioning used by regime radii and bounds
  double c = 0.01;             // stationarity threshold scale: c sqrt(eps)
  double c_prime = 0.01;       // alignment-ratio floor
  int p = 10;                  // implied loss bound eps * kappa^-p
  PopOracle oracle = PopOracle::kQuadrature;
  std::size_t mc_budget = 4000000;
  std::uint64_t seed = 7;
  double quad_tol = 1e-8;
};

enum class Regime { kNearOrigin, kFar };

struct StationarityVerdict {
  Vec w;
  double grad_l2 = 0.0;
  double grad_dual = 0.0;      // 0 at the origin
  Regime regime = Regime::kNearOrigin;
  double threshold = 0.0;      // c sqrt(eps)
  bool is_approx_stationary = false;
  double implied_loss_bound = 0.0;
  double mc_std_err = 0.0;     // 0 for the quadrature oracle
};

// Evaluates the population gradient of the regularized loss at w and applies
// the regime-appropriate norm test: l2 for ||w|| <= 2/R, dual weighted norm
// beyond. MC precision must reach threshold/10 within the sample budget.
StationarityVerdict stationarity_check(const PopulationInstance& inst, const LossSpec& spec,
                                       const LandscapeParams& params, const Vec& w,
                                       double eps);

struct AlignmentReport {
  int case_id = 0;             // which regime applied
  bool preconditions_met = false;
  std::string note;
  double inner = 0.0;          // measured grad . direction
  double norm_term = 0.0;      // the distance norm scaling the bound
  double ratio = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Regularized-gradient alignment toward w_star, regime split by ||w||:
// case 1 near the origin (l2), case 2 in the shell (weighted norm), case 3
// far out (radial pull; sign test).
AlignmentReport alignment_check_sigmoidal(const PopulationInstance& inst, const LossSpec& spec,
                                          const LandscapeParams& params, const Vec& w,
                                          const Vec& w_star, double eps);

// Plain-gradient alignment for unbounded activations on the half-space
// w . w_star >= 0: measured (grad . (w - w_star)) / (alpha^2 L R^4 ||w-w_star||^2)
// against the committed floor 7/64 - 1/32.
struct UnboundedAlignmentParams {
  double alpha = 1.0, lambda = 1.0;
  double L = 1.0, R = 1.0;
  double distance_floor_factor = 64.0;  // eligibility: ||w-w*|| >= factor * lambda sqrt(eps) / (alpha^2 L R^4)
  double threshold = 7.0 / 64.0 - 1.0 / 32.0;
};

AlignmentReport alignment_check_unbounded(const PopulationInstance& inst, const LossSpec& spec,
                                          const LandscapeParams& params,
                                          const UnboundedAlignmentParams& up, const Vec& w,
                                          const Vec& w_star, double eps);

struct RadiusScanPoint {
  double t;
  double loss;
};

struct RadiusScanResult {
  std::vector<RadiusScanPoint> curve;
  double target = 0.0;               // (1 + K xi/(mu L)) eps
  std::optional<double> qualifying_t;  // smallest scanned t with loss <= target
};

// Population loss along the ray t * direction at geometrically spaced t.
RadiusScanResult radius_scan(const PopulationInstance& inst, const LossSpec& spec,
                             const LandscapeParams& params, const Vec& direction, double eps,
                             double t_max, double K = 1.0, int points_per_decade = 8);

struct SurfaceGrid {
  double lo = 0.0, hi = 0.0;
  int resolution = 0;
  Vec w1, w2, F;                 // cell centers and loss, row-major
  std::vector<Vec> gradients;    // population gradient per cell
};

// d = 2 loss surface on [lo, hi]^2, evaluated cell by cell with the
// configured oracle.
SurfaceGrid loss_surface_grid(const PopulationInstance& inst, const LossSpec& spec,
                              const LandscapeParams& params, double lo, double hi,
                              int resolution);

// Cells whose discrete gradient field changes sign in both coordinates and
// survives 10 steps of local descent (a stationary *cell*, not a point).
std::vector<std::size_t> stationary_cells(const SurfaceGrid& grid);

// Symmetric finite-difference Hessian of the population loss (d <= 8).
std::vector<double> hessian_probe(const PopulationInstance& inst, const LossSpec& spec,
                                  const LandscapeParams& params, const Vec& w, double step);

// Smallest eigenvalue of a symmetric matrix (Jacobi rotations; d <= 8).
double min_eigenvalue_symmetric(std::vector<double> A, std::size_t d);

}  // namespace neuronland
