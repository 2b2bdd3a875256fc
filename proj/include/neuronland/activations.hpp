#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace neuronland {

// An activation with its analytic derivative. Derivatives at kink points use
// the right-derivative convention (ramp'(1) = 0, relu'(0) = 1); the kink
// locations are recorded so certification grids and finite-difference probes
// can step around them.
struct Activation {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::vector<double> kinks;
};

// Bounded, S-shaped activation: non-decreasing, derivative at least tau on
// [-1, 1] and at most xi * exp(-mu * |t|) everywhere. Range spread is then
// at most 2 * xi / mu.
struct SigmoidalActivation {
  Activation act;
  double tau = 0.0;
  double mu = 0.0;
  double xi = 0.0;
  std::string tail_note;  // why the derivative envelope holds beyond the grid
};

// Non-decreasing, lambda-Lipschitz activation whose derivative stays at
// least alpha on [0, inf).
struct UnboundedActivation {
  Activation act;
  double alpha = 0.0;
  double lambda = 0.0;
};

// Clamp of t to [-1, 1].
double ramp(double t);
double hat_ramp(double t);  // the five-piece label function used by the spurious-minimum instance

SigmoidalActivation builtin_sigmoidal(const std::string& name);
UnboundedActivation builtin_unbounded(const std::string& name,
                                      std::optional<double> shape = std::nullopt);

struct CertCondition {
  std::string condition;
  double margin;    // >= 0 means satisfied; worst case over the grid
  double location;  // grid point attaining the worst margin
};

struct CertReport {
  std::string name;
  std::vector<CertCondition> conditions;
  bool pass = false;  // true iff every margin >= -1e-12
};

// Grid check of the three sigmoidal conditions (monotone, derivative floor
// on [-1,1], exponential derivative envelope on [-50,50]). Points that land
// on a declared kink are nudged by half a step.
CertReport certify_sigmoidal(const SigmoidalActivation& act, double grid_step);

CertReport certify_unbounded(const UnboundedActivation& act, double grid_step);

// Shifted copy with act'(0) = 0; the returned offset must also be subtracted
// from labels (loss is invariant under the simultaneous shift).
std::pair<Activation, double> normalize_at_zero(const Activation& act);

}  // namespace neuronland
