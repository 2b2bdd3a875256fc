#pragma once

#include <cstdint>
#include <optional>

#include "neuronland/activations.hpp"
#include "neuronland/common.hpp"
#include "neuronland/instances.hpp"
#include "neuronland/loss.hpp"

namespace neuronland {

// Hyperparameters for the bounded-activation learner. Formula-faithful; see
// docs/results.md for the parameter sets actually shipped with experiments.
struct SigmoidalSchedule {
  double kappa = 0.0;  // L^6 R^6 mu^3 tau^4 / xi^2
  double eta = 0.0;    // c * eps^2.5
  double rho = 0.0;    // eps^3 / (c * kappa^5)
  double M = 0.0;      // xi / mu
  double T = 0.0;      // ceil(kappa^-5 * eps^-4); may be astronomically large
};

SigmoidalSchedule schedule_sigmoidal(double L, double R, double tau, double mu, double xi,
                                     double eps, double c);

struct UnboundedSchedule {
  double eta = 0.0;       // c * alpha2 / B
  double M = 0.0;         // 3 W max(log(W/eps), 1)
  std::int64_t T = 0;     // ceil((W^2 + log(1/alpha1)) / (eta alpha2))
  std::size_t n_per_step = 0;
  double alpha1 = 0.0;    // contraction stops below this distance
  double alpha2 = 0.0;    // (1/2) alpha^2 L R^4
  double B = 0.0;         // gradient-norm scale (lambda)
};

UnboundedSchedule schedule_unbounded(double L, double R, double alpha, double lambda,
                                     double W, double eps, double c);

struct GDConfig {
  double eta = 0.0;
  std::int64_t T = 0;
  double rho = 0.0;
  std::optional<double> trunc_M;
  std::size_t n_per_step = 0;        // fresh-batch size (unbounded learner)
  std::uint64_t seed = 0;
  double eps_target = 0.0;
  std::optional<Vec> init_w;         // default: origin
  double divergence_norm = 1e6;      // guard: abort when ||w|| exceeds this
};

struct RunReport {
  std::vector<std::int64_t> iters;   // thinned iteration indices
  std::vector<Vec> iterates;
  Vec losses;                        // empirical (regularized, truncated) loss
  Vec grad_l2;
  Vec grad_dual;                     // dual weighted norm; 0 at the origin
  Vec w_l2;
  Vec final_w;
  double final_loss = 0.0;
  bool diverged = false;
  std::int64_t steps_run = 0;
  std::size_t total_samples = 0;
  double wall_time_sec = 0.0;        // not serialized (outputs must be reproducible)
  GDConfig config;
};

// Full-batch descent on the truncated, regularized empirical loss over one
// fixed sample: w <- w - eta (grad + rho w), T steps from the origin.
RunReport gd_sigmoidal(const LabeledDataset& ds, const Activation& act, const GDConfig& cfg);

// Fresh-sample descent on the plain (rho = 0) truncated loss: each step draws
// n_per_step new examples from the population instance.
RunReport gd_unbounded(const PopulationInstance& inst, const Activation& act,
                       const GDConfig& cfg);

struct GridSearchOptions {
  double c = 0.1;            // schedule constant
  double grid_hi = 0.0;      // top of the guessed-opt grid; default 2 xi / mu
  double eta = 0.0;          // 0 = per-candidate scheduled value
  std::int64_t T = 0;        // 0 = per-candidate scheduled value
  std::optional<double> trunc_M;
  std::uint64_t seed = 0;
};

struct GridSearchResult {
  Vec best_w;
  std::size_t best_index = 0;
  Vec guessed_opt;           // the candidate opt levels
  Vec validation_losses;
  std::vector<RunReport> reports;
};

// Runs gd_sigmoidal once per guessed opt level in {eps, 2 eps, ...} with the
// correspondingly scheduled regularizer, and selects by validation loss.
GridSearchResult rho_grid_search(const LabeledDataset& train, const LabeledDataset& validation,
                                 const SigmoidalActivation& act, double eps,
                                 const GridSearchOptions& opt);

// Step size and iteration floor for a bounded gradient field with the
// three-regime alignment structure (l2 near the origin, weighted norm in the
// shell, radial pull outside). The target-norm bound is taken to be Z1.
std::pair<double, std::int64_t> stepsize_bounded_field(double B, double Z0, double Z1,
                                                       double zeta, double alpha1,
                                                       double alpha2, double beta1,
                                                       double beta2, double gamma);

}  // namespace neuronland
