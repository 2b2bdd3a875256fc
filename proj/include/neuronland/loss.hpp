#pragma once

#include <optional>

#include "neuronland/activations.hpp"
#include "neuronland/common.hpp"
#include "neuronland/instances.hpp"

namespace neuronland {

// Loss convention: F(w) = (1/2) E[(act(w.x) - tr(y))^2] + (rho/2) ||w||^2,
// with tr the optional clamp of labels to [-M, M]. The 1/2 factor is part of
// every loss value this library reports.
struct LossSpec {
  Activation act;
  double rho = 0.0;
  std::optional<double> trunc_M;
};

Vec truncate_labels(const Vec& y, double M);

double empirical_loss(const LabeledDataset& ds, const LossSpec& spec, const Vec& w);
Vec empirical_gradient(const LabeledDataset& ds, const LossSpec& spec, const Vec& w);

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
};

struct McGradient {
  Vec value;
  Vec std_err;     // per-coordinate standard errors
  double std_err_l2 = 0.0;
  std::size_t n = 0;
};

// Monte-Carlo population loss over fresh samples from the marginal.
McEstimate population_loss_mc(const PopulationInstance& inst, const LossSpec& spec,
                              const Vec& w, std::size_t n_mc, std::uint64_t seed);

McGradient population_gradient_mc(const PopulationInstance& inst, const LossSpec& spec,
                                  const Vec& w, std::size_t n_mc, std::uint64_t seed);

// Deterministic population loss for d <= 2 by globally adaptive panel
// quadrature against the marginal density. The label rule must be
// deterministic (its row argument is fixed to 0).
double population_loss_quadrature(const PopulationInstance& inst, const LossSpec& spec,
                                  const Vec& w, double abs_tol = 1e-8);

Vec population_gradient_quadrature(const PopulationInstance& inst, const LossSpec& spec,
                                   const Vec& w, double abs_tol = 1e-8);

// Upper bound on E[(act(w.x) - act(v.x))^2] for a sigmoidal activation under
// an (L, R)-well-behaved marginal: xi^2 ||w-v||^2 always, and the weighted
// geometry bound 8 xi^2 delta^3 / (L^4 mu^3) ||w-v||_w^2 when the pair is in
// the far regime (angle < pi/4, ||w|| <= delta ||v||, ||w|| > 2/R). Returns
// the smaller applicable bound.
double param_vs_loss_bound(const SigmoidalActivation& act, double L, double R,
                           const Vec& w, const Vec& v);

}  // namespace neuronland
