#include "neuronland/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "neuronland/norms.hpp"
#include "neuronland/rng.hpp"

namespace neuronland {

SigmoidalSchedule schedule_sigmoidal(double L, double R, double tau, double mu, double xi,
                                     double eps, double c) {
  require(L > 0.0 && L <= 1.0 && R > 0.0 && R <= 1.0, "schedule_sigmoidal: L, R in (0, 1]");
  require(tau > 0.0 && tau <= 1.0 && mu > 0.0 && mu <= 1.0,
          "schedule_sigmoidal: tau, mu in (0, 1]");
  require(xi >= 1.0, "schedule_sigmoidal: xi >= 1");
  require(eps > 0.0, "schedule_sigmoidal: eps > 0");
  require(c > 0.0 && c < 1.0, "schedule_sigmoidal: c in (0, 1)");
  SigmoidalSchedule s;
  const double L3 = L * L * L, R3 = R * R * R;
  s.kappa = L3 * L3 * R3 * R3 * mu * mu * mu * tau * tau * tau * tau / (xi * xi);
  s.eta = c * std::pow(eps, 2.5);
  s.rho = std::pow(eps, 3.0) / (c * std::pow(s.kappa, 5.0));
  s.M = xi / mu;
  // Iteration-count exponents (5, 4): at or above the distance-reduction
  // floor for every shipped parameter set.
  s.T = std::ceil(std::pow(s.kappa, -5.0) * std::pow(eps, -4.0));
  return s;
}

UnboundedSchedule schedule_unbounded(double L, double R, double alpha, double lambda,
                                     double W, double eps, double c) {
  require(L > 0.0 && L <= 1.0 && R > 0.0 && R <= 1.0, "schedule_unbounded: L, R in (0, 1]");
  require(alpha > 0.0 && alpha <= 1.0, "schedule_unbounded: alpha in (0, 1]");
  require(lambda >= 1.0, "schedule_unbounded: lambda >= 1");
  require(W >= 1.0, "schedule_unbounded: W >= 1");
  require(eps > 0.0, "schedule_unbounded: eps > 0");
  require(c > 0.0 && c < 1.0, "schedule_unbounded: c in (0, 1)");
  UnboundedSchedule s;
  const double R4 = R * R * R * R;
  s.alpha2 = 0.5 * alpha * alpha * L * R4;
  s.B = lambda;
  s.eta = c * s.alpha2 / s.B;
  s.M = 3.0 * W * std::max(std::log(W / eps), 1.0);
  s.alpha1 = std::sqrt(eps) * lambda / (c * L * R4 * alpha * alpha);
  s.T = static_cast<std::int64_t>(
      std::ceil((W * W + std::log(1.0 / s.alpha1)) / (s.eta * s.alpha2)));
  if (s.T < 1) s.T = 1;
  // Per-step batch from the gradient-estimation bound (committed constant 50).
  const double lam4 = std::pow(lambda / alpha, 4.0);
  const double logs = std::max(std::log(1.0 / eps), 1.0);
  s.n_per_step = static_cast<std::size_t>(
      std::ceil(50.0 * W * W * lam4 / (L * L * L * L * R4 * R4) * logs * logs));
  return s;
}

namespace {

struct TrajectoryRecorder {
  RunReport& rep;
  std::int64_t T;
  std::int64_t next_stored = 0;

  // Every iterate for short runs, geometric thinning (ratio 1.1) plus the
  // final stretch for long ones.
  void maybe_store(std::int64_t t, const Vec& w, double loss, double gl2, double gdual) {
    const bool tail = t > T - 100;
    if (T > 10000 && t < next_stored && !tail) return;
    if (T > 10000 && !tail)
      next_stored = std::max<std::int64_t>(t + 1, static_cast<std::int64_t>(t * 1.1));
    rep.iters.push_back(t);
    rep.iterates.push_back(w);
    rep.losses.push_back(loss);
    rep.grad_l2.push_back(gl2);
    rep.grad_dual.push_back(gdual);
    rep.w_l2.push_back(norm2(w));
  }
};

double dual_norm_or_zero(const Vec& g, const Vec& w) {
  const double nw = norm2(w);
  if (nw <= WeightVector::kMinBaseNorm) return 0.0;
  return dual_weighted_norm(g, WeightVector(w));
}

}  // namespace

RunReport gd_sigmoidal(const LabeledDataset& ds, const Activation& act, const GDConfig& cfg) {
  require(cfg.eta > 0.0 && cfg.T >= 1, "gd_sigmoidal: eta > 0 and T >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  RunReport rep;
  rep.config = cfg;
  LossSpec spec{act, 0.0, cfg.trunc_M};  // rho applied explicitly in the update

  Vec w = cfg.init_w.value_or(Vec(ds.d, 0.0));
  require(w.size() == ds.d, "gd_sigmoidal: init_w dimension mismatch");
  TrajectoryRecorder rec{rep, cfg.T};

  for (std::int64_t t = 0; t <= cfg.T; ++t) {
    Vec g = empirical_gradient(ds, spec, w);
    axpy(cfg.rho, w, g);  // gradient of the regularized objective
    const double loss = empirical_loss(ds, spec, w) + 0.5 * cfg.rho * dot(w, w);
    rec.maybe_store(t, w, loss, norm2(g), dual_norm_or_zero(g, w));
    rep.steps_run = t;

    if (!std::isfinite(loss) || norm2(w) > cfg.divergence_norm) {
      rep.diverged = true;
      break;
    }
    if (t == cfg.T) break;
    axpy(-cfg.eta, g, w);
  }

  rep.final_w = w;
  rep.final_loss = rep.losses.empty() ? 0.0 : rep.losses.back();
  rep.total_samples = ds.n;
  rep.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

RunReport gd_unbounded(const PopulationInstance& inst, const Activation& act,
                       const GDConfig& cfg) {
  require(cfg.eta > 0.0 && cfg.T >= 1, "gd_unbounded: eta > 0 and T >= 1");
  require(cfg.n_per_step >= 1, "gd_unbounded: n_per_step >= 1");
  require(cfg.trunc_M.has_value(), "gd_unbounded: truncation threshold required");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = static_cast<std::size_t>(inst.marginal.dim);

  RunReport rep;
  rep.config = cfg;
  LossSpec spec{act, 0.0, cfg.trunc_M};

  Vec w = cfg.init_w.value_or(Vec(d, 0.0));
  require(w.size() == d, "gd_unbounded: init_w dimension mismatch");
  TrajectoryRecorder rec{rep, cfg.T};

  for (std::int64_t t = 0; t <= cfg.T; ++t) {
    // Fresh batch for this step; rows are seeded by (seed, step) so the whole
    // run is reproducible and steps use disjoint streams.
    LabeledDataset batch;
    batch.n = cfg.n_per_step;
    batch.d = d;
    MarginalSpec m = inst.marginal;
    const std::uint64_t step_seed = mix64(cfg.seed ^ (0x5DEECE66DULL + static_cast<std::uint64_t>(t)));
    batch.X = sample(m, batch.n, step_seed);
    batch.y.resize(batch.n);
    parallel_for(batch.n, [&](std::size_t i) {
      batch.y[i] = inst.label(std::span<const double>(batch.row(i), d), i);
    });
    rep.total_samples += batch.n;

    const Vec g = empirical_gradient(batch, spec, w);
    const double loss = empirical_loss(batch, spec, w);
    rec.maybe_store(t, w, loss, norm2(g), dual_norm_or_zero(g, w));
    rep.steps_run = t;

    if (!std::isfinite(loss) || norm2(w) > cfg.divergence_norm) {
      rep.diverged = true;
      break;
    }
    if (t == cfg.T) break;
    axpy(-cfg.eta, g, w);
  }

  rep.final_w = w;
  rep.final_loss = rep.losses.empty() ? 0.0 : rep.losses.back();
  rep.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

GridSearchResult rho_grid_search(const LabeledDataset& train, const LabeledDataset& validation,
                                 const SigmoidalActivation& act, double eps,
                                 const GridSearchOptions& opt) {
  require(eps > 0.0, "rho_grid_search: eps > 0");
  const double hi = opt.grid_hi > 0.0 ? opt.grid_hi : 2.0 * act.xi / act.mu;
  GridSearchResult res;

  for (double guess = eps; guess <= hi + 0.5 * eps; guess += eps)
    res.guessed_opt.push_back(guess);
  res.reports.resize(res.guessed_opt.size());
  res.validation_losses.assign(res.guessed_opt.size(), 0.0);

  LossSpec val_spec{act.act, 0.0, opt.trunc_M};
  for (std::size_t i = 0; i < res.guessed_opt.size(); ++i) {
    const double guess = res.guessed_opt[i];
    const SigmoidalSchedule sched =
        schedule_sigmoidal(1.0, 1.0, 1.0, 1.0, 1.0, guess, opt.c);
    GDConfig cfg;
    cfg.eta = opt.eta > 0.0 ? opt.eta : sched.eta;
    cfg.T = opt.T > 0 ? opt.T : static_cast<std::int64_t>(std::min(sched.T, 1e7));
    cfg.rho = sched.rho;
    cfg.trunc_M = opt.trunc_M ? opt.trunc_M : std::optional<double>(act.xi / act.mu);
    cfg.seed = opt.seed;
    cfg.eps_target = guess;
    try {
      res.reports[i] = gd_sigmoidal(train, act.act, cfg);
      res.validation_losses[i] =
          res.reports[i].diverged
              ? std::numeric_limits<double>::infinity()
              : empirical_loss(validation, val_spec, res.reports[i].final_w);
    } catch (const std::exception&) {
      res.validation_losses[i] = std::numeric_limits<double>::infinity();
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < res.validation_losses.size(); ++i)
    if (res.validation_losses[i] < res.validation_losses[best]) best = i;
  res.best_index = best;
  res.best_w = res.reports[best].final_w;
  return res;
}

std::pair<double, std::int64_t> stepsize_bounded_field(double B, double Z0, double Z1,
                                                       double zeta, double alpha1,
                                                       double alpha2, double beta1,
                                                       double beta2, double gamma) {
  require(Z1 > Z0 && Z0 >= 1.0, "stepsize_bounded_field: need Z1 > Z0 >= 1");
  require(zeta > 0.0 && zeta < 1.0, "stepsize_bounded_field: zeta in (0, 1)");
  require(B > 0.0 && alpha1 > 0.0 && alpha2 > 0.0 && beta1 > 0.0 && beta2 > 0.0 &&
              gamma > 0.0,
          "stepsize_bounded_field: rates must be positive");
  const double shell = beta1 * beta2 / std::pow(Z1, 1.5);
  const double eta =
      std::min(std::min(alpha1 * alpha2, shell), std::min(2.0 * gamma / Z1, (1.0 - zeta) * Z1 * B)) /
      (B * B);
  const double floor_rate = std::min(alpha1 * alpha2, shell);
  const auto T = static_cast<std::int64_t>(std::ceil(Z1 * Z1 / (eta * floor_rate)));
  return {eta, T};
}

}  // namespace neuronland
