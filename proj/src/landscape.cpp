#include "neuronland/landscape.hpp"

#include <algorithm>
#include <cmath>

#include "neuronland/norms.hpp"

namespace neuronland {

namespace {

struct PopGradient {
  Vec g;
  double std_err_l2 = 0.0;
};

PopGradient population_gradient(const PopulationInstance& inst, const LossSpec& spec,
                                const LandscapeParams& params, const Vec& w,
                                double target_std_err) {
  if (params.oracle == PopOracle::kQuadrature && inst.marginal.dim <= 2) {
    return {population_gradient_quadrature(inst, spec, w, params.quad_tol), 0.0};
  }
  std::size_t n = 100000;
  for (;;) {
    const McGradient mc = population_gradient_mc(inst, spec, w, n, params.seed);
    if (mc.std_err_l2 <= target_std_err || n >= params.mc_budget)
      return {mc.value, mc.std_err_l2};
    n = std::min(params.mc_budget, n * 4);
  }
}

double population_loss(const PopulationInstance& inst, const LossSpec& spec,
                       const LandscapeParams& params, const Vec& w) {
  if (params.oracle == PopOracle::kQuadrature && inst.marginal.dim <= 2)
    return population_loss_quadrature(inst, spec, w, params.quad_tol);
  return population_loss_mc(inst, spec, w, params.mc_budget, params.seed).value;
}

}  // namespace

StationarityVerdict stationarity_check(const PopulationInstance& inst, const LossSpec& spec,
                                       const LandscapeParams& params, const Vec& w,
                                       double eps) {
  require(eps > 0.0, "stationarity_check: eps > 0");
  StationarityVerdict v;
  v.w = w;
  v.threshold = params.c * std::sqrt(eps);

  const PopGradient pg = population_gradient(inst, spec, params, w, v.threshold / 10.0);
  if (params.oracle == PopOracle::kMonteCarlo && pg.std_err_l2 > v.threshold / 10.0)
    throw std::runtime_error("stationarity_check: MC budget too small for threshold/10");
  v.mc_std_err = pg.std_err_l2;
  v.grad_l2 = norm2(pg.g);

  const double nw = norm2(w);
  v.grad_dual = nw > WeightVector::kMinBaseNorm
                    ? dual_weighted_norm(pg.g, WeightVector(w))
                    : 0.0;
  v.regime = nw <= 2.0 / params.R ? Regime::kNearOrigin : Regime::kFar;
  const double regime_norm = v.regime == Regime::kNearOrigin ? v.grad_l2 : v.grad_dual;
  v.is_approx_stationary = regime_norm <= v.threshold;
  v.implied_loss_bound = eps * std::pow(params.kappa, -params.p);
  return v;
}

AlignmentReport alignment_check_sigmoidal(const PopulationInstance& inst, const LossSpec& spec,
                                          const LandscapeParams& params, const Vec& w,
                                          const Vec& w_star, double eps) {
  require(eps > 0.0, "alignment_check_sigmoidal: eps > 0");
  AlignmentReport rep;
  rep.threshold = params.c_prime;

  const double nw = norm2(w);
  const double sqeps = std::sqrt(eps);
  const Vec dir = w - w_star;
  const double dist_l2 = norm2(dir);
  const double shell_hi = params.c_prime * params.kappa / eps;

  if (nw <= 2.0 / params.R) {
    rep.case_id = 1;
    const double floor = sqeps / (params.c_prime * std::pow(params.kappa, 5.0));
    if (dist_l2 < floor) {
      rep.note = "distance below the near-origin floor; claim does not apply";
      return rep;
    }
    rep.preconditions_met = true;
    const PopGradient pg = population_gradient(inst, spec, params, w, sqeps / 100.0);
    rep.inner = dot(pg.g, dir);
    rep.norm_term = sqeps * dist_l2;
    rep.ratio = rep.inner / rep.norm_term;
    rep.pass = rep.ratio >= params.c_prime;
    return rep;
  }

  if (nw >= shell_hi / 2.0) {
    rep.case_id = 3;
    rep.preconditions_met = true;
    const PopGradient pg = population_gradient(inst, spec, params, w, sqeps / 100.0);
    rep.inner = dot(pg.g, w);
    rep.norm_term = sqeps * weighted_norm(w, WeightVector(w));
    rep.ratio = rep.inner / rep.norm_term;
    rep.pass = rep.inner > 0.0;  // radial pull: sign test
    rep.note = "far regime: regularizer must pull inward";
    return rep;
  }

  rep.case_id = 2;
  const WeightVector base(w);
  const double dist_w = weighted_norm(dir, base);
  const double floor = sqeps / (params.c_prime * std::pow(params.kappa, 5.0));
  if (dist_w < floor && nw < 2.0 * norm2(w_star)) {
    rep.note = "weighted distance below the shell floor; claim does not apply";
    return rep;
  }
  rep.preconditions_met = true;
  const PopGradient pg = population_gradient(inst, spec, params, w, sqeps / 100.0);
  rep.inner = dot(pg.g, dir);
  rep.norm_term = sqeps * dist_w;
  rep.ratio = rep.inner / rep.norm_term;
  rep.pass = rep.ratio >= params.c_prime;
  return rep;
}

AlignmentReport alignment_check_unbounded(const PopulationInstance& inst, const LossSpec& spec,
                                          const LandscapeParams& params,
                                          const UnboundedAlignmentParams& up, const Vec& w,
                                          const Vec& w_star, double eps) {
  require(eps > 0.0, "alignment_check_unbounded: eps > 0");
  AlignmentReport rep;
  rep.threshold = up.threshold;

  if (dot(w, w_star) < 0.0) {
    rep.note = "w in the opposite half-space; claim does not apply";
    return rep;
  }
  const Vec dir = w - w_star;
  const double dist = norm2(dir);
  const double R4 = std::pow(up.R, 4.0);
  const double scale = up.alpha * up.alpha * up.L * R4;
  const double floor = up.distance_floor_factor * up.lambda * std::sqrt(eps) / scale;
  if (dist < floor) {
    rep.note = "distance below the eligibility floor; claim does not apply";
    return rep;
  }

  rep.case_id = 1;
  rep.preconditions_met = true;
  const PopGradient pg =
      population_gradient(inst, spec, params, w, 0.01 * scale * dist * dist);
  rep.inner = dot(pg.g, dir);
  rep.norm_term = scale * dist * dist;
  rep.ratio = rep.inner / rep.norm_term;
  rep.pass = rep.ratio >= up.threshold;
  return rep;
}

RadiusScanResult radius_scan(const PopulationInstance& inst, const LossSpec& spec,
                             const LandscapeParams& params, const Vec& direction, double eps,
                             double t_max, double K, int points_per_decade) {
  require(eps > 0.0 && t_max > 0.0, "radius_scan: eps, t_max > 0");
  const Vec dir = unit(direction);
  RadiusScanResult res;
  res.target = (1.0 + K * params.xi / (params.mu * params.L)) * eps;

  const double ratio = std::pow(10.0, 1.0 / points_per_decade);
  std::vector<double> ts = {0.0};
  for (double t = std::min(0.01, t_max); t <= t_max * (1.0 + 1e-12); t *= ratio)
    ts.push_back(t);
  for (double t : ts) {
    const double f = population_loss(inst, spec, params, t * dir);
    res.curve.push_back({t, f});
    if (!res.qualifying_t && f <= res.target) res.qualifying_t = t;
  }
  return res;
}

SurfaceGrid loss_surface_grid(const PopulationInstance& inst, const LossSpec& spec,
                              const LandscapeParams& params, double lo, double hi,
                              int resolution) {
  require(inst.marginal.dim == 2, "loss_surface_grid: d = 2 only");
  require(resolution >= 2 && hi > lo, "loss_surface_grid: bad box");
  SurfaceGrid grid;
  grid.lo = lo;
  grid.hi = hi;
  grid.resolution = resolution;
  const std::size_t n = static_cast<std::size_t>(resolution) * resolution;
  grid.w1.resize(n);
  grid.w2.resize(n);
  grid.F.resize(n);
  grid.gradients.assign(n, Vec(2, 0.0));

  const double step = (hi - lo) / (resolution - 1);
  parallel_for(n, [&](std::size_t cell) {
    const int i = static_cast<int>(cell) / resolution;  // row: w2 index
    const int j = static_cast<int>(cell) % resolution;
    const Vec w = {lo + j * step, lo + i * step};
    grid.w1[cell] = w[0];
    grid.w2[cell] = w[1];
    grid.F[cell] = population_loss(inst, spec, params, w);
    grid.gradients[cell] = population_gradient(inst, spec, params, w, 1e-4).g;
  });
  return grid;
}

std::vector<std::size_t> stationary_cells(const SurfaceGrid& grid) {
  std::vector<std::size_t> out;
  const int res = grid.resolution;
  const double step = (grid.hi - grid.lo) / (res - 1);
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i) * res + j; };

  for (int i = 0; i + 1 < res; ++i) {
    for (int j = 0; j + 1 < res; ++j) {
      // Discrete sign change of both gradient components over the cell corners.
      double min1 = 1e300, max1 = -1e300, min2 = 1e300, max2 = -1e300;
      for (int di = 0; di <= 1; ++di) {
        for (int dj = 0; dj <= 1; ++dj) {
          const Vec& g = grid.gradients[at(i + di, j + dj)];
          min1 = std::min(min1, g[0]);
          max1 = std::max(max1, g[0]);
          min2 = std::min(min2, g[1]);
          max2 = std::max(max2, g[1]);
        }
      }
      if (min1 > 0.0 || max1 < 0.0 || min2 > 0.0 || max2 < 0.0) continue;

      // Local refinement: 10 descent steps from the cell center must stay in
      // a small multiple of the cell.
      Vec w = {grid.lo + (j + 0.5) * step, grid.lo + (i + 0.5) * step};
      const Vec w0 = w;
      bool stays = true;
      for (int it = 0; it < 10 && stays; ++it) {
        // bilinear interpolation of the corner gradients
        const double fx = (w[0] - (grid.lo + j * step)) / step;
        const double fy = (w[1] - (grid.lo + i * step)) / step;
        Vec g(2, 0.0);
        for (int k = 0; k < 2; ++k) {
          const double g00 = grid.gradients[at(i, j)][k];
          const double g01 = grid.gradients[at(i, j + 1)][k];
          const double g10 = grid.gradients[at(i + 1, j)][k];
          const double g11 = grid.gradients[at(i + 1, j + 1)][k];
          g[k] = (1 - fy) * ((1 - fx) * g00 + fx * g01) + fy * ((1 - fx) * g10 + fx * g11);
        }
        axpy(-0.25 * step / std::max(1e-12, norm2(g)), g, w);
        stays = std::fabs(w[0] - w0[0]) <= 1.5 * step && std::fabs(w[1] - w0[1]) <= 1.5 * step;
      }
      if (stays) out.push_back(at(i, j));
    }
  }
  return out;
}

std::vector<double> hessian_probe(const PopulationInstance& inst, const LossSpec& spec,
                                  const LandscapeParams& params, const Vec& w, double step) {
  const std::size_t d = w.size();
  require(d <= 8, "hessian_probe: d <= 8");
  require(step > 0.0, "hessian_probe: step > 0");
  if (params.oracle == PopOracle::kMonteCarlo) {
    // MC noise floor: loss noise ~ budget^{-1/2} must stay below step^2.
    const double noise = 1.0 / std::sqrt(static_cast<double>(params.mc_budget));
    if (noise > 0.1 * step * step)
      throw std::runtime_error("hessian_probe: step too small for the MC noise floor");
  }
  auto f = [&](const Vec& x) { return population_loss(inst, spec, params, x); };

  std::vector<double> H(d * d, 0.0);
  const double f0 = f(w);
  Vec p = w;
  for (std::size_t i = 0; i < d; ++i) {
    const double wi = w[i];
    p[i] = wi + step;
    const double up = f(p);
    p[i] = wi - step;
    const double dn = f(p);
    p[i] = wi;
    H[i * d + i] = (up - 2.0 * f0 + dn) / (step * step);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double wi = w[i], wj = w[j];
      p[i] = wi + step;
      p[j] = wj + step;
      const double pp = f(p);
      p[j] = wj - step;
      const double pm = f(p);
      p[i] = wi - step;
      const double mm = f(p);
      p[j] = wj + step;
      const double mp = f(p);
      p[i] = wi;
      p[j] = wj;
      const double v = (pp - pm - mp + mm) / (4.0 * step * step);
      // symmetry enforced by assignment to both slots
      H[i * d + j] = v;
      H[j * d + i] = v;
    }
  }
  return H;
}

double min_eigenvalue_symmetric(std::vector<double> A, std::size_t d) {
  // Cyclic Jacobi; plenty for d <= 8.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off += A[i * d + j] * A[i * d + j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = A[p * d + q];
        if (std::fabs(apq) < 1e-18) continue;
        const double app = A[p * d + p], aqq = A[q * d + q];
        const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = A[k * d + p], akq = A[k * d + q];
          A[k * d + p] = c * akp - s * akq;
          A[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = A[p * d + k], aqk = A[q * d + k];
          A[p * d + k] = c * apk - s * aqk;
          A[q * d + k] = s * apk + c * aqk;
        }
      }
    }
  }
  double mn = A[0];
  for (std::size_t i = 1; i < d; ++i) mn = std::min(mn, A[i * d + i]);
  return mn;
}

}  // namespace neuronland
