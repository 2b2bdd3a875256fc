#include "neuronland/loss.hpp"

#include <cmath>

#include "neuronland/norms.hpp"
#include "neuronland/quadrature.hpp"
#include "neuronland/rng.hpp"

namespace neuronland {

namespace {

inline double truncate1(double y, const std::optional<double>& M) {
  if (!M) return y;
  const double m = *M;
  return y >= 0.0 ? std::min(y, m) : std::max(y, -m);
}

[[noreturn]] void overflow_at(std::size_t i) {
  throw std::runtime_error("loss: non-finite intermediate at example " + std::to_string(i));
}

}  // namespace

Vec truncate_labels(const Vec& y, double M) {
  require(M > 0.0, "truncate_labels: M must be > 0");
  Vec out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = y[i] >= 0.0 ? std::min(y[i], M) : std::max(y[i], -M);
  return out;
}

double empirical_loss(const LabeledDataset& ds, const LossSpec& spec, const Vec& w) {
  require(w.size() == ds.d, "empirical_loss: dimension mismatch");
  const double s = parallel_sum(ds.n, [&](std::size_t i) {
    const double r = spec.act.eval(ds.dot_row(i, w)) - truncate1(ds.y[i], spec.trunc_M);
    if (!std::isfinite(r)) overflow_at(i);
    return r * r;
  });
  return s / (2.0 * static_cast<double>(ds.n)) + 0.5 * spec.rho * dot(w, w);
}

Vec empirical_gradient(const LabeledDataset& ds, const LossSpec& spec, const Vec& w) {
  require(w.size() == ds.d, "empirical_gradient: dimension mismatch");
  Vec g(ds.d, 0.0);
  parallel_sum_vec(
      ds.n, ds.d,
      [&](std::size_t i, double* acc) {
        const double t = ds.dot_row(i, w);
        const double coeff =
            (spec.act.eval(t) - truncate1(ds.y[i], spec.trunc_M)) * spec.act.deriv(t);
        if (!std::isfinite(coeff)) overflow_at(i);
        const double* x = ds.row(i);
        for (std::size_t j = 0; j < ds.d; ++j) acc[j] += coeff * x[j];
      },
      g.data());
  const double inv_n = 1.0 / static_cast<double>(ds.n);
  for (std::size_t j = 0; j < ds.d; ++j) g[j] = g[j] * inv_n + spec.rho * w[j];
  return g;
}

McEstimate population_loss_mc(const PopulationInstance& inst, const LossSpec& spec,
                              const Vec& w, std::size_t n_mc, std::uint64_t seed) {
  require(n_mc >= 1000, "population_loss_mc: n_mc >= 1e3");
  const std::size_t d = static_cast<std::size_t>(inst.marginal.dim);
  require(d <= 64, "population_loss_mc: d <= 64");
  require(w.size() == d, "population_loss_mc: dimension mismatch");
  const Family fam = inst.marginal.family;

  // Per-example squared residual and its square, in one pass.
  Vec moments(2, 0.0);
  parallel_sum_vec(
      n_mc, 2,
      [&](std::size_t i, double* acc) {
        double x[64];
        for (std::size_t j = 0; j < d; ++j) x[j] = marginal_icdf1(fam, uniform01(seed, i, j));
        std::span<const double> xs(x, d);
        const double r = spec.act.eval(dot(xs, w)) - truncate1(inst.label(xs, i), spec.trunc_M);
        const double v = 0.5 * r * r;
        acc[0] += v;
        acc[1] += v * v;
      },
      moments.data());
  const double n = static_cast<double>(n_mc);
  const double mean = moments[0] / n;
  const double var = std::max(0.0, moments[1] / n - mean * mean);
  McEstimate est;
  est.value = mean + 0.5 * spec.rho * dot(w, w);
  est.std_err = std::sqrt(var / n);
  est.n = n_mc;
  return est;
}

McGradient population_gradient_mc(const PopulationInstance& inst, const LossSpec& spec,
                                  const Vec& w, std::size_t n_mc, std::uint64_t seed) {
  require(n_mc >= 1000, "population_gradient_mc: n_mc >= 1e3");
  const std::size_t d = static_cast<std::size_t>(inst.marginal.dim);
  require(d <= 64, "population_gradient_mc: d <= 64");
  require(w.size() == d, "population_gradient_mc: dimension mismatch");
  const Family fam = inst.marginal.family;

  Vec moments(2 * d, 0.0);  // per-coordinate sum and sum of squares
  parallel_sum_vec(
      n_mc, 2 * d,
      [&](std::size_t i, double* acc) {
        double x[64];
        for (std::size_t j = 0; j < d; ++j) x[j] = marginal_icdf1(fam, uniform01(seed, i, j));
        std::span<const double> xs(x, d);
        const double t = dot(xs, w);
        const double coeff =
            (spec.act.eval(t) - truncate1(inst.label(xs, i), spec.trunc_M)) * spec.act.deriv(t);
        for (std::size_t j = 0; j < d; ++j) {
          const double g = coeff * x[j];
          acc[j] += g;
          acc[d + j] += g * g;
        }
      },
      moments.data());
  const double n = static_cast<double>(n_mc);
  McGradient out;
  out.value.resize(d);
  out.std_err.resize(d);
  double se2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = moments[j] / n;
    const double var = std::max(0.0, moments[d + j] / n - mean * mean);
    out.value[j] = mean + spec.rho * w[j];
    out.std_err[j] = std::sqrt(var / n);
    se2 += var / n;
  }
  out.std_err_l2 = std::sqrt(se2);
  out.n = n_mc;
  return out;
}

namespace {

void check_quadrature_dim(const PopulationInstance& inst) {
  require(inst.marginal.dim >= 1 && inst.marginal.dim <= 2,
          "population quadrature supports d in {1, 2} only");
}

// Feature lines of the full integrand: the instance's label construction plus
// the activation's kinks along the current weight vector, plus the marginal's
// own density kinks (laplace at the axes).
std::vector<LineFeature> integrand_features(const PopulationInstance& inst,
                                            const LossSpec& spec, const Vec& w) {
  std::vector<LineFeature> lines = inst.features;
  if (norm2(w) > 0.0)
    for (double k : spec.act.kinks) lines.push_back({w, k});
  if (inst.marginal.family == Family::kIsotropicLaplace) {
    const std::size_t d = static_cast<std::size_t>(inst.marginal.dim);
    for (std::size_t j = 0; j < d; ++j) lines.push_back({basis_vector(d, j), 0.0});
  }
  return lines;
}

double integrate_population(const PopulationInstance& inst, const LossSpec& spec,
                            const Vec& w,
                            const std::function<double(std::span<const double>)>& f,
                            double abs_tol) {
  const Family fam = inst.marginal.family;
  const double h = marginal_support_halfwidth(fam);
  const auto lines = integrand_features(inst, spec, w);

  if (inst.marginal.dim == 1) {
    std::vector<double> breaks;
    for (const auto& ln : lines)
      if (std::fabs(ln.normal[0]) > 1e-12) breaks.push_back(ln.offset / ln.normal[0]);
    auto g = [&](double x) {
      const double xs[1] = {x};
      return f(std::span<const double>(xs, 1)) * marginal_pdf1(fam, x);
    };
    return integrate_1d_pieces(g, -h, h, breaks, abs_tol).value;
  }

  // Outer variable x: breakpoints where a feature line is vertical and where
  // two feature lines intersect (the inner breakpoint ordering changes there).
  std::vector<double> outer;
  for (const auto& ln : lines)
    if (std::fabs(ln.normal[1]) <= 1e-12 * std::fabs(ln.normal[0]))
      outer.push_back(ln.offset / ln.normal[0]);
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double det = lines[a].normal[0] * lines[b].normal[1] -
                         lines[a].normal[1] * lines[b].normal[0];
      const double scale = norm2(lines[a].normal) * norm2(lines[b].normal);
      if (std::fabs(det) > 1e-12 * scale)
        outer.push_back((lines[a].offset * lines[b].normal[1] -
                         lines[b].offset * lines[a].normal[1]) / det);
    }
  }

  auto inner_breaks = [&lines](double x) {
    std::vector<double> br;
    for (const auto& ln : lines)
      if (std::fabs(ln.normal[1]) > 1e-12 * std::max(1.0, std::fabs(ln.normal[0])))
        br.push_back((ln.offset - ln.normal[0] * x) / ln.normal[1]);
    return br;
  };

  auto g = [&](double x, double y) {
    const double xs[2] = {x, y};
    return f(std::span<const double>(xs, 2)) * marginal_pdf1(fam, x) * marginal_pdf1(fam, y);
  };
  return integrate_2d_nested(g, -h, h, -h, h, outer, inner_breaks, abs_tol).value;
}

}  // namespace

double population_loss_quadrature(const PopulationInstance& inst, const LossSpec& spec,
                                  const Vec& w, double abs_tol) {
  check_quadrature_dim(inst);
  require(w.size() == static_cast<std::size_t>(inst.marginal.dim),
          "population_loss_quadrature: dimension mismatch");
  auto f = [&](std::span<const double> x) {
    const double r = spec.act.eval(dot(x, w)) - truncate1(inst.label(x, 0), spec.trunc_M);
    return 0.5 * r * r;
  };
  return integrate_population(inst, spec, w, f, abs_tol) + 0.5 * spec.rho * dot(w, w);
}

Vec population_gradient_quadrature(const PopulationInstance& inst, const LossSpec& spec,
                                   const Vec& w, double abs_tol) {
  check_quadrature_dim(inst);
  const std::size_t d = static_cast<std::size_t>(inst.marginal.dim);
  require(w.size() == d, "population_gradient_quadrature: dimension mismatch");
  Vec g(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto f = [&](std::span<const double> x) {
      const double t = dot(x, w);
      return (spec.act.eval(t) - truncate1(inst.label(x, 0), spec.trunc_M)) *
             spec.act.deriv(t) * x[j];
    };
    g[j] = integrate_population(inst, spec, w, f, abs_tol) + spec.rho * w[j];
  }
  return g;
}

double param_vs_loss_bound(const SigmoidalActivation& act, double L, double R,
                           const Vec& w, const Vec& v) {
  require(w.size() == v.size(), "param_vs_loss_bound: dimension mismatch");
  const Vec diff = w - v;
  const double d2 = dot(diff, diff);
  if (d2 == 0.0) return 0.0;
  double bound = act.xi * act.xi * d2;

  const double nw = norm2(w), nv = norm2(v);
  if (nw > 2.0 / R && nv > 0.0 && angle_between(w, v) < M_PI / 4.0) {
    const double delta = std::max(1.0, nw / nv);
    const WeightVector base(w);
    const double wn = weighted_norm(diff, base);
    const double kGeomConst = 8.0;  // committed constant for the far-regime bound
    const double far = kGeomConst * act.xi * act.xi * delta * delta * delta * wn * wn /
                       (L * L * L * L * act.mu * act.mu * act.mu);
    bound = std::min(bound, far);
  }
  return bound;
}

}  // namespace neuronland
