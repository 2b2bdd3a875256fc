#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "neuronland/loss.hpp"
#include "neuronland/oracle.hpp"
#include "neuronland/rng.hpp"

using namespace neuronland;

namespace {
const MarginalSpec kGauss2 = default_marginal(Family::kStandardGaussian, 2);

Vec random_w(std::size_t d, std::uint64_t seed, std::uint64_t row, double scale) {
  Vec w(d);
  for (std::size_t j = 0; j < d; ++j) w[j] = scale * normal_icdf(uniform01(seed, row, j));
  return w;
}
}  // namespace

TEST_CASE("label truncation") {
  CHECK(truncate_labels({7.0, -7.0, 3.0}, 5.0) == Vec{5.0, -5.0, 3.0});
  const Vec small = {0.1, -0.2, 0.0};
  CHECK(truncate_labels(small, 5.0) == small);
  CHECK(truncate_labels({0.0}, 1.0) == Vec{0.0});
  CHECK_THROWS_AS(truncate_labels({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("empirical loss basics") {
  const auto ramp_act = builtin_sigmoidal("ramp").act;
  const auto ds = make_realizable(kGauss2, ramp_act, {1.0, -0.4}, 4000, 1);
  LossSpec spec{ramp_act, 0.0, std::nullopt};
  CHECK(empirical_loss(ds, spec, *ds.meta.w_star) == 0.0);

  // at the origin with act(0) = 0 the loss collapses to the label energy
  double energy = 0.0;
  for (double y : ds.y) energy += y * y;
  energy /= 2.0 * ds.n;
  CHECK(empirical_loss(ds, spec, {0.0, 0.0}) == doctest::Approx(energy).epsilon(1e-14));

  // regularizer additivity
  const Vec w = {0.3, 0.7};
  LossSpec reg{ramp_act, 0.25, std::nullopt};
  CHECK(empirical_loss(ds, reg, w) ==
        doctest::Approx(empirical_loss(ds, spec, w) + 0.125 * dot(w, w)).epsilon(1e-14));
}

TEST_CASE("analytic gradient matches finite differences on 100 probes") {
  std::vector<Activation> acts = {builtin_sigmoidal("logistic").act,
                                  builtin_sigmoidal("tanh").act,
                                  builtin_sigmoidal("ramp").act,
                                  builtin_unbounded("relu").act,
                                  builtin_unbounded("softplus").act};
  int probe = 0;
  for (int rep = 0; probe < 100; ++rep) {
    const auto& act = acts[rep % acts.size()];
    const std::size_t d = 2 + (rep % 3);
    const MarginalSpec marg = default_marginal(Family::kStandardGaussian, static_cast<int>(d));
    auto ds = make_realizable(marg, act, random_w(d, 100 + rep, 0, 1.0), 2000, 200 + rep);
    ds = corrupt_l2_budget(ds, act, 0.02, CorruptStrategy::kRandomSign, rep).data;
    const double rho = (rep % 2) ? 0.1 : 0.0;
    LossSpec spec{act, rho, (rep % 3) ? std::optional<double>(1.5) : std::nullopt};
    const Vec w = random_w(d, 300 + rep, 1, 1.5);
    ++probe;

    const Vec g = empirical_gradient(ds, spec, w);
    const double step = 1e-6 * (1.0 + norm2(w));
    const Vec fd = fd_gradient([&](const Vec& p) { return empirical_loss(ds, spec, p); }, w, step);
    const double scale = std::max(norm2(g), norm2(fd));
    INFO(act.name << " d=" << d << " rho=" << rho);
    CHECK(norm2(g - fd) <= 1e-6 * std::max(1.0, scale));
  }

  // rho contribution is exactly linear
  const auto act = builtin_sigmoidal("logistic").act;
  const auto ds = make_realizable(kGauss2, act, {1.0, 0.0}, 1000, 9);
  const Vec w = {0.4, -0.2};
  const Vec g0 = empirical_gradient(ds, LossSpec{act, 0.0, std::nullopt}, w);
  const Vec g1 = empirical_gradient(ds, LossSpec{act, 0.3, std::nullopt}, w);
  for (std::size_t j = 0; j < w.size(); ++j)
    CHECK(g1[j] - g0[j] == doctest::Approx(0.3 * w[j]).epsilon(1e-15));
}

TEST_CASE("realizable gradient vanishes at the generator") {
  const auto act = builtin_sigmoidal("tanh").act;
  const auto ds = make_realizable(kGauss2, act, {0.8, 0.1}, 3000, 10);
  const Vec g = empirical_gradient(ds, LossSpec{act, 0.0, std::nullopt}, *ds.meta.w_star);
  CHECK(norm2(g) <= 1e-14);
}

TEST_CASE("monte-carlo population loss") {
  const auto act = builtin_sigmoidal("logistic").act;
  const auto inst = realizable_population(kGauss2, act, {1.0, -0.5});
  LossSpec spec{act, 0.0, std::nullopt};

  // self-consistent labels: estimate compatible with 0
  const auto self = population_loss_mc(inst, spec, {1.0, -0.5}, 100000, 3);
  CHECK(self.value <= 3.0 * std::max(self.std_err, 1e-15));

  // spurious minimum has high loss
  const auto bad = bad_local_min_population(2, 0.1);
  LossSpec ramp_spec{builtin_sigmoidal("ramp").act, 0.0, std::nullopt};
  const auto at_u = population_loss_mc(bad, ramp_spec, {-10.0, 0.0}, 1000000, 4);
  CHECK(at_u.value >= 0.45);

  // CLT scaling of the standard error
  const auto coarse = population_loss_mc(bad, ramp_spec, {3.0, 1.0}, 250000, 5);
  const auto fine = population_loss_mc(bad, ramp_spec, {3.0, 1.0}, 500000, 5);
  const double shrink = fine.std_err / coarse.std_err;
  CHECK(shrink == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("quadrature population loss and cross-oracle agreement") {
  const auto ramp_s = builtin_sigmoidal("ramp");
  LossSpec ramp_spec{ramp_s.act, 0.0, std::nullopt};

  // labels identically zero: saturated clamp squares to 1, halved by convention
  PopulationInstance zeros;
  zeros.marginal = kGauss2;
  zeros.label = [](std::span<const double>, std::uint64_t) { return 0.0; };
  zeros.name = "zeros";
  // saturation limit is approached at rate ~ (2/3) pdf(0) / t
  const double sat3 = population_loss_quadrature(zeros, ramp_spec, {1000.0, 0.0}, 1e-8);
  CHECK(std::fabs(sat3 - 0.5) <= 1e-3);
  const double sat4 = population_loss_quadrature(zeros, ramp_spec, {10000.0, 0.0}, 1e-8);
  CHECK(std::fabs(sat4 - 0.5) <= 1e-4);
  CHECK(std::fabs(sat4 - 0.5) < std::fabs(sat3 - 0.5));

  // d > 2 rejected
  PopulationInstance z3 = zeros;
  z3.marginal = default_marginal(Family::kStandardGaussian, 3);
  CHECK_THROWS_AS(population_loss_quadrature(z3, ramp_spec, {1.0, 0.0, 0.0}, 1e-8),
                  std::invalid_argument);

  // quadrature vs MC on random configs: agreement within 4 standard errors
  int agree = 0, total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto act = (rep % 2) ? builtin_sigmoidal("logistic").act : ramp_s.act;
    const Vec w_star = random_w(2, 40 + rep, 0, 1.0);
    const auto inst = (rep % 3) ? realizable_population(kGauss2, act, w_star)
                                : flip_slab_population(kGauss2, act, w_star, 0.05);
    LossSpec spec{act, 0.0, std::nullopt};
    const Vec w = random_w(2, 60 + rep, 1, 2.0);
    const double q = population_loss_quadrature(inst, spec, w, 1e-9);
    const auto mc = population_loss_mc(inst, spec, w, 400000, 70 + rep);
    ++total;
    if (std::fabs(q - mc.value) <= 4.0 * std::max(mc.std_err, 1e-12)) ++agree;
  }
  CHECK(agree >= total - 1);

  // E[hat_ramp(x1/eps)^2] two ways
  const auto bad = bad_local_min_population(2, 0.1);
  PopulationInstance bad1 = bad;
  const double q = 2.0 * population_loss_quadrature(
                             bad1, LossSpec{ramp_s.act, 0.0, std::nullopt}, {0.0, 0.0}, 1e-9);
  const auto mc =
      population_loss_mc(bad1, LossSpec{ramp_s.act, 0.0, std::nullopt}, {0.0, 0.0}, 10000000, 8);
  CHECK(q == doctest::Approx(2.0 * mc.value).epsilon(1e-3));
}

TEST_CASE("1-d quadrature path") {
  const auto act = builtin_sigmoidal("logistic").act;
  const MarginalSpec g1 = default_marginal(Family::kStandardGaussian, 1);
  const auto inst = realizable_population(g1, act, {2.0});
  LossSpec spec{act, 0.0, std::nullopt};
  const double q = population_loss_quadrature(inst, spec, {0.5}, 1e-10);
  const auto mc = population_loss_mc(inst, spec, {0.5}, 2000000, 11);
  CHECK(q == doctest::Approx(mc.value).epsilon(0.01));
  CHECK(std::fabs(q - mc.value) <= 4.0 * mc.std_err);
}

TEST_CASE("parameter-vs-loss bound") {
  const auto logi = builtin_sigmoidal("logistic");
  const MarginalSpec g = kGauss2;

  CHECK(param_vs_loss_bound(logi, g.L, g.R, {1.0, 2.0}, {1.0, 2.0}) == 0.0);

  // near branch: xi^2 ||w - v||^2 with xi = 1
  const Vec w = {0.5, 0.0}, v = {0.4, 0.0};
  CHECK(param_vs_loss_bound(logi, g.L, g.R, w, v) == doctest::Approx(0.01).epsilon(1e-12));

  // random eligible pairs: the bound dominates the quadrature value
  int tested = 0;
  for (int rep = 0; tested < 200; ++rep) {
    Vec ww = random_w(2, 500 + rep, 0, 2.0);
    const double n = norm2(ww);
    if (n < 1e-6) continue;
    ww = ((2.5 + 3.0 * uniform01(501, rep, 0)) / n) * ww;  // ||w|| in (2.5, 5.5]
    Vec vv = ww + random_w(2, 502 + rep, 1, 0.5 * norm2(ww));
    if (norm2(vv) < 1e-6) continue;
    if (angle_between(ww, vv) >= M_PI / 4.0) continue;
    ++tested;
    const auto inst = realizable_population(g, logi.act, vv);
    const double val =
        2.0 * population_loss_quadrature(inst, LossSpec{logi.act, 0.0, std::nullopt}, ww, 1e-9);
    const double bound = param_vs_loss_bound(logi, g.L, g.R, ww, vv);
    INFO("rep=" << rep);
    CHECK(val <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("truncation keeps spiked corruption controlled") {
  const auto relu = builtin_unbounded("relu");
  for (double W : {1.0, 4.0}) {
    for (double eps : {1e-2, 1e-3}) {
      const Vec w_star = {W, 0.0};
      auto ds = make_realizable(kGauss2, relu.act, w_star, 200000, 17);
      // Spike labels above the threshold while the budget allows it; when a
      // single above-threshold spike already exceeds eps (large W, small eps)
      // no spikes fit, which is exactly why truncation is safe there.
      const double M = 3.0 * W * std::max(std::log(W / eps), 1.0);
      const double h = 1.5 * M;
      double used = 0.0;
      std::size_t spiked = 0;
      for (std::size_t i = 0; i < ds.n; i += 31) {
        const double dev = h - ds.y[i];
        const double cost = dev * dev / (2.0 * ds.n);
        if (used + cost > 0.95 * eps) break;
        ds.y[i] = h;
        used += cost;
        ++spiked;
      }
      const double pre = corruption_level(ds, w_star, relu.act);
      CHECK(pre <= eps);
      LabeledDataset tr = ds;
      tr.y = truncate_labels(ds.y, M);
      const double post = corruption_level(tr, w_star, relu.act);
      INFO("W=" << W << " eps=" << eps << " spiked=" << spiked);
      CHECK(post <= 10.0 * eps);
      CHECK(post <= pre + 1e-12);
      if (spiked > 0) CHECK(post < pre);  // truncation strictly helps here
    }
  }
}

TEST_CASE("loss is invariant under simultaneous zero-shift of activation and labels") {
  const auto soft = builtin_unbounded("softplus");
  auto ds = make_realizable(kGauss2, soft.act, {1.2, -0.3}, 5000, 23);
  const Vec w = {0.5, 0.5};
  const double before = empirical_loss(ds, LossSpec{soft.act, 0.1, std::nullopt}, w);

  const auto [shifted, offset] = normalize_at_zero(soft.act);
  LabeledDataset ds2 = ds;
  for (auto& y : ds2.y) y -= offset;
  const double after = empirical_loss(ds2, LossSpec{shifted, 0.1, std::nullopt}, w);
  CHECK(std::fabs(before - after) <= 1e-12);
}

TEST_CASE("overflow is reported with the offending example") {
  const auto relu = builtin_unbounded("relu").act;
  auto ds = make_realizable(kGauss2, relu, {1.0, 0.0}, 100, 29);
  ds.y[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(empirical_loss(ds, LossSpec{relu, 0.0, std::nullopt}, {1.0, 1.0}),
                       doctest::Contains("example 3"), std::runtime_error);
}
