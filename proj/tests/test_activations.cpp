#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "neuronland/activations.hpp"
#include "neuronland/rng.hpp"

using namespace neuronland;

TEST_CASE("ramp branches") {
  CHECK(ramp(0.5) == 0.5);
  CHECK(ramp(3.0) == 1.0);
  CHECK(ramp(-3.0) == -1.0);
  CHECK(ramp(1.0) == 1.0);
  CHECK(ramp(-1.0) == -1.0);
  CHECK_THROWS_AS(ramp(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(ramp(1.0 / 0.0), std::invalid_argument);
}

TEST_CASE("builtin sigmoidal parameters") {
  const auto logistic = builtin_sigmoidal("logistic");
  CHECK(logistic.tau == 0.19);
  CHECK(logistic.mu == 1.0);
  CHECK(logistic.xi == 1.0);

  const auto th = builtin_sigmoidal("tanh");
  CHECK(th.tau == 0.4);
  CHECK(th.mu == 1.0);
  CHECK(th.xi == 1.4);

  const auto rp = builtin_sigmoidal("ramp");
  CHECK(rp.tau == 1.0);
  CHECK(rp.mu == 1.0);
  CHECK(rp.xi == 3.0);

  CHECK_NOTHROW(builtin_sigmoidal("erf"));
  CHECK_THROWS_AS(builtin_sigmoidal("swish"), std::invalid_argument);
}

TEST_CASE("builtin unbounded parameters") {
  const auto relu = builtin_unbounded("relu");
  CHECK(relu.alpha == 1.0);
  CHECK(relu.lambda == 1.0);

  // two-piece derivative {0.5 on t<0, 1 on t>=0}: floor on [0,inf) is 1,
  // global Lipschitz constant is 1
  const auto leaky = builtin_unbounded("leaky_relu", 0.5);
  CHECK(leaky.alpha == 1.0);
  CHECK(leaky.lambda == 1.0);

  const auto soft = builtin_unbounded("softplus");
  CHECK(soft.alpha == 0.5);
  CHECK(soft.lambda == 1.0);

  CHECK_THROWS_AS(builtin_unbounded("leaky_relu", 0.0), std::invalid_argument);
  CHECK_THROWS_AS(builtin_unbounded("leaky_relu", 1.5), std::invalid_argument);
  CHECK_THROWS_AS(builtin_unbounded("elu", -1.0), std::invalid_argument);
  CHECK_THROWS_AS(builtin_unbounded("leaky_relu"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_unbounded("gelu"), std::invalid_argument);
}

TEST_CASE("certification passes at the shipped parameters") {
  for (const char* name : {"logistic", "tanh", "ramp", "erf"}) {
    const auto s = builtin_sigmoidal(name);
    const auto rep = certify_sigmoidal(s, 1e-3);
    INFO(name);
    CHECK(rep.pass);
  }
  for (const char* name : {"relu", "softplus"}) {
    const auto u = builtin_unbounded(name);
    CHECK(certify_unbounded(u, 1e-3).pass);
  }
  CHECK(certify_unbounded(builtin_unbounded("leaky_relu", 0.5), 1e-3).pass);
  CHECK(certify_unbounded(builtin_unbounded("elu", 1.0), 1e-3).pass);
}

TEST_CASE("certification catches an inflated derivative floor") {
  // grid oracle: min logistic' on [-1,1] is at t = +-1
  auto logistic = builtin_sigmoidal("logistic");
  double grid_min = 1e300;
  for (double t = -1.0; t <= 1.0; t += 1e-4) grid_min = std::min(grid_min, logistic.act.deriv(t));
  CHECK(grid_min == doctest::Approx(0.19661193).epsilon(1e-5));

  logistic.tau = 0.25;  // above the true minimum
  const auto rep = certify_sigmoidal(logistic, 1e-3);
  CHECK_FALSE(rep.pass);

  logistic.tau = 0.19661;  // just below
  CHECK(certify_sigmoidal(logistic, 1e-3).pass);
}

TEST_CASE("ramp certifies at (1,1,3): envelope 3 exp(-|t|) >= 1 on [-1,1]") {
  auto rp = builtin_sigmoidal("ramp");
  CHECK(3.0 * std::exp(-1.0) >= 1.0);
  CHECK(certify_sigmoidal(rp, 1e-3).pass);
  // the alternate certified triple also passes
  rp.tau = 1.0;
  rp.mu = 1.0;
  rp.xi = std::exp(1.0);
  CHECK(certify_sigmoidal(rp, 1e-3).pass);
}

TEST_CASE("normalize_at_zero") {
  const auto [logi, off_l] = normalize_at_zero(builtin_sigmoidal("logistic").act);
  CHECK(off_l == 0.5);
  CHECK(logi.eval(0.0) == 0.0);

  const auto [relu0, off_r] = normalize_at_zero(builtin_unbounded("relu").act);
  CHECK(off_r == 0.0);

  const auto [soft, off_s] = normalize_at_zero(builtin_unbounded("softplus").act);
  CHECK(off_s == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(soft.eval(0.0) == 0.0);
}

TEST_CASE("analytic derivatives match central differences away from kinks") {
  std::vector<Activation> acts;
  for (const char* n : {"logistic", "tanh", "ramp", "erf"}) acts.push_back(builtin_sigmoidal(n).act);
  for (const char* n : {"relu", "softplus"}) acts.push_back(builtin_unbounded(n).act);
  acts.push_back(builtin_unbounded("leaky_relu", 0.25).act);
  acts.push_back(builtin_unbounded("elu", 0.7).act);

  for (const auto& act : acts) {
    int checked = 0;
    for (int k = 0; checked < 1000 && k < 5000; ++k) {
      const double t = (uniform01(42, k, 0) - 0.5) * 40.0;
      bool near_kink = false;
      for (double kk : act.kinks) near_kink = near_kink || std::fabs(t - kk) < 1e-3;
      if (near_kink) continue;
      ++checked;
      const double h = 1e-6 * (1.0 + std::fabs(t));
      const double fd = (act.eval(t + h) - act.eval(t - h)) / (2.0 * h);
      const double an = act.deriv(t);
      const double scale = std::max({1e-12, std::fabs(fd), std::fabs(an)});
      // The FD quotient carries a cancellation error ~ eps_mach |f| / h, so a
      // relative comparison is only meaningful while that stays below 1e-6.
      const double fd_noise = 1e-16 * std::fabs(act.eval(t)) / h;
      INFO(act.name << " t=" << t);
      if (std::fabs(an) > 1e7 * fd_noise && std::fabs(an) > 1e-9)
        CHECK(std::fabs(fd - an) / scale <= 1e-6);
      else
        CHECK(std::fabs(fd - an) <= 1e-9 + 100.0 * fd_noise);
    }
    CHECK(checked == 1000);
  }
}

TEST_CASE("sigmoidal range spread stays below 2 xi / mu") {
  for (const char* name : {"logistic", "tanh", "ramp", "erf"}) {
    const auto s = builtin_sigmoidal(name);
    double lo = 1e300, hi = -1e300;
    for (double t = -1e6; t <= 1e6 + 1.0; t += 997.0) {
      const double v = s.act.eval(t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    INFO(name);
    CHECK(hi - lo <= 2.0 * s.xi / s.mu + 1e-12);
  }
}

TEST_CASE("right-derivative convention at kinks") {
  CHECK(builtin_sigmoidal("ramp").act.deriv(1.0) == 0.0);
  CHECK(builtin_sigmoidal("ramp").act.deriv(-1.0) == 1.0);
  CHECK(builtin_unbounded("relu").act.deriv(0.0) == 1.0);
}
