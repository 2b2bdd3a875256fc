#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "neuronland/instances.hpp"
#include "neuronland/io.hpp"
#include "neuronland/rng.hpp"

using namespace neuronland;

namespace {
const MarginalSpec kGauss2 = default_marginal(Family::kStandardGaussian, 2);
}

TEST_CASE("realizable labels follow the activation exactly") {
  const auto ramp_act = builtin_sigmoidal("ramp").act;
  const auto zero = make_realizable(kGauss2, ramp_act, {0.0, 0.0}, 500, 1);
  for (double y : zero.y) CHECK(y == 0.0);
  CHECK(zero.meta.nominal_eps == 0.0);

  const auto relu = builtin_unbounded("relu").act;
  const auto ds = make_realizable(kGauss2, relu, {1.0, 0.0}, 500, 2);
  for (std::size_t i = 0; i < ds.n; ++i) {
    const double t = ds.X[i * 2];
    CHECK(ds.y[i] == (t > 0.0 ? t : 0.0));
  }

  const auto logi = builtin_sigmoidal("logistic").act;
  const auto dl = make_realizable(kGauss2, logi, {0.0, 0.0}, 10, 3);
  for (double y : dl.y) CHECK(y == 0.5);
}

TEST_CASE("corruption budget contract for every strategy and activation") {
  std::vector<Activation> acts;
  for (const char* n : {"logistic", "tanh", "ramp", "erf"}) acts.push_back(builtin_sigmoidal(n).act);
  acts.push_back(builtin_unbounded("relu").act);
  acts.push_back(builtin_unbounded("softplus").act);

  for (const auto& act : acts) {
    const auto ds = make_realizable(kGauss2, act, {1.5, -0.5}, 20000, 5);
    for (double eps : {0.01, 0.1, 0.25}) {
      for (auto strat : {CorruptStrategy::kFlipSlab, CorruptStrategy::kShiftWorst,
                         CorruptStrategy::kRandomSign}) {
        const auto out = corrupt_l2_budget(ds, act, eps, strat, 77);
        INFO(act.name << " " << strategy_name(strat) << " eps=" << eps);
        CHECK(out.achieved_eps <= eps * (1.0 + 1e-9));
        if (out.budget_met) CHECK(out.achieved_eps >= 0.9 * eps);
        // bookkeeping identity
        CHECK(corruption_level(out.data, *ds.meta.w_star, act) ==
              doctest::Approx(out.achieved_eps).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("flip_slab exhausts large budgets only partially") {
  const auto ramp_act = builtin_sigmoidal("ramp").act;
  const auto ds = make_realizable(kGauss2, ramp_act, {1.0, 0.0}, 2000, 6);
  // max possible flip corruption is 2 E[ramp^2] < 2
  const auto out = corrupt_l2_budget(ds, ramp_act, 5.0, CorruptStrategy::kFlipSlab, 6);
  CHECK_FALSE(out.budget_met);
  CHECK(out.achieved_eps < 5.0);
  CHECK(out.achieved_eps > 0.5);
}

TEST_CASE("corruption rejects a zero budget and non-realizable input") {
  const auto act = builtin_sigmoidal("ramp").act;
  const auto ds = make_realizable(kGauss2, act, {1.0, 0.0}, 100, 7);
  CHECK_THROWS_AS(corrupt_l2_budget(ds, act, 0.0, CorruptStrategy::kRandomSign, 1),
                  std::invalid_argument);
  auto corrupted = corrupt_l2_budget(ds, act, 0.1, CorruptStrategy::kRandomSign, 1).data;
  CHECK_THROWS_AS(corrupt_l2_budget(corrupted, act, 0.1, CorruptStrategy::kRandomSign, 1),
                  std::invalid_argument);
}

TEST_CASE("constant label shift measures c^2/2") {
  const auto act = builtin_sigmoidal("logistic").act;
  auto ds = make_realizable(kGauss2, act, {0.7, 0.3}, 5000, 8);
  const double c = 0.25;
  for (auto& y : ds.y) y += c;
  CHECK(corruption_level(ds, *ds.meta.w_star, act) == doctest::Approx(c * c / 2.0).epsilon(1e-12));
}

TEST_CASE("hat ramp piecewise values") {
  CHECK(hat_ramp(1.5) == -1.0);
  CHECK(hat_ramp(-1.5) == 1.0);
  CHECK(hat_ramp(0.5) == -0.5);
  CHECK(hat_ramp(2.5) == 1.0);
  CHECK(hat_ramp(-2.5) == -1.0);
  CHECK(hat_ramp(0.0) == 0.0);
}

TEST_CASE("spurious-minimum instance: losses and gradient at the planted points") {
  const double eps = 0.1;
  const std::size_t n = 1000000;
  const auto ds = bad_local_min_instance(2, eps, n, 99);
  CHECK(ds.meta.aux.at("v")[0] == doctest::Approx(10.0));
  CHECK(ds.meta.aux.at("u")[0] == doctest::Approx(-10.0));

  const auto ramp_act = builtin_sigmoidal("ramp").act;
  const Vec v = ds.meta.aux.at("v");
  const Vec u = ds.meta.aux.at("u");
  const double Fv = corruption_level(ds, v, ramp_act);
  const double Fu = corruption_level(ds, u, ramp_act);
  CHECK(Fv <= 10.0 * eps);
  CHECK(Fu >= 0.45);

  // MC consistency with a vanishing population gradient at u: per-coordinate
  // empirical std of the gradient summands bounds the sampling noise.
  Vec gsum(2, 0.0), gsq(2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = ds.dot_row(i, u);
    const double coeff = (ramp(t) - ds.y[i]) * (t >= -1.0 && t < 1.0 ? 1.0 : 0.0);
    for (int j = 0; j < 2; ++j) {
      const double g = coeff * ds.X[i * 2 + j];
      gsum[j] += g;
      gsq[j] += g * g;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double mean = gsum[j] / n;
    const double sd = std::sqrt(std::max(0.0, gsq[j] / n - mean * mean));
    CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(n)) + 1e-15);
  }
}

TEST_CASE("dataset round trip through csv + json sidecar is bit exact") {
  const auto act = builtin_sigmoidal("logistic").act;
  auto ds = make_realizable(kGauss2, act, {0.123456789012345, -1.9876543210987654}, 257, 12345);
  ds = corrupt_l2_budget(ds, act, 0.05, CorruptStrategy::kRandomSign, 4).data;

  const auto dir = std::filesystem::temp_directory_path() / "neuronland_test_io";
  std::filesystem::create_directories(dir);
  write_dataset_csv(ds, dir / "ds.csv");
  write_dataset_meta(ds, dir / "ds.json");
  const auto back = read_dataset(dir / "ds.csv", dir / "ds.json");

  REQUIRE(back.n == ds.n);
  REQUIRE(back.d == ds.d);
  CHECK(back.X == ds.X);
  CHECK(back.y == ds.y);
  CHECK(back.meta.w_star == ds.meta.w_star);
  CHECK(back.meta.generator == ds.meta.generator);
  CHECK(*back.meta.nominal_eps == *ds.meta.nominal_eps);

  // writing again produces identical bytes
  write_dataset_csv(back, dir / "ds2.csv");
  std::ifstream a(dir / "ds.csv", std::ios::binary), b(dir / "ds2.csv", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  std::filesystem::remove_all(dir);
}

TEST_CASE("population instances carry their feature lines") {
  const auto bad = bad_local_min_population(2, 0.1);
  CHECK(bad.features.size() == 4);
  const auto flip =
      flip_slab_population(kGauss2, builtin_sigmoidal("ramp").act, {1.0, 0.0}, 0.05);
  CHECK(flip.features.size() >= 2);
  const double x0[2] = {0.0, 0.4};
  const double xfar[2] = {3.0, 0.0};
  // labels flipped near the separator, clean far away
  CHECK(flip.label(std::span<const double>(x0, 2), 0) == doctest::Approx(0.0));
  CHECK(flip.label(std::span<const double>(xfar, 2), 0) == doctest::Approx(1.0));
}
