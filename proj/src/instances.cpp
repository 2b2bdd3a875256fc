#include "neuronland/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "neuronland/rng.hpp"

namespace neuronland {

std::string strategy_name(CorruptStrategy s) {
  switch (s) {
    case CorruptStrategy::kFlipSlab: return "flip_slab";
    case CorruptStrategy::kShiftWorst: return "shift_worst";
    case CorruptStrategy::kRandomSign: return "random_sign";
  }
  return "?";
}

CorruptStrategy strategy_from_name(const std::string& name) {
  if (name == "flip_slab") return CorruptStrategy::kFlipSlab;
  if (name == "shift_worst") return CorruptStrategy::kShiftWorst;
  if (name == "random_sign") return CorruptStrategy::kRandomSign;
  throw std::invalid_argument("unknown corruption strategy '" + name + "'");
}

LabeledDataset make_realizable(const MarginalSpec& marginal, const Activation& act,
                               const Vec& w_star, std::size_t n, std::uint64_t seed) {
  require(w_star.size() == static_cast<std::size_t>(marginal.dim),
          "make_realizable: w_star dimension mismatch");
  for (double c : w_star) require(std::isfinite(c), "make_realizable: non-finite w_star");
  LabeledDataset ds;
  ds.n = n;
  ds.d = static_cast<std::size_t>(marginal.dim);
  ds.X = sample(marginal, n, seed);
  ds.y.resize(n);
  parallel_for(n, [&](std::size_t i) { ds.y[i] = act.eval(ds.dot_row(i, w_star)); });
  ds.meta.marginal = marginal;
  ds.meta.w_star = w_star;
  ds.meta.nominal_eps = 0.0;
  ds.meta.seed = seed;
  ds.meta.generator = "realizable";
  ds.meta.activation = act.name;
  return ds;
}

double corruption_level(const LabeledDataset& ds, const Vec& w_ref, const Activation& act) {
  require(w_ref.size() == ds.d, "corruption_level: dimension mismatch");
  const double s = parallel_sum(ds.n, [&](std::size_t i) {
    const double r = act.eval(ds.dot_row(i, w_ref)) - ds.y[i];
    return r * r;
  });
  return s / (2.0 * static_cast<double>(ds.n));
}

CorruptionOutcome corrupt_l2_budget(const LabeledDataset& ds, const Activation& act,
                                    double eps, CorruptStrategy strategy,
                                    std::uint64_t seed) {
  require(eps > 0.0, "corrupt_l2_budget: eps must be > 0");
  require(ds.meta.generator == "realizable" && ds.meta.w_star.has_value(),
          "corrupt_l2_budget: needs a realizable dataset with its w_star");
  const Vec& w_star = *ds.meta.w_star;
  const double n = static_cast<double>(ds.n);

  CorruptionOutcome out;
  out.data = ds;
  LabeledDataset& cd = out.data;

  switch (strategy) {
    case CorruptStrategy::kFlipSlab: {
      // Reflect y through act(0) inside |w*.x| <= s. Widen the slab example
      // by example (sorted by |w*.x|) until the budget is exhausted, then
      // partially move one more label to land on eps exactly.
      const double sigma0 = act.eval(0.0);
      std::vector<double> margin(ds.n);
      parallel_for(ds.n, [&](std::size_t i) { margin[i] = ds.dot_row(i, w_star); });
      std::vector<std::size_t> order(ds.n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::fabs(margin[a]), fb = std::fabs(margin[b]);
        return fa != fb ? fa < fb : a < b;
      });
      double used = 0.0;
      std::size_t k = 0;
      for (; k < ds.n; ++k) {
        const std::size_t i = order[k];
        const double dev = 2.0 * (act.eval(margin[i]) - sigma0);  // flip distance
        const double cost = dev * dev / (2.0 * n);
        if (used + cost > eps) break;
        cd.y[i] = 2.0 * sigma0 - act.eval(margin[i]);
        used += cost;
      }
      if (k < ds.n) {
        // spend the remainder on a partial move of the next example
        const std::size_t i = order[k];
        const double dev = std::sqrt(2.0 * n * (eps - used));
        const double dir = act.eval(margin[i]) >= sigma0 ? -1.0 : 1.0;
        cd.y[i] = act.eval(margin[i]) + dir * dev;
        used = eps;
      }
      out.budget_met = std::fabs(used - eps) <= 1e-9 * std::max(1.0, eps);
      break;
    }
    case CorruptStrategy::kShiftWorst: {
      std::vector<double> leverage(ds.n);
      parallel_for(ds.n, [&](std::size_t i) {
        const double t = ds.dot_row(i, w_star);
        leverage[i] = std::fabs(act.deriv(t)) * norm2(std::span(ds.row(i), ds.d));
      });
      std::vector<std::size_t> order(ds.n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return leverage[a] != leverage[b] ? leverage[a] > leverage[b] : a < b;
      });
      const std::size_t k = std::max<std::size_t>(1, ds.n / 10);
      const double shift = std::sqrt(2.0 * n * eps / static_cast<double>(k));
      for (std::size_t r = 0; r < k; ++r) cd.y[order[r]] += shift;
      out.budget_met = true;
      break;
    }
    case CorruptStrategy::kRandomSign: {
      const double mag = std::sqrt(2.0 * eps);
      parallel_for(ds.n, [&](std::size_t i) {
        const double sgn = (counter_bits(seed, i, 0x5157) & 1) ? 1.0 : -1.0;
        cd.y[i] += sgn * mag;
      });
      out.budget_met = true;
      break;
    }
  }

  out.achieved_eps = corruption_level(cd, w_star, act);
  cd.meta.nominal_eps = out.achieved_eps;
  cd.meta.seed = seed;
  cd.meta.generator = strategy_name(strategy);
  return out;
}

LabeledDataset bad_local_min_instance(int d, double eps, std::size_t n, std::uint64_t seed) {
  require(d >= 1, "bad_local_min_instance: d >= 1");
  require(eps > 0.0 && eps <= 1.0, "bad_local_min_instance: eps in (0, 1]");
  const MarginalSpec marginal = default_marginal(Family::kStandardGaussian, d);
  LabeledDataset ds;
  ds.n = n;
  ds.d = static_cast<std::size_t>(d);
  ds.X = sample(marginal, n, seed);
  ds.y.resize(n);
  parallel_for(n, [&](std::size_t i) { ds.y[i] = hat_ramp(ds.X[i * ds.d] / eps); });
  ds.meta.marginal = marginal;
  ds.meta.nominal_eps = eps;
  ds.meta.seed = seed;
  ds.meta.generator = "bad_local_min";
  ds.meta.activation = "ramp";
  ds.meta.aux["v"] = basis_vector(ds.d, 0, 1.0 / eps);
  ds.meta.aux["u"] = basis_vector(ds.d, 0, -1.0 / eps);
  return ds;
}

PopulationInstance bad_local_min_population(int d, double eps) {
  require(eps > 0.0 && eps <= 1.0, "bad_local_min_population: eps in (0, 1]");
  PopulationInstance inst;
  inst.marginal = default_marginal(Family::kStandardGaussian, d);
  inst.label = [eps](std::span<const double> x, std::uint64_t) {
    return hat_ramp(x[0] / eps);
  };
  inst.name = "bad_local_min";
  const Vec e1 = basis_vector(d, 0);
  for (double k : {-2.0, -1.0, 1.0, 2.0}) inst.features.push_back({e1, k * eps});
  return inst;
}

PopulationInstance realizable_population(const MarginalSpec& marginal, const Activation& act,
                                         const Vec& w_star) {
  require(w_star.size() == static_cast<std::size_t>(marginal.dim),
          "realizable_population: w_star dimension mismatch");
  PopulationInstance inst;
  inst.marginal = marginal;
  inst.label = [act, w_star](std::span<const double> x, std::uint64_t) {
    return act.eval(dot(x, w_star));
  };
  inst.name = "realizable_" + act.name;
  if (norm2(w_star) > 0.0)
    for (double k : act.kinks) inst.features.push_back({w_star, k});
  return inst;
}

PopulationInstance flip_slab_population(const MarginalSpec& marginal, const Activation& act,
                                        const Vec& w_star, double eps) {
  require(eps > 0.0, "flip_slab_population: eps must be > 0");
  // Calibrate the slab half-width on a fixed sample so the population
  // corruption level is ~eps.
  const std::size_t n_cal = 200000;
  const auto X = sample(marginal, n_cal, 0xCA11B);
  const std::size_t d = static_cast<std::size_t>(marginal.dim);
  const double sigma0 = act.eval(0.0);
  std::vector<double> absmargin(n_cal);
  std::vector<double> cost(n_cal);
  for (std::size_t i = 0; i < n_cal; ++i) {
    const double t = dot(std::span(X.data() + i * d, d), w_star);
    absmargin[i] = std::fabs(t);
    const double dev = 2.0 * (act.eval(t) - sigma0);
    cost[i] = dev * dev / (2.0 * static_cast<double>(n_cal));
  }
  std::vector<std::size_t> order(n_cal);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return absmargin[a] < absmargin[b]; });
  double used = 0.0, slab = 0.0;
  for (std::size_t k = 0; k < n_cal; ++k) {
    const std::size_t i = order[k];
    if (used + cost[i] > eps) break;
    used += cost[i];
    slab = absmargin[i];
  }
  PopulationInstance inst;
  inst.marginal = marginal;
  inst.label = [act, w_star, sigma0, slab](std::span<const double> x, std::uint64_t) {
    const double t = dot(x, w_star);
    const double clean = act.eval(t);
    return std::fabs(t) <= slab ? 2.0 * sigma0 - clean : clean;
  };
  inst.name = "flip_slab_" + act.name;
  if (norm2(w_star) > 0.0) {
    inst.features.push_back({w_star, slab});
    inst.features.push_back({w_star, -slab});
    for (double k : act.kinks) inst.features.push_back({w_star, k});
  }
  return inst;
}

}  // namespace neuronland
