#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "neuronland/activations.hpp"
#include "neuronland/common.hpp"
#include "neuronland/distributions.hpp"

namespace neuronland {

struct DatasetMeta {
  MarginalSpec marginal;
  std::optional<Vec> w_star;
  std::optional<double> nominal_eps;
  std::uint64_t seed = 0;
  std::string generator;
  std::string activation;
  std::map<std::string, Vec> aux;  // named reference vectors (e.g. the planted minima)
};

struct LabeledDataset {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> X;  // row-major n x d
  Vec y;
  DatasetMeta meta;

  const double* row(std::size_t i) const { return X.data() + i * d; }
  double dot_row(std::size_t i, const Vec& w) const {
    double s = 0.0;
    const double* x = row(i);
    for (std::size_t j = 0; j < d; ++j) s += w[j] * x[j];
    return s;
  }
};

// Labels y_i = act(w_star . x_i) exactly.
LabeledDataset make_realizable(const MarginalSpec& marginal, const Activation& act,
                               const Vec& w_star, std::size_t n, std::uint64_t seed);

enum class CorruptStrategy { kFlipSlab, kShiftWorst, kRandomSign };
std::string strategy_name(CorruptStrategy s);
CorruptStrategy strategy_from_name(const std::string& name);

struct CorruptionOutcome {
  LabeledDataset data;
  double achieved_eps = 0.0;
  bool budget_met = false;  // false when the strategy cannot reach eps
};

// Moves labels of a realizable dataset so the empirical L2^2 loss at the
// generating w_star lands in (0, eps]:
//   flip_slab   - reflect labels through act(0) on a slab |w* . x| <= s,
//                 with s found by bisection on the budget;
//   shift_worst - add a common offset to the 10% of examples with the
//                 largest gradient leverage |act'(w*.x)| * ||x||;
//   random_sign - independent +-sqrt(2 eps) label perturbations.
CorruptionOutcome corrupt_l2_budget(const LabeledDataset& ds, const Activation& act,
                                    double eps, CorruptStrategy strategy,
                                    std::uint64_t seed);

// Gaussian features with the deterministic adversarial labels
// y = hat_ramp(x_1 / eps). Records the near-optimal direction e_1/eps ("v")
// and the spurious minimum -e_1/eps ("u") in meta.aux.
LabeledDataset bad_local_min_instance(int d, double eps, std::size_t n, std::uint64_t seed);

// (1/2n) sum (act(w_ref . x_i) - y_i)^2
double corruption_level(const LabeledDataset& ds, const Vec& w_ref, const Activation& act);

// Population version of a labeled instance: a marginal plus a label rule.
// The row index feeds per-example randomness (deterministic given the seed
// captured by the rule); rules used with quadrature must ignore it.
using LabelFn = std::function<double(std::span<const double> x, std::uint64_t row)>;

// Hyperplane normal . x = offset along which the label rule has a kink or
// jump; quadrature splits its panels there.
struct LineFeature {
  Vec normal;
  double offset = 0.0;
};

struct PopulationInstance {
  MarginalSpec marginal;
  LabelFn label;
  std::string name;
  std::vector<LineFeature> features;
};

PopulationInstance bad_local_min_population(int d, double eps);
PopulationInstance realizable_population(const MarginalSpec& marginal, const Activation& act,
                                         const Vec& w_star);

// Population analogue of flip_slab: reflect labels through act(0) on
// |w* . x| <= s, with the slab width calibrated on a fixed calibration sample
// so the population corruption level is ~eps.
PopulationInstance flip_slab_population(const MarginalSpec& marginal, const Activation& act,
                                        const Vec& w_star, double eps);

}  // namespace neuronland
