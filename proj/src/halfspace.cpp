#include "neuronland/halfspace.hpp"

#include <cmath>

namespace neuronland {

HalfspaceResult learn_halfspace(const LabeledDataset& train, const LabeledDataset& heldout,
                                double L, double R, double eps, std::uint64_t seed,
                                const GridSearchOptions& opt_in) {
  (void)L;
  (void)R;
  for (double v : train.y)
    require(v == 1.0 || v == -1.0, "learn_halfspace: labels must be in {-1, +1}");

  const SigmoidalActivation surrogate = builtin_sigmoidal("ramp");
  GridSearchOptions opt = opt_in;
  if (opt.grid_hi <= 0.0) opt.grid_hi = surrogate.xi / surrogate.mu;  // = 3 for the clamp
  opt.seed = opt.seed ? opt.seed : seed;

  HalfspaceResult res;
  res.search = rho_grid_search(train, heldout, surrogate, eps, opt);
  res.w_hat = res.search.best_w;

  LossSpec spec{surrogate.act, 0.0, std::nullopt};
  res.ramp_loss = empirical_loss(heldout, spec, res.w_hat);
  res.zero_one_bound = 2.0 * res.ramp_loss;

  const double wrong = parallel_sum(heldout.n, [&](std::size_t i) {
    const double pred = classify(res.w_hat, std::span<const double>(heldout.row(i), heldout.d));
    return pred != heldout.y[i] ? 1.0 : 0.0;
  });
  res.misclassification = wrong / static_cast<double>(heldout.n);
  return res;
}

}  // namespace neuronland
