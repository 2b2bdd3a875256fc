#pragma once

#include <cstdint>

#include "neuronland/common.hpp"
#include "neuronland/instances.hpp"
#include "neuronland/optimizer.hpp"

namespace neuronland {

// Binary classification with +-1 labels by descending the clamp surrogate and
// thresholding the learned direction. Ties at the boundary classify as +1.
struct HalfspaceResult {
  Vec w_hat;
  double ramp_loss = 0.0;          // held-out surrogate loss (1/2 convention)
  double misclassification = 0.0;  // held-out 0-1 error of sign(w_hat . x)
  double zero_one_bound = 0.0;     // 2 * ramp_loss, from the pointwise comparison
  GridSearchResult search;
};

inline double classify(const Vec& w, std::span<const double> x) {
  return dot(w, x) >= 0.0 ? 1.0 : -1.0;
}

// Labels must lie in {-1, +1}. The regularizer grid reuses rho_grid_search
// since the attainable surrogate loss is unknown.
HalfspaceResult learn_halfspace(const LabeledDataset& train, const LabeledDataset& heldout,
                                double L, double R, double eps, std::uint64_t seed,
                                const GridSearchOptions& opt = {});

}  // namespace neuronland
