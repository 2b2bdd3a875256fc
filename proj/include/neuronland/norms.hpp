#pragma once

#include <utility>

#include "neuronland/common.hpp"

namespace neuronland {

// A candidate parameter vector with its cached Euclidean norm. Weighted-norm
// operations require a nonzero base; callers sitting at the origin must
// branch to the plain l2 norm instead.
class WeightVector {
 public:
  explicit WeightVector(Vec coords);

  const Vec& coords() const { return coords_; }
  double norm() const { return norm_; }
  std::size_t dim() const { return coords_.size(); }
  bool usable_as_base() const { return norm_ > kMinBaseNorm; }

  static constexpr double kMinBaseNorm = 1e-12;

 private:
  Vec coords_;
  double norm_;
};

struct ProjSplit {
  Vec parallel;  // component along the base
  Vec perp;      // remainder, orthogonal to the base
};

ProjSplit proj_split(const Vec& u, const WeightVector& w);

// ||proj_w u|| / ||w||^{3/2} + ||proj_{w-perp} u|| / ||w||^{1/2}
double weighted_norm(const Vec& u, const WeightVector& w);

// max(||proj_w v|| * ||w||^{3/2}, ||proj_{w-perp} v|| * ||w||^{1/2})
double dual_weighted_norm(const Vec& v, const WeightVector& w);

// (lo, hi) with lo * ||x||_2 <= ||x||_w <= hi * ||x||_2 for every x.
std::pair<double, double> norm_sandwich_bounds(const WeightVector& w);

// Upper bound on sup_x ||x||_u / ||x||_v for bases with norms in (0, Q].
double base_change_ratio_bound(const WeightVector& u, const WeightVector& v, double Q);

}  // namespace neuronland
