#include "neuronland/norms.hpp"

#include <cmath>

namespace neuronland {

WeightVector::WeightVector(Vec coords) : coords_(std::move(coords)) {
  require(!coords_.empty(), "WeightVector: dimension must be >= 1");
  for (double c : coords_) require(std::isfinite(c), "WeightVector: non-finite coordinate");
  norm_ = norm2(coords_);
}

namespace {
void check_base(const WeightVector& w) {
  require(w.usable_as_base(), "weighted norm: base vector is (near) zero");
}
}  // namespace

ProjSplit proj_split(const Vec& u, const WeightVector& w) {
  check_base(w);
  require(u.size() == w.dim(), "proj_split: dimension mismatch");
  const double scale = dot(u, w.coords()) / (w.norm() * w.norm());
  ProjSplit out;
  out.parallel = scale * w.coords();
  out.perp = u - out.parallel;
  return out;
}

double weighted_norm(const Vec& u, const WeightVector& w) {
  const ProjSplit s = proj_split(u, w);
  const double nw = w.norm();
  return norm2(s.parallel) / (nw * std::sqrt(nw)) + norm2(s.perp) / std::sqrt(nw);
}

double dual_weighted_norm(const Vec& v, const WeightVector& w) {
  const ProjSplit s = proj_split(v, w);
  const double nw = w.norm();
  return std::max(norm2(s.parallel) * nw * std::sqrt(nw), norm2(s.perp) * std::sqrt(nw));
}

std::pair<double, double> norm_sandwich_bounds(const WeightVector& w) {
  check_base(w);
  const double nw = w.norm();
  const double a = 1.0 / (nw * std::sqrt(nw));
  const double b = 1.0 / std::sqrt(nw);
  return {std::min(a, b), std::sqrt(2.0) * std::max(a, b)};
}

double base_change_ratio_bound(const WeightVector& u, const WeightVector& v, double Q) {
  check_base(u);
  check_base(v);
  require(Q >= 1.0, "base_change_ratio_bound: Q must be >= 1");
  require(u.norm() <= Q && v.norm() <= Q, "base_change_ratio_bound: base norm exceeds Q");
  require(u.dim() == v.dim(), "base_change_ratio_bound: dimension mismatch");

  const double theta = angle_between(u.coords(), v.coords());
  const double nv = v.norm(), nu = u.norm();
  const double inv_v32 = 1.0 / (nv * std::sqrt(nv));
  const double inv_v12 = 1.0 / std::sqrt(nv);
  const double inv_u32 = 1.0 / (nu * std::sqrt(nu));
  const double inv_u12 = 1.0 / std::sqrt(nu);
  const double delta = std::fabs(inv_v32 - inv_u32) + std::fabs(inv_v12 - inv_u12);
  return std::exp(std::pow(Q, 1.5) * (4.0 * theta * (inv_v32 + inv_v12) + delta));
}

}  // namespace neuronland
