#pragma once

#include <cstdint>
#include <string>

#include "neuronland/activations.hpp"  // CertReport
#include "neuronland/common.hpp"

namespace neuronland {

enum class Family { kStandardGaussian, kIsotropicCube, kIsotropicLaplace };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Isotropic marginal with its certified density constants: every
// two-dimensional projection has density at least L on the sup-norm box of
// radius R and at most (1/L) exp(-L ||x||) everywhere.
struct MarginalSpec {
  Family family = Family::kStandardGaussian;
  int dim = 1;
  double L = 0.0;
  double R = 0.0;
};

// Shipped constants, verified by certify_well_behaved in the test suite.
MarginalSpec default_marginal(Family family, int dim);

// Row-major n x d sample matrix; entry (i, j) is a pure function of
// (seed, i, j), so generation is deterministic under any parallel schedule.
void sample_rows(const MarginalSpec& spec, std::size_t n, std::uint64_t seed, double* out);
std::vector<double> sample(const MarginalSpec& spec, std::size_t n, std::uint64_t seed);

// One-dimensional coordinate law of the family.
double marginal_pdf1(Family f, double t);
double marginal_cdf1(Family f, double t);
double marginal_icdf1(Family f, double u);
double marginal_support_halfwidth(Family f);  // quadrature truncation radius

// Orthonormal 2-frame in R^d.
struct Frame2 {
  Vec v1, v2;
};

// Density of the projection (v1 . x, v2 . x) at point (px, py). Closed forms:
// the gaussian for any frame, cube/laplace for any frame when d == 2 (in-plane
// rotation) and for axis-pair frames in higher dimension.
double projected_density(const MarginalSpec& spec, const Frame2& V, double px, double py);

// Grid check of the two density conditions over axis-pair frames plus 32
// seeded rotations (where the projected density is computable).
CertReport certify_well_behaved(const MarginalSpec& spec, double L, double R,
                                double grid_step);

// Kolmogorov-Smirnov distance of a 1-d sample against the family CDF.
double ks_statistic(Family f, Vec sample_sorted);

}  // namespace neuronland
