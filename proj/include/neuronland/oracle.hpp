#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "neuronland/common.hpp"
#include "neuronland/norms.hpp"

namespace neuronland {

// Verification-only machinery. Nothing here shares numerical kernels with the
// main library: gradients come from finite differences of a black-box
// function, norms from direction enumeration. Linked by the test suites only.

struct OracleReport {
  std::string quantity;
  double primary_value = 0.0;
  double oracle_value = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;
  bool relative = true;
  bool pass = false;
};

OracleReport cross_oracle(const std::string& quantity, double primary, double oracle,
                          double tolerance, bool relative = true);

// Central finite differences, coordinate by coordinate.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& w, double step);

// Symmetrized finite-difference Hessian (row-major d x d).
std::vector<double> fd_hessian(const std::function<double(const Vec&)>& f, const Vec& w,
                               double step);

// Lower bound on the dual weighted norm by maximizing v . u over random unit
// vectors of the weighted norm, plus the two analytic extremal directions
// (pure-parallel and pure-orthogonal), which attain the true maximum.
double dual_norm_bruteforce(const Vec& v, const WeightVector& w, std::size_t n_dirs,
                            std::uint64_t seed = 1u);

}  // namespace neuronland
