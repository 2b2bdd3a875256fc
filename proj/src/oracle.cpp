#include "neuronland/oracle.hpp"

#include <cmath>

#include "neuronland/rng.hpp"

namespace neuronland {

OracleReport cross_oracle(const std::string& quantity, double primary, double oracle,
                          double tolerance, bool relative) {
  OracleReport r;
  r.quantity = quantity;
  r.primary_value = primary;
  r.oracle_value = oracle;
  r.abs_diff = std::fabs(primary - oracle);
  const double scale = std::max(std::fabs(primary), std::fabs(oracle));
  r.rel_diff = scale > 0.0 ? r.abs_diff / scale : 0.0;
  r.tolerance = tolerance;
  r.relative = relative;
  r.pass = (relative ? r.rel_diff : r.abs_diff) <= tolerance;
  return r;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& w, double step) {
  require(step > 0.0, "fd_gradient: step must be > 0");
  Vec g(w.size());
  Vec p = w;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double w0 = w[j];
    p[j] = w0 + step;
    const double up = f(p);
    p[j] = w0 - step;
    const double dn = f(p);
    p[j] = w0;
    g[j] = (up - dn) / (2.0 * step);
  }
  return g;
}

std::vector<double> fd_hessian(const std::function<double(const Vec&)>& f, const Vec& w,
                               double step) {
  require(step > 0.0, "fd_hessian: step must be > 0");
  const std::size_t d = w.size();
  std::vector<double> H(d * d, 0.0);
  const double f0 = f(w);
  Vec p = w;
  // Diagonal: (f(w+h e) - 2 f(w) + f(w-h e)) / h^2.
  for (std::size_t i = 0; i < d; ++i) {
    const double wi = w[i];
    p[i] = wi + step;
    const double up = f(p);
    p[i] = wi - step;
    const double dn = f(p);
    p[i] = wi;
    H[i * d + i] = (up - 2.0 * f0 + dn) / (step * step);
  }
  // Off-diagonal via the four-point stencil, symmetrized by construction.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double wi = w[i], wj = w[j];
      p[i] = wi + step;
      p[j] = wj + step;
      const double pp = f(p);
      p[j] = wj - step;
      const double pm = f(p);
      p[i] = wi - step;
      const double mm = f(p);
      p[j] = wj + step;
      const double mp = f(p);
      p[i] = wi;
      p[j] = wj;
      const double v = (pp - pm - mp + mm) / (4.0 * step * step);
      H[i * d + j] = v;
      H[j * d + i] = v;
    }
  }
  return H;
}

double dual_norm_bruteforce(const Vec& v, const WeightVector& w, std::size_t n_dirs,
                            std::uint64_t seed) {
  require(n_dirs >= 10000, "dual_norm_bruteforce: n_dirs >= 1e4");
  const std::size_t d = w.dim();
  require(v.size() == d, "dual_norm_bruteforce: dimension mismatch");

  auto pairing = [&](Vec u) {
    const double wn = weighted_norm(u, w);
    if (wn == 0.0) return 0.0;
    return std::fabs(dot(v, u)) / wn;  // rescale u onto the unit ball of ||.||_w
  };

  double best = 0.0;
  // Analytic extremals: along w, and along the component of v orthogonal to w.
  best = std::max(best, pairing(w.coords()));
  const ProjSplit sv = proj_split(v, w);
  if (norm2(sv.perp) > 0.0) best = std::max(best, pairing(sv.perp));

  Vec u(d);
  for (std::size_t k = 0; k < n_dirs; ++k) {
    for (std::size_t j = 0; j < d; ++j)
      u[j] = normal_icdf(uniform01(seed, k, j));
    best = std::max(best, pairing(u));
  }
  return best;
}

}  // namespace neuronland
