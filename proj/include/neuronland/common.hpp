#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace neuronland {

using Vec = std::vector<double>;

// --- global thread budget -------------------------------------------------
//
// All parallel reductions decompose work into fixed-size blocks and combine
// block results in a fixed pairwise tree, so results are bit-identical for
// any thread count.

int thread_count();
void set_thread_count(int n);

inline constexpr std::size_t kReduceBlock = 8192;

namespace detail {
void run_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& body);

// Pairwise tree combine of per-block accumulators of width d into out[0..d).
void combine_pairwise(const std::vector<double>& block_acc, std::size_t n_blocks,
                      std::size_t d, double* out);
}  // namespace detail

// Sum of f(i) over i in [0, n). f must be pure.
template <class F>
double parallel_sum(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t n_blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> acc(n_blocks, 0.0);
  detail::run_blocks(n_blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    acc[b] = s;
  });
  double out = 0.0;
  detail::combine_pairwise(acc, n_blocks, 1, &out);
  return out;
}

// Vector-valued reduction: f(i, acc) adds example i's contribution into acc[0..d).
template <class F>
void parallel_sum_vec(std::size_t n, std::size_t d, F&& f, double* out) {
  for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
  if (n == 0) return;
  const std::size_t n_blocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> acc(n_blocks * d, 0.0);
  detail::run_blocks(n_blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double* a = acc.data() + b * d;
    for (std::size_t i = lo; i < hi; ++i) f(i, a);
  });
  detail::combine_pairwise(acc, n_blocks, d, out);
}

// Parallel loop with no reduction (independent cells).
template <class F>
void parallel_for(std::size_t n, F&& f) {
  if (n == 0) return;
  detail::run_blocks(n, [&](std::size_t i) { f(i); });
}

// --- small dense-vector helpers --------------------------------------------

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline void axpy(double s, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

inline Vec unit(const Vec& a) {
  const double n = norm2(a);
  if (n == 0.0) throw std::invalid_argument("unit: zero vector");
  return (1.0 / n) * a;
}

inline Vec basis_vector(std::size_t d, std::size_t i, double scale = 1.0) {
  Vec e(d, 0.0);
  e[i] = scale;
  return e;
}

// Angle in [0, pi] between nonzero vectors.
inline double angle_between(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("angle_between: zero vector");
  double c = dot(a, b) / (na * nb);
  c = std::max(-1.0, std::min(1.0, c));
  return std::acos(c);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace neuronland
