#include "neuronland/common.hpp"

#include <atomic>
#include <cstdlib>

namespace neuronland {

namespace {
int g_threads = 0;  // 0 = not set yet
}

int thread_count() {
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("NEURON_LANDSCAPE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_count(int n) { g_threads = n > 0 ? n : 0; }

namespace detail {

namespace {
thread_local bool t_inside_parallel = false;
}

void run_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& body) {
  const int nt = std::min<std::size_t>(thread_count(), n_blocks);
  if (nt <= 1 || t_inside_parallel) {  // no nested pools
    for (std::size_t b = 0; b < n_blocks; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      t_inside_parallel = true;
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= n_blocks) return;
        body(b);
      }
    });
  }
  for (auto& th : pool) th.join();
}

void combine_pairwise(const std::vector<double>& block_acc, std::size_t n_blocks,
                      std::size_t d, double* out) {
  // Recursive halving over the block index; order is fixed by n_blocks alone.
  struct Rec {
    const std::vector<double>& acc;
    std::size_t d;
    void sum(std::size_t lo, std::size_t hi, double* r) const {
      if (hi - lo == 1) {
        for (std::size_t j = 0; j < d; ++j) r[j] = acc[lo * d + j];
        return;
      }
      const std::size_t mid = lo + (hi - lo) / 2;
      std::vector<double> left(d), right(d);
      sum(lo, mid, left.data());
      sum(mid, hi, right.data());
      for (std::size_t j = 0; j < d; ++j) r[j] = left[j] + right[j];
    }
  };
  Rec rec{block_acc, d};
  rec.sum(0, n_blocks, out);
}

}  // namespace detail
}  // namespace neuronland
