#include "paralab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace paralab {
namespace {
std::atomic<int> n_threads{0};
}

void set_threads(int k) { n_threads = std::max(0, k); }

int threads() {
  const int k = n_threads.load();
  if (k > 0) return k;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int k = std::min(threads(), n);
  if (k <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < k; ++w) {
    const int lo = int(std::int64_t(n) * w / k), hi = int(std::int64_t(n) * (w + 1) / k);
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace paralab
