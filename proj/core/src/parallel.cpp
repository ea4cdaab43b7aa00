#include "fvd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace fvd {

namespace {

std::atomic<int> g_max_threads{0};
thread_local bool t_in_parallel = false;

int resolve_default_threads() {
  if (const char* env = std::getenv("FVDSIM_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int max_threads() {
  int n = g_max_threads.load(std::memory_order_relaxed);
  if (n <= 0) {
    n = resolve_default_threads();
    g_max_threads.store(n, std::memory_order_relaxed);
  }
  return n;
}

void set_max_threads(int n) {
  // n <= 0 clears the override and falls back to env/hardware resolution
  g_max_threads.store(n, std::memory_order_relaxed);
}

bool in_parallel_region() { return t_in_parallel; }

void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const int nt = (t_in_parallel || n < 4096) ? 1 : std::min<std::size_t>(max_threads(), n);
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + nt - 1) / nt;
  std::vector<std::thread> workers;
  workers.reserve(nt);
  std::mutex error_mutex;
  std::exception_ptr first_error;
  for (int t = 0; t < nt; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, &error_mutex, &first_error, begin, end] {
      t_in_parallel = true;
      try {
        fn(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
      t_in_parallel = false;
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

template <class T>
T pairwise_sum_impl(std::vector<T>& v) {
  if (v.empty()) return T{};
  std::size_t n = v.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2) {
      v[half] = v[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return v[0];
}

}  // namespace

std::complex<double> pairwise_sum(std::vector<std::complex<double>>& values) {
  return pairwise_sum_impl(values);
}

double pairwise_sum(std::vector<double>& values) { return pairwise_sum_impl(values); }

}  // namespace fvd
