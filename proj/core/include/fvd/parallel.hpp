#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace fvd {

/// Global worker-thread budget shared by all parallel loops.
/// Resolution order: set_max_threads() > FVDSIM_THREADS env > hardware_concurrency.
/// Passing n <= 0 clears the override.
int max_threads();
void set_max_threads(int n);

/// True while the calling thread is already inside a parallel_for worker;
/// nested loops run serially instead of oversubscribing.
bool in_parallel_region();

/// Static-chunk parallel loop over [0, n). fn(begin, end) runs on each chunk.
/// Chunk boundaries depend only on (n, thread count), never on scheduling.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Fixed-order pairwise tree sum; the result depends only on element order,
/// not on how the contributions were produced.
std::complex<double> pairwise_sum(std::vector<std::complex<double>>& values);
double pairwise_sum(std::vector<double>& values);

}  // namespace fvd
