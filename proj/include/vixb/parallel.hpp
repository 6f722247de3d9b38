#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vixb {

/// Execution settings shared by the simulation, regression and oracle.
struct Exec {
  unsigned threads = 0;            // 0 = hardware concurrency
  const char* kernel = "auto";     // see kernels::select
};

unsigned resolve_threads(unsigned requested);

/// Calls body(begin, end) for consecutive blocks [k*block, min((k+1)*block, n)).
/// Blocks are handed to worker threads dynamically; callers must only write
/// disjoint outputs, so results do not depend on the thread count.
void parallel_blocks(std::size_t n, std::size_t block, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Sum with a fixed reduction tree: contiguous chunks of kSumChunk values are
/// summed left to right, then the chunk sums are combined pairwise. The
/// result depends only on the input sequence.
inline constexpr std::size_t kSumChunk = 1024;
double stable_sum(std::span<const double> x);

inline double mean(std::span<const double> x) {
  return x.empty() ? 0.0 : stable_sum(x) / static_cast<double>(x.size());
}

}  // namespace vixb
