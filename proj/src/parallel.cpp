#include "vixb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace vixb {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t n, std::size_t block, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  block = std::max<std::size_t>(block, 1);
  const std::size_t n_blocks = (n + block - 1) / block;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) body(b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        body(b * block, std::min(n, (b + 1) * block));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double stable_sum(std::span<const double> x) {
  if (x.empty()) return 0.0;
  std::vector<double> partial;
  partial.reserve(x.size() / kSumChunk + 1);
  for (std::size_t i = 0; i < x.size(); i += kSumChunk) {
    const std::size_t end = std::min(x.size(), i + kSumChunk);
    double acc = 0.0;
    for (std::size_t j = i; j < end; ++j) acc += x[j];
    partial.push_back(acc);
  }
  while (partial.size() > 1) {
    std::size_t w = 0;
    for (std::size_t i = 0; i + 1 < partial.size(); i += 2) partial[w++] = partial[i] + partial[i + 1];
    if (partial.size() % 2 == 1) partial[w++] = partial.back();
    partial.resize(w);
  }
  return partial.front();
}

}  // namespace vixb
