#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace rtspec {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

// Runs f(block_index, lo, hi) over [0, count) split into fixed-size
// blocks. Blocks are claimed from an atomic counter, so any number of
// threads produces the same per-block results; callers combine the
// per-block outputs sequentially in block order to stay reproducible.
inline void parallel_blocks(std::uint64_t count, std::uint64_t block_size,
                            int threads,
                            const std::function<void(std::uint64_t, std::uint64_t,
                                                     std::uint64_t)>& f) {
  if (count == 0) return;
  std::uint64_t blocks = (count + block_size - 1) / block_size;
  if (threads <= 1 || blocks == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b)
      f(b, b * block_size, std::min(count, (b + 1) * block_size));
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      f(b, b * block_size, std::min(count, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  int use = int(std::min<std::uint64_t>(threads, blocks));
  pool.reserve(use);
  for (int i = 0; i < use; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline std::uint64_t block_count(std::uint64_t count, std::uint64_t block_size) {
  return (count + block_size - 1) / block_size;
}

}  // namespace rtspec
