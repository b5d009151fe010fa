#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "mmtrain/rng.hpp"

namespace mmtrain {

/// Trials are cut into fixed-size blocks; block b always draws from
/// Rng::for_stream(seed, b) regardless of how many workers run, so results
/// are identical for any worker count as long as the caller reduces per-block
/// outputs in block order.
inline constexpr std::size_t kTrialBlock = 1024;

inline std::size_t block_count(std::size_t trials, std::size_t block = kTrialBlock) {
  return (trials + block - 1) / block;
}

/// Calls fn(block_index, begin, end, rng) for every block. `workers` == 0 means
/// hardware concurrency.
template <class Fn>
void for_each_block(std::size_t trials, std::uint64_t seed, unsigned workers, Fn&& fn,
                    std::size_t block = kTrialBlock) {
  const std::size_t blocks = block_count(trials, block);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(blocks, 1)));

  auto run_block = [&](std::size_t b) {
    Rng rng = Rng::for_stream(seed, b);
    const std::size_t begin = b * block;
    fn(b, begin, std::min(trials, begin + block), rng);
  };

  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) {
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mmtrain
