#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

#include "rrtcut/rng.hpp"
#include "rrtcut/tree.hpp"

namespace rrtcut {

/// Stream of replicate r: stream_index == r under the run's master seed.
inline RngStream replicate_stream(std::uint64_t seed, std::uint64_t replicate) {
  return RngStream(seed, replicate);
}

/// The tree of replicate r at size n. Every estimator and CLI command draws its
/// trees through here, so equal (seed, replicate, n) always means equal trees.
inline RecursiveTree replicate_tree(Vertex n, std::uint64_t seed, std::uint64_t replicate) {
  RngStream rng = replicate_stream(seed, replicate).substream(kTreeStream).substream(n);
  return generate_rrt(n, rng);
}

/// Evaluates fn(r) for r in [0, count) on up to `workers` threads and returns
/// the results in replicate order. The output does not depend on `workers`
/// as long as fn(r) depends only on r. The first exception thrown by any
/// replicate is rethrown after all workers stop.
template <class Fn>
auto map_replicates(std::uint64_t count, unsigned workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t>;
  std::vector<Result> results(count);
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(count, 1)));
  if (workers == 1) {
    for (std::uint64_t r = 0; r < count; ++r) {
      results[r] = fn(r);
    }
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!failed.load(std::memory_order_relaxed)) {
          const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
          if (r >= count) {
            return;
          }
          try {
            results[r] = fn(r);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
              error = std::current_exception();
            }
            failed = true;
          }
        }
      });
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return results;
}

} // namespace rrtcut
