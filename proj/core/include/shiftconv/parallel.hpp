// Copyright 2026 The shiftconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHIFTCONV_PARALLEL_HPP_
#define SHIFTCONV_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shiftconv {

/// Fixed chunk size used by every chunked reduction. Chunk boundaries depend
/// only on the problem size, never on the thread count, so partial sums are
/// combined in the same order whatever the pool size.
inline constexpr std::size_t kReductionChunk = 4096;

struct IndexRange {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<IndexRange> fixed_chunks(std::size_t begin, std::size_t end,
                                            std::size_t chunk = kReductionChunk) {
  std::vector<IndexRange> out;
  for (std::size_t b = begin; b < end; b += chunk) {
    out.push_back({b, std::min(end, b + chunk)});
  }
  return out;
}

/// Runs independent jobs on a fixed number of threads. Jobs must write only
/// to their own output slot; the executor guarantees nothing about execution
/// order, so determinism comes from index-addressed outputs.
class Executor {
 public:
  explicit Executor(unsigned threads = 1) : threads_(std::max(1u, threads)) {}

  /// Pool size from hardware_concurrency, at least 1.
  static Executor automatic() {
    return Executor(std::max(1u, std::thread::hardware_concurrency()));
  }

  unsigned threads() const noexcept { return threads_; }

  template <typename Fn>
  void for_each_index(std::size_t n, Fn&& fn) const {
    if (n == 0) return;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads_, n));
    if (workers <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next.store(n, std::memory_order_relaxed);
          return;
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers - 1);
      for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
      body();
    }
    if (first_error) std::rethrow_exception(first_error);
  }

 private:
  unsigned threads_;
};

}  // namespace shiftconv

#endif  // SHIFTCONV_PARALLEL_HPP_
