// Copyright 2026 The bitext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef BITEXT_PARALLEL_HPP
#define BITEXT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bitext {

// Runs task(i) for i in [0, n) on up to `workers` threads. Tasks are claimed
// dynamically, so callers must write results into slot i and never depend on
// which thread ran which task. The first exception thrown is rethrown after
// all threads join.
template <typename Task>
void parallel_for(std::size_t n, unsigned workers, Task&& task) {
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// Fixed-size chunking that depends only on the input size, never on the
// worker count, so per-chunk partial results merge identically.
struct Chunking {
  std::size_t total;
  std::size_t chunk_size;

  std::size_t count() const { return total == 0 ? 0 : (total + chunk_size - 1) / chunk_size; }
  std::size_t begin(std::size_t c) const { return c * chunk_size; }
  std::size_t end(std::size_t c) const { return std::min(total, (c + 1) * chunk_size); }
};

}  // namespace bitext

#endif  // BITEXT_PARALLEL_HPP
