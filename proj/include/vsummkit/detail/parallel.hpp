// Copyright 2026 The vsummkit Authors.
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vsummkit::detail {

// Hardware concurrency, capped by VSUMMKIT_THREADS when set.
inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VSUMMKIT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
    } catch (...) {
    }
  }
  return n;
}

// Runs fn(i) for i in [0, n). Callers write results to slot i, so output
// order never depends on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count()) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace vsummkit::detail
