// Copyright 2026 The siwsample Authors
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

#ifndef SIW_PARALLEL_HPP
#define SIW_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace siw {

/// Number of workers to actually use: 0 means hardware concurrency.
inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

/// Static block partition of [0, count) over `threads` workers. The work
/// function must derive any randomness from the index, never from worker
/// identity, so results are independent of the thread count.
template <typename Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<int>(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  const long long chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long lo = t * chunk;
    const long long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace siw

#endif
