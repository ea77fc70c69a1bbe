// Copyright 2026 The stochorder Authors
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

#ifndef STOCHORDER_PARALLEL_H_
#define STOCHORDER_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stochorder {

// 0 means "one worker per hardware thread".
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, count) into contiguous chunks and calls body(begin, end) for each
// chunk on its own thread. Callers write results into index-addressed slots,
// so the outcome does not depend on the worker count.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t w = std::min<std::size_t>(
      static_cast<std::size_t>(resolve_workers(workers)),
      std::max<std::size_t>(count, 1));
  if (w <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  std::exception_ptr error;
  std::mutex error_mu;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = count * t / w;
    const std::size_t end = count * (t + 1) / w;
    threads.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stochorder

#endif  // STOCHORDER_PARALLEL_H_
