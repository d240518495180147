// Copyright 2026 The StructInfer Authors.
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

#ifndef STRUCTINFER_PARALLEL_H_
#define STRUCTINFER_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace structinfer {

// Applies `fn(i)` for i in [0, n) on up to `jobs` threads. Results land in
// input order regardless of completion order.
template <typename Result, typename Fn>
std::vector<Result> ParallelMap(size_t n, int jobs, Fn fn) {
  std::vector<Result> results(n);
  const size_t workers =
      std::min<size_t>(n, static_cast<size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) results[i] = fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
  return results;
}

}  // namespace structinfer

#endif  // STRUCTINFER_PARALLEL_H_
