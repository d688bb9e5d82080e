// Copyright 2026 The MFT Tracker Authors.
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

#ifndef MFT_PARALLEL_H_
#define MFT_PARALLEL_H_

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mft {

// 0 means "use the hardware concurrency".
inline int ResolveWorkers(int num_workers) {
  if (num_workers > 0) return num_workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(begin, end) over contiguous row bands. Each band writes disjoint
// output rows, so results do not depend on the worker count.
inline void ParallelForRows(int rows, int num_workers,
                            const std::function<void(int, int)>& fn) {
  const int workers = std::min(ResolveWorkers(num_workers), std::max(rows, 1));
  if (workers <= 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  const int band = (rows + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * band;
    const int end = std::min(rows, begin + band);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mft

#endif  // MFT_PARALLEL_H_
