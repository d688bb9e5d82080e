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

#include "mft/selector.h"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mft/parallel.h"

namespace mft {
namespace {

// Returns the first non-null candidate; validates shapes and frames.
const FouTriplet& CheckCandidates(CandidateList candidates) {
  if (candidates.empty()) ThrowInvalid("no candidates to select from");
  if (candidates.size() > std::numeric_limits<std::uint8_t>::max()) {
    ThrowInvalid("too many candidates: " + std::to_string(candidates.size()));
  }
  const FouTriplet* first = nullptr;
  for (const FouTriplet* c : candidates) {
    if (c == nullptr) continue;
    if (first == nullptr) {
      first = c;
      continue;
    }
    if (!c->flow.SameShape(first->flow)) {
      ThrowInvalid("candidate grids differ in size");
    }
    if (c->dst_frame != first->dst_frame) {
      ThrowInvalid("candidates end at different frames");
    }
  }
  if (first == nullptr) ThrowInvalid("every candidate is unavailable");
  return *first;
}

std::vector<const FouTriplet*> Pointers(std::span<const FouTriplet> c) {
  std::vector<const FouTriplet*> out;
  out.reserve(c.size());
  for (const FouTriplet& t : c) out.push_back(&t);
  return out;
}

}  // namespace

DeltaIndexMap SelectBest(CandidateList candidates, float occlusion_threshold,
                         int num_workers) {
  const FouTriplet& first = CheckCandidates(candidates);
  if (!(occlusion_threshold > 0.0f && occlusion_threshold < 1.0f)) {
    ThrowInvalid("occlusion threshold must lie in (0, 1)");
  }
  std::uint8_t fallback = 0;
  while (candidates[fallback] == nullptr) ++fallback;

  const int w = first.width();
  const int h = first.height();
  const int n = static_cast<int>(candidates.size());
  DeltaIndexMap index(w, h, fallback);
  std::vector<const float*> occ(n, nullptr);
  std::vector<const float*> unc(n, nullptr);
  for (int i = 0; i < n; ++i) {
    if (candidates[i] == nullptr) continue;
    occ[i] = candidates[i]->occlusion.data().data();
    unc[i] = candidates[i]->uncertainty.data().data();
  }
  std::uint8_t* out = index.data().data();
  ParallelForRows(h, num_workers, [&](int row_begin, int row_end) {
    std::vector<float> best_u(w);
    std::vector<int> best(w);
    for (int y = row_begin; y < row_end; ++y) {
      const std::size_t row = static_cast<std::size_t>(y) * w;
      std::fill(best.begin(), best.end(), -1);
      for (int i = 0; i < n; ++i) {
        if (occ[i] == nullptr) continue;
        const float* o = occ[i] + row;
        const float* u = unc[i] + row;
        for (int x = 0; x < w; ++x) {
          const bool take = (o[x] <= occlusion_threshold) &
                            ((best[x] < 0) | (u[x] < best_u[x]));
          best[x] = take ? i : best[x];
          best_u[x] = take ? u[x] : best_u[x];
        }
      }
      for (int x = 0; x < w; ++x) {
        if (best[x] >= 0) out[row + x] = static_cast<std::uint8_t>(best[x]);
      }
    }
  });
  return index;
}

DeltaIndexMap SelectBest(std::span<const FouTriplet> candidates,
                         float occlusion_threshold, int num_workers) {
  const auto ptrs = Pointers(candidates);
  return SelectBest(CandidateList(ptrs), occlusion_threshold, num_workers);
}

FouTriplet ComposeResult(CandidateList candidates,
                         const DeltaIndexMap& index_map, int num_workers) {
  const FouTriplet& first = CheckCandidates(candidates);
  if (!index_map.SameShape(first.flow)) {
    ThrowInvalid("index map does not match the candidate grid");
  }
  for (std::uint8_t i : index_map.data()) {
    if (i >= candidates.size() || candidates[i] == nullptr) {
      ThrowInvalid("index map refers to unavailable candidate " +
                   std::to_string(i));
    }
  }
  const int w = first.width();
  const int h = first.height();
  FlowField flow(w, h);
  ScalarMap occlusion(w, h);
  ScalarMap uncertainty(w, h);
  const std::uint8_t* idx = index_map.data().data();
  Vec2* out_flow = flow.data().data();
  float* out_occ = occlusion.data().data();
  float* out_unc = uncertainty.data().data();
  ParallelForRows(h, num_workers, [&](int row_begin, int row_end) {
    const std::size_t begin = static_cast<std::size_t>(row_begin) * w;
    const std::size_t end = static_cast<std::size_t>(row_end) * w;
    for (std::size_t p = begin; p < end; ++p) {
      const FouTriplet& c = *candidates[idx[p]];
      out_flow[p] = c.flow.data()[p];
      out_occ[p] = c.occlusion.data()[p];
      out_unc[p] = c.uncertainty.data()[p];
    }
  });
  return FouTriplet(std::move(flow), std::move(occlusion),
                    std::move(uncertainty), first.src_frame, first.dst_frame);
}

FouTriplet ComposeResult(std::span<const FouTriplet> candidates,
                         const DeltaIndexMap& index_map, int num_workers) {
  const auto ptrs = Pointers(candidates);
  return ComposeResult(CandidateList(ptrs), index_map, num_workers);
}

}  // namespace mft
