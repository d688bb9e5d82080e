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

#include "mft/chaining.h"

#include <algorithm>
#include <cstddef>
#include <string>

#include "mft/parallel.h"
#include "mft/sampling.h"

namespace mft {

FouTriplet Chain(const FouTriplet& prev, const FouTriplet& step,
                 int num_workers) {
  if (prev.dst_frame != step.src_frame) {
    ThrowInvalid("cannot chain result ending at frame " +
                 std::to_string(prev.dst_frame) + " with step starting at " +
                 std::to_string(step.src_frame));
  }
  if (!prev.flow.SameShape(step.flow)) {
    ThrowInvalid("cannot chain triplets of different grid sizes");
  }
  const int w = prev.width();
  const int h = prev.height();
  FlowField flow(w, h);
  ScalarMap occlusion(w, h);
  ScalarMap uncertainty(w, h);

  const Vec2* prev_flow = prev.flow.data().data();
  const float* prev_occ = prev.occlusion.data().data();
  const float* prev_unc = prev.uncertainty.data().data();
  const Vec2* step_flow = step.flow.data().data();
  const float* step_occ = step.occlusion.data().data();
  const float* step_unc = step.uncertainty.data().data();
  Vec2* out_flow = flow.data().data();
  float* out_occ = occlusion.data().data();
  float* out_unc = uncertainty.data().data();

  ParallelForRows(h, num_workers, [&](int row_begin, int row_end) {
    for (int y = row_begin; y < row_end; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const Vec2 f = prev_flow[i];
        const Vec2 q{static_cast<float>(x) + f.x, static_cast<float>(y) + f.y};
        const auto tap = internal::MakeTap(q, w, h);
        out_flow[i] = f + internal::SampleFlowAt(tap, step_flow, w);
        float occ =
            std::max(prev_occ[i], internal::SampleScalarAt(tap, step_occ, w));
        if (OutOfBounds(q, w, h)) occ = 1.0f;
        out_occ[i] = occ;
        out_unc[i] = prev_unc[i] + internal::SampleScalarAt(tap, step_unc, w);
      }
    }
  });
  return FouTriplet(std::move(flow), std::move(occlusion),
                    std::move(uncertainty), prev.src_frame, step.dst_frame);
}

}  // namespace mft
