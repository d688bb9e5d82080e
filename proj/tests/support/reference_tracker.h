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

// Scalar per-point tracker used as an oracle for the grid tracker. Each query
// pixel is tracked on its own with plain loops; the only shared input is the
// flow provider.

#ifndef MFT_TESTS_REFERENCE_TRACKER_H_
#define MFT_TESTS_REFERENCE_TRACKER_H_

#include <cstdint>
#include <vector>

#include "mft/core_types.h"
#include "mft/tracker.h"

namespace mft::testing {

struct ReferenceState {
  Vec2 flow;
  float occlusion = 0;
  float uncertainty = 0;
  int selected = 0;
};

// Bilinear sample with edge clamping, computed in double.
double ReferenceSample(const std::vector<float>& values, int width, int height,
                       int stride, int offset, double x, double y);

// Tracks one pixel over frames 0..num_frames-1. Entry t holds the
// reference-to-t state of the point.
std::vector<ReferenceState> ReferenceTrackPixel(const FlowProvider& provider,
                                                const DeltaSet& deltas, float threshold,
                                                int px, int py, int num_frames);

// Tracks every pixel; result[t][y * width + x].
std::vector<std::vector<ReferenceState>> ReferenceTrackAll(const FlowProvider& provider,
                                                           const DeltaSet& deltas,
                                                           float threshold,
                                                           int num_frames);

}  // namespace mft::testing

#endif  // MFT_TESTS_REFERENCE_TRACKER_H_
