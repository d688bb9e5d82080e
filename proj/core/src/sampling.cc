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

#include "mft/sampling.h"

#include <algorithm>
#include <cmath>

namespace mft {
namespace internal {

void ThrowNonFinitePosition() {
  ThrowInvalid("cannot sample at a non-finite position");
}

}  // namespace internal

float SampleScalar(const ScalarMap& map, Vec2 pos) {
  const auto t = internal::MakeTap(pos, map.width(), map.height());
  return internal::SampleScalarAt(t, map.data().data(), map.width());
}

Vec2 SampleFlow(const FlowField& field, Vec2 pos) {
  const auto t = internal::MakeTap(pos, field.width(), field.height());
  return internal::SampleFlowAt(t, field.data().data(), field.width());
}

PositionMap BuildPositionMap(const FlowField& flow) {
  PositionMap positions(flow.width(), flow.height());
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      const Vec2 f = flow(x, y);
      positions(x, y) = {static_cast<float>(x) + f.x,
                         static_cast<float>(y) + f.y};
    }
  }
  return positions;
}

}  // namespace mft
