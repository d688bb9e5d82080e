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

// Bilinear backward sampling of grids at sub-pixel positions.
//
// Positions outside [0, W-1] x [0, H-1] are clamped to the border before
// blending. The blend is evaluated in double precision and rounded once.

#ifndef MFT_SAMPLING_H_
#define MFT_SAMPLING_H_

#include <algorithm>

#include "mft/core_types.h"

namespace mft {

float SampleScalar(const ScalarMap& map, Vec2 pos);
Vec2 SampleFlow(const FlowField& field, Vec2 pos);

// P[p] = p + flow[p] for every integer grid position p.
PositionMap BuildPositionMap(const FlowField& flow_from_reference);

inline bool OutOfBounds(Vec2 pos, int width, int height) {
  return !(pos.x >= 0.0f && pos.y >= 0.0f &&
           pos.x <= static_cast<float>(width - 1) &&
           pos.y <= static_cast<float>(height - 1));
}

namespace internal {

// Corner indices and weights of a clamped bilinear footprint.
struct BilinearTap {
  int x0, y0, x1, y1;
  double fx, fy;
};

[[noreturn]] void ThrowNonFinitePosition();

inline BilinearTap MakeTap(Vec2 pos, int width, int height) {
  if (!IsFinite(pos)) ThrowNonFinitePosition();
  const double x = std::clamp(static_cast<double>(pos.x), 0.0,
                              static_cast<double>(width - 1));
  const double y = std::clamp(static_cast<double>(pos.y), 0.0,
                              static_cast<double>(height - 1));
  BilinearTap tap;
  tap.x0 = static_cast<int>(x);
  tap.y0 = static_cast<int>(y);
  tap.x1 = std::min(tap.x0 + 1, width - 1);
  tap.y1 = std::min(tap.y0 + 1, height - 1);
  tap.fx = x - tap.x0;
  tap.fy = y - tap.y0;
  return tap;
}

inline double Blend(const BilinearTap& t, double v00, double v10, double v01,
                    double v11) {
  const double top = (1.0 - t.fx) * v00 + t.fx * v10;
  const double bottom = (1.0 - t.fx) * v01 + t.fx * v11;
  return (1.0 - t.fy) * top + t.fy * bottom;
}

inline float SampleScalarAt(const BilinearTap& t, const float* data,
                            int width) {
  return static_cast<float>(Blend(t, data[t.y0 * width + t.x0],
                                  data[t.y0 * width + t.x1],
                                  data[t.y1 * width + t.x0],
                                  data[t.y1 * width + t.x1]));
}

inline Vec2 SampleFlowAt(const BilinearTap& t, const Vec2* data, int width) {
  const Vec2 a = data[t.y0 * width + t.x0];
  const Vec2 b = data[t.y0 * width + t.x1];
  const Vec2 c = data[t.y1 * width + t.x0];
  const Vec2 d = data[t.y1 * width + t.x1];
  return {static_cast<float>(Blend(t, a.x, b.x, c.x, d.x)),
          static_cast<float>(Blend(t, a.y, b.y, c.y, d.y))};
}

}  // namespace internal
}  // namespace mft

#endif  // MFT_SAMPLING_H_
