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

#include "mft/core_types.h"

#include <string>

namespace mft {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kBadMagic:
      return "bad magic";
    case ErrorCode::kTruncated:
      return "truncated";
    case ErrorCode::kBadDimensions:
      return "bad dimensions";
    case ErrorCode::kKindMismatch:
      return "kind mismatch";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kMissingPair:
      return "missing pair";
    case ErrorCode::kParse:
      return "parse";
  }
  return "unknown";
}

void ValidateOcclusion(const ScalarMap& map) {
  for (float v : map.data()) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      ThrowInvalid("occlusion score outside [0, 1]: " + std::to_string(v));
    }
  }
}

void ValidateUncertainty(const ScalarMap& map) {
  for (float v : map.data()) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      ThrowInvalid("uncertainty must be finite and non-negative: " +
                   std::to_string(v));
    }
  }
}

FouTriplet::FouTriplet(FlowField flow_in, ScalarMap occlusion_in,
                       ScalarMap uncertainty_in, int src, int dst)
    : flow(std::move(flow_in)),
      occlusion(std::move(occlusion_in)),
      uncertainty(std::move(uncertainty_in)),
      src_frame(src),
      dst_frame(dst) {
  if (!flow.SameShape(occlusion) || !flow.SameShape(uncertainty)) {
    ThrowInvalid("triplet grids differ in size");
  }
  if (src < 0 || dst < 0) {
    ThrowInvalid("negative frame index in triplet (" + std::to_string(src) +
                 ", " + std::to_string(dst) + ")");
  }
}

FouTriplet FouTriplet::Identity(int width, int height, int frame) {
  return FouTriplet(FlowField(width, height), ScalarMap(width, height),
                    ScalarMap(width, height), frame, frame);
}

QuerySet::QuerySet(std::vector<Vec2> points, int width, int height)
    : points_(std::move(points)) {
  for (const Vec2& p : points_) {
    if (!IsFinite(p) || p.x < 0.0f || p.y < 0.0f ||
        p.x > static_cast<float>(width - 1) ||
        p.y > static_cast<float>(height - 1)) {
      ThrowInvalid("query (" + std::to_string(p.x) + ", " +
                   std::to_string(p.y) + ") outside the reference frame");
    }
  }
}

}  // namespace mft
