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

// Shared value types for dense tracking.
//
// Coordinate convention used throughout the project: x grows to the right,
// y grows downwards and pixel centers sit at integer coordinates. A flow
// vector (dx, dy) stored at (x, y) of a source frame means the point is at
// (x + dx, y + dy) in the destination frame.

#ifndef MFT_CORE_TYPES_H_
#define MFT_CORE_TYPES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mft/errors.h"

namespace mft {

struct Vec2 {
  float x = 0.0f;
  float y = 0.0f;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
};

inline bool IsFinite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }
inline bool IsFinite(float v) { return std::isfinite(v); }
inline bool IsFinite(std::uint8_t) { return true; }

inline double Norm(Vec2 v) {
  return std::hypot(static_cast<double>(v.x), static_cast<double>(v.y));
}

// Row-major H x W grid. The tag keeps flow fields, position maps and scalar
// maps from being mixed up even when they share an element type.
template <typename T, typename Tag>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    CheckDims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  // Validates size and finiteness of externally supplied data.
  static Grid FromData(int width, int height, std::vector<T> data) {
    CheckDims(width, height);
    if (data.size() != static_cast<std::size_t>(width) * height) {
      ThrowInvalid("grid data length " + std::to_string(data.size()) +
                   " does not match " + std::to_string(width) + "x" +
                   std::to_string(height));
    }
    for (const T& v : data) {
      if (!IsFinite(v)) ThrowInvalid("grid contains a non-finite value");
    }
    Grid g;
    g.width_ = width;
    g.height_ = height;
    g.data_ = std::move(data);
    return g;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  const std::vector<T>& values() const { return data_; }

  template <typename OtherT, typename OtherTag>
  bool SameShape(const Grid<OtherT, OtherTag>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static void CheckDims(int width, int height) {
    if (width < 1 || height < 1) {
      ThrowInvalid("grid dimensions must be positive, got " +
                   std::to_string(width) + "x" + std::to_string(height));
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct FlowTag {};
struct PositionTag {};
struct ScalarTag {};
struct DeltaIndexTag {};

using FlowField = Grid<Vec2, FlowTag>;
using PositionMap = Grid<Vec2, PositionTag>;
using ScalarMap = Grid<float, ScalarTag>;
// Per-pixel index into an ordered delta list.
using DeltaIndexMap = Grid<std::uint8_t, DeltaIndexTag>;

// Throws unless every value lies in [0, 1].
void ValidateOcclusion(const ScalarMap& map);
// Throws unless every value is >= 0.
void ValidateUncertainty(const ScalarMap& map);

// Flow, occlusion and uncertainty for one frame pair (or one chain of pairs).
struct FouTriplet {
  FlowField flow;
  ScalarMap occlusion;
  ScalarMap uncertainty;
  int src_frame = 0;
  int dst_frame = 0;

  FouTriplet() = default;
  FouTriplet(FlowField flow, ScalarMap occlusion, ScalarMap uncertainty,
             int src_frame, int dst_frame);

  // No motion, no occlusion, no uncertainty.
  static FouTriplet Identity(int width, int height, int frame);

  int width() const { return flow.width(); }
  int height() const { return flow.height(); }

  friend bool operator==(const FouTriplet&, const FouTriplet&) = default;
};

inline FouTriplet IdentityTriplet(int width, int height, int frame) {
  return FouTriplet::Identity(width, height, frame);
}

// Query positions on the reference frame.
class QuerySet {
 public:
  QuerySet() = default;
  // Throws if any point lies outside [0, width-1] x [0, height-1].
  QuerySet(std::vector<Vec2> points, int width, int height);

  const std::vector<Vec2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<Vec2> points_;
};

struct TrackPoint {
  Vec2 position;
  bool occluded = false;
  float occlusion_score = 0.0f;
};

struct Tracklet {
  Vec2 query;
  std::vector<TrackPoint> points;  // one per tracked frame
};

}  // namespace mft

#endif  // MFT_CORE_TYPES_H_
