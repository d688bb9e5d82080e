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

// Multi-flow dense tracker.
//
// For every new frame t and every delta in the configured set, the tracker
// chains the memorized reference-to-s result (s = t - delta clamped at 0, or
// s = 0 for the infinite delta) with the s-to-t flow, selects the best
// candidate per pixel and memorizes the composed result. Results older than
// the largest integer delta are dropped.

#ifndef MFT_TRACKER_H_
#define MFT_TRACKER_H_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mft/core_types.h"
#include "mft/selector.h"

namespace mft {

class Delta {
 public:
  static Delta Infinite() { return Delta(0); }
  static Delta Frames(int n);

  bool is_infinite() const { return frames_ == 0; }
  // Only meaningful for finite deltas.
  int frames() const { return frames_; }
  std::string ToString() const;

  friend bool operator==(const Delta&, const Delta&) = default;

 private:
  explicit Delta(int frames) : frames_(frames) {}
  int frames_;
};

// Ordered delta list. Non-empty, finite deltas strictly increasing, the
// infinite delta at most once (anywhere in the order).
class DeltaSet {
 public:
  explicit DeltaSet(std::vector<Delta> deltas);

  // Parses "inf,1,2,4"; whitespace around items is ignored.
  static DeltaSet Parse(std::string_view text);
  // {inf, 1, 2, 4, 8, 16, 32}
  static DeltaSet Default();

  const std::vector<Delta>& deltas() const { return deltas_; }
  std::size_t size() const { return deltas_.size(); }
  const Delta& operator[](std::size_t i) const { return deltas_[i]; }
  bool has_infinite() const;
  // Largest finite delta, 0 when there is none.
  int max_frames() const;
  std::vector<int> finite_deltas() const;
  std::string ToString() const;

  friend bool operator==(const DeltaSet&, const DeltaSet&) = default;

 private:
  std::vector<Delta> deltas_;
};

// Source of (flow, occlusion, uncertainty) triplets between frame pairs.
// Get(a, a) must return the identity triplet and repeated calls must return
// identical data. Implementations must tolerate concurrent Get calls.
class FlowProvider {
 public:
  virtual ~FlowProvider() = default;

  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual FouTriplet Get(int src, int dst) const = 0;
  // Whether Get(src, dst) can be served.
  virtual bool Contains(int src, int dst) const {
    (void)src;
    (void)dst;
    return true;
  }
};

enum class Direction { kForward, kBackward };

std::string_view DirectionName(Direction d);
Direction ParseDirection(std::string_view text);

// Presents frames start, start +- 1, ... of a base provider as 0, 1, ...
class RemappedProvider : public FlowProvider {
 public:
  RemappedProvider(const FlowProvider& base, int start, Direction direction);

  int width() const override { return base_.width(); }
  int height() const override { return base_.height(); }
  FouTriplet Get(int src, int dst) const override;
  bool Contains(int src, int dst) const override;

  int ToBase(int frame) const;

 private:
  const FlowProvider& base_;
  int start_;
  Direction direction_;
};

struct TrackerOptions {
  DeltaSet deltas = DeltaSet::Default();
  float occlusion_threshold = kDefaultOcclusionThreshold;
  int num_workers = 1;
};

class Tracker {
 public:
  Tracker(int width, int height, TrackerOptions options);

  // Advances to frame current_frame() + 1 and returns the memorized result.
  const FouTriplet& Step(const FlowProvider& provider);

  int current_frame() const { return current_frame_; }
  const TrackerOptions& options() const { return options_; }
  // Selected delta index (into options().deltas) from the last Step.
  const DeltaIndexMap& last_selection() const { return last_selection_; }
  // The memorized reference-to-frame result; throws if evicted.
  const FouTriplet& result(int frame) const;
  std::vector<int> memorized_frames() const;
  std::size_t memory_size() const { return memory_.size(); }
  std::size_t peak_memory_size() const { return peak_memory_size_; }
  // Provider fetches issued so far (duplicated source frames count once).
  std::size_t provider_calls() const { return provider_calls_; }

 private:
  int width_;
  int height_;
  TrackerOptions options_;
  int current_frame_ = 0;
  std::map<int, FouTriplet> memory_;
  DeltaIndexMap last_selection_;
  std::size_t peak_memory_size_ = 0;
  std::size_t provider_calls_ = 0;
};

// Called once per tracked frame, including the identity result of frame 0.
using ResultSink = std::function<void(int frame, const FouTriplet& result,
                                      const Tracker& tracker)>;

// Tracks num_frames frames of the provider starting at start_frame, walking
// forwards or backwards in time. The engine always sees frames 0, 1, ...;
// result stamps are in engine frames.
void TrackSequence(const FlowProvider& provider, int start_frame,
                   int num_frames, const TrackerOptions& options,
                   Direction direction, const ResultSink& sink);

std::vector<FouTriplet> TrackSequence(const FlowProvider& provider,
                                      int start_frame, int num_frames,
                                      const TrackerOptions& options,
                                      Direction direction);

// Collects per-frame positions and occlusion flags for a query set by
// bilinear sampling of each reference-to-t result at the query positions.
class TrackletAccumulator {
 public:
  TrackletAccumulator(QuerySet queries, float occlusion_threshold);

  void Append(const FouTriplet& result);
  const std::vector<Tracklet>& tracklets() const { return tracklets_; }

 private:
  QuerySet queries_;
  float threshold_;
  std::vector<Tracklet> tracklets_;
};

std::vector<Tracklet> ExtractTracklets(std::span<const FouTriplet> results,
                                       const QuerySet& queries,
                                       float occlusion_threshold);

}  // namespace mft

#endif  // MFT_TRACKER_H_
