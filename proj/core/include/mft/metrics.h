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

// Point-tracking benchmark metrics: occlusion accuracy (OA), position
// accuracy averaged over pixel thresholds (<delta^x_avg), Average Jaccard
// (AJ) and PCK-T, plus the "first" and "strided" query protocols.
//
// All thresholds are strict: an error e counts as within threshold d iff
// e < d.

#ifndef MFT_METRICS_H_
#define MFT_METRICS_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mft/core_types.h"

namespace mft {

inline constexpr std::array<double, 5> kPositionThresholds = {1, 2, 4, 8, 16};
inline constexpr int kDefaultQueryStride = 5;

struct GroundTruthTrack {
  int id = 0;
  std::vector<Vec2> positions;  // per frame
  std::vector<bool> visible;    // per frame
};

// Annotated points of one sequence, in evaluation-resolution pixels.
struct GroundTruthSet {
  int width = 0;
  int height = 0;
  int num_frames = 0;
  std::vector<GroundTruthTrack> tracks;

  void Validate() const;
};

void WriteGroundTruth(const std::filesystem::path& path, const GroundTruthSet& gt);
GroundTruthSet ReadGroundTruth(const std::filesystem::path& path);

struct ThresholdStats {
  double threshold = 0.0;
  long within = 0;   // gt-visible frames with error < threshold
  long visible = 0;  // gt-visible frames
  long true_positive = 0;
  long false_positive = 0;
  long false_negative = 0;

  // nullopt when the denominator is zero.
  std::optional<double> fraction_within() const;
  std::optional<double> jaccard() const;
};

// Raw counts; every metric is a pure function of these.
struct MetricCounts {
  long frames = 0;
  long occlusion_correct = 0;
  std::array<ThresholdStats, kPositionThresholds.size()> per_threshold{};

  MetricCounts();

  // Adds one frame of one point.
  void Add(Vec2 predicted, bool predicted_occluded, Vec2 truth, bool truth_visible);
  void Merge(const MetricCounts& other);
};

// Fraction of frames where predicted-occluded == !gt-visible.
double OcclusionAccuracy(const std::vector<bool>& predicted_occluded,
                         const std::vector<bool>& gt_visible);

// Mean over thresholds of the fraction of gt-visible frames within the
// threshold. nullopt when no frame is visible.
std::optional<double> PositionAccuracy(const std::vector<Vec2>& predicted,
                                       const std::vector<Vec2>& truth,
                                       const std::vector<bool>& gt_visible);

// Mean over thresholds of TP / (TP + FP + FN) where
//   TP: gt-visible, predicted visible, error < threshold
//   FP: predicted visible and (gt-occluded or error >= threshold)
//   FN: gt-visible and (predicted occluded or error >= threshold)
std::optional<double> AverageJaccard(const std::vector<Vec2>& predicted,
                                     const std::vector<bool>& predicted_occluded,
                                     const std::vector<Vec2>& truth,
                                     const std::vector<bool>& gt_visible);

// Fraction of points with error < 0.2 * sqrt(mask_area).
double PckT(const std::vector<Vec2>& predicted, const std::vector<Vec2>& truth,
            double mask_area);

struct EvalReport {
  // Absent when there is nothing to score.
  std::optional<double> average_jaccard;
  std::optional<double> position_accuracy;  // <delta^x_avg
  std::optional<double> occlusion_accuracy;
  std::optional<double> pck_t;
  MetricCounts counts;
  long num_queries = 0;
  long pck_frames = 0;
  long pck_within = 0;

  // Recomputes the aggregates from counts.
  static EvalReport FromCounts(const MetricCounts& counts);

  std::string ToJson() const;
  std::string ToTable() const;
};

enum class EvalMode { kFirst, kStrided };

std::string_view EvalModeName(EvalMode mode);
EvalMode ParseEvalMode(std::string_view text);

// Maps tracker-resolution coordinates to evaluation resolution with
// independent x and y factors.
struct Rescale {
  int from_width = 0;
  int from_height = 0;
  int to_width = 0;
  int to_height = 0;

  static Rescale Identity(int width, int height) { return {width, height, width, height}; }
  // "512x512:256x256"
  static Rescale Parse(std::string_view text);

  Vec2 Apply(Vec2 p) const;
};

// One tracker initialization: point id, frame and position on that frame.
struct EvalQuery {
  int point_id = 0;
  int init_frame = 0;
  Vec2 position;

  friend bool operator==(const EvalQuery&, const EvalQuery&) = default;
};

// 0, stride, 2*stride, ... below num_frames.
std::vector<int> StridedInitFrames(int num_frames, int stride = kDefaultQueryStride);

// "first": one query per point at its first visible frame.
// "strided": one query per stride frame where the point is visible.
std::vector<EvalQuery> BuildEvalQueries(const GroundTruthSet& gt, EvalMode mode,
                                        int stride = kDefaultQueryStride);

// Tracker output for one query over the full timeline, in tracker pixels.
// Frames that were not tracked are ignored by the protocol.
struct QueryPrediction {
  int point_id = 0;
  int init_frame = 0;
  std::vector<Vec2> positions;
  std::vector<bool> occluded;
};

// Frames scored for a query: after the init frame ("first"), or every frame
// except the init frame ("strided").
std::vector<int> EvaluatedFrames(EvalMode mode, int init_frame, int num_frames);

struct EvalOptions {
  EvalMode mode = EvalMode::kFirst;
  std::optional<Rescale> rescale;
  int stride = kDefaultQueryStride;
  std::optional<double> pck_mask_area;
};

EvalReport Evaluate(const std::vector<QueryPrediction>& predictions,
                    const GroundTruthSet& gt, const EvalOptions& options);

}  // namespace mft

#endif  // MFT_METRICS_H_
