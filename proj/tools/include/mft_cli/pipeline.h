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

// Glue between the tracker and the evaluation protocol, plus the tracklet
// file schema and the checkerboard overlay used by the command-line tool.
//
// Tracklet file (JSON, version 1):
//   { "version": 1, "width": W, "height": H, "num_frames": N,
//     "deltas": "inf,1,2", "occlusion_threshold": 0.02, "seed": S,
//     "tracks": [ { "point_id": i, "init_frame": f, "query": [x, y],
//                   "frames": [...], "x": [...], "y": [...],
//                   "occluded": [0|1, ...], "occlusion_score": [...] } ] }
// frames lists the sequence frames covered by the record; x, y, occluded and
// occlusion_score run parallel to it.

#ifndef MFT_CLI_PIPELINE_H_
#define MFT_CLI_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mft/core_types.h"
#include "mft/image.h"
#include "mft/metrics.h"
#include "mft/tracker.h"

namespace mft::cli {

struct TrackletRecord {
  int point_id = 0;
  int init_frame = 0;
  Vec2 query;
  std::vector<int> frames;
  std::vector<Vec2> positions;
  std::vector<bool> occluded;
  std::vector<float> occlusion_scores;
};

struct TrackletFile {
  int width = 0;
  int height = 0;
  int num_frames = 0;
  std::string deltas;
  float occlusion_threshold = kDefaultOcclusionThreshold;
  std::uint64_t seed = 0;
  std::vector<TrackletRecord> tracks;

  std::string ToJson() const;
  static TrackletFile FromJson(const std::string& text);
};

void WriteTracklets(const std::filesystem::path& path, const TrackletFile& file);
TrackletFile ReadTracklets(const std::filesystem::path& path);

// Tracks queries given at one frame of the provider in one direction.
// Records cover start_frame .. the last frame reached, in tracking order.
std::vector<TrackletRecord> TrackQueries(const FlowProvider& provider, int num_frames,
                                         int start_frame, Direction direction,
                                         const std::vector<Vec2>& queries,
                                         const TrackerOptions& options);

// Runs the evaluation protocol's queries: each init frame is tracked forward
// and, in strided mode, backward. Records are ordered like BuildEvalQueries.
std::vector<TrackletRecord> TrackProtocol(const FlowProvider& provider,
                                          const GroundTruthSet& gt, EvalMode mode,
                                          int stride, const TrackerOptions& options);

// Spreads records over the full timeline; frames not covered keep the query
// position and are marked occluded.
std::vector<QueryPrediction> ToPredictions(const std::vector<TrackletRecord>& records,
                                           int num_frames);

// Reference image masked by a checkerboard of `cell` pixels, forward-warped
// by the result flow onto the current image. Pixels of the current image that
// receive no unoccluded template pixel are darkened.
RgbImage RenderOverlay(const RgbImage& reference, const RgbImage& current,
                       const FouTriplet& result, float occlusion_threshold, int cell,
                       double darken = 0.5);

}  // namespace mft::cli

#endif  // MFT_CLI_PIPELINE_H_
