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

#ifndef MFT_SELECTOR_H_
#define MFT_SELECTOR_H_

#include <span>
#include <vector>

#include "mft/core_types.h"

namespace mft {

inline constexpr float kDefaultOcclusionThreshold = 0.02f;

// Candidates are passed by pointer so that one triplet may stand in for
// several list positions. A null entry marks an unavailable candidate that
// can never be selected; at least one entry must be non-null.
using CandidateList = std::span<const FouTriplet* const>;

// Per pixel: among candidates whose occlusion is <= threshold, the index of
// the lowest uncertainty (earliest wins ties). When every candidate is
// occluded, the first non-null candidate is chosen.
DeltaIndexMap SelectBest(CandidateList candidates, float occlusion_threshold,
                         int num_workers = 1);
DeltaIndexMap SelectBest(std::span<const FouTriplet> candidates,
                         float occlusion_threshold, int num_workers = 1);

// Copies every pixel of flow, occlusion and uncertainty from the candidate
// named by the index map.
FouTriplet ComposeResult(CandidateList candidates,
                         const DeltaIndexMap& index_map, int num_workers = 1);
FouTriplet ComposeResult(std::span<const FouTriplet> candidates,
                         const DeltaIndexMap& index_map, int num_workers = 1);

}  // namespace mft

#endif  // MFT_SELECTOR_H_
