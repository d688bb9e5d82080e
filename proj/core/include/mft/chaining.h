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

#ifndef MFT_CHAINING_H_
#define MFT_CHAINING_H_

#include "mft/core_types.h"

namespace mft {

// Composes a reference-to-s result with an s-to-t step into a reference-to-t
// candidate. For every pixel p, with q = p + prev.flow[p]:
//
//   flow[p]        = prev.flow[p] + step.flow<q>
//   occlusion[p]   = max(prev.occlusion[p], step.occlusion<q>)
//   uncertainty[p] = prev.uncertainty[p] + step.uncertainty<q>
//
// where <q> is clamped bilinear sampling. If q falls outside the image the
// occlusion is forced to 1.
//
// Requires prev.dst_frame == step.src_frame and equal grid sizes.
FouTriplet Chain(const FouTriplet& prev, const FouTriplet& step,
                 int num_workers = 1);

}  // namespace mft

#endif  // MFT_CHAINING_H_
