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

#include "reference_tracker.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace mft::testing {

double ReferenceSample(const std::vector<float>& values, int width, int height,
                       int stride, int offset, double x, double y) {
  x = std::min(std::max(x, 0.0), double(width - 1));
  y = std::min(std::max(y, 0.0), double(height - 1));
  const int x0 = int(std::floor(x)), y0 = int(std::floor(y));
  const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
  const double ax = x - x0, ay = y - y0;
  auto at = [&](int xx, int yy) {
    return double(values[(std::size_t(yy) * width + xx) * stride + offset]);
  };
  const double top = (1 - ax) * at(x0, y0) + ax * at(x1, y0);
  const double bottom = (1 - ax) * at(x0, y1) + ax * at(x1, y1);
  return (1 - ay) * top + ay * bottom;
}

namespace {

struct PairData {
  int width, height;
  std::vector<float> flow;  // interleaved dx, dy
  std::vector<float> occlusion;
  std::vector<float> uncertainty;
};

class PairCache {
 public:
  explicit PairCache(const FlowProvider& provider) : provider_(provider) {}

  const PairData& Get(int s, int t) {
    auto it = cache_.find({s, t});
    if (it != cache_.end()) return it->second;
    const FouTriplet fou = provider_.Get(s, t);
    PairData d{fou.width(), fou.height(), {}, {}, {}};
    for (const Vec2& v : fou.flow.data()) {
      d.flow.push_back(v.x);
      d.flow.push_back(v.y);
    }
    d.occlusion.assign(fou.occlusion.data().begin(), fou.occlusion.data().end());
    d.uncertainty.assign(fou.uncertainty.data().begin(), fou.uncertainty.data().end());
    return cache_.emplace(std::make_pair(s, t), std::move(d)).first->second;
  }

 private:
  const FlowProvider& provider_;
  std::map<std::pair<int, int>, PairData> cache_;
};

std::vector<ReferenceState> TrackOne(PairCache& pairs, const DeltaSet& deltas,
                                     float threshold, int px, int py, int num_frames) {
  std::vector<ReferenceState> history(num_frames);
  for (int t = 1; t < num_frames; ++t) {
    std::vector<ReferenceState> cands;
    for (const Delta& d : deltas.deltas()) {
      const int s = d.is_infinite() ? 0 : std::max(0, t - d.frames());
      const ReferenceState& prev = history[s];
      const PairData& pd = pairs.Get(s, t);
      const float qx = float(px) + prev.flow.x;
      const float qy = float(py) + prev.flow.y;
      ReferenceState c;
      c.flow.x = prev.flow.x +
                 float(ReferenceSample(pd.flow, pd.width, pd.height, 2, 0, qx, qy));
      c.flow.y = prev.flow.y +
                 float(ReferenceSample(pd.flow, pd.width, pd.height, 2, 1, qx, qy));
      c.occlusion = std::max(
          prev.occlusion,
          float(ReferenceSample(pd.occlusion, pd.width, pd.height, 1, 0, qx, qy)));
      if (qx < 0 || qy < 0 || qx > float(pd.width - 1) || qy > float(pd.height - 1))
        c.occlusion = 1.0f;
      c.uncertainty = prev.uncertainty +
                      float(ReferenceSample(pd.uncertainty, pd.width, pd.height, 1, 0, qx, qy));
      cands.push_back(c);
    }
    int best = -1;
    for (int i = 0; i < int(cands.size()); ++i) {
      if (cands[i].occlusion > threshold) continue;
      if (best < 0 || cands[i].uncertainty < cands[best].uncertainty) best = i;
    }
    if (best < 0) best = 0;
    history[t] = cands[best];
    history[t].selected = best;
  }
  return history;
}

}  // namespace

std::vector<ReferenceState> ReferenceTrackPixel(const FlowProvider& provider,
                                                const DeltaSet& deltas, float threshold,
                                                int px, int py, int num_frames) {
  PairCache pairs(provider);
  return TrackOne(pairs, deltas, threshold, px, py, num_frames);
}

std::vector<std::vector<ReferenceState>> ReferenceTrackAll(const FlowProvider& provider,
                                                           const DeltaSet& deltas,
                                                           float threshold,
                                                           int num_frames) {
  PairCache pairs(provider);
  const int w = provider.width(), h = provider.height();
  std::vector<std::vector<ReferenceState>> out(num_frames,
                                               std::vector<ReferenceState>(std::size_t(w) * h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto track = TrackOne(pairs, deltas, threshold, x, y, num_frames);
      for (int t = 0; t < num_frames; ++t) out[t][std::size_t(y) * w + x] = track[t];
    }
  }
  return out;
}

}  // namespace mft::testing
