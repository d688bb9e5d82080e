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

#include "mft/tracker.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "mft/chaining.h"
#include "mft/sampling.h"

namespace mft {

Delta Delta::Frames(int n) {
  if (n < 1) ThrowInvalid("finite deltas must be positive, got " + std::to_string(n));
  return Delta(n);
}

std::string Delta::ToString() const {
  return is_infinite() ? "inf" : std::to_string(frames_);
}

DeltaSet::DeltaSet(std::vector<Delta> deltas) : deltas_(std::move(deltas)) {
  if (deltas_.empty()) ThrowInvalid("delta set is empty");
  if (deltas_.size() > 255) ThrowInvalid("delta set is too large");
  int infinite = 0;
  int last = 0;
  for (const Delta& d : deltas_) {
    if (d.is_infinite()) {
      ++infinite;
      continue;
    }
    if (d.frames() <= last) {
      ThrowInvalid("finite deltas must be strictly increasing: " + ToString());
    }
    last = d.frames();
  }
  if (infinite > 1) ThrowInvalid("inf appears more than once: " + ToString());
}

DeltaSet DeltaSet::Parse(std::string_view text) {
  std::vector<Delta> deltas;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item == "inf" || item == "INF" || item == "Inf") {
      deltas.push_back(Delta::Infinite());
    } else {
      int value = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        ThrowInvalid("bad delta '" + std::string(item) + "' in '" + std::string(text) + "'");
      }
      deltas.push_back(Delta::Frames(value));
    }
    pos = comma + 1;
  }
  return DeltaSet(std::move(deltas));
}

DeltaSet DeltaSet::Default() { return Parse("inf,1,2,4,8,16,32"); }

bool DeltaSet::has_infinite() const {
  return std::any_of(deltas_.begin(), deltas_.end(),
                     [](const Delta& d) { return d.is_infinite(); });
}

int DeltaSet::max_frames() const {
  int m = 0;
  for (const Delta& d : deltas_) {
    if (!d.is_infinite()) m = std::max(m, d.frames());
  }
  return m;
}

std::vector<int> DeltaSet::finite_deltas() const {
  std::vector<int> out;
  for (const Delta& d : deltas_) {
    if (!d.is_infinite()) out.push_back(d.frames());
  }
  return out;
}

std::string DeltaSet::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < deltas_.size(); ++i) {
    if (i) out += ",";
    out += deltas_[i].ToString();
  }
  return out;
}

std::string_view DirectionName(Direction d) {
  return d == Direction::kForward ? "fwd" : "bwd";
}

Direction ParseDirection(std::string_view text) {
  if (text == "fwd" || text == "forward") return Direction::kForward;
  if (text == "bwd" || text == "backward") return Direction::kBackward;
  ThrowInvalid("unknown direction '" + std::string(text) + "'");
}

RemappedProvider::RemappedProvider(const FlowProvider& base, int start,
                                   Direction direction)
    : base_(base), start_(start), direction_(direction) {
  if (start < 0) ThrowInvalid("negative start frame");
}

int RemappedProvider::ToBase(int frame) const {
  return direction_ == Direction::kForward ? start_ + frame : start_ - frame;
}

FouTriplet RemappedProvider::Get(int src, int dst) const {
  const int a = ToBase(src);
  const int b = ToBase(dst);
  if (a < 0 || b < 0) {
    ThrowInvalid("frame pair (" + std::to_string(src) + ", " + std::to_string(dst) +
                 ") maps before the start of the sequence");
  }
  FouTriplet t = base_.Get(a, b);
  t.src_frame = src;
  t.dst_frame = dst;
  return t;
}

bool RemappedProvider::Contains(int src, int dst) const {
  const int a = ToBase(src);
  const int b = ToBase(dst);
  return a >= 0 && b >= 0 && base_.Contains(a, b);
}

Tracker::Tracker(int width, int height, TrackerOptions options)
    : width_(width), height_(height), options_(std::move(options)) {
  if (width < 1 || height < 1) ThrowInvalid("tracker dimensions must be positive");
  const float th = options_.occlusion_threshold;
  if (!(th > 0.0f && th < 1.0f)) ThrowInvalid("occlusion threshold must lie in (0, 1)");
  memory_.emplace(0, FouTriplet::Identity(width, height, 0));
  last_selection_ = DeltaIndexMap(width, height);
  peak_memory_size_ = memory_.size();
}

const FouTriplet& Tracker::result(int frame) const {
  auto it = memory_.find(frame);
  if (it == memory_.end()) {
    ThrowInvalid("result for frame " + std::to_string(frame) + " is not memorized");
  }
  return it->second;
}

std::vector<int> Tracker::memorized_frames() const {
  std::vector<int> frames;
  for (const auto& [k, v] : memory_) frames.push_back(k);
  return frames;
}

const FouTriplet& Tracker::Step(const FlowProvider& provider) {
  const int t = current_frame_ + 1;
  const DeltaSet& deltas = options_.deltas;

  // Source frame per delta; -1 marks a clamped delta whose (0, t) flow the
  // provider cannot serve.
  std::vector<int> sources(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const Delta& d = deltas[i];
    if (d.is_infinite()) {
      sources[i] = 0;
    } else if (t - d.frames() >= 0) {
      sources[i] = t - d.frames();
    } else {
      sources[i] = provider.Contains(0, t) ? 0 : -1;
    }
  }

  const FouTriplet identity = FouTriplet::Identity(width_, height_, 0);
  std::map<int, FouTriplet> by_source;
  for (int s : sources) {
    if (s < 0 || by_source.count(s)) continue;
    const FouTriplet* prev = &identity;
    if (auto it = memory_.find(s); it != memory_.end()) {
      prev = &it->second;
    } else if (s != 0) {
      ThrowInvalid("result for frame " + std::to_string(s) + " was evicted");
    }
    FouTriplet step;
    try {
      step = provider.Get(s, t);
    } catch (const Error& e) {
      throw Error(e.code(), "fetching flow (" + std::to_string(s) + ", " +
                                std::to_string(t) + "): " + e.what());
    }
    ++provider_calls_;
    if (step.src_frame != s || step.dst_frame != t) {
      throw Error(ErrorCode::kInvalidArgument,
                  "provider returned pair (" + std::to_string(step.src_frame) + ", " +
                      std::to_string(step.dst_frame) + ") for (" + std::to_string(s) +
                      ", " + std::to_string(t) + ")");
    }
    by_source.emplace(s, Chain(*prev, step, options_.num_workers));
  }

  std::vector<const FouTriplet*> candidates(deltas.size(), nullptr);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (sources[i] >= 0) candidates[i] = &by_source.at(sources[i]);
  }
  last_selection_ = SelectBest(candidates, options_.occlusion_threshold,
                               options_.num_workers);
  FouTriplet result =
      ComposeResult(candidates, last_selection_, options_.num_workers);

  const int oldest_needed = t - deltas.max_frames();
  for (auto it = memory_.begin(); it != memory_.end();) {
    it = it->first < oldest_needed ? memory_.erase(it) : std::next(it);
  }
  current_frame_ = t;
  auto [it, inserted] = memory_.insert_or_assign(t, std::move(result));
  peak_memory_size_ = std::max(peak_memory_size_, memory_.size());
  return it->second;
}

void TrackSequence(const FlowProvider& provider, int start_frame,
                   int num_frames, const TrackerOptions& options,
                   Direction direction, const ResultSink& sink) {
  if (num_frames < 1) ThrowInvalid("num_frames must be at least 1");
  const RemappedProvider remapped(provider, start_frame, direction);
  Tracker tracker(provider.width(), provider.height(), options);
  sink(0, tracker.result(0), tracker);
  for (int i = 1; i < num_frames; ++i) {
    const FouTriplet& r = tracker.Step(remapped);
    sink(i, r, tracker);
  }
}

std::vector<FouTriplet> TrackSequence(const FlowProvider& provider,
                                      int start_frame, int num_frames,
                                      const TrackerOptions& options,
                                      Direction direction) {
  std::vector<FouTriplet> results;
  results.reserve(num_frames);
  TrackSequence(provider, start_frame, num_frames, options, direction,
                [&](int, const FouTriplet& r, const Tracker&) { results.push_back(r); });
  return results;
}

TrackletAccumulator::TrackletAccumulator(QuerySet queries,
                                         float occlusion_threshold)
    : queries_(std::move(queries)), threshold_(occlusion_threshold) {
  tracklets_.resize(queries_.size());
  for (std::size_t i = 0; i < queries_.size(); ++i) {
    tracklets_[i].query = queries_.points()[i];
  }
}

void TrackletAccumulator::Append(const FouTriplet& result) {
  for (std::size_t i = 0; i < queries_.size(); ++i) {
    const Vec2 q = queries_.points()[i];
    if (OutOfBounds(q, result.width(), result.height())) {
      ThrowInvalid("query outside the result grid");
    }
    TrackPoint p;
    p.position = q + SampleFlow(result.flow, q);
    p.occlusion_score = SampleScalar(result.occlusion, q);
    p.occluded = p.occlusion_score > threshold_;
    tracklets_[i].points.push_back(p);
  }
}

std::vector<Tracklet> ExtractTracklets(std::span<const FouTriplet> results,
                                       const QuerySet& queries,
                                       float occlusion_threshold) {
  TrackletAccumulator acc(queries, occlusion_threshold);
  for (const FouTriplet& r : results) acc.Append(r);
  return acc.tracklets();
}

}  // namespace mft
