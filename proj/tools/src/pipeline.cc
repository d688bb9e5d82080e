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

#include "mft_cli/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mft::cli {

using nlohmann::json;

std::string TrackletFile::ToJson() const {
  json j;
  j["version"] = 1;
  j["width"] = width;
  j["height"] = height;
  j["num_frames"] = num_frames;
  j["deltas"] = deltas;
  // Shortest decimal that reads back as the same float.
  char th[32];
  for (int digits = 1; digits <= 9; ++digits) {
    std::snprintf(th, sizeof(th), "%.*g", digits, occlusion_threshold);
    if (std::strtof(th, nullptr) == occlusion_threshold) break;
  }
  j["occlusion_threshold"] = std::strtod(th, nullptr);
  j["seed"] = seed;
  j["tracks"] = json::array();
  for (const TrackletRecord& r : tracks) {
    json t;
    t["point_id"] = r.point_id;
    t["init_frame"] = r.init_frame;
    t["query"] = {r.query.x, r.query.y};
    t["frames"] = r.frames;
    std::vector<float> xs, ys;
    std::vector<int> occ;
    for (std::size_t i = 0; i < r.positions.size(); ++i) {
      xs.push_back(r.positions[i].x);
      ys.push_back(r.positions[i].y);
      occ.push_back(r.occluded[i] ? 1 : 0);
    }
    t["x"] = xs;
    t["y"] = ys;
    t["occluded"] = occ;
    t["occlusion_score"] = r.occlusion_scores;
    j["tracks"].push_back(std::move(t));
  }
  return j.dump(1);
}

TrackletFile TrackletFile::FromJson(const std::string& text) {
  TrackletFile f;
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "unsupported tracklet file version");
    }
    f.width = j.at("width").get<int>();
    f.height = j.at("height").get<int>();
    f.num_frames = j.at("num_frames").get<int>();
    f.deltas = j.value("deltas", std::string());
    f.occlusion_threshold = j.value("occlusion_threshold", kDefaultOcclusionThreshold);
    f.seed = j.value("seed", std::uint64_t{0});
    for (const json& t : j.at("tracks")) {
      TrackletRecord r;
      r.point_id = t.at("point_id").get<int>();
      r.init_frame = t.at("init_frame").get<int>();
      const auto q = t.at("query").get<std::vector<float>>();
      if (q.size() != 2) throw Error(ErrorCode::kParse, "query needs 2 coordinates");
      r.query = {q[0], q[1]};
      r.frames = t.at("frames").get<std::vector<int>>();
      const auto xs = t.at("x").get<std::vector<float>>();
      const auto ys = t.at("y").get<std::vector<float>>();
      const auto occ = t.at("occluded").get<std::vector<int>>();
      r.occlusion_scores = t.value("occlusion_score", std::vector<float>(xs.size(), 0.0f));
      const std::size_t n = r.frames.size();
      if (xs.size() != n || ys.size() != n || occ.size() != n || r.occlusion_scores.size() != n) {
        throw Error(ErrorCode::kParse, "track " + std::to_string(r.point_id) +
                                           " has arrays of different lengths");
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (r.frames[i] < 0 || r.frames[i] >= f.num_frames) {
          throw Error(ErrorCode::kParse, "track " + std::to_string(r.point_id) +
                                             " references frame " + std::to_string(r.frames[i]));
        }
        r.positions.push_back({xs[i], ys[i]});
        r.occluded.push_back(occ[i] != 0);
      }
      f.tracks.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("tracklets: ") + e.what());
  }
  return f;
}

void WriteTracklets(const std::filesystem::path& path, const TrackletFile& file) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << file.ToJson() << "\n";
}

TrackletFile ReadTracklets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return TrackletFile::FromJson(ss.str());
}

std::vector<TrackletRecord> TrackQueries(const FlowProvider& provider, int num_frames,
                                         int start_frame, Direction direction,
                                         const std::vector<Vec2>& queries,
                                         const TrackerOptions& options) {
  if (start_frame < 0 || start_frame >= num_frames) {
    ThrowInvalid("start frame " + std::to_string(start_frame) + " outside the sequence");
  }
  const int steps =
      direction == Direction::kForward ? num_frames - start_frame : start_frame + 1;
  TrackletAccumulator acc(QuerySet(queries, provider.width(), provider.height()),
                          options.occlusion_threshold);
  TrackSequence(provider, start_frame, steps, options, direction,
                [&](int, const FouTriplet& r, const Tracker&) { acc.Append(r); });
  std::vector<TrackletRecord> out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Tracklet& t = acc.tracklets()[i];
    TrackletRecord r;
    r.point_id = static_cast<int>(i);
    r.init_frame = start_frame;
    r.query = queries[i];
    for (int k = 0; k < steps; ++k) {
      r.frames.push_back(direction == Direction::kForward ? start_frame + k : start_frame - k);
      r.positions.push_back(t.points[k].position);
      r.occluded.push_back(t.points[k].occluded);
      r.occlusion_scores.push_back(t.points[k].occlusion_score);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrackletRecord> TrackProtocol(const FlowProvider& provider,
                                          const GroundTruthSet& gt, EvalMode mode,
                                          int stride, const TrackerOptions& options) {
  gt.Validate();
  const std::vector<EvalQuery> queries = BuildEvalQueries(gt, mode, stride);
  // Ground truth may live at another resolution than the flows.
  const double sx = static_cast<double>(provider.width()) / gt.width;
  const double sy = static_cast<double>(provider.height()) / gt.height;
  auto to_tracker = [&](Vec2 p) {
    return Vec2{static_cast<float>(std::clamp(p.x * sx, 0.0, provider.width() - 1.0)),
                static_cast<float>(std::clamp(p.y * sy, 0.0, provider.height() - 1.0))};
  };

  std::map<int, std::vector<std::size_t>> by_frame;
  for (std::size_t i = 0; i < queries.size(); ++i) by_frame[queries[i].init_frame].push_back(i);

  std::vector<TrackletRecord> out(queries.size());
  for (const auto& [frame, idx] : by_frame) {
    std::vector<Vec2> points;
    for (std::size_t i : idx) points.push_back(to_tracker(queries[i].position));
    auto fwd = TrackQueries(provider, gt.num_frames, frame, Direction::kForward, points, options);
    std::vector<TrackletRecord> bwd;
    if (mode == EvalMode::kStrided && frame > 0) {
      bwd = TrackQueries(provider, gt.num_frames, frame, Direction::kBackward, points, options);
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      TrackletRecord r = std::move(fwd[k]);
      r.point_id = queries[idx[k]].point_id;
      if (!bwd.empty()) {
        const TrackletRecord& b = bwd[k];
        for (std::size_t i = 1; i < b.frames.size(); ++i) {
          r.frames.push_back(b.frames[i]);
          r.positions.push_back(b.positions[i]);
          r.occluded.push_back(b.occluded[i]);
          r.occlusion_scores.push_back(b.occlusion_scores[i]);
        }
      }
      out[idx[k]] = std::move(r);
    }
  }
  return out;
}

std::vector<QueryPrediction> ToPredictions(const std::vector<TrackletRecord>& records,
                                           int num_frames) {
  std::vector<QueryPrediction> out;
  for (const TrackletRecord& r : records) {
    QueryPrediction p;
    p.point_id = r.point_id;
    p.init_frame = r.init_frame;
    p.positions.assign(num_frames, r.query);
    p.occluded.assign(num_frames, true);
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
      const int f = r.frames[i];
      if (f < 0 || f >= num_frames) ThrowInvalid("record frame outside the sequence");
      p.positions[f] = r.positions[i];
      p.occluded[f] = r.occluded[i];
    }
    out.push_back(std::move(p));
  }
  return out;
}

RgbImage RenderOverlay(const RgbImage& reference, const RgbImage& current,
                       const FouTriplet& result, float occlusion_threshold, int cell,
                       double darken) {
  if (cell < 1) ThrowInvalid("checkerboard cell must be at least 1 pixel");
  const int w = current.width, h = current.height;
  if (reference.width != result.width() || reference.height != result.height() ||
      current.width != result.width() || current.height != result.height()) {
    ThrowInvalid("frames and tracking result differ in size");
  }
  std::vector<bool> matched(static_cast<std::size_t>(w) * h, false);
  std::vector<std::pair<std::size_t, Rgb>> splats;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (result.occlusion(x, y) > occlusion_threshold) continue;
      const Vec2 f = result.flow(x, y);
      const long qx = std::lround(x + static_cast<double>(f.x));
      const long qy = std::lround(y + static_cast<double>(f.y));
      if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
      const std::size_t q = static_cast<std::size_t>(qy) * w + static_cast<std::size_t>(qx);
      matched[q] = true;
      if (((x / cell) + (y / cell)) % 2 == 0) splats.emplace_back(q, reference.at(x, y));
    }
  }
  RgbImage out = current;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i]) continue;
    for (auto& c : out.pixels[i]) c = static_cast<std::uint8_t>(std::lround(c * darken));
  }
  for (const auto& [q, color] : splats) out.pixels[q] = color;
  return out;
}

}  // namespace mft::cli
