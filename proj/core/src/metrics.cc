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

#include "mft/metrics.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mft {

using nlohmann::json;

void GroundTruthSet::Validate() const {
  if (width < 1 || height < 1) ThrowInvalid("ground truth dimensions must be positive");
  if (num_frames < 1) ThrowInvalid("ground truth must cover at least one frame");
  for (const GroundTruthTrack& t : tracks) {
    if (t.positions.size() != static_cast<std::size_t>(num_frames) ||
        t.visible.size() != static_cast<std::size_t>(num_frames)) {
      ThrowInvalid("track " + std::to_string(t.id) + " does not cover every frame");
    }
    for (int f = 0; f < num_frames; ++f) {
      if (t.visible[f] && !IsFinite(t.positions[f])) {
        ThrowInvalid("track " + std::to_string(t.id) + " has a non-finite visible position");
      }
    }
  }
}

void WriteGroundTruth(const std::filesystem::path& path, const GroundTruthSet& gt) {
  gt.Validate();
  json j;
  j["version"] = 1;
  j["width"] = gt.width;
  j["height"] = gt.height;
  j["num_frames"] = gt.num_frames;
  j["points"] = json::array();
  for (const GroundTruthTrack& t : gt.tracks) {
    json p;
    p["id"] = t.id;
    std::vector<float> xs, ys;
    std::vector<int> vis;
    for (int f = 0; f < gt.num_frames; ++f) {
      xs.push_back(t.positions[f].x);
      ys.push_back(t.positions[f].y);
      vis.push_back(t.visible[f] ? 1 : 0);
    }
    p["x"] = xs;
    p["y"] = ys;
    p["visible"] = vis;
    j["points"].push_back(std::move(p));
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(1) << "\n";
}

GroundTruthSet ReadGroundTruth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  GroundTruthSet gt;
  try {
    const json j = json::parse(in);
    if (j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "unsupported ground truth version in " + path.string());
    }
    gt.width = j.at("width").get<int>();
    gt.height = j.at("height").get<int>();
    gt.num_frames = j.at("num_frames").get<int>();
    for (const json& p : j.at("points")) {
      GroundTruthTrack t;
      t.id = p.at("id").get<int>();
      const auto xs = p.at("x").get<std::vector<float>>();
      const auto ys = p.at("y").get<std::vector<float>>();
      const auto vis = p.at("visible").get<std::vector<int>>();
      if (xs.size() != ys.size() || xs.size() != vis.size()) {
        throw Error(ErrorCode::kParse, "point " + std::to_string(t.id) + " has ragged arrays");
      }
      for (std::size_t f = 0; f < xs.size(); ++f) {
        t.positions.push_back({xs[f], ys[f]});
        t.visible.push_back(vis[f] != 0);
      }
      gt.tracks.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  try {
    gt.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return gt;
}

std::optional<double> ThresholdStats::fraction_within() const {
  if (visible == 0) return std::nullopt;
  return static_cast<double>(within) / static_cast<double>(visible);
}

std::optional<double> ThresholdStats::jaccard() const {
  const long denom = true_positive + false_positive + false_negative;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(true_positive) / static_cast<double>(denom);
}

MetricCounts::MetricCounts() {
  for (std::size_t i = 0; i < kPositionThresholds.size(); ++i) {
    per_threshold[i].threshold = kPositionThresholds[i];
  }
}

void MetricCounts::Add(Vec2 predicted, bool predicted_occluded, Vec2 truth,
                       bool truth_visible) {
  ++frames;
  if (predicted_occluded == !truth_visible) ++occlusion_correct;
  const double error =
      std::hypot(static_cast<double>(predicted.x) - truth.x,
                 static_cast<double>(predicted.y) - truth.y);
  for (ThresholdStats& s : per_threshold) {
    const bool close = truth_visible && error < s.threshold;
    if (truth_visible) {
      ++s.visible;
      if (close) ++s.within;
    }
    if (truth_visible && !predicted_occluded && close) ++s.true_positive;
    if (!predicted_occluded && (!truth_visible || !close)) ++s.false_positive;
    if (truth_visible && (predicted_occluded || !close)) ++s.false_negative;
  }
}

void MetricCounts::Merge(const MetricCounts& other) {
  frames += other.frames;
  occlusion_correct += other.occlusion_correct;
  for (std::size_t i = 0; i < per_threshold.size(); ++i) {
    ThresholdStats& a = per_threshold[i];
    const ThresholdStats& b = other.per_threshold[i];
    a.within += b.within;
    a.visible += b.visible;
    a.true_positive += b.true_positive;
    a.false_positive += b.false_positive;
    a.false_negative += b.false_negative;
  }
}

namespace {

void CheckLengths(std::size_t a, std::size_t b) {
  if (a != b) {
    ThrowInvalid("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

MetricCounts Count(const std::vector<Vec2>& predicted,
                   const std::vector<bool>& predicted_occluded,
                   const std::vector<Vec2>& truth,
                   const std::vector<bool>& gt_visible) {
  CheckLengths(predicted.size(), truth.size());
  CheckLengths(predicted.size(), gt_visible.size());
  CheckLengths(predicted.size(), predicted_occluded.size());
  MetricCounts counts;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    counts.Add(predicted[i], predicted_occluded[i], truth[i], gt_visible[i]);
  }
  return counts;
}

}  // namespace

double OcclusionAccuracy(const std::vector<bool>& predicted_occluded,
                         const std::vector<bool>& gt_visible) {
  CheckLengths(predicted_occluded.size(), gt_visible.size());
  if (gt_visible.empty()) ThrowInvalid("no frames to score");
  long correct = 0;
  for (std::size_t i = 0; i < gt_visible.size(); ++i) {
    if (predicted_occluded[i] == !gt_visible[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gt_visible.size());
}

std::optional<double> PositionAccuracy(const std::vector<Vec2>& predicted,
                                       const std::vector<Vec2>& truth,
                                       const std::vector<bool>& gt_visible) {
  const std::vector<bool> never_occluded(predicted.size(), false);
  return EvalReport::FromCounts(Count(predicted, never_occluded, truth, gt_visible))
      .position_accuracy;
}

std::optional<double> AverageJaccard(const std::vector<Vec2>& predicted,
                                     const std::vector<bool>& predicted_occluded,
                                     const std::vector<Vec2>& truth,
                                     const std::vector<bool>& gt_visible) {
  return EvalReport::FromCounts(Count(predicted, predicted_occluded, truth, gt_visible))
      .average_jaccard;
}

double PckT(const std::vector<Vec2>& predicted, const std::vector<Vec2>& truth,
            double mask_area) {
  if (!(mask_area > 0.0)) ThrowInvalid("mask area must be positive");
  CheckLengths(predicted.size(), truth.size());
  if (predicted.empty()) ThrowInvalid("no points to score");
  const double threshold = 0.2 * std::sqrt(mask_area);
  long within = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = std::hypot(static_cast<double>(predicted[i].x) - truth[i].x,
                                static_cast<double>(predicted[i].y) - truth[i].y);
    if (e < threshold) ++within;
  }
  return static_cast<double>(within) / static_cast<double>(predicted.size());
}

EvalReport EvalReport::FromCounts(const MetricCounts& counts) {
  EvalReport r;
  r.counts = counts;
  if (counts.frames > 0) {
    r.occlusion_accuracy =
        static_cast<double>(counts.occlusion_correct) / static_cast<double>(counts.frames);
  }
  double fraction_sum = 0.0, jaccard_sum = 0.0;
  bool have_fraction = true, have_jaccard = true;
  for (const ThresholdStats& s : counts.per_threshold) {
    if (auto f = s.fraction_within()) fraction_sum += *f; else have_fraction = false;
    if (auto j = s.jaccard()) jaccard_sum += *j; else have_jaccard = false;
  }
  const double n = static_cast<double>(counts.per_threshold.size());
  if (have_fraction) r.position_accuracy = fraction_sum / n;
  if (have_jaccard) r.average_jaccard = jaccard_sum / n;
  return r;
}

namespace {

json OptionalJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string Percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * *v);
  return buf;
}

}  // namespace

std::string EvalReport::ToJson() const {
  json j;
  j["average_jaccard"] = OptionalJson(average_jaccard);
  j["position_accuracy"] = OptionalJson(position_accuracy);
  j["occlusion_accuracy"] = OptionalJson(occlusion_accuracy);
  j["pck_t"] = OptionalJson(pck_t);
  j["num_queries"] = num_queries;
  j["frames"] = counts.frames;
  j["occlusion_correct"] = counts.occlusion_correct;
  j["per_threshold"] = json::array();
  for (const ThresholdStats& s : counts.per_threshold) {
    j["per_threshold"].push_back({{"threshold", s.threshold},
                                  {"within", s.within},
                                  {"visible", s.visible},
                                  {"tp", s.true_positive},
                                  {"fp", s.false_positive},
                                  {"fn", s.false_negative},
                                  {"fraction_within", OptionalJson(s.fraction_within())},
                                  {"jaccard", OptionalJson(s.jaccard())}});
  }
  return j.dump(2);
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s\n", "threshold", "<delta",
                "jaccard", "visible");
  out << line;
  for (const ThresholdStats& s : counts.per_threshold) {
    std::snprintf(line, sizeof(line), "%-10g %10s %10s %10ld\n", s.threshold,
                  Percent(s.fraction_within()).c_str(), Percent(s.jaccard()).c_str(),
                  s.visible);
    out << line;
  }
  std::snprintf(line, sizeof(line), "AJ %s  <delta_avg %s  OA %s  queries %ld  frames %ld\n",
                Percent(average_jaccard).c_str(), Percent(position_accuracy).c_str(),
                Percent(occlusion_accuracy).c_str(), num_queries, counts.frames);
  out << line;
  if (pck_t) out << "PCK-T " << Percent(pck_t) << "\n";
  return out.str();
}

std::string_view EvalModeName(EvalMode mode) {
  return mode == EvalMode::kFirst ? "first" : "strided";
}

EvalMode ParseEvalMode(std::string_view text) {
  if (text == "first") return EvalMode::kFirst;
  if (text == "strided") return EvalMode::kStrided;
  ThrowInvalid("unknown evaluation mode '" + std::string(text) + "'");
}

Rescale Rescale::Parse(std::string_view text) {
  Rescale r;
  char tail = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%dx%d:%dx%d%c", &r.from_width, &r.from_height,
                  &r.to_width, &r.to_height, &tail) != 4 ||
      r.from_width < 1 || r.from_height < 1 || r.to_width < 1 || r.to_height < 1) {
    ThrowInvalid("bad rescale '" + s + "', expected WxH:WxH");
  }
  return r;
}

Vec2 Rescale::Apply(Vec2 p) const {
  const double sx = static_cast<double>(to_width) / from_width;
  const double sy = static_cast<double>(to_height) / from_height;
  return {static_cast<float>(p.x * sx), static_cast<float>(p.y * sy)};
}

std::vector<int> StridedInitFrames(int num_frames, int stride) {
  if (stride < 1) ThrowInvalid("stride must be positive");
  std::vector<int> frames;
  for (int f = 0; f < num_frames; f += stride) frames.push_back(f);
  return frames;
}

std::vector<EvalQuery> BuildEvalQueries(const GroundTruthSet& gt, EvalMode mode,
                                        int stride) {
  std::vector<EvalQuery> queries;
  for (const GroundTruthTrack& t : gt.tracks) {
    if (mode == EvalMode::kFirst) {
      for (int f = 0; f < gt.num_frames; ++f) {
        if (t.visible[f]) {
          queries.push_back({t.id, f, t.positions[f]});
          break;
        }
      }
    } else {
      for (int f : StridedInitFrames(gt.num_frames, stride)) {
        if (t.visible[f]) queries.push_back({t.id, f, t.positions[f]});
      }
    }
  }
  return queries;
}

std::vector<int> EvaluatedFrames(EvalMode mode, int init_frame, int num_frames) {
  std::vector<int> frames;
  for (int f = mode == EvalMode::kFirst ? init_frame + 1 : 0; f < num_frames; ++f) {
    if (f != init_frame) frames.push_back(f);
  }
  return frames;
}

EvalReport Evaluate(const std::vector<QueryPrediction>& predictions,
                    const GroundTruthSet& gt, const EvalOptions& options) {
  gt.Validate();
  const Rescale rescale = options.rescale.value_or(Rescale::Identity(gt.width, gt.height));
  if (rescale.to_width != gt.width || rescale.to_height != gt.height) {
    ThrowInvalid("rescale target " + std::to_string(rescale.to_width) + "x" +
                 std::to_string(rescale.to_height) + " differs from ground truth " +
                 std::to_string(gt.width) + "x" + std::to_string(gt.height));
  }
  if (options.pck_mask_area && !(*options.pck_mask_area > 0.0)) {
    ThrowInvalid("mask area must be positive");
  }
  std::map<std::pair<int, int>, const QueryPrediction*> by_key;
  for (const QueryPrediction& p : predictions) {
    if (p.positions.size() != static_cast<std::size_t>(gt.num_frames) ||
        p.occluded.size() != static_cast<std::size_t>(gt.num_frames)) {
      ThrowInvalid("prediction for point " + std::to_string(p.point_id) +
                   " does not span every frame");
    }
    by_key[{p.point_id, p.init_frame}] = &p;
  }
  std::map<int, const GroundTruthTrack*> tracks;
  for (const GroundTruthTrack& t : gt.tracks) tracks[t.id] = &t;

  const double pck_threshold =
      options.pck_mask_area ? 0.2 * std::sqrt(*options.pck_mask_area) : 0.0;
  MetricCounts counts;
  long queries = 0, pck_frames = 0, pck_within = 0;
  for (const EvalQuery& q : BuildEvalQueries(gt, options.mode, options.stride)) {
    auto it = by_key.find({q.point_id, q.init_frame});
    if (it == by_key.end()) {
      ThrowInvalid("no prediction for point " + std::to_string(q.point_id) +
                   " initialized at frame " + std::to_string(q.init_frame));
    }
    ++queries;
    const QueryPrediction& pred = *it->second;
    const GroundTruthTrack& truth = *tracks.at(q.point_id);
    for (int f : EvaluatedFrames(options.mode, q.init_frame, gt.num_frames)) {
      const Vec2 p = rescale.Apply(pred.positions[f]);
      counts.Add(p, pred.occluded[f], truth.positions[f], truth.visible[f]);
      if (options.pck_mask_area && truth.visible[f]) {
        ++pck_frames;
        const double e = std::hypot(static_cast<double>(p.x) - truth.positions[f].x,
                                    static_cast<double>(p.y) - truth.positions[f].y);
        if (e < pck_threshold) ++pck_within;
      }
    }
  }
  EvalReport report = EvalReport::FromCounts(counts);
  report.num_queries = queries;
  report.pck_frames = pck_frames;
  report.pck_within = pck_within;
  if (options.pck_mask_area && pck_frames > 0) {
    report.pck_t = static_cast<double>(pck_within) / static_cast<double>(pck_frames);
  }
  return report;
}

}  // namespace mft
