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

#include "mft_cli/commands.h"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mft/flowio.h"
#include "mft/image.h"
#include "mft_cli/pipeline.h"

namespace mft::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string ReadText(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text << "\n";
}

// Runs fn and reports mft::Error as a usage problem with the given flag.
template <typename Fn>
auto AsUsage(const std::string& flag, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string FramePath(int frame) {
  char name[32];
  std::snprintf(name, sizeof(name), "%05d.ppm", frame);
  return name;
}

DeltaSet ResolveDeltas(const std::string& flag, const OpenedProvider& opened) {
  std::string text = flag;
  if (text.empty()) text = opened.file_backed ? opened.manifest_deltas : DeltaSet::Default().ToString();
  DeltaSet deltas = AsUsage("--deltas", [&] { return DeltaSet::Parse(text); });
  if (opened.file_backed && deltas.has_infinite()) {
    throw UsageError("--deltas: the inf delta needs direct flows, which precomputed "
                     "manifests never hold; use finite deltas such as 1,2,4,8,16,32");
  }
  return deltas;
}

void CheckThreshold(float th) {
  if (!(th > 0.0f && th < 1.0f)) throw UsageError("--occl-thresh must lie in (0, 1)");
}

}  // namespace

OpenedProvider OpenProvider(const ProviderArgs& args) {
  if (args.manifest.empty() == args.scene.empty()) {
    throw UsageError("give exactly one of --manifest or --scene");
  }
  OpenedProvider out;
  if (!args.manifest.empty()) {
    if (!args.noise.empty()) throw UsageError("--noise only applies to --scene");
    auto p = std::make_unique<PrecomputedProvider>(args.manifest);
    out.num_frames = p->manifest().num_frames;
    out.manifest_deltas = p->manifest().deltas.ToString();
    out.file_backed = true;
    out.provider = std::move(p);
  } else {
    SceneModel scene = LoadScene(args.scene);
    std::optional<NoiseModel> noise;
    if (!args.noise.empty()) noise = ParseNoiseModel(ReadText(args.noise));
    out.num_frames = scene.num_frames;
    out.provider = std::make_unique<SyntheticProvider>(std::move(scene), noise);
  }
  return out;
}

void RunSynth(const SynthArgs& args, std::ostream& log) {
  if (args.out.empty()) throw UsageError("--out is required");
  if (args.points < 0) throw UsageError("--points must be non-negative");
  const DeltaSet deltas = AsUsage("--deltas", [&] { return DeltaSet::Parse(args.deltas); });
  if (deltas.has_infinite()) {
    throw UsageError("--deltas: inf flows cannot be precomputed; their number grows "
                     "quadratically with the frame count");
  }
  NoiseModel noise = args.inline_noise;
  noise.seed = args.seed;
  if (!args.noise.empty()) {
    noise = ParseNoiseModel(ReadText(args.noise));
  } else {
    AsUsage("noise flags", [&] { noise.Validate(); return 0; });
  }
  const SceneModel scene =
      args.scene.empty()
          ? AsUsage("scene flags", [&] { return GenerateRandomScene(args.random, args.seed); })
          : LoadScene(args.scene);

  const fs::path out(args.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out.string() + ": " + ec.message());

  Manifest manifest;
  manifest.width = scene.width;
  manifest.height = scene.height;
  manifest.num_frames = scene.num_frames;
  manifest.deltas = deltas;
  for (const auto& [a, b] : RequiredPairs(scene.num_frames, deltas)) {
    FouTriplet t = GroundTruthFlow(scene, a, b);
    if (!noise.IsNoiseFree()) t = Corrupt(t, noise);
    manifest.pairs[{a, b}] = WriteTriplet(out, t);
  }
  WriteManifest(out / "manifest.json", manifest);
  SaveScene(out / "scene.json", scene);
  WriteText(out / "noise.json", NoiseModelToJson(noise));
  WriteGroundTruth(out / "gt.json", SampleGroundTruth(scene, args.points, args.seed));
  if (args.write_frames) {
    fs::create_directories(out / "frames");
    for (int f = 0; f < scene.num_frames; ++f) {
      WritePpm(out / "frames" / FramePath(f), RenderFrame(scene, f));
    }
  }
  log << "wrote " << manifest.pairs.size() << " flow pairs for " << scene.num_frames
      << " frames to " << out.string() << "\n";
}

void RunTrack(const TrackArgs& args, std::ostream& log) {
  if (args.out.empty()) throw UsageError("--out is required");
  if (args.queries.empty() == args.gt.empty()) {
    throw UsageError("give exactly one of --queries or --gt");
  }
  if (args.workers < 0) throw UsageError("--workers must be non-negative");
  CheckThreshold(args.occlusion_threshold);
  const Direction direction =
      AsUsage("--direction", [&] { return ParseDirection(args.direction); });
  const EvalMode mode = AsUsage("--mode", [&] { return ParseEvalMode(args.mode); });
  const OpenedProvider opened = OpenProvider(args.source);
  TrackerOptions options{ResolveDeltas(args.deltas, opened), args.occlusion_threshold,
                         args.workers};
  const FlowProvider& provider = *opened.provider;

  TrackletFile file;
  file.width = provider.width();
  file.height = provider.height();
  file.num_frames = opened.num_frames;
  file.deltas = options.deltas.ToString();
  file.occlusion_threshold = options.occlusion_threshold;
  file.seed = args.seed;

  if (!args.gt.empty()) {
    if (!args.dense_out.empty()) throw UsageError("--dense-out needs --queries");
    const GroundTruthSet gt = ReadGroundTruth(args.gt);
    if (gt.num_frames != opened.num_frames) {
      throw Error(ErrorCode::kBadDimensions, "ground truth covers " +
                                                 std::to_string(gt.num_frames) +
                                                 " frames, flows cover " +
                                                 std::to_string(opened.num_frames));
    }
    file.tracks = TrackProtocol(provider, gt, mode, args.stride, options);
  } else {
    json q;
    try {
      q = json::parse(ReadText(args.queries));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("queries: ") + e.what());
    }
    std::vector<Vec2> points;
    int start = direction == Direction::kForward ? 0 : opened.num_frames - 1;
    try {
      start = q.value("frame", start);
      for (const json& p : q.at("points")) {
        const auto v = p.get<std::vector<float>>();
        if (v.size() != 2) throw Error(ErrorCode::kParse, "query points need 2 coordinates");
        points.push_back({v[0], v[1]});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("queries: ") + e.what());
    }
    if (args.start >= 0) start = args.start;
    if (start >= opened.num_frames) throw UsageError("--start lies beyond the last frame");
    try {
      QuerySet(points, provider.width(), provider.height());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, std::string("queries: ") + e.what());
    }
    file.tracks = TrackQueries(provider, opened.num_frames, start, direction, points, options);

    if (!args.dense_out.empty()) {
      const fs::path dir(args.dense_out);
      fs::create_directories(dir);
      json index;
      index["version"] = 1;
      index["width"] = provider.width();
      index["height"] = provider.height();
      index["start_frame"] = start;
      index["direction"] = std::string(DirectionName(direction));
      index["deltas"] = options.deltas.ToString();
      index["frames"] = json::array();
      const int steps = direction == Direction::kForward ? opened.num_frames - start : start + 1;
      TrackSequence(provider, start, steps, options, direction,
                    [&](int t, const FouTriplet& r, const Tracker&) {
                      const ManifestEntry e = WriteTriplet(dir, r);
                      index["frames"].push_back(
                          {{"frame", t},
                           {"sequence_frame",
                            direction == Direction::kForward ? start + t : start - t},
                           {"flow", e.flow.generic_string()},
                           {"occlusion", e.occlusion.generic_string()},
                           {"uncertainty", e.uncertainty.generic_string()}});
                    });
      WriteText(dir / "index.json", index.dump(1));
    }
  }
  WriteTracklets(args.out, file);
  log << "tracked " << file.tracks.size() << " queries with deltas " << file.deltas << "\n";
}

void RunEval(const EvalArgs& args, std::ostream& out) {
  EvalOptions options;
  options.mode = AsUsage("--mode", [&] { return ParseEvalMode(args.mode); });
  if (!args.rescale.empty()) {
    options.rescale = AsUsage("--rescale", [&] { return Rescale::Parse(args.rescale); });
  }
  if (args.pck_area < 0) throw UsageError("--pck-area must be positive");
  if (args.pck_area > 0) options.pck_mask_area = args.pck_area;
  if (args.stride < 1) throw UsageError("--stride must be positive");
  options.stride = args.stride;

  const TrackletFile tracklets = ReadTracklets(args.tracklets);
  const GroundTruthSet gt = ReadGroundTruth(args.gt);
  if (tracklets.num_frames != gt.num_frames) {
    throw Error(ErrorCode::kBadDimensions, "tracklets cover " +
                                               std::to_string(tracklets.num_frames) +
                                               " frames, ground truth " +
                                               std::to_string(gt.num_frames));
  }
  if (!options.rescale) {
    options.rescale = Rescale{tracklets.width, tracklets.height, gt.width, gt.height};
  } else if (options.rescale->from_width != tracklets.width ||
             options.rescale->from_height != tracklets.height) {
    throw UsageError("--rescale source does not match the tracklet resolution");
  }
  const EvalReport report =
      Evaluate(ToPredictions(tracklets.tracks, tracklets.num_frames), gt, options);
  if (!args.out.empty()) WriteText(args.out, report.ToJson());
  out << (args.json ? report.ToJson() + "\n" : report.ToTable());
}

std::string FormatAblationTable(const std::vector<AblationRow>& rows) {
  auto pct = [](const std::optional<double>& v) {
    char buf[16];
    if (!v) return std::string("n/a");
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * *v);
    return std::string(buf);
  };
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.deltas.size() + 2);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s %8s %11s %8s\n", int(width), "deltas", "AJ",
                "<delta_avg", "OA");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-*s %8s %11s %8s%s\n", int(width), r.deltas.c_str(),
                  pct(r.report.average_jaccard).c_str(),
                  pct(r.report.position_accuracy).c_str(),
                  pct(r.report.occlusion_accuracy).c_str(), r.duplicate ? "  (duplicate)" : "");
    out << line;
  }
  return out.str();
}

std::vector<AblationRow> RunAblate(const AblateArgs& args, std::ostream& out,
                                   std::ostream& log) {
  if (args.sets.empty()) throw UsageError("give at least one --set");
  if (args.gt.empty()) throw UsageError("--gt is required");
  CheckThreshold(args.occlusion_threshold);
  EvalOptions eval;
  eval.mode = AsUsage("--mode", [&] { return ParseEvalMode(args.mode); });
  eval.stride = args.stride;
  if (!args.rescale.empty()) {
    eval.rescale = AsUsage("--rescale", [&] { return Rescale::Parse(args.rescale); });
  }
  const OpenedProvider opened = OpenProvider(args.source);
  std::vector<DeltaSet> sets;
  for (const std::string& s : args.sets) sets.push_back(ResolveDeltas(s, opened));
  const GroundTruthSet gt = ReadGroundTruth(args.gt);
  if (gt.num_frames != opened.num_frames) {
    throw Error(ErrorCode::kBadDimensions, "ground truth and flows differ in frame count");
  }
  if (!eval.rescale) {
    eval.rescale = Rescale{opened.provider->width(), opened.provider->height(), gt.width,
                           gt.height};
  }

  std::vector<AblationRow> rows;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    AblationRow row;
    row.deltas = sets[i].ToString();
    for (std::size_t k = 0; k < i; ++k) {
      if (sets[k] == sets[i]) row.duplicate = true;
    }
    if (row.duplicate) log << "warning: delta set " << row.deltas << " is listed twice\n";
    const TrackerOptions options{sets[i], args.occlusion_threshold, args.workers};
    const auto records = TrackProtocol(*opened.provider, gt, eval.mode, eval.stride, options);
    row.report = Evaluate(ToPredictions(records, gt.num_frames), gt, eval);
    rows.push_back(std::move(row));
  }
  out << FormatAblationTable(rows);
  if (!args.out.empty()) {
    json j;
    j["version"] = 1;
    j["mode"] = std::string(EvalModeName(eval.mode));
    j["seed"] = args.seed;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"deltas", r.deltas},
                           {"duplicate", r.duplicate},
                           {"report", json::parse(r.report.ToJson())}});
    }
    WriteText(args.out, j.dump(1));
  }
  return rows;
}

void RunVisualize(const VisualizeArgs& args, std::ostream& log) {
  if (args.frames.empty() || args.results.empty() || args.out.empty()) {
    throw UsageError("--frames, --results and --out are required");
  }
  if (args.cell < 1) throw UsageError("--cell must be at least 1");
  CheckThreshold(args.occlusion_threshold);
  const fs::path results(args.results);
  json index;
  try {
    index = json::parse(ReadText(results / "index.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("results index: ") + e.what());
  }
  fs::create_directories(args.out);
  try {
    const int start = index.at("start_frame").get<int>();
    const RgbImage reference = ReadPpm(fs::path(args.frames) / FramePath(start));
    int rendered = 0;
    for (const json& e : index.at("frames")) {
      const int t = e.at("frame").get<int>();
      const int seq = e.at("sequence_frame").get<int>();
      FouTriplet r(ReadFlo(results / e.at("flow").get<std::string>()),
                   ReadMap(results / e.at("occlusion").get<std::string>(), MapKind::kOcclusion),
                   ReadMap(results / e.at("uncertainty").get<std::string>(),
                           MapKind::kUncertainty),
                   0, t);
      const RgbImage current = ReadPpm(fs::path(args.frames) / FramePath(seq));
      WritePpm(fs::path(args.out) / FramePath(seq),
               RenderOverlay(reference, current, r, args.occlusion_threshold, args.cell));
      ++rendered;
    }
    log << "rendered " << rendered << " frames to " << args.out << "\n";
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("results index: ") + e.what());
  }
}

}  // namespace mft::cli
