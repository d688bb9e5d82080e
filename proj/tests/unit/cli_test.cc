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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mft/flowio.h"
#include "mft/synth.h"
#include "mft_cli/commands.h"
#include "mft_cli/pipeline.h"

namespace mft::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("mft_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RgbImage Gradient(int w, int h) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y) = {std::uint8_t(10 * x), std::uint8_t(7 * y), std::uint8_t(x + y)};
  return img;
}

TEST(RenderOverlay, IdentityWarpReproducesFrame) {
  const RgbImage img = Gradient(24, 16);
  EXPECT_EQ(RenderOverlay(img, img, FouTriplet::Identity(24, 16, 0), 0.02f, 8), img);
}

TEST(RenderOverlay, UniformFlowShiftsOverlay) {
  const RgbImage ref = Gradient(32, 8);
  const RgbImage cur(32, 8, {200, 200, 200});
  FouTriplet r = FouTriplet::Identity(32, 8, 0);
  r.dst_frame = 1;
  for (auto& v : r.flow.data()) v = {10, 0};
  const RgbImage out = RenderOverlay(ref, cur, r, 0.02f, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 32; ++x) {
      if (x < 10) {
        EXPECT_EQ(out.at(x, y), (Rgb{100, 100, 100}));  // no correspondence
      } else if (((x - 10) / 8 + y / 8) % 2 == 0) {
        EXPECT_EQ(out.at(x, y), ref.at(x - 10, y));
      } else {
        EXPECT_EQ(out.at(x, y), cur.at(x, y));
      }
    }
}

TEST(RenderOverlay, FullyOccludedIsDarkened) {
  const RgbImage cur(6, 6, {100, 50, 21});
  FouTriplet r = FouTriplet::Identity(6, 6, 0);
  for (auto& v : r.occlusion.data()) v = 1.0f;
  const RgbImage out = RenderOverlay(Gradient(6, 6), cur, r, 0.02f, 8);
  for (const Rgb& c : out.pixels) EXPECT_EQ(c, (Rgb{50, 25, 11}));
}

// Integer motions keep every sample on the pixel grid.
const char* kIntegerScene = R"({"version": 1, "width": 40, "height": 32, "num_frames": 12,
  "layers": [
    {"shape": {"type": "rect", "x0": -100, "y0": -100, "x1": 140, "y1": 132},
     "velocity": [1, 0], "color": [90, 120, 200]},
    {"shape": {"type": "rect", "x0": 4, "y0": 10, "x1": 11, "y1": 17},
     "velocity": [2, 1], "color": [220, 60, 60]},
    {"shape": {"type": "disc", "cx": 30, "cy": 8, "r": 4},
     "velocity": [-2, 1], "color": [60, 200, 60]}]})";

SynthArgs BaseSynth(const fs::path& out, const fs::path& scene) {
  SynthArgs a;
  a.scene = scene.string();
  a.out = out.string();
  a.deltas = "1,2,4,8,16";
  a.points = 30;
  a.seed = 4;
  return a;
}

TEST(Synth, DeterministicAndBounded) {
  TempDir dir;
  std::ofstream(dir / "scene.json") << kIntegerScene;
  std::ostringstream log;
  SynthArgs a = BaseSynth(dir / "a", dir / "scene.json");
  a.inline_noise.sigma_scale = 0.2;
  SynthArgs b = a;
  b.out = (dir / "b").string();
  RunSynth(a, log);
  RunSynth(b, log);
  const Manifest m = ReadManifest(dir / "a/manifest.json");
  EXPECT_LE(m.pairs.size(), std::size_t(2 * 12 * 5));
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    ASSERT_EQ(Slurp(entry.path()), Slurp(dir / "b" / rel.string())) << rel;
  }
}

TEST(Synth, RejectsBadInput) {
  TempDir dir;
  std::ofstream(dir / "empty.json")
      << R"({"version": 1, "width": 8, "height": 8, "num_frames": 3, "layers": []})";
  std::ostringstream log;
  EXPECT_THROW(RunSynth(BaseSynth(dir / "o", dir / "empty.json"), log), Error);
  SynthArgs inf = BaseSynth(dir / "o", dir / "empty.json");
  inf.deltas = "inf,1";
  EXPECT_THROW(RunSynth(inf, log), UsageError);
}

TEST(Track, UnitDeltaMatchesGroundTruthOnVisiblePoints) {
  TempDir dir;
  std::ofstream(dir / "scene.json") << kIntegerScene;
  std::ostringstream log;
  SynthArgs s = BaseSynth(dir / "ds", dir / "scene.json");
  s.deltas = "1";
  RunSynth(s, log);
  TrackArgs t;
  t.source.manifest = (dir / "ds/manifest.json").string();
  t.gt = (dir / "ds/gt.json").string();
  t.out = (dir / "tl.json").string();
  RunTrack(t, log);
  const TrackletFile tl = ReadTracklets(dir / "tl.json");
  const GroundTruthSet gt = ReadGroundTruth(dir / "ds/gt.json");
  int checked = 0;
  for (const TrackletRecord& r : tl.tracks) {
    const GroundTruthTrack& g = gt.tracks[r.point_id];
    bool always_visible = true;
    for (int f = r.init_frame; f < gt.num_frames; ++f) always_visible &= bool(g.visible[f]);
    if (!always_visible) continue;
    ++checked;
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
      EXPECT_EQ(r.positions[i], g.positions[r.frames[i]]);
      EXPECT_FALSE(r.occluded[i]);
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(Track, InfiniteDeltaNeedsDirectFlows) {
  TempDir dir;
  std::ofstream(dir / "scene.json") << kIntegerScene;
  std::ostringstream log;
  RunSynth(BaseSynth(dir / "ds", dir / "scene.json"), log);
  std::ofstream(dir / "q.json") << R"({"points": []})";
  TrackArgs t;
  t.source.manifest = (dir / "ds/manifest.json").string();
  t.queries = (dir / "q.json").string();
  t.out = (dir / "tl.json").string();
  t.deltas = "inf,1";
  EXPECT_THROW(RunTrack(t, log), UsageError);
  t.deltas.clear();
  RunTrack(t, log);
  const TrackletFile tl = ReadTracklets(dir / "tl.json");
  EXPECT_TRUE(tl.tracks.empty());
  EXPECT_EQ(tl.deltas, "1,2,4,8,16");
}

TEST(Track, BackwardQueriesRunToFrameZero) {
  TempDir dir;
  std::ofstream(dir / "scene.json") << kIntegerScene;
  std::ofstream(dir / "q.json") << R"({"points": [[20, 20]]})";
  std::ostringstream log;
  TrackArgs t;
  t.source.scene = (dir / "scene.json").string();
  t.queries = (dir / "q.json").string();
  t.direction = "bwd";
  t.out = (dir / "tl.json").string();
  RunTrack(t, log);
  const TrackletFile tl = ReadTracklets(dir / "tl.json");
  ASSERT_EQ(tl.tracks.size(), 1u);
  EXPECT_EQ(tl.tracks[0].init_frame, 11);
  EXPECT_EQ(tl.tracks[0].frames.back(), 0);
  // Background moves +1 px per frame; 11 frames back.
  EXPECT_EQ(tl.tracks[0].positions.back(), (Vec2{9, 20}));
}

TEST(EvalAndAblate, ReportAndRows) {
  TempDir dir;
  std::ofstream(dir / "scene.json") << kIntegerScene;
  std::ostringstream log, out;
  RunSynth(BaseSynth(dir / "ds", dir / "scene.json"), log);
  TrackArgs t;
  t.source.manifest = (dir / "ds/manifest.json").string();
  t.gt = (dir / "ds/gt.json").string();
  t.mode = "strided";
  t.out = (dir / "tl.json").string();
  RunTrack(t, log);
  EvalArgs e;
  e.tracklets = t.out;
  e.gt = t.gt;
  e.mode = "strided";
  e.out = (dir / "report.json").string();
  RunEval(e, out);
  EXPECT_NE(out.str().find("AJ"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  e.rescale = "bad";
  EXPECT_THROW(RunEval(e, out), UsageError);

  AblateArgs a;
  a.source.manifest = t.source.manifest;
  a.gt = t.gt;
  a.sets = {"1"};
  std::ostringstream table;
  EXPECT_EQ(RunAblate(a, table, log).size(), 1u);
  a.sets = {"1", "1,2", "1"};
  const auto rows = RunAblate(a, table, log);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[1].duplicate);
  EXPECT_TRUE(rows[2].duplicate);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
}

}  // namespace
}  // namespace mft::cli
