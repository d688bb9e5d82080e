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

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mft/errors.h"
#include "mft_cli/commands.h"

namespace {

using namespace mft::cli;

void AddSeed(CLI::App* cmd, std::uint64_t* seed) {
  cmd->add_option("--seed", *seed, "Random seed")->capture_default_str();
}

void AddSource(CLI::App* cmd, ProviderArgs* src) {
  cmd->add_option("--manifest", src->manifest, "Precomputed flow manifest");
  cmd->add_option("--scene", src->scene, "Synthetic scene JSON served as exact flows");
  cmd->add_option("--noise", src->noise, "Noise model JSON applied to --scene flows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-flow dense point tracker"};
  app.set_config("--config", "", "TOML/INI config file; flags take precedence");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic dataset with flows and ground truth");
  s->add_option("--scene", synth.scene, "Scene JSON (random scene when omitted)");
  s->add_option("--noise", synth.noise, "Noise model JSON");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--deltas", synth.deltas, "Finite deltas to precompute")->capture_default_str();
  s->add_option("--points", synth.points, "Ground-truth points to sample")->capture_default_str();
  s->add_option("--width", synth.random.width)->capture_default_str();
  s->add_option("--height", synth.random.height)->capture_default_str();
  s->add_option("--frames", synth.random.num_frames)->capture_default_str();
  s->add_option("--sprites", synth.random.num_sprites)->capture_default_str();
  s->add_option("--max-speed", synth.random.max_speed)->capture_default_str();
  s->add_option("--occlusion-gap", synth.random.max_occlusion_gap,
                "Longest scripted occlusion (0: none)")->capture_default_str();
  s->add_option("--sigma", synth.inline_noise.sigma_scale, "Flow noise std at gap 1, px");
  s->add_option("--sigma-exponent", synth.inline_noise.sigma_exponent)->capture_default_str();
  s->add_option("--gross-prob", synth.inline_noise.gross_error_prob);
  s->add_option("--gross-magnitude", synth.inline_noise.gross_error_magnitude);
  s->add_option("--flip-prob", synth.inline_noise.occlusion_flip_prob);
  bool no_frames = false;
  s->add_flag("--no-frames", no_frames, "Skip rendering PPM frames");
  AddSeed(s, &synth.seed);

  TrackArgs track;
  auto* t = app.add_subcommand("track", "Track query points through a sequence");
  AddSource(t, &track.source);
  t->add_option("--deltas", track.deltas, "Delta set, e.g. inf,1,2,4,8,16,32");
  t->add_option("--occl-thresh", track.occlusion_threshold)->capture_default_str();
  t->add_option("--queries", track.queries, "Query JSON {\"frame\": f, \"points\": [[x, y]]}");
  t->add_option("--gt", track.gt, "Ground truth; queries follow the evaluation protocol");
  t->add_option("--mode", track.mode, "first|strided (with --gt)")->capture_default_str();
  t->add_option("--direction", track.direction, "fwd|bwd (with --queries)")->capture_default_str();
  t->add_option("--start", track.start, "Start frame (with --queries)");
  t->add_option("--stride", track.stride)->capture_default_str();
  t->add_option("--out", track.out, "Tracklet JSON")->required();
  t->add_option("--dense-out", track.dense_out, "Directory for dense per-frame results");
  t->add_option("--workers", track.workers, "Threads per step (0: all cores)")->capture_default_str();
  AddSeed(t, &track.seed);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score tracklets against ground truth");
  e->add_option("--tracklets", eval.tracklets)->required();
  e->add_option("--gt", eval.gt)->required();
  e->add_option("--mode", eval.mode, "first|strided")->capture_default_str();
  e->add_option("--rescale", eval.rescale, "WxH:WxH tracker to evaluation resolution");
  e->add_option("--pck-area", eval.pck_area, "Mask area for PCK-T");
  e->add_option("--stride", eval.stride)->capture_default_str();
  e->add_option("--out", eval.out, "Report JSON");
  e->add_flag("--json", eval.json, "Print JSON instead of a table");
  AddSeed(e, &eval.seed);

  AblateArgs ablate;
  auto* a = app.add_subcommand("ablate", "Compare delta sets on one dataset");
  AddSource(a, &ablate.source);
  a->add_option("--gt", ablate.gt)->required();
  a->add_option("--set", ablate.sets, "Delta set; repeat for several rows")->required();
  a->add_option("--mode", ablate.mode)->capture_default_str();
  a->add_option("--rescale", ablate.rescale);
  a->add_option("--occl-thresh", ablate.occlusion_threshold)->capture_default_str();
  a->add_option("--stride", ablate.stride)->capture_default_str();
  a->add_option("--out", ablate.out, "Ablation JSON");
  a->add_option("--workers", ablate.workers)->capture_default_str();
  AddSeed(a, &ablate.seed);

  VisualizeArgs vis;
  auto* v = app.add_subcommand("visualize", "Checkerboard overlays of dense results");
  v->add_option("--frames", vis.frames, "Directory of NNNNN.ppm frames")->required();
  v->add_option("--results", vis.results, "Dense results from track --dense-out")->required();
  v->add_option("--out", vis.out)->required();
  v->add_option("--cell", vis.cell, "Checkerboard cell, px")->capture_default_str();
  v->add_option("--occl-thresh", vis.occlusion_threshold)->capture_default_str();
  AddSeed(v, &vis.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitUsage;
  }

  try {
    if (s->parsed()) {
      synth.write_frames = !no_frames;
      RunSynth(synth, std::cerr);
    } else if (t->parsed()) {
      RunTrack(track, std::cerr);
    } else if (e->parsed()) {
      RunEval(eval, std::cout);
    } else if (a->parsed()) {
      RunAblate(ablate, std::cout, std::cerr);
    } else if (v->parsed()) {
      RunVisualize(vis, std::cerr);
    }
  } catch (const UsageError& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const mft::Error& ex) {
    std::cerr << "error [" << mft::ErrorCodeName(ex.code()) << "]: " << ex.what() << "\n";
    return kExitData;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
