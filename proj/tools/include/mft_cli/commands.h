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

// Subcommand implementations. Each Run* returns normally on success, throws
// UsageError for inconsistent arguments and mft::Error for bad input data.

#ifndef MFT_CLI_COMMANDS_H_
#define MFT_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mft/metrics.h"
#include "mft/synth.h"
#include "mft/tracker.h"

namespace mft::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct SynthArgs {
  std::string scene;  // scene JSON; a random scene is generated when empty
  std::string noise;  // noise JSON; overrides the inline noise flags
  std::string out;
  std::string deltas = "1,2,4,8,16,32";
  std::uint64_t seed = 0;
  int points = 64;
  RandomSceneOptions random;
  NoiseModel inline_noise;
  bool write_frames = true;
};

struct ProviderArgs {
  std::string manifest;
  std::string scene;
  std::string noise;
};

struct TrackArgs {
  ProviderArgs source;
  std::string deltas;  // default: manifest deltas, or the full default set
  float occlusion_threshold = kDefaultOcclusionThreshold;
  std::string queries;  // {"frame": f, "points": [[x, y], ...]}
  std::string gt;       // protocol queries from ground truth instead
  std::string mode = "first";
  std::string direction = "fwd";
  int start = -1;
  int stride = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string dense_out;
  int workers = 1;
};

struct EvalArgs {
  std::string tracklets;
  std::string gt;
  std::string mode = "first";
  std::string rescale;
  double pck_area = 0.0;
  int stride = 5;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
};

struct AblateArgs {
  ProviderArgs source;
  std::string gt;
  std::vector<std::string> sets;
  std::string mode = "first";
  std::string rescale;
  float occlusion_threshold = kDefaultOcclusionThreshold;
  int stride = 5;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 1;
};

struct VisualizeArgs {
  std::string frames;
  std::string results;
  std::string out;
  int cell = 8;
  float occlusion_threshold = kDefaultOcclusionThreshold;
  std::uint64_t seed = 0;
};

struct AblationRow {
  std::string deltas;
  EvalReport report;
  bool duplicate = false;
};

void RunSynth(const SynthArgs& args, std::ostream& log);
void RunTrack(const TrackArgs& args, std::ostream& log);
void RunEval(const EvalArgs& args, std::ostream& out);
std::vector<AblationRow> RunAblate(const AblateArgs& args, std::ostream& out,
                                   std::ostream& log);
void RunVisualize(const VisualizeArgs& args, std::ostream& log);

std::string FormatAblationTable(const std::vector<AblationRow>& rows);

// Opens the flow source named by exactly one of manifest / scene.
struct OpenedProvider {
  std::unique_ptr<FlowProvider> provider;
  int num_frames = 0;
  bool file_backed = false;
  std::string manifest_deltas;
};
OpenedProvider OpenProvider(const ProviderArgs& args);

}  // namespace mft::cli

#endif  // MFT_CLI_COMMANDS_H_
