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

// Layered synthetic scenes with analytic affine motion. They provide exact
// flow and occlusion between any two frames, a noise model that turns exact
// flow into calibrated noisy estimates, and ground-truth point tracks.

#ifndef MFT_SYNTH_H_
#define MFT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mft/core_types.h"
#include "mft/image.h"
#include "mft/metrics.h"
#include "mft/tracker.h"

namespace mft {

// x' = a*x + b*y + tx, y' = c*x + d*y + ty
struct Affine2 {
  double a = 1, b = 0, c = 0, d = 1, tx = 0, ty = 0;

  static Affine2 Identity() { return {}; }
  static Affine2 Translation(double x, double y) { return {1, 0, 0, 1, x, y}; }

  double det() const { return a * d - b * c; }
  bool IsIdentity() const { return *this == Identity(); }
  void Apply(double x, double y, double* ox, double* oy) const {
    *ox = a * x + b * y + tx;
    *oy = c * x + d * y + ty;
  }
  Affine2 Inverse() const;

  friend bool operator==(const Affine2&, const Affine2&) = default;
};

struct RectShape {
  double x0, y0, x1, y1;  // closed box in reference coordinates
};
struct DiscShape {
  double cx, cy, r;
};
using Shape = std::variant<RectShape, DiscShape>;

bool ShapeContains(const Shape& shape, double x, double y);

struct Layer {
  Shape shape;
  std::vector<Affine2> transforms;  // reference -> frame t, one per frame
  Rgb color = {128, 128, 128};
};

// Layers are listed back to front; a later layer hides earlier ones.
struct SceneModel {
  int width = 0;
  int height = 0;
  int num_frames = 0;
  std::vector<Layer> layers;

  void Validate() const;
  // Index of the front-most layer covering pos at a frame, or -1.
  int TopLayerAt(int frame, double x, double y) const;
  // Whether any layer strictly in front of `layer` covers pos.
  bool HiddenBehind(int layer, int frame, double x, double y) const;
  bool LayerCovers(int layer, int frame, double x, double y) const;
};

// Parses/serializes the versioned JSON scene description.
SceneModel ParseScene(const std::string& text);
std::string SceneToJson(const SceneModel& scene);
SceneModel LoadScene(const std::filesystem::path& path);
void SaveScene(const std::filesystem::path& path, const SceneModel& scene);

// Exact triplet for frames a -> b. A pixel with no covering layer gets zero
// flow and occlusion 1; otherwise occlusion is 1 iff its image in b is out
// of view or covered by a layer in front of its own. Uncertainty is zero.
FouTriplet GroundTruthFlow(const SceneModel& scene, int a, int b);

// Ground-truth track of the point at pixel position pos on frame `frame`.
GroundTruthTrack TrackPointFrom(const SceneModel& scene, int frame, Vec2 pos);

// num_points tracks, each seeded at a random covered pixel; most seeds lie
// on frame 0, the rest on random later frames.
GroundTruthSet SampleGroundTruth(const SceneModel& scene, int num_points,
                                 std::uint64_t seed);

RgbImage RenderFrame(const SceneModel& scene, int frame);

struct NoiseModel {
  // Flow noise std per component: sigma_scale * gap^sigma_exponent pixels.
  double sigma_scale = 0.0;
  double sigma_exponent = 0.5;
  double gross_error_prob = 0.0;
  double gross_error_magnitude = 0.0;
  double occlusion_flip_prob = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
  double Sigma(int gap) const;
  // Variance added to the emitted uncertainty for a pair with this gap: the
  // per-component variance of the flow error mixture.
  double EmittedVariance(int gap) const;
  bool IsNoiseFree() const;
};

NoiseModel ParseNoiseModel(const std::string& json_text);
std::string NoiseModelToJson(const NoiseModel& noise);

// Adds zero-mean Gaussian flow noise of std Sigma(|dst - src|), replaces a
// gross_error_prob fraction of flows by errors of gross_error_magnitude in a
// random direction, adds EmittedVariance to the uncertainty and flips
// occlusion scores (o -> 1 - o) with occlusion_flip_prob. Deterministic in
// (seed, src, dst). Identity pairs pass through unchanged.
FouTriplet Corrupt(const FouTriplet& fou, const NoiseModel& noise);

double Huber(double r, double delta);
// (1 / (2 sigma2)) * Huber(|pred - gt|, delta) + 0.5 * log(sigma2)
double UncertaintyLoss(Vec2 predicted, Vec2 truth, double sigma2, double huber_delta);

// Serves exact (optionally corrupted) triplets for any frame pair, cached.
class SyntheticProvider : public FlowProvider {
 public:
  explicit SyntheticProvider(SceneModel scene,
                             std::optional<NoiseModel> noise = std::nullopt);

  int width() const override { return scene_.width; }
  int height() const override { return scene_.height; }
  FouTriplet Get(int src, int dst) const override;
  bool Contains(int src, int dst) const override;

  const SceneModel& scene() const { return scene_; }

 private:
  SceneModel scene_;
  std::optional<NoiseModel> noise_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, FouTriplet> cache_;
};

struct RandomSceneOptions {
  int width = 64;
  int height = 64;
  int num_frames = 30;
  int num_sprites = 3;
  // Per-frame speed bound for layers, pixels.
  double max_speed = 1.0;
  // Motions use multiples of 1/64 so flows and their bilinear samples are
  // exactly representable.
  bool dyadic = true;
  // Allow a small per-frame shear on the background.
  bool background_shear = true;
  // Longest scripted occlusion gap; 0 disables the occluder.
  int max_occlusion_gap = 0;
};

SceneModel GenerateRandomScene(const RandomSceneOptions& options, std::uint64_t seed);

}  // namespace mft

#endif  // MFT_SYNTH_H_
