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

#include "mft/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mft/sampling.h"

namespace mft {

using nlohmann::json;

Affine2 Affine2::Inverse() const {
  const double det_value = det();
  if (det_value == 0.0) ThrowInvalid("affine transform is not invertible");
  Affine2 inv;
  inv.a = d / det_value;
  inv.b = -b / det_value;
  inv.c = -c / det_value;
  inv.d = a / det_value;
  inv.tx = -(inv.a * tx + inv.b * ty);
  inv.ty = -(inv.c * tx + inv.d * ty);
  return inv;
}

bool ShapeContains(const Shape& shape, double x, double y) {
  if (const auto* r = std::get_if<RectShape>(&shape)) {
    return x >= r->x0 && x <= r->x1 && y >= r->y0 && y <= r->y1;
  }
  const auto& c = std::get<DiscShape>(shape);
  const double dx = x - c.cx, dy = y - c.cy;
  return dx * dx + dy * dy <= c.r * c.r;
}

void SceneModel::Validate() const {
  if (width < 1 || height < 1) ThrowInvalid("scene dimensions must be positive");
  if (num_frames < 1) ThrowInvalid("scene must have at least one frame");
  if (layers.empty()) ThrowInvalid("scene has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.transforms.size() != static_cast<std::size_t>(num_frames)) {
      ThrowInvalid("layer " + std::to_string(i) + " has " +
                   std::to_string(l.transforms.size()) + " transforms for " +
                   std::to_string(num_frames) + " frames");
    }
    if (!l.transforms[0].IsIdentity()) {
      ThrowInvalid("layer " + std::to_string(i) + " does not start at the identity");
    }
    for (const Affine2& t : l.transforms) {
      if (!(std::isfinite(t.det()) && t.det() != 0.0) || !std::isfinite(t.tx) ||
          !std::isfinite(t.ty)) {
        ThrowInvalid("layer " + std::to_string(i) + " has a singular transform");
      }
    }
    if (const auto* d = std::get_if<DiscShape>(&l.shape); d && !(d->r > 0.0)) {
      ThrowInvalid("disc radius must be positive");
    }
  }
}

bool SceneModel::LayerCovers(int layer, int frame, double x, double y) const {
  const Layer& l = layers[layer];
  double rx, ry;
  l.transforms[frame].Inverse().Apply(x, y, &rx, &ry);
  return ShapeContains(l.shape, rx, ry);
}

int SceneModel::TopLayerAt(int frame, double x, double y) const {
  for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
    if (LayerCovers(i, frame, x, y)) return i;
  }
  return -1;
}

bool SceneModel::HiddenBehind(int layer, int frame, double x, double y) const {
  for (int i = layer + 1; i < static_cast<int>(layers.size()); ++i) {
    if (LayerCovers(i, frame, x, y)) return true;
  }
  return false;
}

namespace {

void CheckFrame(const SceneModel& scene, int f) {
  if (f < 0 || f >= scene.num_frames) {
    ThrowInvalid("frame " + std::to_string(f) + " outside [0, " +
                 std::to_string(scene.num_frames) + ")");
  }
}

bool InView(const SceneModel& scene, double x, double y) {
  return x >= 0.0 && y >= 0.0 && x <= scene.width - 1 && y <= scene.height - 1;
}

json AffineToJson(const Affine2& t) { return {t.a, t.b, t.c, t.d, t.tx, t.ty}; }

Affine2 AffineFromJson(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 6) throw Error(ErrorCode::kParse, "transform needs 6 numbers");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

}  // namespace

SceneModel ParseScene(const std::string& text) {
  SceneModel scene;
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "unsupported scene version");
    }
    scene.width = j.at("width").get<int>();
    scene.height = j.at("height").get<int>();
    scene.num_frames = j.at("num_frames").get<int>();
    for (const json& lj : j.at("layers")) {
      Layer layer;
      const json& sj = lj.at("shape");
      const std::string type = sj.at("type").get<std::string>();
      if (type == "rect") {
        layer.shape = RectShape{sj.at("x0").get<double>(), sj.at("y0").get<double>(),
                                sj.at("x1").get<double>(), sj.at("y1").get<double>()};
      } else if (type == "disc") {
        layer.shape = DiscShape{sj.at("cx").get<double>(), sj.at("cy").get<double>(),
                                sj.at("r").get<double>()};
      } else {
        throw Error(ErrorCode::kParse, "unknown shape type '" + type + "'");
      }
      if (lj.contains("color")) {
        const auto c = lj.at("color").get<std::vector<int>>();
        if (c.size() != 3) throw Error(ErrorCode::kParse, "color needs 3 channels");
        for (int i = 0; i < 3; ++i) layer.color[i] = static_cast<std::uint8_t>(std::clamp(c[i], 0, 255));
      }
      if (lj.contains("transforms")) {
        for (const json& t : lj.at("transforms")) layer.transforms.push_back(AffineFromJson(t));
      } else {
        // Shorthand: T_t = [I + t*L | t*v].
        std::vector<double> v = {0.0, 0.0};
        std::vector<double> rate = {0.0, 0.0, 0.0, 0.0};
        if (lj.contains("velocity")) v = lj.at("velocity").get<std::vector<double>>();
        if (lj.contains("linear_rate")) rate = lj.at("linear_rate").get<std::vector<double>>();
        if (v.size() != 2 || rate.size() != 4) {
          throw Error(ErrorCode::kParse, "velocity needs 2 numbers, linear_rate 4");
        }
        for (int t = 0; t < scene.num_frames; ++t) {
          layer.transforms.push_back({1.0 + t * rate[0], t * rate[1], t * rate[2],
                                      1.0 + t * rate[3], t * v[0], t * v[1]});
        }
      }
      scene.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("scene: ") + e.what());
  }
  try {
    scene.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("scene: ") + e.what());
  }
  return scene;
}

std::string SceneToJson(const SceneModel& scene) {
  json j;
  j["version"] = 1;
  j["width"] = scene.width;
  j["height"] = scene.height;
  j["num_frames"] = scene.num_frames;
  j["layers"] = json::array();
  for (const Layer& l : scene.layers) {
    json lj;
    if (const auto* r = std::get_if<RectShape>(&l.shape)) {
      lj["shape"] = {{"type", "rect"}, {"x0", r->x0}, {"y0", r->y0}, {"x1", r->x1}, {"y1", r->y1}};
    } else {
      const auto& d = std::get<DiscShape>(l.shape);
      lj["shape"] = {{"type", "disc"}, {"cx", d.cx}, {"cy", d.cy}, {"r", d.r}};
    }
    lj["color"] = {l.color[0], l.color[1], l.color[2]};
    lj["transforms"] = json::array();
    for (const Affine2& t : l.transforms) lj["transforms"].push_back(AffineToJson(t));
    j["layers"].push_back(std::move(lj));
  }
  return j.dump(1);
}

SceneModel LoadScene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scene " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseScene(ss.str());
}

void SaveScene(const std::filesystem::path& path, const SceneModel& scene) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write scene " + path.string());
  out << SceneToJson(scene) << "\n";
}

FouTriplet GroundTruthFlow(const SceneModel& scene, int a, int b) {
  CheckFrame(scene, a);
  CheckFrame(scene, b);
  const int w = scene.width, h = scene.height;
  FouTriplet out = FouTriplet::Identity(w, h, a);
  out.dst_frame = b;
  if (a == b) return out;

  const int n = static_cast<int>(scene.layers.size());
  std::vector<Affine2> to_ref(n), to_b(n);
  for (int i = 0; i < n; ++i) {
    to_ref[i] = scene.layers[i].transforms[a].Inverse();
    to_b[i] = scene.layers[i].transforms[b];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int layer = -1;
      double rx = 0, ry = 0;
      for (int i = n - 1; i >= 0; --i) {
        to_ref[i].Apply(x, y, &rx, &ry);
        if (ShapeContains(scene.layers[i].shape, rx, ry)) {
          layer = i;
          break;
        }
      }
      if (layer < 0) {
        out.occlusion(x, y) = 1.0f;
        continue;
      }
      double qx, qy;
      to_b[layer].Apply(rx, ry, &qx, &qy);
      out.flow(x, y) = {static_cast<float>(qx - x), static_cast<float>(qy - y)};
      const bool occluded = !InView(scene, qx, qy) || scene.HiddenBehind(layer, b, qx, qy);
      out.occlusion(x, y) = occluded ? 1.0f : 0.0f;
    }
  }
  return out;
}

GroundTruthTrack TrackPointFrom(const SceneModel& scene, int frame, Vec2 pos) {
  CheckFrame(scene, frame);
  const int layer = scene.TopLayerAt(frame, pos.x, pos.y);
  if (layer < 0) ThrowInvalid("no layer covers the seed position");
  double rx, ry;
  scene.layers[layer].transforms[frame].Inverse().Apply(pos.x, pos.y, &rx, &ry);
  GroundTruthTrack track;
  for (int t = 0; t < scene.num_frames; ++t) {
    double x, y;
    scene.layers[layer].transforms[t].Apply(rx, ry, &x, &y);
    track.positions.push_back({static_cast<float>(x), static_cast<float>(y)});
    track.visible.push_back(InView(scene, x, y) && !scene.HiddenBehind(layer, t, x, y));
  }
  return track;
}

GroundTruthSet SampleGroundTruth(const SceneModel& scene, int num_points,
                                 std::uint64_t seed) {
  scene.Validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, scene.width - 1);
  std::uniform_int_distribution<int> py(0, scene.height - 1);
  std::uniform_int_distribution<int> pf(0, scene.num_frames - 1);
  std::bernoulli_distribution later_frame(0.25);
  GroundTruthSet gt;
  gt.width = scene.width;
  gt.height = scene.height;
  gt.num_frames = scene.num_frames;
  int attempts = 0;
  while (static_cast<int>(gt.tracks.size()) < num_points) {
    if (++attempts > 1000 * std::max(1, num_points)) {
      ThrowInvalid("could not find covered seed pixels");
    }
    const int f = later_frame(rng) ? pf(rng) : 0;
    const Vec2 p{static_cast<float>(px(rng)), static_cast<float>(py(rng))};
    if (scene.TopLayerAt(f, p.x, p.y) < 0) continue;
    GroundTruthTrack t = TrackPointFrom(scene, f, p);
    if (!t.visible[f]) continue;
    t.id = static_cast<int>(gt.tracks.size());
    gt.tracks.push_back(std::move(t));
  }
  return gt;
}

RgbImage RenderFrame(const SceneModel& scene, int frame) {
  CheckFrame(scene, frame);
  RgbImage image(scene.width, scene.height);
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      const int l = scene.TopLayerAt(frame, x, y);
      if (l < 0) continue;
      double rx, ry;
      scene.layers[l].transforms[frame].Inverse().Apply(x, y, &rx, &ry);
      const bool dark =
          ((static_cast<long>(std::floor(rx / 6.0)) + static_cast<long>(std::floor(ry / 6.0))) & 1) != 0;
      const double shade = dark ? 0.65 : 1.0;
      Rgb c = scene.layers[l].color;
      for (auto& ch : c) ch = static_cast<std::uint8_t>(std::lround(ch * shade));
      image.at(x, y) = c;
    }
  }
  return image;
}

void NoiseModel::Validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(sigma_scale >= 0.0) || !(sigma_exponent >= 0.0)) {
    ThrowInvalid("noise sigma must be non-negative and non-decreasing in the gap");
  }
  if (!prob(gross_error_prob) || !prob(occlusion_flip_prob)) {
    ThrowInvalid("noise probabilities must lie in [0, 1]");
  }
  if (!(gross_error_magnitude >= 0.0)) ThrowInvalid("gross error magnitude must be >= 0");
}

double NoiseModel::Sigma(int gap) const {
  if (gap <= 0) return 0.0;
  return sigma_scale * std::pow(static_cast<double>(gap), sigma_exponent);
}

double NoiseModel::EmittedVariance(int gap) const {
  if (gap <= 0) return 0.0;
  // Per-component variance of the Gaussian / gross-error mixture; a gross
  // error of magnitude m in a uniform direction has component variance m^2/2.
  const double s = Sigma(gap);
  const double m = gross_error_magnitude;
  return (1.0 - gross_error_prob) * s * s + gross_error_prob * 0.5 * m * m;
}

bool NoiseModel::IsNoiseFree() const {
  return sigma_scale == 0.0 && gross_error_prob == 0.0 && occlusion_flip_prob == 0.0;
}

NoiseModel ParseNoiseModel(const std::string& json_text) {
  NoiseModel n;
  try {
    const json j = json::parse(json_text);
    n.sigma_scale = j.value("sigma_scale", n.sigma_scale);
    n.sigma_exponent = j.value("sigma_exponent", n.sigma_exponent);
    n.gross_error_prob = j.value("gross_error_prob", n.gross_error_prob);
    n.gross_error_magnitude = j.value("gross_error_magnitude", n.gross_error_magnitude);
    n.occlusion_flip_prob = j.value("occlusion_flip_prob", n.occlusion_flip_prob);
    n.seed = j.value("seed", n.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("noise config: ") + e.what());
  }
  n.Validate();
  return n;
}

std::string NoiseModelToJson(const NoiseModel& n) {
  json j = {{"sigma_scale", n.sigma_scale},
            {"sigma_exponent", n.sigma_exponent},
            {"gross_error_prob", n.gross_error_prob},
            {"gross_error_magnitude", n.gross_error_magnitude},
            {"occlusion_flip_prob", n.occlusion_flip_prob},
            {"seed", n.seed}};
  return j.dump(1);
}

FouTriplet Corrupt(const FouTriplet& fou, const NoiseModel& noise) {
  noise.Validate();
  const int gap = std::abs(fou.dst_frame - fou.src_frame);
  if (gap == 0 || noise.IsNoiseFree()) return fou;

  std::seed_seq seq{static_cast<std::uint32_t>(noise.seed),
                    static_cast<std::uint32_t>(noise.seed >> 32),
                    static_cast<std::uint32_t>(fou.src_frame),
                    static_cast<std::uint32_t>(fou.dst_frame)};
  std::mt19937_64 rng(seq);
  const double sigma = noise.Sigma(gap);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FouTriplet out = fou;
  const float added_variance = static_cast<float>(noise.EmittedVariance(gap));
  for (std::size_t i = 0; i < out.flow.size(); ++i) {
    // Fixed draw count per pixel keeps streams aligned across settings.
    const double n1 = gauss(rng), n2 = gauss(rng);
    const double u_gross = unit(rng), u_angle = unit(rng), u_flip = unit(rng);
    Vec2& f = out.flow[i];
    if (u_gross < noise.gross_error_prob) {
      const double angle = 2.0 * std::numbers::pi * u_angle;
      f.x += static_cast<float>(noise.gross_error_magnitude * std::cos(angle));
      f.y += static_cast<float>(noise.gross_error_magnitude * std::sin(angle));
    } else {
      f.x += static_cast<float>(sigma * n1);
      f.y += static_cast<float>(sigma * n2);
    }
    out.uncertainty[i] += added_variance;
    if (u_flip < noise.occlusion_flip_prob) out.occlusion[i] = 1.0f - out.occlusion[i];
  }
  return out;
}

double Huber(double r, double delta) {
  return r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
}

double UncertaintyLoss(Vec2 predicted, Vec2 truth, double sigma2, double huber_delta) {
  if (!(sigma2 > 0.0)) ThrowInvalid("sigma2 must be positive");
  const double r = std::hypot(static_cast<double>(predicted.x) - truth.x,
                              static_cast<double>(predicted.y) - truth.y);
  return Huber(r, huber_delta) / (2.0 * sigma2) + 0.5 * std::log(sigma2);
}

SyntheticProvider::SyntheticProvider(SceneModel scene, std::optional<NoiseModel> noise)
    : scene_(std::move(scene)), noise_(std::move(noise)) {
  scene_.Validate();
  if (noise_) noise_->Validate();
}

bool SyntheticProvider::Contains(int src, int dst) const {
  return src >= 0 && dst >= 0 && src < scene_.num_frames && dst < scene_.num_frames;
}

FouTriplet SyntheticProvider::Get(int src, int dst) const {
  if (!Contains(src, dst)) {
    throw Error(ErrorCode::kMissingPair, "pair (" + std::to_string(src) + ", " +
                                             std::to_string(dst) + ") outside the scene");
  }
  if (src == dst) return FouTriplet::Identity(scene_.width, scene_.height, src);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find({src, dst}); it != cache_.end()) return it->second;
  }
  FouTriplet t = GroundTruthFlow(scene_, src, dst);
  if (noise_) t = Corrupt(t, *noise_);
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(std::make_pair(src, dst), std::move(t)).first->second;
}

SceneModel GenerateRandomScene(const RandomSceneOptions& o, std::uint64_t seed) {
  if (o.width < 2 || o.height < 2 || o.num_frames < 1) {
    ThrowInvalid("random scene needs at least 2x2 pixels and one frame");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto quantize = [&](double v, double step) {
    return o.dyadic ? std::round(v / step) * step : v;
  };
  constexpr double kTranslationStep = 1.0 / 16.0;
  constexpr double kShearStep = 1.0 / 64.0;

  SceneModel scene;
  scene.width = o.width;
  scene.height = o.height;
  scene.num_frames = o.num_frames;

  auto make_rgb = [&]() {
    return Rgb{static_cast<std::uint8_t>(uniform(40, 255)),
               static_cast<std::uint8_t>(uniform(40, 255)),
               static_cast<std::uint8_t>(uniform(40, 255))};
  };

  // Background: always covers the view.
  {
    Layer bg;
    const double vx = uniform(-o.max_speed, o.max_speed) * 0.5;
    const double vy = uniform(-o.max_speed, o.max_speed) * 0.5;
    const double shear = o.background_shear ? uniform(-1.0, 1.0) / 256.0 : 0.0;
    const double reach = (std::abs(vx) + std::abs(vy) + 1.0) * o.num_frames +
                         std::abs(shear) * o.num_frames * (o.width + o.height) + 1.0;
    bg.shape = RectShape{-reach - o.width, -reach - o.height, o.width + reach + o.width,
                         o.height + reach + o.height};
    for (int t = 0; t < o.num_frames; ++t) {
      bg.transforms.push_back({1.0, quantize(shear * t, kShearStep), 0.0, 1.0,
                               quantize(vx * t, kTranslationStep),
                               quantize(vy * t, kTranslationStep)});
    }
    bg.color = make_rgb();
    scene.layers.push_back(std::move(bg));
  }

  for (int s = 0; s < o.num_sprites; ++s) {
    Layer sprite;
    const double size = uniform(6.0, 16.0);
    const double cx = std::round(uniform(0.0, o.width - 1.0));
    const double cy = std::round(uniform(0.0, o.height - 1.0));
    if (unit(rng) < 0.5) {
      sprite.shape = RectShape{cx - size / 2, cy - size / 2, cx + size / 2, cy + size / 2};
    } else {
      sprite.shape = DiscShape{cx, cy, size / 2};
    }
    const double vx = uniform(-o.max_speed, o.max_speed);
    const double vy = uniform(-o.max_speed, o.max_speed);
    for (int t = 0; t < o.num_frames; ++t) {
      sprite.transforms.push_back(Affine2::Translation(quantize(vx * t, kTranslationStep),
                                                       quantize(vy * t, kTranslationStep)));
    }
    sprite.color = make_rgb();
    scene.layers.push_back(std::move(sprite));
  }

  if (o.max_occlusion_gap > 0 && o.num_frames > 2) {
    // Occluder parked outside the view, dropped in for a gap of frames.
    Layer occluder;
    const double size = uniform(10.0, 20.0);
    const double park_x = o.width + 4.0 * (size + o.width);
    occluder.shape = RectShape{park_x, 0.0, park_x + size, size};
    std::uniform_int_distribution<int> gap_dist(1, o.max_occlusion_gap);
    const int gap = std::min(gap_dist(rng), o.num_frames - 2);
    std::uniform_int_distribution<int> start_dist(1, std::max(1, o.num_frames - gap - 1));
    const int start = start_dist(rng);
    const double tx = std::round(uniform(0.0, o.width - size)) - park_x;
    const double ty = std::round(uniform(0.0, o.height - size));
    for (int t = 0; t < o.num_frames; ++t) {
      const bool in = t >= start && t < start + gap;
      occluder.transforms.push_back(in ? Affine2::Translation(tx, ty) : Affine2::Identity());
    }
    occluder.color = make_rgb();
    scene.layers.push_back(std::move(occluder));
  }
  scene.Validate();
  return scene;
}

}  // namespace mft
