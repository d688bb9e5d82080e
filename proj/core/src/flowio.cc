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

#include "mft/flowio.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mft {

using nlohmann::json;

namespace {

constexpr char kMapMagic[4] = {'M', 'F', 'T', 'M'};
constexpr std::size_t kFloHeader = 12;
constexpr std::size_t kMapHeader = 13;

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutI32(std::vector<std::uint8_t>& out, std::int32_t v) {
  PutU32(out, static_cast<std::uint32_t>(v));
}
void PutF32(std::vector<std::uint8_t>& out, float v) { PutU32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
  return v;
}
std::int32_t GetI32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::int32_t>(GetU32(b, off));
}
float GetF32(std::span<const std::uint8_t> b, std::size_t off) {
  return std::bit_cast<float>(GetU32(b, off));
}

void CheckDims(std::int32_t w, std::int32_t h) {
  if (w <= 0 || h <= 0 || w > kMaxFileDimension || h > kMaxFileDimension) {
    throw Error(ErrorCode::kBadDimensions,
                "implausible dimensions " + std::to_string(w) + "x" + std::to_string(h));
  }
}

void CheckPayload(std::size_t have, std::size_t need) {
  if (have < need) {
    throw Error(ErrorCode::kTruncated, "payload holds " + std::to_string(have) +
                                           " bytes, expected " + std::to_string(need));
  }
  if (have > need) {
    throw Error(ErrorCode::kTruncated, "trailing bytes after payload (" +
                                           std::to_string(have - need) + ")");
  }
}

std::vector<std::uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

template <typename Fn>
auto WithPath(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> EncodeFlo(const FlowField& field) {
  std::vector<std::uint8_t> out;
  out.reserve(kFloHeader + field.size() * 8);
  PutF32(out, kFloMagic);
  PutI32(out, field.width());
  PutI32(out, field.height());
  for (const Vec2& v : field.data()) {
    PutF32(out, v.x);
    PutF32(out, v.y);
  }
  return out;
}

FlowField DecodeFlo(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncated, "missing .flo magic");
  if (GetF32(bytes, 0) != kFloMagic) throw Error(ErrorCode::kBadMagic, "bad .flo magic");
  if (bytes.size() < kFloHeader) throw Error(ErrorCode::kTruncated, "truncated .flo header");
  const std::int32_t w = GetI32(bytes, 4);
  const std::int32_t h = GetI32(bytes, 8);
  CheckDims(w, h);
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  CheckPayload(bytes.size() - kFloHeader, n * 8);
  std::vector<Vec2> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = {GetF32(bytes, kFloHeader + 8 * i), GetF32(bytes, kFloHeader + 8 * i + 4)};
    if (!IsFinite(data[i])) throw Error(ErrorCode::kParse, "non-finite flow value");
  }
  return FlowField::FromData(w, h, std::move(data));
}

void WriteFlo(const std::filesystem::path& path, const FlowField& field) {
  WriteFile(path, EncodeFlo(field));
}

FlowField ReadFlo(const std::filesystem::path& path) {
  return WithPath(path, [&] { return DecodeFlo(ReadFile(path)); });
}

std::vector<std::uint8_t> EncodeMap(const ScalarMap& map, MapKind kind) {
  std::vector<std::uint8_t> out;
  out.reserve(kMapHeader + map.size() * 4);
  out.insert(out.end(), kMapMagic, kMapMagic + 4);
  out.push_back(static_cast<std::uint8_t>(kind));
  PutI32(out, map.width());
  PutI32(out, map.height());
  for (float v : map.data()) PutF32(out, v);
  return out;
}

std::pair<MapKind, ScalarMap> DecodeMap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncated, "missing map magic");
  if (std::memcmp(bytes.data(), kMapMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "bad map magic");
  }
  if (bytes.size() < kMapHeader) throw Error(ErrorCode::kTruncated, "truncated map header");
  const std::uint8_t kind = bytes[4];
  if (kind > 1) throw Error(ErrorCode::kParse, "unknown map kind " + std::to_string(kind));
  const std::int32_t w = GetI32(bytes, 5);
  const std::int32_t h = GetI32(bytes, 9);
  CheckDims(w, h);
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  CheckPayload(bytes.size() - kMapHeader, n * 4);
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = GetF32(bytes, kMapHeader + 4 * i);
    if (!std::isfinite(data[i])) throw Error(ErrorCode::kParse, "non-finite map value");
  }
  return {static_cast<MapKind>(kind), ScalarMap::FromData(w, h, std::move(data))};
}

ScalarMap DecodeMap(std::span<const std::uint8_t> bytes, MapKind expected) {
  auto [kind, map] = DecodeMap(bytes);
  if (kind != expected) {
    throw Error(ErrorCode::kKindMismatch,
                std::string("expected ") +
                    (expected == MapKind::kOcclusion ? "occlusion" : "uncertainty") +
                    " map, found " + (kind == MapKind::kOcclusion ? "occlusion" : "uncertainty"));
  }
  try {
    if (kind == MapKind::kOcclusion) ValidateOcclusion(map);
    else ValidateUncertainty(map);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return std::move(map);
}

void WriteMap(const std::filesystem::path& path, const ScalarMap& map, MapKind kind) {
  WriteFile(path, EncodeMap(map, kind));
}

ScalarMap ReadMap(const std::filesystem::path& path, MapKind expected) {
  return WithPath(path, [&] { return DecodeMap(ReadFile(path), expected); });
}

std::vector<std::pair<int, int>> RequiredPairs(int num_frames, const DeltaSet& deltas) {
  if (deltas.has_infinite()) {
    ThrowInvalid("direct (inf) flows cannot be precomputed; their count grows "
                 "quadratically with the frame count. Use finite deltas only, e.g. "
                 "--deltas 1,2,4,8,16,32");
  }
  if (num_frames < 1) ThrowInvalid("num_frames must be positive");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < num_frames; ++a) {
    for (int d : deltas.finite_deltas()) {
      if (a + d >= num_frames) break;
      pairs.emplace_back(a, a + d);
      pairs.emplace_back(a + d, a);
    }
  }
  return pairs;
}

std::string Manifest::ToJson() const {
  json j;
  j["version"] = kVersion;
  j["width"] = width;
  j["height"] = height;
  j["num_frames"] = num_frames;
  j["deltas"] = deltas.ToString();
  json pj = json::object();
  for (const auto& [key, e] : pairs) {
    pj[std::to_string(key.first) + "-" + std::to_string(key.second)] = {
        {"flow", e.flow.generic_string()},
        {"occlusion", e.occlusion.generic_string()},
        {"uncertainty", e.uncertainty.generic_string()}};
  }
  j["pairs"] = std::move(pj);
  return j.dump(1);
}

Manifest Manifest::FromJson(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::kParse, "unsupported manifest version");
    }
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.num_frames = j.at("num_frames").get<int>();
    if (m.width < 1 || m.height < 1 || m.num_frames < 1) {
      throw Error(ErrorCode::kParse, "manifest dimensions must be positive");
    }
    m.deltas = DeltaSet::Parse(j.at("deltas").get<std::string>());
    if (m.deltas.has_infinite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest lists the inf delta; direct flows are never precomputed. "
                  "Use a finite delta set such as 1,2,4,8,16,32");
    }
    for (const auto& [key, value] : j.at("pairs").items()) {
      int src = -1, dst = -1;
      char tail = 0;
      if (std::sscanf(key.c_str(), "%d-%d%c", &src, &dst, &tail) != 2 || src < 0 || dst < 0) {
        throw Error(ErrorCode::kParse, "bad pair key '" + key + "'");
      }
      m.pairs[{src, dst}] = {value.at("flow").get<std::string>(),
                             value.at("occlusion").get<std::string>(),
                             value.at("uncertainty").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  return m;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << manifest.ToJson() << "\n";
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return WithPath(path, [&] { return Manifest::FromJson(ss.str()); });
}

ManifestEntry WriteTriplet(const std::filesystem::path& dir, const FouTriplet& fou) {
  char stem[64];
  std::snprintf(stem, sizeof(stem), "%05d_%05d", fou.src_frame, fou.dst_frame);
  ManifestEntry e{std::string("flow/") + stem + ".flo", std::string("occlusion/") + stem + ".map",
                  std::string("uncertainty/") + stem + ".map"};
  for (const char* sub : {"flow", "occlusion", "uncertainty"}) {
    std::filesystem::create_directories(dir / sub);
  }
  WriteFlo(dir / e.flow, fou.flow);
  WriteMap(dir / e.occlusion, fou.occlusion, MapKind::kOcclusion);
  WriteMap(dir / e.uncertainty, fou.uncertainty, MapKind::kUncertainty);
  return e;
}

PrecomputedProvider::PrecomputedProvider(const std::filesystem::path& manifest_path,
                                         std::size_t cache_capacity)
    : root_(manifest_path.parent_path()),
      manifest_(ReadManifest(manifest_path)),
      cache_capacity_(cache_capacity) {}

bool PrecomputedProvider::Contains(int src, int dst) const {
  if (src == dst) return src >= 0 && src < manifest_.num_frames;
  return manifest_.pairs.count({src, dst}) > 0;
}

std::size_t PrecomputedProvider::files_read() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return files_read_;
}

FouTriplet PrecomputedProvider::Get(int src, int dst) const {
  if (src == dst) return FouTriplet::Identity(manifest_.width, manifest_.height, src);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find({src, dst}); it != cache_.end()) return it->second;
  }
  auto it = manifest_.pairs.find({src, dst});
  if (it == manifest_.pairs.end()) {
    throw Error(ErrorCode::kMissingPair, "pair (" + std::to_string(src) + ", " +
                                             std::to_string(dst) + ") is not in the manifest");
  }
  const ManifestEntry& e = it->second;
  FlowField flow = ReadFlo(root_ / e.flow);
  ScalarMap occ = ReadMap(root_ / e.occlusion, MapKind::kOcclusion);
  ScalarMap unc = ReadMap(root_ / e.uncertainty, MapKind::kUncertainty);
  if (flow.width() != manifest_.width || flow.height() != manifest_.height ||
      !flow.SameShape(occ) || !flow.SameShape(unc)) {
    throw Error(ErrorCode::kBadDimensions, "triplet (" + std::to_string(src) + ", " +
                                               std::to_string(dst) +
                                               ") does not match the manifest dimensions");
  }
  FouTriplet t(std::move(flow), std::move(occ), std::move(unc), src, dst);
  std::lock_guard<std::mutex> lock(mutex_);
  files_read_ += 3;
  if (cache_capacity_ == 0) return t;
  auto [slot, inserted] = cache_.emplace(std::make_pair(src, dst), t);
  if (inserted) {
    cache_order_.emplace_back(src, dst);
    while (cache_order_.size() > cache_capacity_) {
      cache_.erase(cache_order_.front());
      cache_order_.pop_front();
    }
  }
  return t;
}

}  // namespace mft
