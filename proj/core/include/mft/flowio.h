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

// On-disk formats. All multi-byte fields are little-endian.
//
//   .flo (Middlebury):  float32 magic 202021.25 | int32 width | int32 height
//                       | width*height interleaved float32 (dx, dy)
//   .map:               "MFTM" | uint8 kind (0 occlusion, 1 uncertainty)
//                       | int32 width | int32 height | width*height float32
//
// Readers validate every header field before allocating the payload.

#ifndef MFT_FLOWIO_H_
#define MFT_FLOWIO_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mft/core_types.h"
#include "mft/tracker.h"

namespace mft {

inline constexpr float kFloMagic = 202021.25f;
inline constexpr int kMaxFileDimension = 1 << 16;

enum class MapKind : std::uint8_t { kOcclusion = 0, kUncertainty = 1 };

std::vector<std::uint8_t> EncodeFlo(const FlowField& field);
FlowField DecodeFlo(std::span<const std::uint8_t> bytes);
void WriteFlo(const std::filesystem::path& path, const FlowField& field);
FlowField ReadFlo(const std::filesystem::path& path);

std::vector<std::uint8_t> EncodeMap(const ScalarMap& map, MapKind kind);
// Returns the stored kind alongside the map.
std::pair<MapKind, ScalarMap> DecodeMap(std::span<const std::uint8_t> bytes);
// Typed decode: fails with kKindMismatch when the stored kind differs.
ScalarMap DecodeMap(std::span<const std::uint8_t> bytes, MapKind expected);
void WriteMap(const std::filesystem::path& path, const ScalarMap& map, MapKind kind);
ScalarMap ReadMap(const std::filesystem::path& path, MapKind expected);

// Pairs (a, a + d) and (a + d, a) for every finite delta d with a + d < N.
// The infinite delta cannot be precomputed and is rejected.
std::vector<std::pair<int, int>> RequiredPairs(int num_frames, const DeltaSet& deltas);

struct ManifestEntry {
  std::filesystem::path flow;
  std::filesystem::path occlusion;
  std::filesystem::path uncertainty;
};

struct Manifest {
  static constexpr int kVersion = 1;

  int width = 0;
  int height = 0;
  int num_frames = 0;
  DeltaSet deltas = DeltaSet::Parse("1");
  // Keyed by (src, dst); paths are relative to the manifest directory.
  std::map<std::pair<int, int>, ManifestEntry> pairs;

  std::string ToJson() const;
  static Manifest FromJson(const std::string& text);
};

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest ReadManifest(const std::filesystem::path& path);

// Writes the triplet files for one pair under dir and returns their entry.
ManifestEntry WriteTriplet(const std::filesystem::path& dir, const FouTriplet& fou);

// Serves triplets listed in a manifest, caching up to cache_capacity of the
// most recently read pairs.
class PrecomputedProvider : public FlowProvider {
 public:
  explicit PrecomputedProvider(const std::filesystem::path& manifest_path,
                               std::size_t cache_capacity = 512);

  int width() const override { return manifest_.width; }
  int height() const override { return manifest_.height; }
  FouTriplet Get(int src, int dst) const override;
  bool Contains(int src, int dst) const override;

  const Manifest& manifest() const { return manifest_; }
  std::size_t files_read() const;

 private:
  std::filesystem::path root_;
  Manifest manifest_;
  mutable std::mutex mutex_;
  std::size_t cache_capacity_;
  mutable std::map<std::pair<int, int>, FouTriplet> cache_;
  mutable std::deque<std::pair<int, int>> cache_order_;
  mutable std::size_t files_read_ = 0;
};

}  // namespace mft

#endif  // MFT_FLOWIO_H_
