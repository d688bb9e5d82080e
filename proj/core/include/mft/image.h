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

#ifndef MFT_IMAGE_H_
#define MFT_IMAGE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace mft {

using Rgb = std::array<std::uint8_t, 3>;

// 8-bit RGB raster, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill = {0, 0, 0});

  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Binary PPM (P6, maxval 255).
void WritePpm(const std::filesystem::path& path, const RgbImage& image);
RgbImage ReadPpm(const std::filesystem::path& path);

}  // namespace mft

#endif  // MFT_IMAGE_H_
