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

#include "mft/image.h"

#include <fstream>
#include <string>

#include "mft/errors.h"

namespace mft {

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h) {
  if (w < 1 || h < 1) ThrowInvalid("image dimensions must be positive");
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

void WritePpm(const std::filesystem::path& path, const RgbImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size() * 3));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string NextToken(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

}  // namespace

RgbImage ReadPpm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  if (NextToken(in) != "P6") {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a binary PPM");
  }
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(NextToken(in));
    h = std::stoi(NextToken(in));
    maxval = std::stoi(NextToken(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "malformed PPM header in " + path.string());
  }
  if (w < 1 || h < 1 || w > 65536 || h > 65536 || maxval != 255) {
    throw Error(ErrorCode::kBadDimensions, "unsupported PPM header in " + path.string());
  }
  RgbImage image(w, h);
  in.read(reinterpret_cast<char*>(image.pixels.data()),
          static_cast<std::streamsize>(image.pixels.size() * 3));
  if (in.gcount() != static_cast<std::streamsize>(image.pixels.size() * 3)) {
    throw Error(ErrorCode::kTruncated, "truncated PPM payload in " + path.string());
  }
  return image;
}

}  // namespace mft
