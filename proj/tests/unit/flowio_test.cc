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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <set>

namespace mft {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("mft_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

float RandomFiniteFloat(std::mt19937& rng) {
  for (;;) {
    const float f = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
    if (std::isfinite(f)) return f;
  }
}

FlowField RandomFlow(std::mt19937& rng, int w, int h) {
  FlowField f(w, h);
  for (auto& v : f.data()) v = {RandomFiniteFloat(rng), RandomFiniteFloat(rng)};
  return f;
}

bool BitEqual(const FlowField& a, const FlowField& b) {
  return a.SameShape(b) &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(Vec2)) == 0;
}

TEST(Flo, RandomRoundTripIsBitExact) {
  std::mt19937 rng(1);
  const FlowField f = RandomFlow(rng, 7, 3);
  EXPECT_TRUE(BitEqual(DecodeFlo(EncodeFlo(f)), f));
}

TEST(Flo, FileLayout) {
  const FlowField f = FlowField::FromData(2, 1, {{1, 2}, {3, 4}});
  const auto bytes = EncodeFlo(f);
  ASSERT_EQ(bytes.size(), 28u);
  // 202021.25f == 0x49424550, stored little-endian: "PIEH".
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "PIEH");
  EXPECT_EQ(bytes[4], 2);
  EXPECT_EQ(bytes[8], 1);
}

TEST(Flo, FileRoundTripAndErrors) {
  TempDir dir;
  std::mt19937 rng(2);
  const FlowField f = RandomFlow(rng, 5, 4);
  WriteFlo(dir.path() / "a.flo", f);
  EXPECT_TRUE(BitEqual(ReadFlo(dir.path() / "a.flo"), f));
  try {
    ReadFlo(dir.path() / "missing.flo");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Flo, TypedErrors) {
  auto bytes = EncodeFlo(FlowField(2, 2));
  auto expect_code = [](std::vector<std::uint8_t> b, ErrorCode code) {
    try {
      DecodeFlo(b);
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  auto zero_magic = bytes;
  std::fill(zero_magic.begin(), zero_magic.begin() + 4, 0);
  expect_code(zero_magic, ErrorCode::kBadMagic);
  expect_code({bytes.begin(), bytes.end() - 1}, ErrorCode::kTruncated);
  expect_code({bytes.begin(), bytes.begin() + 6}, ErrorCode::kTruncated);
  auto trailing = bytes;
  trailing.push_back(0);
  expect_code(trailing, ErrorCode::kTruncated);
  auto huge = bytes;
  huge[6] = 0x7f;  // width > 2^16
  expect_code(huge, ErrorCode::kBadDimensions);
  auto negative = bytes;
  negative[11] = 0xff;
  expect_code(negative, ErrorCode::kBadDimensions);
  auto nan = bytes;
  nan[12 + 3] = 0x7f;
  nan[12 + 2] = 0xc0;
  expect_code(nan, ErrorCode::kParse);
}

TEST(Map, RoundTripAndLayout) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> unit(0, 1);
  ScalarMap m(5, 5);
  for (auto& v : m.data()) v = unit(rng);
  EXPECT_EQ(DecodeMap(EncodeMap(m, MapKind::kOcclusion), MapKind::kOcclusion), m);
  EXPECT_EQ(EncodeMap(ScalarMap(1, 1), MapKind::kUncertainty).size(), 17u);
  const auto [kind, decoded] = DecodeMap(EncodeMap(m, MapKind::kUncertainty));
  EXPECT_EQ(kind, MapKind::kUncertainty);
  EXPECT_EQ(decoded, m);
}

TEST(Map, KindMismatchAndRange) {
  const auto bytes = EncodeMap(ScalarMap(2, 2, 0.5f), MapKind::kOcclusion);
  try {
    DecodeMap(bytes, MapKind::kUncertainty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKindMismatch);
  }
  const auto big = EncodeMap(ScalarMap(1, 1, 2.0f), MapKind::kOcclusion);
  EXPECT_THROW(DecodeMap(big, MapKind::kOcclusion), Error);
  auto bad_tag = bytes;
  bad_tag[4] = 7;
  EXPECT_THROW(DecodeMap(bad_tag), Error);
}

TEST(Fuzz, MutatedHeadersYieldTypedErrors) {
  std::mt19937 rng(4);
  const auto flo = EncodeFlo(RandomFlow(rng, 3, 2));
  const auto map = EncodeMap(ScalarMap(3, 2, 0.25f), MapKind::kUncertainty);
  for (int i = 0; i < 2000; ++i) {
    auto f = flo;
    auto m = map;
    const int pos_f = int(rng() % 12), pos_m = int(rng() % 13);
    f[pos_f] = std::uint8_t(rng());
    m[pos_m] = std::uint8_t(rng());
    f.resize(rng() % (f.size() + 8));
    try {
      DecodeFlo(f);
    } catch (const Error&) {
    }
    try {
      DecodeMap(m, MapKind::kUncertainty);
    } catch (const Error&) {
    }
  }
}

TEST(RequiredPairs, CoversBothDirectionsOnce) {
  const auto pairs = RequiredPairs(10, DeltaSet::Parse("1,2,4,8"));
  EXPECT_LE(pairs.size(), 80u);
  std::set<std::pair<int, int>> unique(pairs.begin(), pairs.end());
  EXPECT_EQ(unique.size(), pairs.size());
  for (auto [a, b] : pairs) {
    const int d = std::abs(a - b);
    EXPECT_TRUE(d == 1 || d == 2 || d == 4 || d == 8);
    EXPECT_TRUE(unique.count({b, a}));
  }
  // Count per delta: 2 * (N - d).
  EXPECT_EQ(pairs.size(), std::size_t(2 * (9 + 8 + 6 + 2)));
  EXPECT_THROW(RequiredPairs(10, DeltaSet::Parse("inf,1")), Error);
}

TEST(Manifest, JsonRoundTrip) {
  Manifest m;
  m.width = 4;
  m.height = 3;
  m.num_frames = 5;
  m.deltas = DeltaSet::Parse("1,2");
  m.pairs[{0, 1}] = {"flow/a.flo", "occlusion/a.map", "uncertainty/a.map"};
  const Manifest r = Manifest::FromJson(m.ToJson());
  EXPECT_EQ(r.width, 4);
  EXPECT_EQ(r.num_frames, 5);
  EXPECT_EQ(r.deltas, m.deltas);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs.at({0, 1}).occlusion, "occlusion/a.map");
  EXPECT_THROW(Manifest::FromJson("{}"), Error);
  m.deltas = DeltaSet::Parse("inf,1");
  EXPECT_THROW(Manifest::FromJson(m.ToJson()), Error);
}

FouTriplet RandomTriplet(std::mt19937& rng, int w, int h, int s, int d) {
  std::uniform_real_distribution<float> unit(0, 1);
  FouTriplet t = FouTriplet::Identity(w, h, s);
  t.dst_frame = d;
  for (auto& v : t.flow.data()) v = {unit(rng) * 4 - 2, unit(rng)};
  for (auto& v : t.occlusion.data()) v = unit(rng);
  for (auto& v : t.uncertainty.data()) v = 3 * unit(rng);
  return t;
}

TEST(PrecomputedProvider, ServesManifestPairs) {
  TempDir dir;
  std::mt19937 rng(5);
  Manifest m;
  m.width = 6;
  m.height = 4;
  m.num_frames = 10;
  m.deltas = DeltaSet::Parse("1");
  std::map<std::pair<int, int>, FouTriplet> written;
  for (auto [a, b] : RequiredPairs(10, m.deltas)) {
    FouTriplet t = RandomTriplet(rng, 6, 4, a, b);
    m.pairs[{a, b}] = WriteTriplet(dir.path(), t);
    written.emplace(std::make_pair(a, b), t);
  }
  WriteManifest(dir.path() / "manifest.json", m);
  PrecomputedProvider p(dir.path() / "manifest.json", 4);
  EXPECT_EQ(p.Get(3, 3), FouTriplet::Identity(6, 4, 3));
  EXPECT_EQ(p.files_read(), 0u);
  EXPECT_EQ(p.Get(4, 5), written.at({4, 5}));
  EXPECT_EQ(p.Get(5, 4), written.at({5, 4}));
  EXPECT_EQ(p.files_read(), 6u);
  p.Get(4, 5);
  EXPECT_EQ(p.files_read(), 6u);
  EXPECT_TRUE(p.Contains(0, 1));
  EXPECT_FALSE(p.Contains(0, 7));
  try {
    p.Get(0, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPair);
    EXPECT_NE(std::string(e.what()).find("(0, 7)"), std::string::npos);
  }
}

TEST(PrecomputedProvider, DetectsDimensionMismatch) {
  TempDir dir;
  std::mt19937 rng(6);
  Manifest m;
  m.width = 6;
  m.height = 4;
  m.num_frames = 2;
  m.deltas = DeltaSet::Parse("1");
  m.pairs[{0, 1}] = WriteTriplet(dir.path(), RandomTriplet(rng, 5, 4, 0, 1));
  WriteManifest(dir.path() / "manifest.json", m);
  PrecomputedProvider p(dir.path() / "manifest.json");
  try {
    p.Get(0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadDimensions);
  }
}

}  // namespace
}  // namespace mft
