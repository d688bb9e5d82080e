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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mft/chaining.h"
#include "mft/flowio.h"
#include "mft/selector.h"
#include "mft/synth.h"
#include "mft/tracker.h"

namespace {

using namespace mft;

FouTriplet RandomTriplet(std::uint32_t seed, int w, int h, int src, int dst) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> flow(-6, 6), unit(0, 1);
  FouTriplet t = FouTriplet::Identity(w, h, src);
  t.dst_frame = dst;
  for (auto& v : t.flow.data()) v = {flow(rng), flow(rng)};
  for (auto& v : t.occlusion.data()) v = unit(rng) < 0.1f ? 1.0f : 0.0f;
  for (auto& v : t.uncertainty.data()) v = unit(rng);
  return t;
}

void BM_Chain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FouTriplet prev = RandomTriplet(1, n, n, 0, 1);
  const FouTriplet step = RandomTriplet(2, n, n, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Chain(prev, step));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Chain)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SelectCompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<FouTriplet> cands;
  for (int i = 0; i < 7; ++i) cands.push_back(RandomTriplet(10 + i, n, n, 0, 9));
  for (auto _ : state) {
    const DeltaIndexMap idx = SelectBest(cands, kDefaultOcclusionThreshold);
    benchmark::DoNotOptimize(ComposeResult(cands, idx));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SelectCompose)->Arg(512)->Unit(benchmark::kMillisecond);

// Chaining and selection of seven candidates, as one tracker step would do.
void BM_SevenCandidateFrame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  std::vector<FouTriplet> memory, steps;
  for (int i = 0; i < 7; ++i) {
    memory.push_back(RandomTriplet(20 + i, n, n, 0, i + 1));
    steps.push_back(RandomTriplet(40 + i, n, n, i + 1, 40));
  }
  std::vector<FouTriplet> cands(7);
  for (auto _ : state) {
    for (int i = 0; i < 7; ++i) cands[i] = Chain(memory[i], steps[i], workers);
    const DeltaIndexMap idx = SelectBest(cands, kDefaultOcclusionThreshold, workers);
    benchmark::DoNotOptimize(ComposeResult(cands, idx, workers));
  }
}
BENCHMARK(BM_SevenCandidateFrame)
    ->Args({512, 1})
    ->Args({512, 0})
    ->Unit(benchmark::kMillisecond);

void BM_TrackerStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RandomSceneOptions o;
  o.width = n;
  o.height = n;
  o.num_frames = 40;
  SyntheticProvider provider(GenerateRandomScene(o, 7));
  // Warm the provider cache so the loop measures the tracker alone.
  const TrackerOptions opts{DeltaSet::Default(), kDefaultOcclusionThreshold, 1};
  TrackSequence(provider, 0, 40, opts, Direction::kForward);
  for (auto _ : state) {
    Tracker tracker(n, n, opts);
    for (int t = 1; t < 40; ++t) benchmark::DoNotOptimize(tracker.Step(provider));
  }
  state.SetItemsProcessed(state.iterations() * 39);
}
BENCHMARK(BM_TrackerStep)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FloRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FouTriplet t = RandomTriplet(3, n, n, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(DecodeFlo(EncodeFlo(t.flow)));
  state.SetBytesProcessed(state.iterations() * n * n * 8);
}
BENCHMARK(BM_FloRoundTrip)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
