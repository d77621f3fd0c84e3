/*
 * Copyright 2026 The corrupt3d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "benchmark/benchmark.h"
#include "corrupt3d/camera_corruptions.h"
#include "corrupt3d/multimodal_corruptions.h"
#include "testing/synthetic.h"

namespace corrupt3d {
namespace {

const ImageBuffer& Image() {
  static const ImageBuffer img = testing::TexturedImage(1242, 375);
  return img;
}

void BM_GaussianCamera(benchmark::State& state) {
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(ImageNoise(Image(), NoiseKind::kGaussian, 3, rng));
}
BENCHMARK(BM_GaussianCamera)->Unit(benchmark::kMillisecond);

void BM_WeatherImage(benchmark::State& state) {
  RngStream rng(1);
  const auto kind = static_cast<Weather>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(WeatherImage(Image(), kind, 5, rng));
}
BENCHMARK(BM_WeatherImage)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_MotionBlur(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(MotionBlur(Image(), 5));
}
BENCHMARK(BM_MotionBlur)->Unit(benchmark::kMillisecond);

void BM_ObjectTransform(benchmark::State& state) {
  testing::SceneOptions opts;
  opts.boxes = 8;
  opts.width = 1242;
  opts.height = 375;
  const FrameBundle frame = testing::SyntheticFrame("000000", 2, opts);
  RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ApplyObjectTransform(frame, ObjectTransformKind::kShear, 5, rng));
  }
}
BENCHMARK(BM_ObjectTransform)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace corrupt3d
