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

#include "corrupt3d/camera_corruptions.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "corrupt3d/errors.h"
#include "gtest/gtest.h"
#include "testing/synthetic.h"

namespace corrupt3d {
namespace {

ImageBuffer Gray(int w, int h, std::uint8_t v) { return ImageBuffer(w, h, v); }

int MaxAbsDiff(const ImageBuffer& a, const ImageBuffer& b) {
  int m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(int(a.data()[i]) - int(b.data()[i])));
  }
  return m;
}

std::size_t ChangedPixels(const ImageBuffer& a, const ImageBuffer& b) {
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      bool diff = false;
      for (int c = 0; c < 3; ++c) diff |= a.at(x, y, c) != b.at(x, y, c);
      n += diff;
    }
  }
  return n;
}

TEST(ImageNoiseTest, UniformIsBounded) {
  RngStream rng(1);
  const ImageBuffer img = Gray(200, 100, 128);
  for (int s = 1; s <= 5; ++s) {
    const ImageBuffer out = ImageNoise(img, NoiseKind::kUniform, s, rng);
    const double bound = 255 * tables::kImageUniformBound[s - 1];
    EXPECT_LE(MaxAbsDiff(img, out), static_cast<int>(std::floor(bound + 0.5)));
    EXPECT_GE(MaxAbsDiff(img, out), static_cast<int>(bound) - 1);
  }
  EXPECT_LE(MaxAbsDiff(img, ImageNoise(img, NoiseKind::kUniform, 1, rng)), 20);
}

TEST(ImageNoiseTest, GaussianSigma) {
  RngStream rng(2);
  const ImageBuffer img = Gray(300, 200, 128);
  for (int s = 1; s <= 5; ++s) {
    const ImageBuffer out = ImageNoise(img, NoiseKind::kGaussian, s, rng);
    double sq = 0, sum = 0;
    for (std::size_t i = 0; i < out.data().size(); ++i) {
      const double d = double(out.data()[i]) - 128;
      sq += d * d;
      sum += d;
    }
    const double n = static_cast<double>(out.data().size());
    const double sigma = 255 * tables::kImageGaussianSigma[s - 1];
    EXPECT_NEAR(std::sqrt(sq / n), sigma, 0.05 * sigma);
    EXPECT_NEAR(sum / n, 0, 0.5);
  }
}

TEST(ImageNoiseTest, ImpulseFlipsExactPixelCount) {
  RngStream rng(3);
  const ImageBuffer img = Gray(100, 50, 128);
  for (int s = 1; s <= 5; ++s) {
    const ImageBuffer out = ImageNoise(img, NoiseKind::kImpulse, s, rng);
    const auto expected = static_cast<std::size_t>(5000 * tables::kImageImpulseFraction[s - 1]);
    EXPECT_EQ(ChangedPixels(img, out), expected);
    for (int y = 0; y < 50; ++y) {
      for (int x = 0; x < 100; ++x) {
        const std::uint8_t v = out.at(x, y, 0);
        EXPECT_TRUE(v == 128 || v == 0 || v == 255);
        EXPECT_EQ(out.at(x, y, 1), v);
        EXPECT_EQ(out.at(x, y, 2), v);
      }
    }
  }
}

TEST(ImageNoiseTest, RejectsSeverityOutOfRange) {
  RngStream rng(4);
  EXPECT_THROW(ImageNoise(Gray(4, 4, 0), NoiseKind::kGaussian, 0, rng), InvalidArgument);
  EXPECT_THROW(ImageNoise(Gray(4, 4, 0), NoiseKind::kGaussian, 6, rng), InvalidArgument);
}

TEST(WeatherImageTest, PrecipitationMaskOnConstantImage) {
  EXPECT_NEAR(PrecipitationMaskValue(100), 75.88, 1e-9);
  EXPECT_EQ(std::lround(PrecipitationMaskValue(100)), 76);
  RngStream rng(5);
  const ImageBuffer img = Gray(256, 96, 100);
  for (Weather w : {Weather::kSnow, Weather::kRain}) {
    const ImageBuffer out = WeatherImage(img, w, 1, rng);
    std::size_t masked = 0;
    for (std::uint8_t v : out.data()) masked += v == 76;
    EXPECT_GT(masked, out.data().size() / 2);
  }
}

TEST(WeatherImageTest, FogKeepsGrayFixedPoint) {
  RngStream rng(6);
  const ImageBuffer img = Gray(128, 64, 128);
  for (int s = 1; s <= 5; ++s) EXPECT_EQ(WeatherImage(img, Weather::kFog, s, rng), img);
  const ImageBuffer dark = Gray(128, 64, 0);
  const ImageBuffer fogged = WeatherImage(dark, Weather::kFog, 5, rng);
  for (std::uint8_t v : fogged.data()) {
    EXPECT_GE(v, 64);
    EXPECT_LE(v, 80);
  }
}

TEST(WeatherImageTest, SunDiscIsSaturatedInTopOfFrame) {
  RngStream rng(7);
  const ImageBuffer img = Gray(400, 200, 0);
  for (int s = 1; s <= 5; ++s) {
    const ImageBuffer out = WeatherImage(img, Weather::kSunlight, s, rng);
    const int radius = tables::kSunRadiusPx[s - 1];
    std::size_t saturated = 0;
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        if (out.at(x, y, 0) == 255) {
          ++saturated;
          EXPECT_LE(y, 0.4 * 200 + radius + 1);
        }
        if (out.at(x, y, 0) > 0) EXPECT_LE(y, 0.4 * 200 + 2 * radius + 1);
      }
    }
    EXPECT_GT(saturated, 0u);
  }
}

TEST(MotionBlurTest, ConstantImageAndCenterAreFixed) {
  RngStream rng(8);
  const ImageBuffer flat = Gray(120, 80, 77);
  const ImageBuffer tex = testing::RandomImage(120, 80, rng);
  for (int s = 1; s <= 5; ++s) {
    EXPECT_EQ(MotionBlur(flat, s), flat);
    const ImageBuffer out = MotionBlur(tex, s);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(60, 40, c), tex.at(60, 40, c));
    EXPECT_EQ(out.width(), tex.width());
    EXPECT_EQ(out.height(), tex.height());
  }
  EXPECT_NE(MotionBlur(tex, 5), tex);
}

TEST(MotionBlurTest, BlurGrowsWithSeverity) {
  RngStream rng(9);
  const ImageBuffer tex = testing::TexturedImage(160, 96);
  double prev = -1;
  for (int s = 1; s <= 5; ++s) {
    const ImageBuffer out = MotionBlur(tex, s);
    double diff = 0;
    for (std::size_t i = 0; i < out.data().size(); ++i) {
      diff += std::abs(int(out.data()[i]) - int(tex.data()[i]));
    }
    EXPECT_GT(diff, prev);
    prev = diff;
  }
}

TEST(MovingObjectImageTest, OnlyRegionsChange) {
  RngStream rng(10);
  const ImageBuffer tex = testing::RandomImage(200, 100, rng);
  const std::vector<Region2D> regions{{10, 10, 60, 50}, {120, 30, 190, 95}};
  const ImageBuffer out = MovingObjectImage(tex, regions, 4);
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 200; ++x) {
      bool inside = false;
      for (const Region2D& r : regions) inside |= r.Contains(x, y);
      if (inside) continue;
      for (int c = 0; c < 3; ++c) ASSERT_EQ(out.at(x, y, c), tex.at(x, y, c));
    }
  }
  EXPECT_NE(out, tex);
  EXPECT_EQ(MovingObjectImage(tex, {}, 3), tex);
  // A region clipped away entirely is a no-op.
  const std::vector<Region2D> outside{{300, 300, 400, 400}};
  EXPECT_EQ(MovingObjectImage(tex, outside, 5), tex);
}

TEST(CameraDeterminismTest, SameSeedSameBytes) {
  const ImageBuffer tex = testing::TexturedImage(128, 64);
  auto run = [&](std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<ImageBuffer> outs;
    for (int s = 1; s <= 5; ++s) {
      for (auto k : {NoiseKind::kGaussian, NoiseKind::kUniform, NoiseKind::kImpulse}) {
        outs.push_back(ImageNoise(tex, k, s, rng));
      }
      for (auto w : {Weather::kSnow, Weather::kRain, Weather::kFog, Weather::kSunlight}) {
        outs.push_back(WeatherImage(tex, w, s, rng));
      }
    }
    return outs;
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}

}  // namespace
}  // namespace corrupt3d
