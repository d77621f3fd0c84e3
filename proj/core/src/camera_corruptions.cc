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
#include <vector>

#include "corrupt3d/errors.h"

namespace corrupt3d {
namespace {

std::size_t Idx(int severity) {
  CheckSeverity(severity);
  return static_cast<std::size_t>(severity - 1);
}

// Float working copy in 8-bit units, quantized once at the end.
class Canvas {
 public:
  explicit Canvas(const ImageBuffer& img)
      : width_(img.width()), height_(img.height()),
        values_(img.data().begin(), img.data().end()) {}

  int width() const { return width_; }
  int height() const { return height_; }
  float& at(int x, int y, int c) {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::vector<float>& values() { return values_; }

  // Blends pixel (x, y) toward `target` with opacity `alpha`.
  void Blend(int x, int y, float target, float alpha) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    for (int c = 0; c < 3; ++c) {
      float& v = at(x, y, c);
      v = (1 - alpha) * v + alpha * target;
    }
  }

  ImageBuffer Quantize() const {
    std::vector<std::uint8_t> bytes(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      bytes[i] = static_cast<std::uint8_t>(
          std::clamp(std::lround(values_[i]), 0L, 255L));
    }
    return ImageBuffer(width_, height_, std::move(bytes));
  }

 private:
  int width_;
  int height_;
  std::vector<float> values_;
};

void DrawStreak(Canvas& canvas, double x, double y, double angle, int length,
                float target, float alpha) {
  const double dx = std::sin(angle);
  const double dy = std::cos(angle);
  for (int t = 0; t < length; ++t) {
    canvas.Blend(static_cast<int>(std::lround(x + t * dx)),
                 static_cast<int>(std::lround(y + t * dy)), target, alpha);
  }
}

void ApplyPrecipitationMask(Canvas& canvas, const CorruptionConstants& k) {
  const float opacity = static_cast<float>(k.precip_mask_opacity);
  const float gray = static_cast<float>(k.gray_level);
  const float brightness = static_cast<float>(k.precip_brightness);
  for (float& v : canvas.values()) v = ((1 - opacity) * v + opacity * gray) * brightness;
}

void DrawSnow(Canvas& canvas, std::size_t s, RngStream& rng) {
  const auto flakes = static_cast<std::size_t>(
      tables::kSnowFlakeDensity[s] * canvas.width() * canvas.height());
  for (std::size_t i = 0; i < flakes; ++i) {
    const double x = rng.Uniform(0, canvas.width());
    const double y = rng.Uniform(0, canvas.height());
    const double angle = rng.Uniform(-0.3, 0.3);
    const int length = 2 + static_cast<int>(rng.UniformIndex(4));
    DrawStreak(canvas, x, y, angle, length, 255.f, 0.8f);
  }
}

void DrawRain(Canvas& canvas, std::size_t s, RngStream& rng) {
  const auto drops = static_cast<std::size_t>(
      tables::kRainDensity[s] * canvas.width() * canvas.height());
  const double angle = rng.Uniform(-0.4, -0.2);
  for (std::size_t i = 0; i < drops; ++i) {
    const double x = rng.Uniform(0, canvas.width());
    const double y = rng.Uniform(0, canvas.height());
    DrawStreak(canvas, x, y, angle, 8, 200.f, 0.25f);
  }
}

// Two-octave value noise in [0, 1].
std::vector<float> ValueNoise(int width, int height, RngStream& rng) {
  std::vector<float> field(static_cast<std::size_t>(width) * height, 0.f);
  const int base_cell = std::max(8, width / 8);
  const int cells[2] = {base_cell, std::max(4, base_cell / 2)};
  const float weights[2] = {2.f / 3.f, 1.f / 3.f};
  for (int octave = 0; octave < 2; ++octave) {
    const int cell = cells[octave];
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    std::vector<float> lattice(static_cast<std::size_t>(gw) * gh);
    for (float& v : lattice) v = static_cast<float>(rng.Uniform());
    for (int y = 0; y < height; ++y) {
      const double fy = static_cast<double>(y) / cell;
      const int gy = static_cast<int>(fy);
      double ty = fy - gy;
      ty = ty * ty * (3 - 2 * ty);
      for (int x = 0; x < width; ++x) {
        const double fx = static_cast<double>(x) / cell;
        const int gx = static_cast<int>(fx);
        double tx = fx - gx;
        tx = tx * tx * (3 - 2 * tx);
        auto l = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
        const double top = l(gx, gy) * (1 - tx) + l(gx + 1, gy) * tx;
        const double bottom = l(gx, gy + 1) * (1 - tx) + l(gx + 1, gy + 1) * tx;
        field[static_cast<std::size_t>(y) * width + x] +=
            weights[octave] * static_cast<float>(top * (1 - ty) + bottom * ty);
      }
    }
  }
  return field;
}

void ApplyFog(Canvas& canvas, std::size_t s, RngStream& rng,
              const CorruptionConstants& k) {
  const float opacity = static_cast<float>(tables::kFogOpacity[s]);
  const float gray = static_cast<float>(k.gray_level);
  const std::vector<float> density = ValueNoise(canvas.width(), canvas.height(), rng);
  for (int y = 0; y < canvas.height(); ++y) {
    for (int x = 0; x < canvas.width(); ++x) {
      const float haze =
          0.5f * opacity * density[static_cast<std::size_t>(y) * canvas.width() + x];
      for (int c = 0; c < 3; ++c) {
        float& v = canvas.at(x, y, c);
        v += haze * (gray - v);
        v = (1 - opacity) * v + opacity * gray;
      }
    }
  }
}

void DrawSun(Canvas& canvas, std::size_t s, RngStream& rng,
             const CorruptionConstants& k) {
  const double radius = tables::kSunRadiusPx[s];
  const double cx = rng.Uniform(0, canvas.width());
  const double cy = rng.Uniform(0, k.sun_top_fraction * canvas.height());
  const int x_lo = std::max(0, static_cast<int>(std::floor(cx - 2 * radius)));
  const int x_hi = std::min(canvas.width() - 1, static_cast<int>(std::ceil(cx + 2 * radius)));
  const int y_lo = std::max(0, static_cast<int>(std::floor(cy - 2 * radius)));
  const int y_hi = std::min(canvas.height() - 1, static_cast<int>(std::ceil(cy + 2 * radius)));
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      double alpha = 0;
      if (d <= radius) {
        alpha = 1;
      } else if (d < 2 * radius) {
        alpha = 1 - (d - radius) / radius;
      }
      if (alpha > 0) canvas.Blend(x, y, 255.f, static_cast<float>(alpha));
    }
  }
}

// Bilinear sample with coordinates clamped to `r`.
void SampleInRegion(const ImageBuffer& img, const Region2D& r, double u, double v,
                    double out[3]) {
  u = std::clamp(u, static_cast<double>(r.u0), static_cast<double>(r.u1 - 1));
  v = std::clamp(v, static_cast<double>(r.v0), static_cast<double>(r.v1 - 1));
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const int x1 = std::min(x0 + 1, r.u1 - 1);
  const int y1 = std::min(y0 + 1, r.v1 - 1);
  const double fx = u - x0;
  const double fy = v - y0;
  for (int c = 0; c < 3; ++c) {
    const double top = img.at(x0, y0, c) * (1 - fx) + img.at(x1, y0, c) * fx;
    const double bottom = img.at(x0, y1, c) * (1 - fx) + img.at(x1, y1, c) * fx;
    out[c] = top * (1 - fy) + bottom * fy;
  }
}

void ZoomBlurInto(const ImageBuffer& src, const Region2D& region, int zoom,
                  const CorruptionConstants& k, ImageBuffer& dst) {
  const Region2D r = region.Clipped(src.width(), src.height());
  if (r.empty() || zoom < 1) return;
  const double cu = r.u0 + (r.u1 - r.u0) / 2;
  const double cv = r.v0 + (r.v1 - r.v0) / 2;
  std::vector<double> inv_scale(static_cast<std::size_t>(zoom));
  for (int i = 0; i < zoom; ++i) {
    inv_scale[static_cast<std::size_t>(i)] = 1.0 / (1.0 + i * k.zoom_increment * zoom);
  }
  double px[3];
  for (int v = r.v0; v < r.v1; ++v) {
    for (int u = r.u0; u < r.u1; ++u) {
      double acc[3] = {0, 0, 0};
      for (double inv : inv_scale) {
        SampleInRegion(src, r, cu + (u - cu) * inv, cv + (v - cv) * inv, px);
        for (int c = 0; c < 3; ++c) acc[c] += px[c];
      }
      for (int c = 0; c < 3; ++c) {
        dst.at(u, v, c) = static_cast<std::uint8_t>(
            std::clamp(std::lround(acc[c] / zoom), 0L, 255L));
      }
    }
  }
}

}  // namespace

ImageBuffer ImageNoise(const ImageBuffer& img, NoiseKind kind, int severity,
                       RngStream& rng) {
  const std::size_t s = Idx(severity);
  if (kind == NoiseKind::kImpulse) {
    ImageBuffer out = img;
    const std::size_t pixels = static_cast<std::size_t>(img.width()) * img.height();
    const auto count = static_cast<std::size_t>(
        std::floor(tables::kImageImpulseFraction[s] * static_cast<double>(pixels)));
    auto data = out.mutable_data();
    for (std::size_t p : rng.SampleWithoutReplacement(pixels, count)) {
      const std::uint8_t value = rng.Sign() > 0 ? 255 : 0;
      for (int c = 0; c < 3; ++c) data[p * 3 + c] = value;
    }
    return out;
  }
  Canvas canvas(img);
  const double scale = 255.0 * (kind == NoiseKind::kGaussian
                                    ? tables::kImageGaussianSigma[s]
                                    : tables::kImageUniformBound[s]);
  for (float& v : canvas.values()) {
    const double noise =
        kind == NoiseKind::kGaussian ? rng.Normal(scale) : rng.Uniform(-scale, scale);
    v = static_cast<float>(v + noise);
  }
  return canvas.Quantize();
}

double PrecipitationMaskValue(double value, const CorruptionConstants& k) {
  return ((1 - k.precip_mask_opacity) * value + k.precip_mask_opacity * k.gray_level) *
         k.precip_brightness;
}

ImageBuffer WeatherImage(const ImageBuffer& img, Weather kind, int severity,
                         RngStream& rng, const CorruptionConstants& constants) {
  const std::size_t s = Idx(severity);
  Canvas canvas(img);
  switch (kind) {
    case Weather::kSnow:
      DrawSnow(canvas, s, rng);
      ApplyPrecipitationMask(canvas, constants);
      break;
    case Weather::kRain:
      DrawRain(canvas, s, rng);
      ApplyPrecipitationMask(canvas, constants);
      break;
    case Weather::kFog:
      ApplyFog(canvas, s, rng, constants);
      break;
    case Weather::kSunlight:
      DrawSun(canvas, s, rng, constants);
      break;
  }
  return canvas.Quantize();
}

ImageBuffer ZoomBlur(const ImageBuffer& img, const Region2D& region, int zoom,
                     const CorruptionConstants& constants) {
  ImageBuffer out = img;
  ZoomBlurInto(img, region, zoom, constants, out);
  return out;
}

ImageBuffer MotionBlur(const ImageBuffer& img, int severity,
                       const CorruptionConstants& constants) {
  return ZoomBlur(img, Region2D::Full(img), tables::kZoomFactor[Idx(severity)],
                  constants);
}

ImageBuffer MovingObjectImage(const ImageBuffer& img,
                              std::span<const Region2D> regions, int severity,
                              const CorruptionConstants& constants) {
  const int zoom = tables::kZoomFactor[Idx(severity)];
  ImageBuffer out = img;
  for (const Region2D& r : regions) ZoomBlurInto(img, r, zoom, constants, out);
  return out;
}

}  // namespace corrupt3d
