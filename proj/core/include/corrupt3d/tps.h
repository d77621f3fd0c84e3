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

#ifndef CORRUPT3D_TPS_H_
#define CORRUPT3D_TPS_H_

#include <optional>
#include <span>
#include <vector>

#include "corrupt3d/geometry.h"

namespace corrupt3d {

// Axis-aligned pixel rectangle, half-open: [u0, u1) x [v0, v1).
struct Region2D {
  int u0 = 0;
  int v0 = 0;
  int u1 = 0;
  int v1 = 0;

  bool empty() const { return u0 >= u1 || v0 >= v1; }
  bool Contains(int u, int v) const { return u >= u0 && u < u1 && v >= v0 && v < v1; }
  // Clipped to [0, width) x [0, height).
  Region2D Clipped(int width, int height) const;
  static Region2D Full(const ImageBuffer& img) {
    return {0, 0, img.width(), img.height()};
  }
  bool operator==(const Region2D&) const = default;
};

// Smallest region covering `points`, grown by `expand` times its width and
// height (half on each side), clipped to the image.
Region2D BoundingRegion(std::span<const Vec2> points, double expand, int width,
                        int height);

// 2D thin-plate spline f(p) = a0 + a1 u + a2 v + sum_i w_i U(|p - c_i|),
// U(r) = r^2 log r^2, interpolating from[i] -> to[i].
class ThinPlateSpline {
 public:
  // Throws DegenerateControlPoints for fewer than 3 points or a system that is
  // singular at relative tolerance 1e-8 (duplicated or collinear points).
  ThinPlateSpline(std::span<const Vec2> from, std::span<const Vec2> to);

  Vec2 Evaluate(const Vec2& p) const;
  std::span<const Vec2> from() const { return centers_; }

 private:
  // Control points are centered and scaled to unit RMS radius for conditioning.
  Vec2 Normalize(const Vec2& p) const;

  std::vector<Vec2> centers_;
  std::vector<Vec2> normalized_centers_;
  Vec2 offset_;
  double scale_ = 1.0;
  std::vector<double> wu_, wv_;  // kernel weights per output component
  double au_[3] = {0, 0, 0};
  double av_[3] = {0, 0, 0};
};

// Image warp that moves src[i] to dst[i]. Sampling uses the inverse spline
// fitted dst -> src.
class TpsWarp {
 public:
  static TpsWarp Fit(std::span<const Vec2> src, std::span<const Vec2> dst);

  std::span<const Vec2> source_points() const { return src_; }
  std::span<const Vec2> target_points() const { return dst_; }
  // Location in the source image sampled for output pixel `dst_pixel`.
  Vec2 SourceLocation(const Vec2& dst_pixel) const {
    return inverse_.Evaluate(dst_pixel);
  }

 private:
  TpsWarp(std::vector<Vec2> src, std::vector<Vec2> dst, ThinPlateSpline inverse)
      : src_(std::move(src)), dst_(std::move(dst)), inverse_(std::move(inverse)) {}

  std::vector<Vec2> src_;
  std::vector<Vec2> dst_;
  ThinPlateSpline inverse_;
};

// Bilinear sample with edge clamping. Returns channel values in [0, 255].
void SampleBilinear(const ImageBuffer& img, double u, double v, float out[3]);

// Rewrites pixels of `region` (default: whole image) by inverse mapping
// through `warp`; pixels outside the region are untouched.
ImageBuffer TpsApply(const ImageBuffer& img, const TpsWarp& warp,
                     std::optional<Region2D> region = std::nullopt);

}  // namespace corrupt3d

#endif  // CORRUPT3D_TPS_H_
