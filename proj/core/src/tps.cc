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

#include "corrupt3d/tps.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "corrupt3d/errors.h"

namespace corrupt3d {
namespace {

constexpr double kSingularTolerance = 1e-8;

double Kernel(double dx, double dy) {
  const double r2 = dx * dx + dy * dy;
  return r2 > 0 ? r2 * std::log(r2) : 0.0;
}

std::uint8_t Quantize(float v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

Region2D Region2D::Clipped(int width, int height) const {
  Region2D r{std::clamp(u0, 0, width), std::clamp(v0, 0, height),
             std::clamp(u1, 0, width), std::clamp(v1, 0, height)};
  if (r.u1 < r.u0) r.u1 = r.u0;
  if (r.v1 < r.v0) r.v1 = r.v0;
  return r;
}

Region2D BoundingRegion(std::span<const Vec2> points, double expand, int width,
                        int height) {
  if (points.empty()) return {};
  double lo_u = points[0].u, hi_u = points[0].u;
  double lo_v = points[0].v, hi_v = points[0].v;
  for (const Vec2& p : points) {
    lo_u = std::min(lo_u, p.u);
    hi_u = std::max(hi_u, p.u);
    lo_v = std::min(lo_v, p.v);
    hi_v = std::max(hi_v, p.v);
  }
  const double pad_u = 0.5 * expand * (hi_u - lo_u);
  const double pad_v = 0.5 * expand * (hi_v - lo_v);
  // Keep the arithmetic in double until clipped; projected corners of nearby
  // objects can land far outside the image.
  const double limit = 1e6;
  auto to_int = [limit](double v) {
    return static_cast<int>(std::clamp(v, -limit, limit));
  };
  Region2D r{to_int(std::floor(lo_u - pad_u)), to_int(std::floor(lo_v - pad_v)),
             to_int(std::ceil(hi_u + pad_u)) + 1, to_int(std::ceil(hi_v + pad_v)) + 1};
  return r.Clipped(width, height);
}

ThinPlateSpline::ThinPlateSpline(std::span<const Vec2> from, std::span<const Vec2> to)
    : centers_(from.begin(), from.end()) {
  const std::size_t n = from.size();
  if (n != to.size()) {
    throw DegenerateControlPoints("source and target counts differ");
  }
  if (n < 3) throw DegenerateControlPoints("need at least 3 control points");

  for (const Vec2& p : from) {
    offset_.u += p.u / static_cast<double>(n);
    offset_.v += p.v / static_cast<double>(n);
  }
  double rms = 0;
  for (const Vec2& p : from) {
    rms += ((p.u - offset_.u) * (p.u - offset_.u) +
            (p.v - offset_.v) * (p.v - offset_.v)) /
           static_cast<double>(n);
  }
  rms = std::sqrt(rms);
  if (!(rms > 0) || !std::isfinite(rms)) {
    throw DegenerateControlPoints("control points coincide");
  }
  scale_ = 1.0 / rms;
  for (const Vec2& p : from) normalized_centers_.push_back(Normalize(p));

  const auto m = static_cast<Eigen::Index>(n + 3);
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Vec2& ci = normalized_centers_[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2& cj = normalized_centers_[j];
      system(ii, static_cast<Eigen::Index>(j)) = Kernel(ci.u - cj.u, ci.v - cj.v);
    }
    const auto base = static_cast<Eigen::Index>(n);
    system(ii, base) = system(base, ii) = 1.0;
    system(ii, base + 1) = system(base + 1, ii) = ci.u;
    system(ii, base + 2) = system(base + 2, ii) = ci.v;
    rhs(ii, 0) = to[i].u;
    rhs(ii, 1) = to[i].v;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(kSingularTolerance);
  if (lu.rank() < m) {
    throw DegenerateControlPoints("thin-plate spline system is singular "
                                  "(duplicated or collinear control points)");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);
  wu_.resize(n);
  wv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    wu_[i] = sol(static_cast<Eigen::Index>(i), 0);
    wv_[i] = sol(static_cast<Eigen::Index>(i), 1);
  }
  for (int k = 0; k < 3; ++k) {
    au_[k] = sol(static_cast<Eigen::Index>(n) + k, 0);
    av_[k] = sol(static_cast<Eigen::Index>(n) + k, 1);
  }
}

Vec2 ThinPlateSpline::Normalize(const Vec2& p) const {
  return {(p.u - offset_.u) * scale_, (p.v - offset_.v) * scale_};
}

Vec2 ThinPlateSpline::Evaluate(const Vec2& p) const {
  const Vec2 q = Normalize(p);
  double u = au_[0] + au_[1] * q.u + au_[2] * q.v;
  double v = av_[0] + av_[1] * q.u + av_[2] * q.v;
  for (std::size_t i = 0; i < normalized_centers_.size(); ++i) {
    const double k = Kernel(q.u - normalized_centers_[i].u,
                            q.v - normalized_centers_[i].v);
    u += wu_[i] * k;
    v += wv_[i] * k;
  }
  return {u, v};
}

TpsWarp TpsWarp::Fit(std::span<const Vec2> src, std::span<const Vec2> dst) {
  ThinPlateSpline inverse(dst, src);
  return TpsWarp(std::vector<Vec2>(src.begin(), src.end()),
                 std::vector<Vec2>(dst.begin(), dst.end()), std::move(inverse));
}

void SampleBilinear(const ImageBuffer& img, double u, double v, float out[3]) {
  const double max_u = img.width() - 1;
  const double max_v = img.height() - 1;
  u = std::clamp(u, 0.0, max_u);
  v = std::clamp(v, 0.0, max_v);
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = u - x0;
  const double fy = v - y0;
  for (int c = 0; c < ImageBuffer::kChannels; ++c) {
    const double top = img.at(x0, y0, c) * (1 - fx) + img.at(x1, y0, c) * fx;
    const double bottom = img.at(x0, y1, c) * (1 - fx) + img.at(x1, y1, c) * fx;
    out[c] = static_cast<float>(top * (1 - fy) + bottom * fy);
  }
}

ImageBuffer TpsApply(const ImageBuffer& img, const TpsWarp& warp,
                     std::optional<Region2D> region) {
  const Region2D r =
      region.value_or(Region2D::Full(img)).Clipped(img.width(), img.height());
  ImageBuffer out = img;
  float px[3];
  for (int v = r.v0; v < r.v1; ++v) {
    for (int u = r.u0; u < r.u1; ++u) {
      const Vec2 s = warp.SourceLocation({static_cast<double>(u), static_cast<double>(v)});
      SampleBilinear(img, s.u, s.v, px);
      for (int c = 0; c < ImageBuffer::kChannels; ++c) out.at(u, v, c) = Quantize(px[c]);
    }
  }
  return out;
}

}  // namespace corrupt3d
