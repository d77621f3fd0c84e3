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

#include "corrupt3d/lidar_corruptions.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrupt3d/errors.h"

namespace corrupt3d {
namespace {

std::size_t Idx(int severity) {
  CheckSeverity(severity);
  return static_cast<std::size_t>(severity - 1);
}

PointCloud Filter(const PointCloud& cloud, const std::vector<bool>& removed) {
  std::vector<PointXYZI> kept;
  kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!removed[i]) kept.push_back(cloud[i]);
  }
  return PointCloud(std::move(kept));
}

PointXYZI Displaced(const PointXYZI& p, double dx, double dy, double dz) {
  return {static_cast<float>(p.x + dx), static_cast<float>(p.y + dy),
          static_cast<float>(p.z + dz), p.intensity};
}

// Displacement for one point under the coordinate-noise model.
void AddNoise(PointXYZI& p, NoiseKind kind, double scale, RngStream& rng) {
  double d[3] = {0, 0, 0};
  for (double& v : d) {
    switch (kind) {
      case NoiseKind::kGaussian: v = rng.Normal(scale); break;
      case NoiseKind::kUniform: v = rng.Uniform(-scale, scale); break;
      case NoiseKind::kImpulse: v = scale * rng.Sign(); break;
    }
  }
  p = Displaced(p, d[0], d[1], d[2]);
}

// Gaussian displacement of floor(ratio * N) uniformly chosen points.
PointCloud GaussianSubset(const PointCloud& cloud, Fraction ratio, double sigma,
                          RngStream& rng) {
  std::vector<PointXYZI> pts(cloud.points().begin(), cloud.points().end());
  for (std::size_t i : rng.SampleWithoutReplacement(pts.size(), ratio.Of(pts.size()))) {
    AddNoise(pts[i], NoiseKind::kGaussian, sigma, rng);
  }
  return PointCloud(std::move(pts));
}

float Range(const PointXYZI& p) {
  return static_cast<float>(p.position().Norm());
}

PointXYZI AlongRay(const PointXYZI& p, double range, double new_range,
                   float intensity) {
  const double s = new_range / range;
  return {static_cast<float>(p.x * s), static_cast<float>(p.y * s),
          static_cast<float>(p.z * s), intensity};
}

float ScaledIntensity(float intensity, double factor) {
  return std::clamp(static_cast<float>(intensity * factor), 0.f, 1.f);
}

}  // namespace

std::vector<std::size_t> NearestNeighbors(const PointCloud& cloud,
                                          std::span<const std::size_t> candidates,
                                          const Vec3& anchor, std::size_t k) {
  k = std::min(k, candidates.size());
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(candidates.size());
  for (std::size_t i : candidates) {
    const Vec3 d = cloud[i].position() - anchor;
    dist.emplace_back(d.Dot(d), i);
  }
  if (k < dist.size()) {
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                     dist.end());
  }
  dist.resize(k);
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (const auto& [d, i] : dist) out.push_back(i);
  return out;
}

PointCloud DensityDecrease(const PointCloud& cloud, int severity, RngStream& rng) {
  const std::size_t n_remove = tables::kDensityRemoval[Idx(severity)].Of(cloud.size());
  std::vector<bool> removed(cloud.size(), false);
  for (std::size_t i : rng.SampleWithoutReplacement(cloud.size(), n_remove)) {
    removed[i] = true;
  }
  return Filter(cloud, removed);
}

PointCloud Cutout(const PointCloud& cloud, int severity, RngStream& rng) {
  const int groups = tables::kCutoutGroups[Idx(severity)];
  if (cloud.empty()) return cloud;
  const std::size_t group_size = tables::kCutoutGroupSize.Of(cloud.size());
  std::vector<std::size_t> all(cloud.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<bool> removed(cloud.size(), false);
  for (int g = 0; g < groups; ++g) {
    const std::size_t anchor = rng.UniformIndex(cloud.size());
    for (std::size_t i :
         NearestNeighbors(cloud, all, cloud[anchor].position(), group_size)) {
      removed[i] = true;
    }
  }
  return Filter(cloud, removed);
}

PointCloud Crosstalk(const PointCloud& cloud, int severity, RngStream& rng,
                     const CorruptionConstants& constants) {
  return GaussianSubset(cloud, tables::kCrosstalkRatio[Idx(severity)],
                        constants.crosstalk_sigma, rng);
}

PointCloud FovLost(const PointCloud& cloud, int severity) {
  const double half = tables::kFovHalfAngleDeg[Idx(severity)];
  // Inclusive bounds, with slack for atan2 rounding at exactly +-half.
  constexpr double kSlackDeg = 1e-9;
  std::vector<PointXYZI> kept;
  kept.reserve(cloud.size());
  for (const PointXYZI& p : cloud.points()) {
    const double az = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x)) *
                      180.0 / kPi;
    if (std::abs(az) <= half + kSlackDeg) kept.push_back(p);
  }
  return PointCloud(std::move(kept));
}

PointCloud CoordinateNoise(const PointCloud& cloud, NoiseKind kind, int severity,
                           RngStream& rng, const CorruptionConstants& constants) {
  const std::size_t s = Idx(severity);
  std::vector<PointXYZI> pts(cloud.points().begin(), cloud.points().end());
  if (kind == NoiseKind::kImpulse) {
    const std::size_t count = pts.size() / tables::kImpulseDivisor[s];
    for (std::size_t i : rng.SampleWithoutReplacement(pts.size(), count)) {
      AddNoise(pts[i], kind, constants.impulse_magnitude, rng);
    }
  } else {
    for (PointXYZI& p : pts) AddNoise(p, kind, tables::kLidarNoiseScale[s], rng);
  }
  return PointCloud(std::move(pts));
}

PointCloud SunlightLidar(const PointCloud& cloud, int severity, RngStream& rng,
                         const CorruptionConstants& constants) {
  return GaussianSubset(cloud, tables::kSunlightRatio[Idx(severity)],
                        constants.sunlight_sigma, rng);
}

double PrecipitationExtinction(Precipitation kind, double rate_mm_per_hour,
                               const CorruptionConstants& constants) {
  const double kappa = kind == Precipitation::kRain ? constants.rain_extinction
                                                    : constants.snow_extinction;
  return kappa * std::pow(rate_mm_per_hour, constants.precip_rate_exponent);
}

PointCloud PrecipitationScatter(const PointCloud& cloud, Precipitation kind,
                                int severity, RngStream& rng,
                                const CorruptionConstants& constants) {
  return PrecipitationScatterAtRate(
      cloud, kind, tables::kPrecipitationRate[Idx(severity)], rng, constants);
}

PointCloud PrecipitationScatterAtRate(const PointCloud& cloud, Precipitation kind,
                                      double rate_mm_per_hour, RngStream& rng,
                                      const CorruptionConstants& constants) {
  const double beta = PrecipitationExtinction(kind, rate_mm_per_hour, constants);
  std::vector<PointXYZI> out;
  out.reserve(cloud.size());
  for (const PointXYZI& p : cloud.points()) {
    const double d = Range(p);
    const double t = std::exp(-2.0 * beta * d);
    if (rng.Uniform() < 1.0 - t) {
      if (rng.Bernoulli(constants.precip_drop_probability)) continue;
      const double lo = std::min(constants.precip_min_scatter_range, d);
      const double r = rng.Uniform(lo, d);
      out.push_back(AlongRay(
          p, d, r, ScaledIntensity(p.intensity, constants.precip_scatter_intensity)));
    } else {
      PointXYZI q = p;
      q.intensity = ScaledIntensity(p.intensity, t);
      out.push_back(q);
    }
  }
  return PointCloud(std::move(out));
}

PointCloud FogLidar(const PointCloud& cloud, int severity, RngStream& rng,
                    const CorruptionConstants& constants) {
  return FogLidarWithAlpha(cloud, tables::kFogAlpha[Idx(severity)], rng, constants);
}

PointCloud FogLidarWithAlpha(const PointCloud& cloud, double alpha, RngStream& rng,
                             const CorruptionConstants& constants) {
  std::vector<PointXYZI> out;
  out.reserve(cloud.size());
  for (const PointXYZI& p : cloud.points()) {
    const double d = Range(p);
    const double t = std::exp(-2.0 * alpha * d);
    if (rng.Uniform() < (1.0 - t) * constants.fog_scatter_probability) {
      const double hi = std::min(d, constants.fog_max_scatter_range);
      const double lo = std::min(constants.fog_min_scatter_range, hi);
      const double r = rng.Uniform(lo, hi);
      out.push_back(AlongRay(p, d, r,
                             static_cast<float>(constants.fog_scatter_intensity)));
    } else {
      PointXYZI q = p;
      q.intensity = ScaledIntensity(p.intensity, t);
      out.push_back(q);
    }
  }
  return PointCloud(std::move(out));
}

std::vector<std::vector<std::size_t>> BoxMembers(const PointCloud& cloud,
                                                 std::span<const Box3D> boxes) {
  std::vector<std::vector<std::size_t>> members(boxes.size());
  std::vector<bool> claimed(cloud.size(), false);
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    for (std::size_t i : PointsInBox(cloud, boxes[b])) {
      if (claimed[i]) continue;
      claimed[i] = true;
      members[b].push_back(i);
    }
  }
  return members;
}

PointCloud LocalNoise(const PointCloud& cloud, std::span<const Box3D> boxes,
                      NoiseKind kind, int severity, RngStream& rng,
                      const CorruptionConstants& constants) {
  const std::size_t s = Idx(severity);
  std::vector<PointXYZI> pts(cloud.points().begin(), cloud.points().end());
  for (const auto& members : BoxMembers(cloud, boxes)) {
    if (kind == NoiseKind::kImpulse) {
      const std::size_t count = members.size() / tables::kImpulseDivisor[s];
      for (std::size_t j : rng.SampleWithoutReplacement(members.size(), count)) {
        AddNoise(pts[members[j]], kind, constants.impulse_magnitude, rng);
      }
    } else {
      for (std::size_t i : members) {
        AddNoise(pts[i], kind, tables::kLidarNoiseScale[s], rng);
      }
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud LocalDensityDecrease(const PointCloud& cloud,
                                std::span<const Box3D> boxes, int severity,
                                RngStream& rng) {
  const std::size_t groups = static_cast<std::size_t>(Idx(severity) + 1);
  std::vector<bool> removed(cloud.size(), false);
  for (const auto& members : BoxMembers(cloud, boxes)) {
    if (members.empty()) continue;
    const std::size_t group_size = tables::kLocalDensityGroupSize.Of(members.size());
    const std::size_t n_anchor = std::min(groups, members.size());
    for (std::size_t a : rng.SampleWithoutReplacement(members.size(), n_anchor)) {
      const auto group = NearestNeighbors(cloud, members,
                                          cloud[members[a]].position(), group_size);
      const std::size_t n_delete = tables::kLocalDensityDeletion.Of(group.size());
      for (std::size_t j : rng.SampleWithoutReplacement(group.size(), n_delete)) {
        removed[group[j]] = true;
      }
    }
  }
  return Filter(cloud, removed);
}

PointCloud LocalCutout(const PointCloud& cloud, std::span<const Box3D> boxes,
                       int severity, RngStream& rng) {
  const Fraction removal = tables::kLocalCutoutRemoval[Idx(severity)];
  std::vector<bool> removed(cloud.size(), false);
  for (const auto& members : BoxMembers(cloud, boxes)) {
    if (members.empty()) continue;
    const std::size_t anchor = members[rng.UniformIndex(members.size())];
    for (std::size_t i : NearestNeighbors(cloud, members, cloud[anchor].position(),
                                          removal.Of(members.size()))) {
      removed[i] = true;
    }
  }
  return Filter(cloud, removed);
}

PointCloud MovingObjectLidar(const PointCloud& cloud, std::span<const Box3D> boxes,
                             int severity) {
  return MovingObjectLidarWithOffset(cloud, boxes,
                                     tables::kMovingObjectOffset[Idx(severity)]);
}

PointCloud MovingObjectLidarWithOffset(const PointCloud& cloud,
                                       std::span<const Box3D> boxes,
                                       double offset) {
  std::vector<PointXYZI> pts(cloud.points().begin(), cloud.points().end());
  const auto members = BoxMembers(cloud, boxes);
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const Box3D& box = boxes[b];
    const double cut = box.dims().length / 6.0;
    for (std::size_t i : members[b]) {
      Vec3 local = ToBoxLocal(pts[i].position(), box);
      if (local.x < -cut) continue;
      local.x += local.x < cut ? offset / 2.0 : offset;
      const Vec3 g = FromBoxLocal(local, box);
      pts[i] = {static_cast<float>(g.x), static_cast<float>(g.y),
                static_cast<float>(g.z), pts[i].intensity};
    }
  }
  return PointCloud(std::move(pts));
}

Pose SamplePosePerturbation(double rotation_sigma, double translation_sigma,
                            RngStream& rng) {
  const Vec3 axis = rng.UnitVector();
  const double angle = rng.Normal(rotation_sigma);
  const Vec3 t{rng.Normal(translation_sigma), rng.Normal(translation_sigma),
               rng.Normal(translation_sigma)};
  return Pose(Mat3::AxisAngle(axis, angle), t);
}

PointCloud ApplyPose(const PointCloud& cloud, const Pose& pose) {
  std::vector<PointXYZI> pts;
  pts.reserve(cloud.size());
  for (const PointXYZI& p : cloud.points()) {
    const Vec3 q = pose.Apply(p.position());
    pts.push_back({static_cast<float>(q.x), static_cast<float>(q.y),
                   static_cast<float>(q.z), p.intensity});
  }
  return PointCloud(std::move(pts));
}

PointCloud MotionCompensation(const PointCloud& cloud,
                              const std::optional<Pose>& ego_pose, int severity,
                              RngStream& rng) {
  const std::size_t s = Idx(severity);
  if (!ego_pose) {
    throw MissingEgoPose("motion_compensation needs an ego pose for the frame");
  }
  const Pose delta = SamplePosePerturbation(tables::kPoseRotationSigma[s],
                                            tables::kPoseTranslationSigma[s], rng);
  return ApplyPose(cloud, delta);
}

}  // namespace corrupt3d
