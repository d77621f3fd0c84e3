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

#ifndef CORRUPT3D_LIDAR_CORRUPTIONS_H_
#define CORRUPT3D_LIDAR_CORRUPTIONS_H_

#include <optional>
#include <span>
#include <vector>

#include "corrupt3d/corruption.h"
#include "corrupt3d/geometry.h"
#include "corrupt3d/rng.h"

namespace corrupt3d {

// Point-cloud-only corruptions. Every function is pure given its RngStream;
// every `severity` argument must lie in 1..5 (InvalidArgument otherwise).
// Point order is preserved; removals keep the survivors' relative order.

// Deletes floor(p * N) uniformly chosen points.
PointCloud DensityDecrease(const PointCloud& cloud, int severity, RngStream& rng);

// Removes g groups, each the floor(N / 50) nearest neighbors of a random
// anchor point. Groups may overlap.
PointCloud Cutout(const PointCloud& cloud, int severity, RngStream& rng);

// Displaces floor(r * N) points by isotropic Gaussian noise (sigma 3 m).
PointCloud Crosstalk(const PointCloud& cloud, int severity, RngStream& rng,
                     const CorruptionConstants& constants = {});

// Keeps points whose azimuth atan2(y, x) lies within the reserved range.
PointCloud FovLost(const PointCloud& cloud, int severity);

PointCloud CoordinateNoise(const PointCloud& cloud, NoiseKind kind, int severity,
                           RngStream& rng,
                           const CorruptionConstants& constants = {});

// Strong-sunlight spurious returns: floor(r * N) points get sigma 2 m noise.
PointCloud SunlightLidar(const PointCloud& cloud, int severity, RngStream& rng,
                         const CorruptionConstants& constants = {});

enum class Precipitation { kRain, kSnow };

// Extinction coefficient beta = kappa * rate^0.6, in 1/m.
double PrecipitationExtinction(Precipitation kind, double rate_mm_per_hour,
                               const CorruptionConstants& constants = {});

// Simplified Monte Carlo rain/snow model. For a return at range d the two-way
// transmission is T = exp(-2 beta d). With probability 1 - T the return is
// lost: dropped with probability `precip_drop_probability`, otherwise moved to
// a scattered return at range U(0.5, d) on the same ray with intensity * 0.3.
// Unaffected returns keep their position with intensity * T.
PointCloud PrecipitationScatter(const PointCloud& cloud, Precipitation kind,
                                int severity, RngStream& rng,
                                const CorruptionConstants& constants = {});
PointCloud PrecipitationScatterAtRate(const PointCloud& cloud, Precipitation kind,
                                      double rate_mm_per_hour, RngStream& rng,
                                      const CorruptionConstants& constants = {});

// Simplified fog model with attenuation alpha (1/m). With probability
// (1 - T) * 0.8 a return becomes backscatter at range U(1, min(d, 25)) with
// intensity 0.2; otherwise intensity is scaled by T = exp(-2 alpha d).
PointCloud FogLidar(const PointCloud& cloud, int severity, RngStream& rng,
                    const CorruptionConstants& constants = {});
PointCloud FogLidarWithAlpha(const PointCloud& cloud, double alpha,
                             RngStream& rng,
                             const CorruptionConstants& constants = {});

// Per-box membership. A point inside several boxes belongs to the first one.
// members[b] is ascending.
std::vector<std::vector<std::size_t>> BoxMembers(const PointCloud& cloud,
                                                 std::span<const Box3D> boxes);

PointCloud LocalNoise(const PointCloud& cloud, std::span<const Box3D> boxes,
                      NoiseKind kind, int severity, RngStream& rng,
                      const CorruptionConstants& constants = {});
PointCloud LocalDensityDecrease(const PointCloud& cloud,
                                std::span<const Box3D> boxes, int severity,
                                RngStream& rng);
PointCloud LocalCutout(const PointCloud& cloud, std::span<const Box3D> boxes,
                       int severity, RngStream& rng);

// Splits each box into thirds along its length axis (cuts at -l/6, +l/6):
// the rear third stays, the middle moves c/2 forward, the front moves c.
PointCloud MovingObjectLidar(const PointCloud& cloud,
                             std::span<const Box3D> boxes, int severity);
PointCloud MovingObjectLidarWithOffset(const PointCloud& cloud,
                                       std::span<const Box3D> boxes,
                                       double offset);

// Rotation about a uniform random axis by N(0, rotation_sigma^2) radians,
// translation N(0, translation_sigma^2) per axis.
Pose SamplePosePerturbation(double rotation_sigma, double translation_sigma,
                            RngStream& rng);

PointCloud ApplyPose(const PointCloud& cloud, const Pose& pose);

// Throws MissingEgoPose when `ego_pose` is empty.
PointCloud MotionCompensation(const PointCloud& cloud,
                              const std::optional<Pose>& ego_pose, int severity,
                              RngStream& rng);

// The k candidates nearest to `anchor`, ordered by (distance, index).
std::vector<std::size_t> NearestNeighbors(const PointCloud& cloud,
                                          std::span<const std::size_t> candidates,
                                          const Vec3& anchor, std::size_t k);

}  // namespace corrupt3d

#endif  // CORRUPT3D_LIDAR_CORRUPTIONS_H_
