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

#ifndef CORRUPT3D_CORRUPTION_H_
#define CORRUPT3D_CORRUPTION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corrupt3d {

// The 27 corruption families, grouped weather / sensor / motion / object /
// alignment.
enum class CorruptionId {
  kSnow,
  kRain,
  kFog,
  kSunlight,
  kDensityDecrease,
  kCutout,
  kCrosstalk,
  kFovLost,
  kGaussianLidar,
  kUniformLidar,
  kImpulseLidar,
  kGaussianCamera,
  kUniformCamera,
  kImpulseCamera,
  kMotionCompensation,
  kMovingObject,
  kMotionBlur,
  kLocalDensityDecrease,
  kLocalCutout,
  kLocalGaussian,
  kLocalUniform,
  kLocalImpulse,
  kShear,
  kScale,
  kRotation,
  kSpatialMisalignment,
  kTemporalMisalignment,
};

inline constexpr int kNumCorruptions = 27;
inline constexpr int kNumSeverities = 5;

enum class NoiseKind { kGaussian, kUniform, kImpulse };

// Bit set of the payloads a corruption rewrites.
enum Payload : unsigned {
  kPayloadLidar = 1u << 0,
  kPayloadCamera = 1u << 1,
  kPayloadCalib = 1u << 2,
};

enum class CorruptionLevel { kWeather, kSensor, kMotion, kObject, kAlignment };

struct CorruptionInfo {
  CorruptionId id;
  std::string_view name;  // CLI / directory name
  CorruptionLevel level;
  unsigned payloads;
  bool needs_ego_pose;
  bool needs_sequence;
  bool needs_boxes;
  // Not part of the KITTI benchmark: KITTI labels only cover the front view
  // and the dataset ships neither ego poses nor timestamps.
  bool excluded_on_kitti;
};

std::span<const CorruptionInfo> AllCorruptions();
const CorruptionInfo& Info(CorruptionId id);
std::string_view Name(CorruptionId id);
std::optional<CorruptionId> ParseCorruption(std::string_view name);

// Throws InvalidArgument unless 1 <= severity <= 5.
void CheckSeverity(int severity);

struct CorruptionSpec {
  CorruptionId corruption;
  int severity;  // 1..5
  std::uint64_t master_seed;
};

// Exact rational fraction; Of(n) == floor(n * num / den).
struct Fraction {
  std::int64_t num;
  std::int64_t den;
  constexpr std::size_t Of(std::size_t n) const {
    return static_cast<std::size_t>(static_cast<std::int64_t>(n) * num / den);
  }
  constexpr double value() const { return static_cast<double>(num) / den; }
};

// Severity schedules, indexed by severity - 1.
namespace tables {

inline constexpr std::array<Fraction, 5> kDensityRemoval{
    {{6, 100}, {12, 100}, {18, 100}, {24, 100}, {30, 100}}};
inline constexpr std::array<int, 5> kCutoutGroups{2, 3, 5, 7, 10};
inline constexpr Fraction kCutoutGroupSize{1, 50};
inline constexpr std::array<Fraction, 5> kCrosstalkRatio{
    {{4, 1000}, {8, 1000}, {12, 1000}, {16, 1000}, {20, 1000}}};
inline constexpr std::array<double, 5> kFovHalfAngleDeg{105, 90, 75, 60, 45};
inline constexpr std::array<double, 5> kLidarNoiseScale{0.02, 0.04, 0.06, 0.08,
                                                        0.10};
inline constexpr std::array<int, 5> kImpulseDivisor{30, 25, 20, 15, 10};
inline constexpr std::array<Fraction, 5> kSunlightRatio{
    {{1, 100}, {2, 100}, {3, 100}, {4, 100}, {5, 100}}};
// mm/h; shared by rainfall and snowfall.
inline constexpr std::array<double, 5> kPrecipitationRate{0.20, 0.73, 1.5625,
                                                          3.125, 7.29};
inline constexpr std::array<double, 5> kFogAlpha{0.005, 0.01, 0.02, 0.03, 0.06};
inline constexpr std::array<double, 5> kMovingObjectOffset{0.2, 0.3, 0.4, 0.5,
                                                           0.6};
inline constexpr std::array<double, 5> kPoseRotationSigma{0.02, 0.04, 0.06, 0.08,
                                                          0.10};
inline constexpr std::array<double, 5> kPoseTranslationSigma{
    0.002, 0.004, 0.006, 0.008, 0.010};
inline constexpr Fraction kLocalDensityGroupSize{10, 100};
inline constexpr Fraction kLocalDensityDeletion{75, 100};
inline constexpr std::array<Fraction, 5> kLocalCutoutRemoval{
    {{30, 100}, {40, 100}, {50, 100}, {60, 100}, {70, 100}}};

// Camera.
inline constexpr std::array<double, 5> kImageGaussianSigma{0.04, 0.06, 0.08, 0.09,
                                                           0.10};
inline constexpr std::array<double, 5> kImageUniformBound{0.08, 0.12, 0.18, 0.26,
                                                          0.38};
inline constexpr std::array<double, 5> kImageImpulseFraction{0.01, 0.02, 0.03,
                                                             0.05, 0.07};
inline constexpr std::array<double, 5> kRainDensity{0.01, 0.06, 0.10, 0.15, 0.20};
inline constexpr std::array<double, 5> kSnowFlakeDensity{0.002, 0.004, 0.006,
                                                         0.008, 0.010};
inline constexpr std::array<double, 5> kFogOpacity{0.10, 0.20, 0.30, 0.40, 0.50};
inline constexpr std::array<int, 5> kSunRadiusPx{30, 40, 50, 60, 70};
inline constexpr std::array<int, 5> kZoomFactor{2, 3, 4, 5, 6};

// Object transforms. Shear magnitude ranges; severity 4 upper bound is 0.25.
inline constexpr std::array<std::array<double, 2>, 5> kShearRange{
    {{0.0, 0.1}, {0.05, 0.15}, {0.1, 0.2}, {0.15, 0.25}, {0.20, 0.30}}};
inline constexpr std::array<double, 5> kScaleDelta{0.04, 0.08, 0.12, 0.16, 0.20};
inline constexpr std::array<std::array<double, 2>, 5> kRotationRangeDeg{
    {{0, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}}};

inline constexpr std::array<int, 5> kStuckFrames{2, 4, 6, 8, 10};

}  // namespace tables

// Physical and rendering constants that are our own parameterization rather
// than fixed schedules. Overridable by name for research runs.
struct CorruptionConstants {
  double impulse_magnitude = 0.10;       // m, per axis, random sign
  double crosstalk_sigma = 3.0;          // m
  double sunlight_sigma = 2.0;           // m
  double rain_extinction = 0.01;         // 1/m per (mm/h)^0.6
  double snow_extinction = 0.02;         // 1/m per (mm/h)^0.6
  double precip_rate_exponent = 0.6;
  double precip_drop_probability = 0.5;  // of attenuated returns
  double precip_min_scatter_range = 0.5; // m
  double precip_scatter_intensity = 0.3; // multiplier
  double fog_scatter_probability = 0.8;  // of attenuated returns
  double fog_min_scatter_range = 1.0;    // m
  double fog_max_scatter_range = 25.0;   // m
  double fog_scatter_intensity = 0.2;    // absolute
  double zoom_increment = 0.004;         // per frame, times zoom factor
  double gray_level = 128.0;
  double precip_mask_opacity = 0.3;
  double precip_brightness = 0.7;
  double sun_top_fraction = 0.4;
  double tps_region_expand = 0.2;

  // Returns false for unknown names.
  bool Set(std::string_view name, double value);
  std::optional<double> Get(std::string_view name) const;
  static std::vector<std::string_view> Names();
};

}  // namespace corrupt3d

#endif  // CORRUPT3D_CORRUPTION_H_
