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

#include "corrupt3d/corruption.h"

#include <algorithm>
#include <string>
#include <utility>

#include "corrupt3d/errors.h"

namespace corrupt3d {
namespace {

using L = CorruptionLevel;
using C = CorruptionId;
constexpr unsigned kBoth = kPayloadLidar | kPayloadCamera;

// id, name, level, payloads, ego_pose, sequence, boxes, excluded_on_kitti
constexpr std::array<CorruptionInfo, kNumCorruptions> kCorruptions{{
    {C::kSnow, "snow", L::kWeather, kBoth, false, false, false, false},
    {C::kRain, "rain", L::kWeather, kBoth, false, false, false, false},
    {C::kFog, "fog", L::kWeather, kBoth, false, false, false, false},
    {C::kSunlight, "sunlight", L::kWeather, kBoth, false, false, false, false},
    {C::kDensityDecrease, "density_decrease", L::kSensor, kPayloadLidar, false,
     false, false, false},
    {C::kCutout, "cutout", L::kSensor, kPayloadLidar, false, false, false, false},
    {C::kCrosstalk, "crosstalk", L::kSensor, kPayloadLidar, false, false, false,
     false},
    {C::kFovLost, "fov_lost", L::kSensor, kPayloadLidar, false, false, false,
     true},
    {C::kGaussianLidar, "gaussian_lidar", L::kSensor, kPayloadLidar, false,
     false, false, false},
    {C::kUniformLidar, "uniform_lidar", L::kSensor, kPayloadLidar, false, false,
     false, false},
    {C::kImpulseLidar, "impulse_lidar", L::kSensor, kPayloadLidar, false, false,
     false, false},
    {C::kGaussianCamera, "gaussian_camera", L::kSensor, kPayloadCamera, false,
     false, false, false},
    {C::kUniformCamera, "uniform_camera", L::kSensor, kPayloadCamera, false,
     false, false, false},
    {C::kImpulseCamera, "impulse_camera", L::kSensor, kPayloadCamera, false,
     false, false, false},
    {C::kMotionCompensation, "motion_compensation", L::kMotion, kPayloadLidar,
     true, false, false, true},
    {C::kMovingObject, "moving_object", L::kMotion, kBoth, false, false, true,
     false},
    {C::kMotionBlur, "motion_blur", L::kMotion, kPayloadCamera, false, false,
     false, false},
    {C::kLocalDensityDecrease, "local_density_decrease", L::kObject,
     kPayloadLidar, false, false, true, false},
    {C::kLocalCutout, "local_cutout", L::kObject, kPayloadLidar, false, false,
     true, false},
    {C::kLocalGaussian, "local_gaussian", L::kObject, kPayloadLidar, false,
     false, true, false},
    {C::kLocalUniform, "local_uniform", L::kObject, kPayloadLidar, false, false,
     true, false},
    {C::kLocalImpulse, "local_impulse", L::kObject, kPayloadLidar, false, false,
     true, false},
    {C::kShear, "shear", L::kObject, kBoth, false, false, true, false},
    {C::kScale, "scale", L::kObject, kBoth, false, false, true, false},
    {C::kRotation, "rotation", L::kObject, kBoth, false, false, true, false},
    {C::kSpatialMisalignment, "spatial_misalignment", L::kAlignment,
     kPayloadCalib, false, false, false, false},
    {C::kTemporalMisalignment, "temporal_misalignment", L::kAlignment, kBoth,
     false, true, false, true},
}};

using Member = double CorruptionConstants::*;
constexpr std::pair<std::string_view, Member> kConstantFields[] = {
    {"impulse_magnitude", &CorruptionConstants::impulse_magnitude},
    {"crosstalk_sigma", &CorruptionConstants::crosstalk_sigma},
    {"sunlight_sigma", &CorruptionConstants::sunlight_sigma},
    {"rain_extinction", &CorruptionConstants::rain_extinction},
    {"snow_extinction", &CorruptionConstants::snow_extinction},
    {"precip_rate_exponent", &CorruptionConstants::precip_rate_exponent},
    {"precip_drop_probability", &CorruptionConstants::precip_drop_probability},
    {"precip_min_scatter_range", &CorruptionConstants::precip_min_scatter_range},
    {"precip_scatter_intensity", &CorruptionConstants::precip_scatter_intensity},
    {"fog_scatter_probability", &CorruptionConstants::fog_scatter_probability},
    {"fog_min_scatter_range", &CorruptionConstants::fog_min_scatter_range},
    {"fog_max_scatter_range", &CorruptionConstants::fog_max_scatter_range},
    {"fog_scatter_intensity", &CorruptionConstants::fog_scatter_intensity},
    {"zoom_increment", &CorruptionConstants::zoom_increment},
    {"gray_level", &CorruptionConstants::gray_level},
    {"precip_mask_opacity", &CorruptionConstants::precip_mask_opacity},
    {"precip_brightness", &CorruptionConstants::precip_brightness},
    {"sun_top_fraction", &CorruptionConstants::sun_top_fraction},
    {"tps_region_expand", &CorruptionConstants::tps_region_expand},
};

}  // namespace

std::span<const CorruptionInfo> AllCorruptions() { return kCorruptions; }

const CorruptionInfo& Info(CorruptionId id) {
  return kCorruptions[static_cast<std::size_t>(id)];
}

std::string_view Name(CorruptionId id) { return Info(id).name; }

std::optional<CorruptionId> ParseCorruption(std::string_view name) {
  for (const CorruptionInfo& info : kCorruptions) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

void CheckSeverity(int severity) {
  if (severity < 1 || severity > kNumSeverities) {
    throw InvalidArgument("severity must be in 1..5, got " +
                          std::to_string(severity));
  }
}

bool CorruptionConstants::Set(std::string_view name, double value) {
  for (const auto& [field, member] : kConstantFields) {
    if (field == name) {
      this->*member = value;
      return true;
    }
  }
  return false;
}

std::optional<double> CorruptionConstants::Get(std::string_view name) const {
  for (const auto& [field, member] : kConstantFields) {
    if (field == name) return this->*member;
  }
  return std::nullopt;
}

std::vector<std::string_view> CorruptionConstants::Names() {
  std::vector<std::string_view> names;
  for (const auto& [field, member] : kConstantFields) names.push_back(field);
  return names;
}

}  // namespace corrupt3d
