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

#ifndef CORRUPT3D_CAMERA_CORRUPTIONS_H_
#define CORRUPT3D_CAMERA_CORRUPTIONS_H_

#include <span>

#include "corrupt3d/corruption.h"
#include "corrupt3d/geometry.h"
#include "corrupt3d/rng.h"
#include "corrupt3d/tps.h"

namespace corrupt3d {

// Image-only corruptions. Pixels are treated as values in [0, 1]; results are
// clamped and re-quantized to 8 bits once per call. Dimensions never change.

// Gaussian: per-channel N(0, sigma^2). Uniform: per-channel U(-b, b).
// Impulse: a fraction of pixels is set to black or white (all channels).
ImageBuffer ImageNoise(const ImageBuffer& img, NoiseKind kind, int severity,
                       RngStream& rng);

enum class Weather { kSnow, kRain, kFog, kSunlight };

// Snow/rain: particle streaks, then a 30% gray mask and 30% brightness loss.
// Fog: value-noise haze, then a gray mask with the severity's opacity.
// Sunlight: a saturated disc with linear falloff out to twice its radius,
// centered in the top 40% of the frame.
ImageBuffer WeatherImage(const ImageBuffer& img, Weather kind, int severity,
                         RngStream& rng, const CorruptionConstants& constants = {});

// The snow/rain gray-mask and brightness step alone, for one channel value.
double PrecipitationMaskValue(double value,
                              const CorruptionConstants& constants = {});

// Zoom blur: mean of `zoom` resampled copies, copy i scaled about the region
// center by 1 + i * zoom_increment * zoom (i = 0 .. zoom - 1). The center is
// the integer pixel (u0 + w/2, v0 + h/2). Pixels outside `region` untouched.
ImageBuffer ZoomBlur(const ImageBuffer& img, const Region2D& region, int zoom,
                     const CorruptionConstants& constants = {});

ImageBuffer MotionBlur(const ImageBuffer& img, int severity,
                       const CorruptionConstants& constants = {});

// Zoom blur applied independently inside each region.
ImageBuffer MovingObjectImage(const ImageBuffer& img,
                              std::span<const Region2D> regions, int severity,
                              const CorruptionConstants& constants = {});

}  // namespace corrupt3d

#endif  // CORRUPT3D_CAMERA_CORRUPTIONS_H_
