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

#ifndef CORRUPT3D_MULTIMODAL_CORRUPTIONS_H_
#define CORRUPT3D_MULTIMODAL_CORRUPTIONS_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "corrupt3d/corruption.h"
#include "corrupt3d/geometry.h"
#include "corrupt3d/rng.h"
#include "corrupt3d/tps.h"

namespace corrupt3d {

enum class ObjectTransformKind { kShear, kScale, kRotation };

// A per-object deformation acting in box-local coordinates.
struct ObjectTransform {
  ObjectTransformKind kind = ObjectTransformKind::kRotation;
  // Shear as a row-vector product p * [[1,0,d],[e,1,f],[g,0,1]].
  double d = 0, e = 0, f = 0, g = 0;
  // Per-axis scale factors.
  Vec3 scale{1, 1, 1};
  // Rotation about local z, radians.
  double angle = 0;

  static ObjectTransform Identity(ObjectTransformKind kind) { return {kind}; }
  Vec3 ApplyLocal(const Vec3& p) const;
};

ObjectTransformKind ObjectTransformFor(CorruptionId id);

// Shear: each of d, e, f, g is sign * U(lo, hi). Scale: each factor is
// 1 + sign * delta. Rotation: sign * U(lo, hi) degrees, returned in radians.
ObjectTransform SampleObjectTransform(ObjectTransformKind kind, int severity,
                                      RngStream& rng);

// Control points used to warp one camera image for one box.
struct BoxWarpRecord {
  std::size_t box_index = 0;
  std::string camera_id;
  std::vector<Vec3> transformed_corners;  // LiDAR frame, paired with dst
  std::vector<Vec2> src;                  // projected original corners
  std::vector<Vec2> dst;                  // projected transformed corners
  Region2D region;
  double max_inverse_residual = 0;        // |tps(dst_i) - src_i|, pixels
};

struct ObjectTransformResult {
  FrameBundle frame;
  std::vector<ObjectTransform> transforms;  // one per box
  std::vector<BoxWarpRecord> warps;
  std::vector<std::string> diagnostics;     // skipped image steps
};

// Samples one transform per box from rng.Substream(box index), then applies
// each with ApplyObjectTransforms.
ObjectTransformResult ApplyObjectTransform(const FrameBundle& frame,
                                           ObjectTransformKind kind, int severity,
                                           RngStream& rng,
                                           const CorruptionConstants& constants = {});

// Deforms the in-box points of boxes[i] by transforms[i] and warps every
// camera image with a TPS driven by the box's projected corners before and
// after the transform. An image step is skipped (with a diagnostic) when
// fewer than 3 corners project in front of the camera or the spline is
// degenerate; the LiDAR step is always applied. Labels are left unchanged.
ObjectTransformResult ApplyObjectTransforms(const FrameBundle& frame,
                                            std::span<const ObjectTransform> transforms,
                                            const CorruptionConstants& constants = {});

// Randomly rotates (axis-angle, N(0, sigma_r^2)) and translates
// (N(0, sigma_t^2) per axis) the LiDAR-to-camera extrinsics.
Calibration SpatialMisalignment(const Calibration& calib, int severity,
                                RngStream& rng);

enum class Modality { kLidar, kCamera };

// Immutable ordered view over the frames of one drive segment. Frame ids
// must be strictly increasing.
class SequenceView {
 public:
  explicit SequenceView(std::vector<std::reference_wrapper<const FrameBundle>> frames);

  std::size_t size() const { return frames_.size(); }
  const FrameBundle& operator[](std::size_t i) const { return frames_[i].get(); }

 private:
  std::vector<std::reference_wrapper<const FrameBundle>> frames_;
};

int StuckFrameLag(int severity);

// `current` with one modality's payload taken from `stale`.
FrameBundle ReplacePayload(const FrameBundle& current, const FrameBundle& stale,
                           Modality modality);

// Frame `index` with `modality` stuck at frame max(0, index - lag).
FrameBundle TemporalMisalignment(const SequenceView& seq, std::size_t index,
                                 Modality modality, int severity);

}  // namespace corrupt3d

#endif  // CORRUPT3D_MULTIMODAL_CORRUPTIONS_H_
