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

#include "corrupt3d/multimodal_corruptions.h"

#include <algorithm>
#include <cmath>

#include "corrupt3d/errors.h"
#include "corrupt3d/lidar_corruptions.h"

namespace corrupt3d {
namespace {

std::size_t Idx(int severity) {
  CheckSeverity(severity);
  return static_cast<std::size_t>(severity - 1);
}

}  // namespace

Vec3 ObjectTransform::ApplyLocal(const Vec3& p) const {
  switch (kind) {
    case ObjectTransformKind::kShear:
      // Row vector times [[1,0,d],[e,1,f],[g,0,1]].
      return {p.x + e * p.y + g * p.z, p.y, d * p.x + f * p.y + p.z};
    case ObjectTransformKind::kScale:
      return {p.x * scale.x, p.y * scale.y, p.z * scale.z};
    case ObjectTransformKind::kRotation: {
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
    }
  }
  return p;
}

ObjectTransformKind ObjectTransformFor(CorruptionId id) {
  switch (id) {
    case CorruptionId::kShear: return ObjectTransformKind::kShear;
    case CorruptionId::kScale: return ObjectTransformKind::kScale;
    case CorruptionId::kRotation: return ObjectTransformKind::kRotation;
    default: break;
  }
  throw InvalidArgument(std::string(Name(id)) + " is not an object transform");
}

ObjectTransform SampleObjectTransform(ObjectTransformKind kind, int severity,
                                      RngStream& rng) {
  const std::size_t s = Idx(severity);
  ObjectTransform t{kind};
  switch (kind) {
    case ObjectTransformKind::kShear: {
      const auto [lo, hi] = tables::kShearRange[s];
      for (double* v : {&t.d, &t.e, &t.f, &t.g}) *v = rng.Sign() * rng.Uniform(lo, hi);
      break;
    }
    case ObjectTransformKind::kScale: {
      const double delta = tables::kScaleDelta[s];
      t.scale = {1 + rng.Sign() * delta, 1 + rng.Sign() * delta,
                 1 + rng.Sign() * delta};
      break;
    }
    case ObjectTransformKind::kRotation: {
      const auto [lo, hi] = tables::kRotationRangeDeg[s];
      t.angle = DegreesToRadians(rng.Sign() * rng.Uniform(lo, hi));
      break;
    }
  }
  return t;
}

ObjectTransformResult ApplyObjectTransform(const FrameBundle& frame,
                                           ObjectTransformKind kind, int severity,
                                           RngStream& rng,
                                           const CorruptionConstants& constants) {
  CheckSeverity(severity);
  std::vector<ObjectTransform> transforms;
  transforms.reserve(frame.boxes.size());
  for (std::size_t b = 0; b < frame.boxes.size(); ++b) {
    RngStream box_rng = rng.Substream(b);
    transforms.push_back(SampleObjectTransform(kind, severity, box_rng));
  }
  return ApplyObjectTransforms(frame, transforms, constants);
}

ObjectTransformResult ApplyObjectTransforms(const FrameBundle& frame,
                                            std::span<const ObjectTransform> transforms,
                                            const CorruptionConstants& constants) {
  if (transforms.size() != frame.boxes.size()) {
    throw InvalidArgument("need exactly one transform per box");
  }
  ObjectTransformResult result;
  result.transforms.assign(transforms.begin(), transforms.end());
  result.frame = frame;

  // LiDAR.
  std::vector<PointXYZI> pts(frame.cloud.points().begin(), frame.cloud.points().end());
  const auto members = BoxMembers(frame.cloud, frame.boxes);
  for (std::size_t b = 0; b < frame.boxes.size(); ++b) {
    const Box3D& box = frame.boxes[b];
    for (std::size_t i : members[b]) {
      const Vec3 g =
          FromBoxLocal(transforms[b].ApplyLocal(ToBoxLocal(pts[i].position(), box)), box);
      pts[i] = {static_cast<float>(g.x), static_cast<float>(g.y),
                static_cast<float>(g.z), pts[i].intensity};
    }
  }
  result.frame.cloud = PointCloud(std::move(pts));

  // Camera.
  for (std::size_t b = 0; b < frame.boxes.size(); ++b) {
    const Box3D& box = frame.boxes[b];
    const auto before = BoxCorners(box);
    std::array<Vec3, 8> after = CanonicalCorners(box.dims());
    for (Vec3& c : after) c = FromBoxLocal(transforms[b].ApplyLocal(c), box);

    for (CameraView& cam : result.frame.cameras) {
      BoxWarpRecord rec;
      rec.box_index = b;
      rec.camera_id = cam.camera_id;
      for (std::size_t k = 0; k < 8; ++k) {
        const auto p0 = ProjectToImage(before[k], cam.calib);
        const auto p1 = ProjectToImage(after[k], cam.calib);
        if (!p0 || !p1) continue;
        rec.src.push_back(*p0);
        rec.dst.push_back(*p1);
        rec.transformed_corners.push_back(after[k]);
      }
      const std::string where =
          "box " + std::to_string(b) + " camera " + cam.camera_id;
      if (rec.src.size() < 3) {
        if (!rec.src.empty()) {
          result.diagnostics.push_back(where + ": too few corners in front of camera");
        }
        continue;
      }
      std::vector<Vec2> hull = rec.src;
      hull.insert(hull.end(), rec.dst.begin(), rec.dst.end());
      rec.region = BoundingRegion(hull, constants.tps_region_expand,
                                  cam.image.width(), cam.image.height());
      if (rec.region.empty()) continue;
      try {
        const TpsWarp warp = TpsWarp::Fit(rec.src, rec.dst);
        for (std::size_t k = 0; k < rec.dst.size(); ++k) {
          const Vec2 s = warp.SourceLocation(rec.dst[k]);
          rec.max_inverse_residual = std::max(
              rec.max_inverse_residual, std::hypot(s.u - rec.src[k].u, s.v - rec.src[k].v));
        }
        cam.image = TpsApply(cam.image, warp, rec.region);
        result.warps.push_back(std::move(rec));
      } catch (const DegenerateControlPoints& e) {
        result.diagnostics.push_back(where + ": image step skipped: " + e.what());
      }
    }
  }
  return result;
}

Calibration SpatialMisalignment(const Calibration& calib, int severity,
                                RngStream& rng) {
  const std::size_t s = Idx(severity);
  const Pose delta = SamplePosePerturbation(tables::kPoseRotationSigma[s],
                                            tables::kPoseTranslationSigma[s], rng);
  Calibration out = calib;
  out.lidar_to_cam = Pose(delta.rotation() * calib.lidar_to_cam.rotation(),
                          calib.lidar_to_cam.translation() + delta.translation());
  return out;
}

SequenceView::SequenceView(std::vector<std::reference_wrapper<const FrameBundle>> frames)
    : frames_(std::move(frames)) {
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (!(frames_[i - 1].get().frame_id < frames_[i].get().frame_id)) {
      throw InvalidArgument("sequence frame ids must be strictly increasing");
    }
  }
}

int StuckFrameLag(int severity) { return tables::kStuckFrames[Idx(severity)]; }

FrameBundle ReplacePayload(const FrameBundle& current, const FrameBundle& stale,
                           Modality modality) {
  FrameBundle out = current;
  if (modality == Modality::kLidar) {
    out.cloud = stale.cloud;
    return out;
  }
  for (CameraView& cam : out.cameras) {
    for (const CameraView& old : stale.cameras) {
      if (old.camera_id == cam.camera_id) cam.image = old.image;
    }
  }
  return out;
}

FrameBundle TemporalMisalignment(const SequenceView& seq, std::size_t index,
                                 Modality modality, int severity) {
  const int lag = StuckFrameLag(severity);
  if (seq.size() == 0) throw InvalidArgument("empty sequence");
  if (index >= seq.size()) throw InvalidArgument("frame index out of range");
  const std::size_t source = index >= static_cast<std::size_t>(lag)
                                 ? index - static_cast<std::size_t>(lag)
                                 : 0;
  return ReplacePayload(seq[index], seq[source], modality);
}

}  // namespace corrupt3d
