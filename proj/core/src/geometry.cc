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

#include "corrupt3d/geometry.h"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <sstream>

#include "corrupt3d/errors.h"

namespace corrupt3d {

Mat3 Mat3::RotationZ(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Mat3 Mat3::AxisAngle(const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double k = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  return {{c + x * x * k, x * y * k - z * s, x * z * k + y * s,
           y * x * k + z * s, c + y * y * k, y * z * k - x * s,
           z * x * k - y * s, z * y * k + x * s, c + z * z * k}};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) +
                (*this)(i, 2) * o(2, j);
    }
  }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
          m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::Transposed() const {
  return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
}

double Mat3::Determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double Mat3::RotationAngle() const {
  const double c = std::clamp((m[0] + m[4] + m[8] - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const Mat3 rtr = rotation.Transposed() * rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (!(std::abs(rtr(i, j) - expected) <= kOrthonormalTolerance)) {
        throw InvalidArgument("pose rotation is not orthonormal");
      }
    }
  }
  if (!(std::abs(rotation.Determinant() - 1.0) <= kOrthonormalTolerance)) {
    throw InvalidArgument("pose rotation determinant is not +1");
  }
  if (!std::isfinite(translation.x) || !std::isfinite(translation.y) ||
      !std::isfinite(translation.z)) {
    throw InvalidArgument("pose translation is not finite");
  }
}

Pose Pose::FromApproximateRotation(const Mat3& approx_rotation,
                                   const Vec3& translation) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = approx_rotation(i, j);
  }
  if (!a.allFinite()) throw InvalidArgument("rotation is not finite");
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  if ((svd.singularValues().array() - 1.0).abs().maxCoeff() > 1e-2) {
    throw InvalidArgument("rotation is not close to orthonormal");
  }
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) {
    d(2, 2) = -1.0;
  }
  const Eigen::Matrix3d r = svd.matrixU() * d * svd.matrixV().transpose();
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = r(i, j);
  }
  return Pose(out, translation);
}

Pose Pose::Inverse() const {
  const Mat3 rt = rotation_.Transposed();
  return Pose(rt, -(rt * translation_));
}

Pose Pose::operator*(const Pose& o) const {
  return Pose(rotation_ * o.rotation_, rotation_ * o.translation_ + translation_);
}

std::optional<std::string> CheckPoint(const PointXYZI& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
    return "non-finite coordinate";
  }
  if (!(p.intensity >= 0.f && p.intensity <= 1.f)) {
    return "intensity outside [0, 1]";
  }
  return std::nullopt;
}

PointCloud::PointCloud(std::vector<PointXYZI> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (auto err = CheckPoint(points_[i])) {
      throw InvalidArgument("point " + std::to_string(i) + ": " + *err);
    }
  }
}

ObjectClass ObjectClass::FromName(const std::string& name) {
  if (name == "Car") return Car();
  if (name == "Pedestrian") return Pedestrian();
  if (name == "Cyclist") return Cyclist();
  return {Kind::kOther, name};
}

std::string DifficultyName(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kModerate: return "moderate";
    case Difficulty::kHard: return "hard";
    case Difficulty::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Difficulty> ParseDifficulty(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "easy") return Difficulty::kEasy;
  if (lower == "moderate") return Difficulty::kModerate;
  if (lower == "hard") return Difficulty::kHard;
  return std::nullopt;
}

double NormalizeAngle(double angle) {
  double a = std::fmod(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Box3D::Box3D(const Vec3& center, const BoxDims& dims, double yaw,
             ObjectClass object_class, Difficulty difficulty)
    : center_(center),
      dims_(dims),
      yaw_(NormalizeAngle(yaw)),
      class_(std::move(object_class)),
      difficulty_(difficulty) {
  if (!(dims.length > 0 && dims.width > 0 && dims.height > 0) ||
      !std::isfinite(dims.length) || !std::isfinite(dims.width) ||
      !std::isfinite(dims.height)) {
    throw InvalidArgument("box dimensions must be positive and finite");
  }
  if (!std::isfinite(center.x) || !std::isfinite(center.y) ||
      !std::isfinite(center.z) || !std::isfinite(yaw)) {
    throw InvalidArgument("box center/yaw must be finite");
  }
}

Vec3 ToBoxLocal(const Vec3& p, const Box3D& box) {
  const Vec3 d = p - box.center();
  const double c = std::cos(box.yaw());
  const double s = std::sin(box.yaw());
  return {c * d.x + s * d.y, -s * d.x + c * d.y, d.z};
}

Vec3 FromBoxLocal(const Vec3& local, const Box3D& box) {
  const double c = std::cos(box.yaw());
  const double s = std::sin(box.yaw());
  return Vec3{c * local.x - s * local.y, s * local.x + c * local.y, local.z} +
         box.center();
}

std::array<Vec3, 8> CanonicalCorners(const BoxDims& dims) {
  const double hl = dims.length / 2, hw = dims.width / 2, hh = dims.height / 2;
  return {{{hl, hw, -hh}, {-hl, hw, -hh}, {-hl, -hw, -hh}, {hl, -hw, -hh},
           {hl, hw, hh}, {-hl, hw, hh}, {-hl, -hw, hh}, {hl, -hw, hh}}};
}

std::array<Vec3, 8> BoxCorners(const Box3D& box) {
  std::array<Vec3, 8> corners = CanonicalCorners(box.dims());
  for (Vec3& c : corners) c = FromBoxLocal(c, box);
  return corners;
}

bool ContainsLocal(const Vec3& local, const BoxDims& dims) {
  return std::abs(local.x) <= dims.length / 2 &&
         std::abs(local.y) <= dims.width / 2 &&
         std::abs(local.z) <= dims.height / 2;
}

bool BoxContains(const Box3D& box, const Vec3& p) {
  return ContainsLocal(ToBoxLocal(p, box), box.dims());
}

std::vector<std::size_t> PointsInBox(const PointCloud& cloud, const Box3D& box) {
  const BoxDims& d = box.dims();
  const double radius = 0.5 * std::sqrt(d.length * d.length + d.width * d.width);
  const double hh = d.height / 2;
  const Vec3& c = box.center();
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const PointXYZI& p = cloud[i];
    if (std::abs(p.x - c.x) > radius || std::abs(p.y - c.y) > radius ||
        std::abs(p.z - c.z) > hh) {
      continue;
    }
    if (BoxContains(box, p.position())) inside.push_back(i);
  }
  return inside;
}

void Calibration::Validate() const {
  if (!(projection[0] > 0 && projection[5] > 0)) {
    throw InvalidArgument("camera focal lengths must be positive");
  }
  for (double v : projection) {
    if (!std::isfinite(v)) throw InvalidArgument("projection is not finite");
  }
}

std::optional<Vec2> ProjectToImage(const Vec3& p, const Calibration& calib) {
  const Vec3 cam = calib.lidar_to_cam.Apply(p);
  if (cam.z <= 0) return std::nullopt;
  const auto& k = calib.projection;
  const double x = k[0] * cam.x + k[1] * cam.y + k[2] * cam.z + k[3];
  const double y = k[4] * cam.x + k[5] * cam.y + k[6] * cam.z + k[7];
  const double w = k[8] * cam.x + k[9] * cam.y + k[10] * cam.z + k[11];
  if (w <= 0) return std::nullopt;
  return Vec2{x / w, y / w};
}

ImageBuffer::ImageBuffer(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be >= 1");
  }
  data_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be >= 1");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    std::ostringstream msg;
    msg << "image buffer has " << data_.size() << " bytes, expected "
        << static_cast<std::size_t>(width) * height * kChannels;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace corrupt3d
