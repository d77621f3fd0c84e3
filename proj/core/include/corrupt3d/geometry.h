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

#ifndef CORRUPT3D_GEOMETRY_H_
#define CORRUPT3D_GEOMETRY_H_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace corrupt3d {

// All geometry is expressed in the LiDAR frame: x forward, y left, z up,
// meters. Angles are radians.

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double DegreesToRadians(double degrees) {
  return degrees * kPi / 180.0;
}

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;

  double Dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 Cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double Norm() const { return std::sqrt(Dot(*this)); }
};

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 Identity() { return {}; }
  // Rotation by `angle` about +z.
  static Mat3 RotationZ(double angle);
  // Rodrigues rotation about a unit `axis`.
  static Mat3 AxisAngle(const Vec3& axis, double angle);

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }

  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 Transposed() const;
  double Determinant() const;
  // Rotation angle in [0, pi] for a rotation matrix.
  double RotationAngle() const;
};

// Rigid transform p -> R p + t. R is validated orthonormal with det +1.
class Pose {
 public:
  static constexpr double kOrthonormalTolerance = 1e-9;

  Pose() = default;
  // Throws InvalidArgument when `rotation` is not a proper rotation.
  Pose(const Mat3& rotation, const Vec3& translation);
  // Projects `approx_rotation` onto SO(3) first. Used for calibration files
  // whose rotations are printed with limited precision. Throws
  // InvalidArgument if a singular value is more than 1% from one.
  static Pose FromApproximateRotation(const Mat3& approx_rotation,
                                      const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 Apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Pose Inverse() const;
  // (a * b).Apply(p) == a.Apply(b.Apply(p)).
  Pose operator*(const Pose& o) const;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

struct PointXYZI {
  float x = 0.f;
  float y = 0.f;
  float z = 0.f;
  float intensity = 0.f;

  Vec3 position() const { return {x, y, z}; }
  bool operator==(const PointXYZI&) const = default;
};

// LiDAR sweep. Coordinates finite, intensity in [0, 1].
class PointCloud {
 public:
  PointCloud() = default;
  // Throws InvalidArgument when a point violates the invariants.
  explicit PointCloud(std::vector<PointXYZI> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const PointXYZI& operator[](std::size_t i) const { return points_[i]; }
  std::span<const PointXYZI> points() const { return points_; }
  std::vector<PointXYZI> ReleasePoints() && { return std::move(points_); }

  bool operator==(const PointCloud&) const = default;

 private:
  std::vector<PointXYZI> points_;
};

// Returns an error description or nullopt when `p` satisfies the invariants.
std::optional<std::string> CheckPoint(const PointXYZI& p);

struct ObjectClass {
  enum class Kind { kCar, kPedestrian, kCyclist, kOther };
  Kind kind = Kind::kOther;
  std::string tag;  // original label string, e.g. "Van" for kOther

  static ObjectClass FromName(const std::string& name);
  static ObjectClass Car() { return {Kind::kCar, "Car"}; }
  static ObjectClass Pedestrian() { return {Kind::kPedestrian, "Pedestrian"}; }
  static ObjectClass Cyclist() { return {Kind::kCyclist, "Cyclist"}; }
  const std::string& name() const { return tag; }
  bool operator==(const ObjectClass&) const = default;
};

// Ordered so that a box of difficulty d counts toward every query >= d.
enum class Difficulty { kEasy = 0, kModerate = 1, kHard = 2, kUnknown = 3 };

std::string DifficultyName(Difficulty d);
std::optional<Difficulty> ParseDifficulty(const std::string& name);

// Normalizes to (-pi, pi].
double NormalizeAngle(double angle);

struct BoxDims {
  double length = 1.0;  // along heading (local x)
  double width = 1.0;   // local y
  double height = 1.0;  // local z
  bool operator==(const BoxDims&) const = default;
};

// Oriented 3D box. `center` is the geometric center, yaw is about +z.
class Box3D {
 public:
  Box3D() = default;
  // Throws InvalidArgument for non-positive or non-finite dims.
  Box3D(const Vec3& center, const BoxDims& dims, double yaw,
        ObjectClass object_class = ObjectClass::Car(),
        Difficulty difficulty = Difficulty::kUnknown);

  const Vec3& center() const { return center_; }
  const BoxDims& dims() const { return dims_; }
  double yaw() const { return yaw_; }
  const ObjectClass& object_class() const { return class_; }
  Difficulty difficulty() const { return difficulty_; }
  double Volume() const { return dims_.length * dims_.width * dims_.height; }

  bool operator==(const Box3D&) const = default;

 private:
  Vec3 center_;
  BoxDims dims_;
  double yaw_ = 0.0;
  ObjectClass class_ = ObjectClass::Car();
  Difficulty difficulty_ = Difficulty::kUnknown;
};

Vec3 ToBoxLocal(const Vec3& p, const Box3D& box);
Vec3 FromBoxLocal(const Vec3& local, const Box3D& box);

// Corner order: bottom face (z = -h/2) counter-clockwise starting at
// (+l/2, +w/2): (+,+), (-,+), (-,-), (+,-); then the top face in the same
// order. Signs are in box-local (x, y).
std::array<Vec3, 8> BoxCorners(const Box3D& box);
// Box-local lattice matching BoxCorners() ordering.
std::array<Vec3, 8> CanonicalCorners(const BoxDims& dims);

bool ContainsLocal(const Vec3& local, const BoxDims& dims);
bool BoxContains(const Box3D& box, const Vec3& p);

// Indices of points inside the closed box, ascending.
std::vector<std::size_t> PointsInBox(const PointCloud& cloud, const Box3D& box);

// Camera model: pixel = P * [R|t] * p, P is the 3x4 rectified projection.
struct Calibration {
  Pose lidar_to_cam;
  std::array<double, 12> projection{};  // row-major 3x4

  // Throws InvalidArgument unless fx, fy > 0.
  void Validate() const;
};

// nullopt when the point is on or behind the image plane.
std::optional<Vec2> ProjectToImage(const Vec3& p, const Calibration& calib);

// 8-bit interleaved RGB.
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  ImageBuffer() = default;
  ImageBuffer(int width, int height, std::uint8_t fill = 0);
  // Throws InvalidArgument when data.size() != width * height * 3.
  ImageBuffer(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> mutable_data() { return data_; }

  std::uint8_t at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  bool operator==(const ImageBuffer&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct CameraView {
  std::string camera_id;  // e.g. "image_2"
  ImageBuffer image;
  Calibration calib;
};

// One dataset sample; the unit every corruption acts on.
struct FrameBundle {
  std::string frame_id;
  PointCloud cloud;
  std::vector<CameraView> cameras;
  std::optional<Pose> ego_pose;
  std::vector<Box3D> boxes;
};

}  // namespace corrupt3d

#endif  // CORRUPT3D_GEOMETRY_H_
