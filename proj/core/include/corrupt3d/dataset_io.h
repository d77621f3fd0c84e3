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

#ifndef CORRUPT3D_DATASET_IO_H_
#define CORRUPT3D_DATASET_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrupt3d/corruption.h"
#include "corrupt3d/geometry.h"

namespace corrupt3d {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Raw files

std::vector<std::uint8_t> ReadFileBytes(const fs::path& path);
// Writes to a sibling temporary and renames it into place.
void WriteFileAtomic(const fs::path& path, std::span<const std::uint8_t> bytes);
void WriteFileAtomic(const fs::path& path, std::string_view text);

// Lower-case 64 hex digit SHA-256.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Velodyne point files: packed little-endian float32 (x, y, z, intensity).

std::vector<std::uint8_t> EncodePointBin(const PointCloud& cloud);
// Throws MalformedPointFile (length not a multiple of 16, non-finite value,
// intensity outside [0, 1]) naming the byte offset.
PointCloud DecodePointBin(std::span<const std::uint8_t> bytes,
                          std::string_view source = "<memory>");
PointCloud ReadPointBin(const fs::path& path);
void WritePointBin(const PointCloud& cloud, const fs::path& path);

// ---------------------------------------------------------------------------
// KITTI calibration

// All "KEY: values" rows of a calib file, order preserved.
struct KittiCalib {
  std::vector<std::pair<std::string, std::vector<double>>> entries;

  const std::vector<double>* Find(std::string_view key) const;
  // Rectified camera `index` (P<index>) with lidar_to_cam = R0_rect * Tr.
  Calibration Camera(int index = 2) const;
  // Stores `pose` as Tr_velo_to_cam and resets R0_rect to identity, so that
  // Camera() returns it.
  void SetLidarToCam(const Pose& pose);
};

KittiCalib ParseKittiCalib(std::string_view text, std::string_view source = "<memory>");
KittiCalib ReadKittiCalib(const fs::path& path);
std::string FormatKittiCalib(const KittiCalib& calib);

// ---------------------------------------------------------------------------
// KITTI labels / detections

struct KittiObject {
  std::string type;
  double truncation = 0;
  int occlusion = 0;
  double alpha = 0;
  std::array<double, 4> bbox{};  // left, top, right, bottom (pixels)
  double h = 0, w = 0, l = 0;    // meters
  double x = 0, y = 0, z = 0;    // bottom center, rectified camera frame
  double ry = 0;                 // about camera y
  std::optional<double> score;   // detections only
};

// Throws MalformedLabel with the 1-based line number.
std::vector<KittiObject> ParseKittiObjects(std::string_view text,
                                           std::string_view source = "<memory>");
std::string FormatKittiObject(const KittiObject& obj);

// Standard KITTI rule on 2D box height, occlusion and truncation.
Difficulty KittiDifficulty(const KittiObject& obj);

// Camera-frame record -> LiDAR-frame box (geometric center).
Box3D KittiObjectToBox(const KittiObject& obj, const Calibration& calib);
// Inverse of KittiObjectToBox for the 3D fields; 2D fields are left default.
KittiObject BoxToKittiObject(const Box3D& box, const Calibration& calib);

// Ground-truth boxes, DontCare rows skipped.
std::vector<Box3D> ReadKittiLabel(const fs::path& path, const Calibration& calib);

// ---------------------------------------------------------------------------
// Images (PNG write; PNG or JPEG read)

std::vector<std::uint8_t> EncodePng(const ImageBuffer& img);
std::vector<std::uint8_t> EncodeJpeg(const ImageBuffer& img, int quality = 90);
// Throws MalformedImage.
ImageBuffer DecodeImage(std::span<const std::uint8_t> bytes,
                        std::string_view source = "<memory>");
ImageBuffer ReadImage(const fs::path& path);
void WriteImage(const ImageBuffer& img, const fs::path& path);

// ---------------------------------------------------------------------------
// Dataset layout

enum class DatasetKind {
  kKitti,          // object benchmark layout, frames unordered in time
  kKittiSequence,  // same layout plus poses.txt, frames are one drive in order
};

std::string_view DatasetKindName(DatasetKind kind);
std::optional<DatasetKind> ParseDatasetKind(std::string_view name);

struct DatasetLayout {
  fs::path root;
  DatasetKind kind = DatasetKind::kKitti;

  static constexpr std::string_view kVelodyneDir = "velodyne";
  static constexpr std::string_view kImageDir = "image_2";
  static constexpr std::string_view kCalibDir = "calib";
  static constexpr std::string_view kLabelDir = "label_2";
  static constexpr std::string_view kPosesFile = "poses.txt";

  fs::path PointPath(const std::string& id) const;
  // Existing image file for `id` (.png preferred over .jpg), or nullopt.
  std::optional<fs::path> ImagePath(const std::string& id) const;
  fs::path CalibPath(const std::string& id) const;
  fs::path LabelPath(const std::string& id) const;
};

struct FrameListing {
  std::vector<std::string> frames;   // lexicographic
  std::vector<std::string> skipped;  // "id: reason", when allowed
};

// Frame ids are the stems of velodyne/*.bin. Each needs an image and, when
// `require_calib`, a calib file. Missing files raise IncompleteFrame unless
// `allow_incomplete`, in which case the frame is listed in `skipped`.
FrameListing EnumerateFrames(const DatasetLayout& layout, bool require_calib,
                             bool allow_incomplete = false);

// poses.txt: one 3x4 row-major [R|t] per line (KITTI odometry format).
std::vector<Pose> ReadPoses(const fs::path& path);

// Loads cloud, image, calib and labels (missing label file = no boxes).
FrameBundle LoadFrame(const DatasetLayout& layout, const std::string& frame_id,
                      const std::optional<Pose>& ego_pose = std::nullopt);

// out_root-relative path of a corrupted artifact:
// <corruption>/<severity>/<input-relative path>.
fs::path CorruptedRelativePath(CorruptionId corruption, int severity,
                               const fs::path& input_relative);

// ---------------------------------------------------------------------------
// Manifest (JSON Lines)

struct ManifestEntry {
  std::string frame;
  std::string corruption;
  int severity = 0;
  std::uint64_t seed = 0;
  std::string file;    // relative to the output root, '/' separated
  std::string sha256;  // 64 hex digits

  bool operator==(const ManifestEntry&) const = default;
};

std::string FormatManifestLine(const ManifestEntry& entry);
void WriteManifest(std::span<const ManifestEntry> entries, const fs::path& path);
std::vector<ManifestEntry> ReadManifest(const fs::path& path);

}  // namespace corrupt3d

#endif  // CORRUPT3D_DATASET_IO_H_
