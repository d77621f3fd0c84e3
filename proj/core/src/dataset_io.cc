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

#include "corrupt3d/dataset_io.h"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "corrupt3d/errors.h"
#include "json.hpp"

namespace corrupt3d {
namespace {

std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> ParseDouble(std::string_view token) {
  double v = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::string ToText(const std::vector<std::uint8_t>& bytes) {
  return std::string(bytes.begin(), bytes.end());
}

float LoadF32(const std::uint8_t* p) {
  std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                    (static_cast<std::uint32_t>(p[1]) << 8) |
                    (static_cast<std::uint32_t>(p[2]) << 16) |
                    (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(u);
}

void StoreF32(float f, std::uint8_t* p) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  p[0] = static_cast<std::uint8_t>(u);
  p[1] = static_cast<std::uint8_t>(u >> 8);
  p[2] = static_cast<std::uint8_t>(u >> 16);
  p[3] = static_cast<std::uint8_t>(u >> 24);
}

Mat3 RotationFromRow12(const std::vector<double>& v) {
  return {{v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10]}};
}

}  // namespace

std::vector<std::uint8_t> ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void WriteFileAtomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  static std::atomic<std::uint64_t> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

void WriteFileAtomic(const fs::path& path, std::string_view text) {
  WriteFileAtomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                  text.size()));
}

std::string Sha256Hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

// --- point bins -------------------------------------------------------------

std::vector<std::uint8_t> EncodePointBin(const PointCloud& cloud) {
  std::vector<std::uint8_t> bytes(cloud.size() * 16);
  std::uint8_t* p = bytes.data();
  for (const PointXYZI& pt : cloud.points()) {
    StoreF32(pt.x, p);
    StoreF32(pt.y, p + 4);
    StoreF32(pt.z, p + 8);
    StoreF32(pt.intensity, p + 12);
    p += 16;
  }
  return bytes;
}

PointCloud DecodePointBin(std::span<const std::uint8_t> bytes, std::string_view source) {
  if (bytes.size() % 16 != 0) {
    throw MalformedPointFile(std::string(source) + ": length " +
                             std::to_string(bytes.size()) +
                             " is not a multiple of 16 bytes");
  }
  std::vector<PointXYZI> pts(bytes.size() / 16);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::uint8_t* p = bytes.data() + 16 * i;
    pts[i] = {LoadF32(p), LoadF32(p + 4), LoadF32(p + 8), LoadF32(p + 12)};
    if (auto err = CheckPoint(pts[i])) {
      throw MalformedPointFile(std::string(source) + ": " + *err + " at byte offset " +
                               std::to_string(16 * i));
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud ReadPointBin(const fs::path& path) {
  return DecodePointBin(ReadFileBytes(path), path.string());
}

void WritePointBin(const PointCloud& cloud, const fs::path& path) {
  WriteFileAtomic(path, EncodePointBin(cloud));
}

// --- calibration --------------------------------------------------------------

const std::vector<double>* KittiCalib::Find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

Calibration KittiCalib::Camera(int index) const {
  const std::string pkey = "P" + std::to_string(index);
  const auto* p = Find(pkey);
  if (!p || p->size() != 12) throw MalformedCalib("missing or short " + pkey);
  const auto* tr = Find("Tr_velo_to_cam");
  if (!tr || tr->size() != 12) throw MalformedCalib("missing or short Tr_velo_to_cam");
  Mat3 r0 = Mat3::Identity();
  if (const auto* r = Find("R0_rect")) {
    if (r->size() != 9) throw MalformedCalib("R0_rect needs 9 values");
    std::copy(r->begin(), r->end(), r0.m.begin());
  }
  const Vec3 t{(*tr)[3], (*tr)[7], (*tr)[11]};
  Calibration calib;
  try {
    calib.lidar_to_cam =
        Pose::FromApproximateRotation(r0 * RotationFromRow12(*tr), r0 * t);
  } catch (const InvalidArgument& e) {
    throw MalformedCalib(std::string("extrinsics: ") + e.what());
  }
  std::copy(p->begin(), p->end(), calib.projection.begin());
  try {
    calib.Validate();
  } catch (const InvalidArgument& e) {
    throw MalformedCalib(pkey + ": " + e.what());
  }
  return calib;
}

void KittiCalib::SetLidarToCam(const Pose& pose) {
  const Mat3& r = pose.rotation();
  const Vec3& t = pose.translation();
  std::vector<double> tr{r(0, 0), r(0, 1), r(0, 2), t.x, r(1, 0), r(1, 1),
                         r(1, 2), t.y,     r(2, 0), r(2, 1), r(2, 2), t.z};
  std::vector<double> identity{1, 0, 0, 0, 1, 0, 0, 0, 1};
  bool have_tr = false, have_r0 = false;
  for (auto& [k, v] : entries) {
    if (k == "Tr_velo_to_cam") {
      v = tr;
      have_tr = true;
    } else if (k == "R0_rect") {
      v = identity;
      have_r0 = true;
    }
  }
  if (!have_r0) entries.emplace_back("R0_rect", identity);
  if (!have_tr) entries.emplace_back("Tr_velo_to_cam", tr);
}

KittiCalib ParseKittiCalib(std::string_view text, std::string_view source) {
  KittiCalib calib;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = Tokenize(line);
    if (tokens.empty()) return;
    std::string_view key = tokens[0];
    if (key.empty() || key.back() != ':') {
      throw MalformedCalib(std::string(source) + ":" + std::to_string(line_no) +
                           ": expected 'KEY:'");
    }
    key.remove_suffix(1);
    std::vector<double> values;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto v = ParseDouble(tokens[i]);
      if (!v) {
        throw MalformedCalib(std::string(source) + ":" + std::to_string(line_no) +
                             ": bad number '" + std::string(tokens[i]) + "'");
      }
      values.push_back(*v);
    }
    calib.entries.emplace_back(std::string(key), std::move(values));
  });
  return calib;
}

KittiCalib ReadKittiCalib(const fs::path& path) {
  return ParseKittiCalib(ToText(ReadFileBytes(path)), path.string());
}

std::string FormatKittiCalib(const KittiCalib& calib) {
  std::string out;
  for (const auto& [k, v] : calib.entries) {
    out += k + ":";
    for (double x : v) out += " " + FormatDouble(x);
    out += "\n";
  }
  return out;
}

// --- labels -------------------------------------------------------------------

std::vector<KittiObject> ParseKittiObjects(std::string_view text, std::string_view source) {
  std::vector<KittiObject> objects;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = Tokenize(line);
    if (tokens.empty()) return;
    auto fail = [&](const std::string& why) {
      throw MalformedLabel(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
    };
    if (tokens.size() != 15 && tokens.size() != 16) {
      fail("expected 15 or 16 fields, got " + std::to_string(tokens.size()));
    }
    double v[15];
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto d = ParseDouble(tokens[i]);
      if (!d) fail("bad number '" + std::string(tokens[i]) + "'");
      if (i < 15) v[i] = *d;
    }
    KittiObject o;
    o.type = std::string(tokens[0]);
    o.truncation = v[1];
    o.occlusion = static_cast<int>(std::lround(v[2]));
    o.alpha = v[3];
    o.bbox = {v[4], v[5], v[6], v[7]};
    o.h = v[8];
    o.w = v[9];
    o.l = v[10];
    o.x = v[11];
    o.y = v[12];
    o.z = v[13];
    o.ry = v[14];
    if (tokens.size() == 16) o.score = *ParseDouble(tokens[15]);
    if (o.type != "DontCare" && !(o.h > 0 && o.w > 0 && o.l > 0)) {
      fail("non-positive box dimensions");
    }
    objects.push_back(std::move(o));
  });
  return objects;
}

std::string FormatKittiObject(const KittiObject& o) {
  std::ostringstream s;
  s << o.type << ' ' << FormatDouble(o.truncation) << ' ' << o.occlusion << ' '
    << FormatDouble(o.alpha);
  for (double b : o.bbox) s << ' ' << FormatDouble(b);
  for (double v : {o.h, o.w, o.l, o.x, o.y, o.z, o.ry}) s << ' ' << FormatDouble(v);
  if (o.score) s << ' ' << FormatDouble(*o.score);
  return s.str();
}

Difficulty KittiDifficulty(const KittiObject& o) {
  const double height = o.bbox[3] - o.bbox[1];
  if (height >= 40 && o.occlusion <= 0 && o.truncation <= 0.15) return Difficulty::kEasy;
  if (height >= 25 && o.occlusion <= 1 && o.truncation <= 0.30) return Difficulty::kModerate;
  if (height >= 25 && o.occlusion <= 2 && o.truncation <= 0.50) return Difficulty::kHard;
  return Difficulty::kUnknown;
}

Box3D KittiObjectToBox(const KittiObject& o, const Calibration& calib) {
  const Pose cam_to_lidar = calib.lidar_to_cam.Inverse();
  // Camera y points down; the label location is the bottom-face center.
  const Vec3 center = cam_to_lidar.Apply({o.x, o.y - o.h / 2, o.z});
  const Vec3 heading =
      cam_to_lidar.rotation() * Vec3{std::cos(o.ry), 0, -std::sin(o.ry)};
  return Box3D(center, {o.l, o.w, o.h}, std::atan2(heading.y, heading.x),
               ObjectClass::FromName(o.type), KittiDifficulty(o));
}

KittiObject BoxToKittiObject(const Box3D& box, const Calibration& calib) {
  KittiObject o;
  o.type = box.object_class().name();
  const Vec3 c = calib.lidar_to_cam.Apply(box.center());
  o.h = box.dims().height;
  o.w = box.dims().width;
  o.l = box.dims().length;
  o.x = c.x;
  o.y = c.y + o.h / 2;
  o.z = c.z;
  const Vec3 heading = calib.lidar_to_cam.rotation() *
                       Vec3{std::cos(box.yaw()), std::sin(box.yaw()), 0};
  o.ry = std::atan2(-heading.z, heading.x);
  return o;
}

std::vector<Box3D> ReadKittiLabel(const fs::path& path, const Calibration& calib) {
  std::vector<Box3D> boxes;
  for (const KittiObject& o :
       ParseKittiObjects(ToText(ReadFileBytes(path)), path.string())) {
    if (o.type == "DontCare") continue;
    boxes.push_back(KittiObjectToBox(o, calib));
  }
  return boxes;
}

// --- layout -------------------------------------------------------------------

std::string_view DatasetKindName(DatasetKind kind) {
  return kind == DatasetKind::kKitti ? "kitti" : "kitti_sequence";
}

std::optional<DatasetKind> ParseDatasetKind(std::string_view name) {
  if (name == "kitti") return DatasetKind::kKitti;
  if (name == "kitti_sequence") return DatasetKind::kKittiSequence;
  return std::nullopt;
}

fs::path DatasetLayout::PointPath(const std::string& id) const {
  return root / kVelodyneDir / (id + ".bin");
}

std::optional<fs::path> DatasetLayout::ImagePath(const std::string& id) const {
  for (const char* ext : {".png", ".jpg", ".jpeg"}) {
    fs::path p = root / kImageDir / (id + ext);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

fs::path DatasetLayout::CalibPath(const std::string& id) const {
  return root / kCalibDir / (id + ".txt");
}

fs::path DatasetLayout::LabelPath(const std::string& id) const {
  return root / kLabelDir / (id + ".txt");
}

FrameListing EnumerateFrames(const DatasetLayout& layout, bool require_calib,
                             bool allow_incomplete) {
  const fs::path velo = layout.root / DatasetLayout::kVelodyneDir;
  if (!fs::is_directory(velo)) {
    throw IncompleteFrame("no " + velo.string() + " directory");
  }
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(velo)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  FrameListing listing;
  for (const std::string& id : ids) {
    std::string missing;
    if (!layout.ImagePath(id)) missing = "image";
    if (missing.empty() && require_calib && !fs::exists(layout.CalibPath(id))) {
      missing = "calib";
    }
    if (missing.empty() && fs::exists(layout.LabelPath(id)) &&
        !fs::exists(layout.CalibPath(id))) {
      missing = "calib (needed to convert labels)";
    }
    if (missing.empty()) {
      listing.frames.push_back(id);
    } else if (allow_incomplete) {
      listing.skipped.push_back(id + ": missing " + missing);
    } else {
      throw IncompleteFrame("frame " + id + ": missing " + missing);
    }
  }
  return listing;
}

std::vector<Pose> ReadPoses(const fs::path& path) {
  std::vector<Pose> poses;
  const std::string text = ToText(ReadFileBytes(path));
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = Tokenize(line);
    if (tokens.empty()) return;
    if (tokens.size() != 12) {
      throw MalformedCalib(path.string() + ":" + std::to_string(line_no) +
                           ": pose rows need 12 values");
    }
    std::vector<double> v;
    for (auto t : tokens) {
      auto d = ParseDouble(t);
      if (!d) throw MalformedCalib(path.string() + ":" + std::to_string(line_no) +
                                   ": bad number");
      v.push_back(*d);
    }
    poses.push_back(Pose::FromApproximateRotation(RotationFromRow12(v),
                                                  {v[3], v[7], v[11]}));
  });
  return poses;
}

FrameBundle LoadFrame(const DatasetLayout& layout, const std::string& frame_id,
                      const std::optional<Pose>& ego_pose) {
  FrameBundle frame;
  frame.frame_id = frame_id;
  frame.cloud = ReadPointBin(layout.PointPath(frame_id));
  frame.ego_pose = ego_pose;
  const auto image_path = layout.ImagePath(frame_id);
  if (!image_path) throw IncompleteFrame("frame " + frame_id + ": missing image");
  std::optional<Calibration> calib;
  if (fs::exists(layout.CalibPath(frame_id))) {
    calib = ReadKittiCalib(layout.CalibPath(frame_id)).Camera(2);
  }
  if (calib) {
    frame.cameras.push_back(
        {std::string(DatasetLayout::kImageDir), ReadImage(*image_path), *calib});
  }
  if (fs::exists(layout.LabelPath(frame_id))) {
    if (!calib) throw IncompleteFrame("frame " + frame_id + ": labels without calib");
    frame.boxes = ReadKittiLabel(layout.LabelPath(frame_id), *calib);
  }
  return frame;
}

fs::path CorruptedRelativePath(CorruptionId corruption, int severity,
                               const fs::path& input_relative) {
  CheckSeverity(severity);
  return fs::path(std::string(Name(corruption))) / std::to_string(severity) /
         input_relative;
}

// --- manifest -----------------------------------------------------------------

std::string FormatManifestLine(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["frame"] = e.frame;
  j["corruption"] = e.corruption;
  j["severity"] = e.severity;
  j["seed"] = e.seed;
  j["file"] = e.file;
  j["sha256"] = e.sha256;
  return j.dump();
}

void WriteManifest(std::span<const ManifestEntry> entries, const fs::path& path) {
  std::string text;
  for (const ManifestEntry& e : entries) text += FormatManifestLine(e) + "\n";
  WriteFileAtomic(path, text);
}

std::vector<ManifestEntry> ReadManifest(const fs::path& path) {
  std::vector<ManifestEntry> entries;
  const std::string text = ToText(ReadFileBytes(path));
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    if (Tokenize(line).empty()) return;
    try {
      const auto j = nlohmann::json::parse(line);
      entries.push_back({j.at("frame").get<std::string>(),
                         j.at("corruption").get<std::string>(),
                         j.at("severity").get<int>(), j.at("seed").get<std::uint64_t>(),
                         j.at("file").get<std::string>(),
                         j.at("sha256").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return entries;
}

}  // namespace corrupt3d
