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

#include "corrupt3d/pipeline.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "corrupt3d/camera_corruptions.h"
#include "corrupt3d/errors.h"
#include "corrupt3d/lidar_corruptions.h"
#include "corrupt3d/multimodal_corruptions.h"
#include "corrupt3d/tps.h"

namespace corrupt3d {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitList(std::string_view list) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const auto item = Trim(list.substr(pos, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - pos));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool ParseBool(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") {
    out = true;
  } else if (s == "false" || s == "0" || s == "no") {
    out = false;
  } else {
    return false;
  }
  return true;
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

RngStream CameraRng(RngStream& rng, std::size_t camera) {
  return rng.Substream(1 + camera);
}

std::vector<Region2D> BoxImageRegions(const FrameBundle& frame, const CameraView& cam) {
  std::vector<Region2D> regions;
  for (const Box3D& box : frame.boxes) {
    std::vector<Vec2> pts;
    for (const Vec3& c : BoxCorners(box)) {
      if (auto uv = ProjectToImage(c, cam.calib)) pts.push_back(*uv);
    }
    if (pts.size() < 2) continue;
    const Region2D r = BoundingRegion(pts, 0.0, cam.image.width(), cam.image.height());
    if (!r.empty()) regions.push_back(r);
  }
  return regions;
}

std::optional<Weather> WeatherFor(CorruptionId id) {
  switch (id) {
    case CorruptionId::kSnow: return Weather::kSnow;
    case CorruptionId::kRain: return Weather::kRain;
    case CorruptionId::kFog: return Weather::kFog;
    case CorruptionId::kSunlight: return Weather::kSunlight;
    default: return std::nullopt;
  }
}

std::optional<NoiseKind> CameraNoiseFor(CorruptionId id) {
  switch (id) {
    case CorruptionId::kGaussianCamera: return NoiseKind::kGaussian;
    case CorruptionId::kUniformCamera: return NoiseKind::kUniform;
    case CorruptionId::kImpulseCamera: return NoiseKind::kImpulse;
    default: return std::nullopt;
  }
}

// Shared, bounded cache of loaded frames; concurrent requests for the same
// frame wait on a single load.
class FrameCache {
 public:
  using Loader = std::function<FrameBundle(std::size_t)>;
  FrameCache(Loader loader, std::size_t capacity)
      : loader_(std::move(loader)), capacity_(std::max<std::size_t>(capacity, 1)) {}

  std::shared_ptr<const FrameBundle> Get(std::size_t index) {
    std::shared_future<std::shared_ptr<const FrameBundle>> future;
    std::promise<std::shared_ptr<const FrameBundle>> promise;
    bool load = false;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = entries_.find(index);
      if (it != entries_.end()) {
        order_.remove(index);
        order_.push_back(index);
        future = it->second;
      } else {
        future = promise.get_future().share();
        entries_.emplace(index, future);
        order_.push_back(index);
        while (order_.size() > capacity_) {
          entries_.erase(order_.front());
          order_.pop_front();
        }
        load = true;
      }
    }
    if (load) {
      try {
        promise.set_value(std::make_shared<const FrameBundle>(loader_(index)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  Loader loader_;
  std::size_t capacity_;
  std::mutex mu_;
  std::map<std::size_t, std::shared_future<std::shared_ptr<const FrameBundle>>> entries_;
  std::list<std::size_t> order_;
};

struct WorkUnit {
  std::size_t frame;
  CorruptionId corruption;
  int severity;
};

std::vector<std::string> SortedStems(const fs::path& dir, std::string_view ext) {
  std::vector<std::string> ids;
  if (!fs::is_directory(dir)) return ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

int DefaultJobs() {
  if (const char* env = std::getenv(kJobsEnvVar)) {
    if (auto n = ParseNumber<int>(Trim(env)); n && *n > 0) return *n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<CorruptionId> ApplicableCorruptions(DatasetKind kind) {
  std::vector<CorruptionId> out;
  for (const CorruptionInfo& info : AllCorruptions()) {
    if (kind == DatasetKind::kKitti && info.excluded_on_kitti) continue;
    out.push_back(info.id);
  }
  return out;
}

std::optional<std::vector<CorruptionId>> ParseCorruptionList(std::string_view list) {
  if (Trim(list) == "all") return std::nullopt;
  std::vector<CorruptionId> out;
  for (std::string_view item : SplitList(list)) {
    auto id = ParseCorruption(item);
    if (!id) throw ConfigError("unknown corruption '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw ConfigError("empty corruption list");
  return out;
}

std::vector<int> ParseSeverityList(std::string_view list) {
  std::set<int> out;
  for (std::string_view item : SplitList(list)) {
    const auto dash = item.find('-');
    std::optional<int> lo, hi;
    if (dash == std::string_view::npos) {
      lo = hi = ParseNumber<int>(item);
    } else {
      lo = ParseNumber<int>(Trim(item.substr(0, dash)));
      hi = ParseNumber<int>(Trim(item.substr(dash + 1)));
    }
    if (!lo || !hi || *lo < 1 || *hi > kNumSeverities || *lo > *hi) {
      throw ConfigError("bad severity '" + std::string(item) + "' (expected 1..5)");
    }
    for (int s = *lo; s <= *hi; ++s) out.insert(s);
  }
  if (out.empty()) throw ConfigError("empty severity list");
  return {out.begin(), out.end()};
}

void ApplyConfigText(RunConfig& config, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    try {
      if (key == "input") {
        config.input_root = std::string(value);
      } else if (key == "output") {
        config.output_root = std::string(value);
      } else if (key == "corruptions") {
        config.corruptions = ParseCorruptionList(value).value_or(std::vector<CorruptionId>{});
      } else if (key == "severities") {
        config.severities = ParseSeverityList(value);
      } else if (key == "seed") {
        auto seed = ParseNumber<std::uint64_t>(value);
        if (!seed) throw ConfigError("bad seed");
        config.master_seed = *seed;
      } else if (key == "jobs") {
        auto jobs = ParseNumber<int>(value);
        if (!jobs || *jobs < 0) throw ConfigError("bad jobs");
        config.jobs = *jobs;
      } else if (key == "dataset") {
        auto kind = ParseDatasetKind(value);
        if (!kind) throw ConfigError("unknown dataset kind '" + std::string(value) + "'");
        config.kind = *kind;
      } else if (key == "force") {
        if (!ParseBool(value, config.force)) throw ConfigError("bad boolean");
      } else if (key == "allow_incomplete") {
        if (!ParseBool(value, config.allow_incomplete)) throw ConfigError("bad boolean");
      } else if (key.rfind("constant.", 0) == 0) {
        const std::string name = key.substr(9);
        auto v = ParseNumber<double>(value);
        if (!v) throw ConfigError("bad number for " + key);
        if (!config.constants.Set(name, *v)) throw ConfigError("unknown constant " + name);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void ApplyConfigFile(RunConfig& config, const fs::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = ReadFileBytes(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  ApplyConfigText(config, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                           bytes.size()),
                  path.string());
}

RunConfig ResolveConfig(const RunConfig& config) {
  RunConfig out = config;
  if (out.input_root.empty()) throw ConfigError("no input directory");
  if (out.output_root.empty()) throw ConfigError("no output directory");
  if (!out.master_seed) throw ConfigError("no seed given");
  if (out.corruptions.empty()) out.corruptions = ApplicableCorruptions(out.kind);
  if (out.severities.empty()) out.severities = {1, 2, 3, 4, 5};
  if (out.jobs <= 0) out.jobs = DefaultJobs();
  for (CorruptionId id : out.corruptions) {
    const CorruptionInfo& info = Info(id);
    if (out.kind == DatasetKind::kKitti && info.excluded_on_kitti) {
      throw ConfigError(
          "corruption '" + std::string(info.name) +
          "' is not applicable to the kitti layout: fov_lost, motion_compensation and "
          "temporal_misalignment are excluded from KITTI corruption sets (they need a "
          "360 degree sensor, ego poses or frame sequences); use dataset kitti_sequence");
    }
  }
  for (int s : out.severities) {
    if (s < 1 || s > kNumSeverities) throw ConfigError("severity out of range 1..5");
  }
  return out;
}

std::string FormatRunConfig(const RunConfig& c) {
  std::ostringstream out;
  out << "input = " << c.input_root.string() << "\n";
  out << "output = " << c.output_root.string() << "\n";
  out << "dataset = " << DatasetKindName(c.kind) << "\n";
  out << "corruptions = ";
  for (std::size_t i = 0; i < c.corruptions.size(); ++i) {
    out << (i ? "," : "") << Name(c.corruptions[i]);
  }
  out << "\nseverities = ";
  for (std::size_t i = 0; i < c.severities.size(); ++i) {
    out << (i ? "," : "") << c.severities[i];
  }
  out << "\nseed = " << c.master_seed.value_or(0) << "\n";
  out << "jobs = " << c.jobs << "\n";
  out << "force = " << (c.force ? "true" : "false") << "\n";
  out << "allow_incomplete = " << (c.allow_incomplete ? "true" : "false") << "\n";
  for (std::string_view name : CorruptionConstants::Names()) {
    out << "constant." << name << " = " << FormatDouble(*c.constants.Get(name)) << "\n";
  }
  return out.str();
}

Modality TemporalModality(std::uint64_t seed) {
  return (Mix64(seed ^ 0x7e4d0a11ULL) & 1) ? Modality::kCamera : Modality::kLidar;
}

FrameBundle CorruptFrame(const FrameBundle& frame, CorruptionId id, int severity,
                         RngStream& rng, const CorruptionConstants& k,
                         const FrameBundle* stale) {
  CheckSeverity(severity);
  FrameBundle out = frame;
  auto each_image = [&](auto&& fn) {
    for (std::size_t c = 0; c < out.cameras.size(); ++c) {
      RngStream cam_rng = CameraRng(rng, c);
      out.cameras[c].image = fn(out.cameras[c], cam_rng);
    }
  };

  if (auto weather = WeatherFor(id)) {
    RngStream lidar_rng = rng.Substream(0);
    switch (*weather) {
      case Weather::kSnow:
        out.cloud = PrecipitationScatter(frame.cloud, Precipitation::kSnow, severity,
                                         lidar_rng, k);
        break;
      case Weather::kRain:
        out.cloud = PrecipitationScatter(frame.cloud, Precipitation::kRain, severity,
                                         lidar_rng, k);
        break;
      case Weather::kFog:
        out.cloud = FogLidar(frame.cloud, severity, lidar_rng, k);
        break;
      case Weather::kSunlight:
        out.cloud = SunlightLidar(frame.cloud, severity, lidar_rng, k);
        break;
    }
    each_image([&](const CameraView& cam, RngStream& r) {
      return WeatherImage(cam.image, *weather, severity, r, k);
    });
    return out;
  }
  if (auto noise = CameraNoiseFor(id)) {
    each_image([&](const CameraView& cam, RngStream& r) {
      return ImageNoise(cam.image, *noise, severity, r);
    });
    return out;
  }

  switch (id) {
    case CorruptionId::kDensityDecrease:
      out.cloud = DensityDecrease(frame.cloud, severity, rng);
      break;
    case CorruptionId::kCutout:
      out.cloud = Cutout(frame.cloud, severity, rng);
      break;
    case CorruptionId::kCrosstalk:
      out.cloud = Crosstalk(frame.cloud, severity, rng, k);
      break;
    case CorruptionId::kFovLost:
      out.cloud = FovLost(frame.cloud, severity);
      break;
    case CorruptionId::kGaussianLidar:
      out.cloud = CoordinateNoise(frame.cloud, NoiseKind::kGaussian, severity, rng, k);
      break;
    case CorruptionId::kUniformLidar:
      out.cloud = CoordinateNoise(frame.cloud, NoiseKind::kUniform, severity, rng, k);
      break;
    case CorruptionId::kImpulseLidar:
      out.cloud = CoordinateNoise(frame.cloud, NoiseKind::kImpulse, severity, rng, k);
      break;
    case CorruptionId::kMotionCompensation:
      out.cloud = MotionCompensation(frame.cloud, frame.ego_pose, severity, rng);
      break;
    case CorruptionId::kMovingObject:
      out.cloud = MovingObjectLidar(frame.cloud, frame.boxes, severity);
      for (CameraView& cam : out.cameras) {
        const auto regions = BoxImageRegions(frame, cam);
        cam.image = MovingObjectImage(cam.image, regions, severity, k);
      }
      break;
    case CorruptionId::kMotionBlur:
      for (CameraView& cam : out.cameras) cam.image = MotionBlur(cam.image, severity, k);
      break;
    case CorruptionId::kLocalDensityDecrease:
      out.cloud = LocalDensityDecrease(frame.cloud, frame.boxes, severity, rng);
      break;
    case CorruptionId::kLocalCutout:
      out.cloud = LocalCutout(frame.cloud, frame.boxes, severity, rng);
      break;
    case CorruptionId::kLocalGaussian:
      out.cloud = LocalNoise(frame.cloud, frame.boxes, NoiseKind::kGaussian, severity, rng, k);
      break;
    case CorruptionId::kLocalUniform:
      out.cloud = LocalNoise(frame.cloud, frame.boxes, NoiseKind::kUniform, severity, rng, k);
      break;
    case CorruptionId::kLocalImpulse:
      out.cloud = LocalNoise(frame.cloud, frame.boxes, NoiseKind::kImpulse, severity, rng, k);
      break;
    case CorruptionId::kShear:
    case CorruptionId::kScale:
    case CorruptionId::kRotation:
      return ApplyObjectTransform(frame, ObjectTransformFor(id), severity, rng, k).frame;
    case CorruptionId::kSpatialMisalignment:
      for (std::size_t c = 0; c < out.cameras.size(); ++c) {
        RngStream cam_rng = CameraRng(rng, c);
        out.cameras[c].calib = SpatialMisalignment(frame.cameras[c].calib, severity, cam_rng);
      }
      break;
    case CorruptionId::kTemporalMisalignment:
      if (stale == nullptr) {
        throw InvalidArgument("temporal misalignment needs the preceding frames");
      }
      return ReplacePayload(frame, *stale, TemporalModality(rng.seed()));
    default:
      throw InvalidArgument("unhandled corruption " + std::string(Name(id)));
  }
  return out;
}

CorruptSummary RunCorrupt(const RunConfig& raw) {
  const RunConfig config = ResolveConfig(raw);
  const DatasetLayout layout{config.input_root, config.kind};

  FrameListing listing;
  try {
    listing = EnumerateFrames(layout, /*require_calib=*/true, config.allow_incomplete);
  } catch (const Error& e) {
    throw ConfigError(std::string("input layout: ") + e.what());
  }
  if (listing.frames.empty()) throw ConfigError("input has no frames");

  bool needs_poses = false;
  for (CorruptionId id : config.corruptions) needs_poses |= Info(id).needs_ego_pose;
  std::vector<Pose> poses;
  const fs::path poses_path = config.input_root / DatasetLayout::kPosesFile;
  if (config.kind == DatasetKind::kKittiSequence && fs::exists(poses_path)) {
    try {
      poses = ReadPoses(poses_path);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (poses.size() != listing.frames.size() + listing.skipped.size()) {
      throw ConfigError(poses_path.string() + ": " + std::to_string(poses.size()) +
                        " poses for " + std::to_string(listing.frames.size()) + " frames");
    }
  } else if (needs_poses) {
    throw ConfigError("motion_compensation needs " + poses_path.string());
  }

  if (fs::exists(config.output_root) && !fs::is_empty(config.output_root) && !config.force) {
    throw ConfigError("output directory " + config.output_root.string() +
                      " is not empty (use --force)");
  }
  fs::create_directories(config.output_root);

  for (CorruptionId id : config.corruptions) {
    const unsigned payloads = Info(id).payloads;
    for (int s : config.severities) {
      const fs::path base = config.output_root / CorruptedRelativePath(id, s, "");
      if (payloads & kPayloadLidar) fs::create_directories(base / DatasetLayout::kVelodyneDir);
      if (payloads & kPayloadCamera) fs::create_directories(base / DatasetLayout::kImageDir);
      if (payloads & kPayloadCalib) fs::create_directories(base / DatasetLayout::kCalibDir);
    }
  }
  WriteFileAtomic(config.output_root / kRunConfigFile, FormatRunConfig(config));

  // Poses are indexed over all velodyne files, skipped ones included.
  std::vector<std::string> all_ids = listing.frames;
  for (const std::string& s : listing.skipped) all_ids.push_back(s.substr(0, s.find(':')));
  std::sort(all_ids.begin(), all_ids.end());
  auto pose_of = [&](const std::string& id) -> std::optional<Pose> {
    if (poses.empty()) return std::nullopt;
    const auto it = std::lower_bound(all_ids.begin(), all_ids.end(), id);
    return poses[static_cast<std::size_t>(it - all_ids.begin())];
  };

  std::vector<WorkUnit> units;
  for (std::size_t f = 0; f < listing.frames.size(); ++f) {
    for (CorruptionId id : config.corruptions) {
      for (int s : config.severities) units.push_back({f, id, s});
    }
  }

  const auto jobs = static_cast<std::size_t>(config.jobs);
  FrameCache cache(
      [&](std::size_t f) {
        const std::string& id = listing.frames[f];
        return LoadFrame(layout, id, pose_of(id));
      },
      2 * jobs + 2);

  std::mutex result_mu;
  CorruptSummary summary;
  summary.units = units.size();
  for (const std::string& s : listing.skipped) summary.failures.push_back(s);
  std::atomic<std::size_t> next{0};

  auto run_unit = [&](const WorkUnit& u) {
    const std::string& frame_id = listing.frames[u.frame];
    const std::string name(Name(u.corruption));
    const std::uint64_t seed = DeriveSeed(*config.master_seed, name, u.severity, frame_id);
    const auto frame = cache.Get(u.frame);
    std::shared_ptr<const FrameBundle> stale;
    if (u.corruption == CorruptionId::kTemporalMisalignment) {
      const auto lag = static_cast<std::size_t>(StuckFrameLag(u.severity));
      stale = cache.Get(u.frame >= lag ? u.frame - lag : 0);
    }
    RngStream rng(seed);
    const FrameBundle out =
        CorruptFrame(*frame, u.corruption, u.severity, rng, config.constants, stale.get());

    std::vector<ManifestEntry> entries;
    auto emit = [&](const fs::path& rel, std::span<const std::uint8_t> bytes) {
      const fs::path rel_out = CorruptedRelativePath(u.corruption, u.severity, rel);
      WriteFileAtomic(config.output_root / rel_out, bytes);
      entries.push_back({frame_id, name, u.severity, seed, rel_out.generic_string(),
                         Sha256Hex(bytes)});
    };
    const unsigned payloads = Info(u.corruption).payloads;
    if (payloads & kPayloadLidar) {
      emit(fs::path(DatasetLayout::kVelodyneDir) / (frame_id + ".bin"),
           EncodePointBin(out.cloud));
    }
    if (payloads & kPayloadCamera) {
      for (const CameraView& cam : out.cameras) {
        emit(fs::path(cam.camera_id) / (frame_id + ".png"), EncodePng(cam.image));
      }
    }
    if ((payloads & kPayloadCalib) && !out.cameras.empty()) {
      KittiCalib calib = ReadKittiCalib(layout.CalibPath(frame_id));
      calib.SetLidarToCam(out.cameras.front().calib.lidar_to_cam);
      const std::string text = FormatKittiCalib(calib);
      emit(fs::path(DatasetLayout::kCalibDir) / (frame_id + ".txt"),
           std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                         text.size()));
    }
    std::lock_guard<std::mutex> lock(result_mu);
    for (auto& e : entries) summary.entries.push_back(std::move(e));
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      const WorkUnit& u = units[i];
      try {
        run_unit(u);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(result_mu);
        summary.failures.push_back(listing.frames[u.frame] + " " +
                                   std::string(Name(u.corruption)) + "/" +
                                   std::to_string(u.severity) + ": " + e.what());
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < std::min(jobs, units.size()); ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::sort(summary.entries.begin(), summary.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return std::tie(a.corruption, a.severity, a.frame, a.file) <
                     std::tie(b.corruption, b.severity, b.frame, b.file);
            });
  std::sort(summary.failures.begin(), summary.failures.end());
  WriteManifest(summary.entries, config.output_root / kManifestFile);
  return summary;
}

std::vector<Detection> ReadDetections(const fs::path& dir,
                                      std::span<const std::string> frame_ids,
                                      const std::map<std::string, Calibration>& calibs) {
  std::vector<Detection> dets;
  for (const std::string& id : frame_ids) {
    const fs::path path = dir / (id + ".txt");
    if (!fs::exists(path)) continue;
    const auto bytes = ReadFileBytes(path);
    const auto objects = ParseKittiObjects(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
        path.string());
    for (const KittiObject& obj : objects) {
      if (obj.type == "DontCare") continue;
      if (!obj.score) {
        throw MalformedLabel(path.string() + ": detection rows need a score column");
      }
      dets.push_back({id, KittiObjectToBox(obj, calibs.at(id)), *obj.score});
    }
  }
  return dets;
}

EvalResult RunEval(const EvalConfig& config) {
  const fs::path label_dir = config.gt_root / DatasetLayout::kLabelDir;
  const std::vector<std::string> ids = SortedStems(label_dir, ".txt");
  if (ids.empty()) throw ConfigError("no label files under " + label_dir.string());
  const DatasetLayout layout{config.gt_root, DatasetKind::kKitti};

  std::map<std::string, Calibration> calibs;
  GroundTruth gt;
  for (const std::string& id : ids) {
    calibs.emplace(id, ReadKittiCalib(layout.CalibPath(id)).Camera(2));
    gt[id] = ReadKittiLabel(layout.LabelPath(id), calibs.at(id));
  }

  const fs::path clean_dir = config.det_root / "clean";
  std::vector<std::string> corruptions = config.corruptions;
  if (corruptions.empty()) {
    if (fs::is_directory(config.det_root)) {
      for (const auto& entry : fs::directory_iterator(config.det_root)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory() && name != "clean") corruptions.push_back(name);
      }
    }
    std::sort(corruptions.begin(), corruptions.end());
  }

  std::vector<std::string> missing;
  if (!fs::is_directory(clean_dir)) missing.push_back("clean");
  for (const std::string& c : corruptions) {
    for (int s = 1; s <= kNumSeverities; ++s) {
      if (!fs::is_directory(config.det_root / c / std::to_string(s))) {
        missing.push_back(c + "/" + std::to_string(s));
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing detection directories:";
    for (const auto& m : missing) msg += " " + m;
    throw MissingCell(msg);
  }

  EvalResult result;
  const auto clean = ReadDetections(clean_dir, ids, calibs);
  result.clean = ApR40(clean, gt, config.query);
  if (!result.clean.ap) throw InvalidArgument("no ground truth matches the query");
  for (const std::string& c : corruptions) {
    for (int s = 1; s <= kNumSeverities; ++s) {
      const auto dets = ReadDetections(config.det_root / c / std::to_string(s), ids, calibs);
      result.cells[{c, s}] = *ApR40(dets, gt, config.query).ap;
    }
  }
  result.report = Aggregate(result.cells, *result.clean.ap, corruptions);
  return result;
}

ImageBuffer RenderBev(const PointCloud& cloud, const BevViewport& vp) {
  ImageBuffer img(vp.size, vp.size, 0);
  const double sx = vp.size / (vp.x_max - vp.x_min);
  const double sy = vp.size / (vp.y_max - vp.y_min);
  for (const PointXYZI& p : cloud.points()) {
    const double row = (vp.x_max - p.x) * sx;
    const double col = (vp.y_max - p.y) * sy;
    if (!(row >= 0 && row < vp.size && col >= 0 && col < vp.size)) continue;
    const auto level = static_cast<std::uint8_t>(80 + std::lround(175.0 * p.intensity));
    const int x = static_cast<int>(col), y = static_cast<int>(row);
    img.at(x, y, 0) = level;
    img.at(x, y, 1) = level;
    img.at(x, y, 2) = level;
  }
  return img;
}

ImageBuffer InspectRender(const FrameBundle& clean, const FrameBundle& corrupted,
                          const BevViewport& vp) {
  const bool images = !clean.cameras.empty() && !corrupted.cameras.empty();
  int panel_w = vp.size;
  int image_h = 0;
  if (images) {
    panel_w = std::max({panel_w, clean.cameras[0].image.width(),
                        corrupted.cameras[0].image.width()});
    image_h = std::max(clean.cameras[0].image.height(), corrupted.cameras[0].image.height());
  }
  ImageBuffer canvas(2 * panel_w, vp.size + image_h, 0);
  auto blit = [&](const ImageBuffer& src, int x0, int y0) {
    for (int y = 0; y < src.height(); ++y) {
      for (int x = 0; x < src.width(); ++x) {
        for (int c = 0; c < ImageBuffer::kChannels; ++c) {
          canvas.at(x0 + x, y0 + y, c) = src.at(x, y, c);
        }
      }
    }
  };
  blit(RenderBev(clean.cloud, vp), 0, 0);
  blit(RenderBev(corrupted.cloud, vp), panel_w, 0);
  if (images) {
    blit(clean.cameras[0].image, 0, vp.size);
    blit(corrupted.cameras[0].image, panel_w, vp.size);
  }
  return canvas;
}

}  // namespace corrupt3d
