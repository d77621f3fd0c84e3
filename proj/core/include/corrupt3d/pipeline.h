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

#ifndef CORRUPT3D_PIPELINE_H_
#define CORRUPT3D_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrupt3d/corruption.h"
#include "corrupt3d/dataset_io.h"
#include "corrupt3d/geometry.h"
#include "corrupt3d/metrics.h"
#include "corrupt3d/multimodal_corruptions.h"
#include "corrupt3d/rng.h"

namespace corrupt3d {

// Environment variable holding the default worker count.
inline constexpr const char* kJobsEnvVar = "CORRUPT3D_JOBS";

// CORRUPT3D_JOBS if set to a positive integer, else hardware concurrency.
int DefaultJobs();

// Corruptions that can run on `kind`, in table order.
std::vector<CorruptionId> ApplicableCorruptions(DatasetKind kind);

// Comma separated; "all" expands to nullopt. Throws ConfigError naming the
// unknown entry.
std::optional<std::vector<CorruptionId>> ParseCorruptionList(std::string_view list);
// Comma separated integers or ranges ("1,3-5"). Throws ConfigError.
std::vector<int> ParseSeverityList(std::string_view list);

struct RunConfig {
  fs::path input_root;
  fs::path output_root;
  std::vector<CorruptionId> corruptions;  // empty = all applicable
  std::vector<int> severities;            // empty = 1..5
  std::optional<std::uint64_t> master_seed;
  int jobs = 0;                           // 0 = DefaultJobs()
  DatasetKind kind = DatasetKind::kKitti;
  CorruptionConstants constants;
  bool force = false;
  bool allow_incomplete = false;
};

// Key-value text, one "key = value" per line, '#' starts a comment.
// Keys: input, output, corruptions, severities, seed, jobs, dataset, force,
// allow_incomplete, constant.<name>. Throws ConfigError with the line number.
void ApplyConfigText(RunConfig& config, std::string_view text,
                     std::string_view source = "<config>");
void ApplyConfigFile(RunConfig& config, const fs::path& path);

// Expands defaults and checks applicability. Throws ConfigError naming the
// offending corruption.
RunConfig ResolveConfig(const RunConfig& config);

// Resolved config in the ApplyConfigText schema.
std::string FormatRunConfig(const RunConfig& resolved);

// Applies one corruption to one frame. `stale` is the frame StuckFrameLag
// positions earlier in the sequence, required for temporal misalignment.
FrameBundle CorruptFrame(const FrameBundle& frame, CorruptionId id, int severity,
                         RngStream& rng, const CorruptionConstants& constants = {},
                         const FrameBundle* stale = nullptr);

// Modality replaced by temporal misalignment for a work unit seed.
Modality TemporalModality(std::uint64_t seed);

struct CorruptSummary {
  std::vector<ManifestEntry> entries;  // sorted
  std::vector<std::string> failures;   // "frame corruption/severity: message"
  std::size_t units = 0;
};

// Writes out_root/<corruption>/<severity>/<payload>/<id>.*, manifest.jsonl
// and run_config.txt. Config errors throw ConfigError; frame errors are
// collected in `failures`.
CorruptSummary RunCorrupt(const RunConfig& config);

inline constexpr std::string_view kManifestFile = "manifest.jsonl";
inline constexpr std::string_view kRunConfigFile = "run_config.txt";

struct EvalConfig {
  fs::path gt_root;   // KITTI layout with label_2/ and calib/
  fs::path det_root;  // clean/ and <corruption>/<severity>/, one .txt per frame
  std::vector<std::string> corruptions;  // empty = every directory but clean/
  EvalQuery query;
};

struct EvalResult {
  ApResult clean;
  ApTable cells;
  MetricsReport report;
};

// Throws MissingCell listing every absent (corruption, severity) directory.
EvalResult RunEval(const EvalConfig& config);

// Detections of one frame directory, converted with the frame calibration.
std::vector<Detection> ReadDetections(const fs::path& dir,
                                      std::span<const std::string> frame_ids,
                                      const std::map<std::string, Calibration>& calibs);

// Bird's-eye view of points, x forward up the image, y left to the left.
struct BevViewport {
  double x_min = 0, x_max = 80;
  double y_min = -40, y_max = 40;
  int size = 512;  // pixels per side
};
ImageBuffer RenderBev(const PointCloud& cloud, const BevViewport& viewport = {});

// Top row: BEV of clean | corrupted; bottom row (when both frames carry a
// camera): clean | corrupted image.
ImageBuffer InspectRender(const FrameBundle& clean, const FrameBundle& corrupted,
                          const BevViewport& viewport = {});

}  // namespace corrupt3d

#endif  // CORRUPT3D_PIPELINE_H_
