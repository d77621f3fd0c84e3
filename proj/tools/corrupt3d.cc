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

// Command line front end: corrupt, eval, report, inspect.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "corrupt3d/dataset_io.h"
#include "corrupt3d/errors.h"
#include "corrupt3d/metrics.h"
#include "corrupt3d/multimodal_corruptions.h"
#include "corrupt3d/pipeline.h"
#include "corrupt3d/rng.h"

namespace {

using namespace corrupt3d;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

bool IsValidationError(const Error& e) { return e.kind() != "IoError"; }

int Fail(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return IsValidationError(*err) ? kExitConfig : kExitPartial;
  }
  return kExitPartial;
}

struct CorruptArgs {
  std::string config_file, input, output, corruptions, severities, dataset;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool force = false, allow_incomplete = false;
};

int RunCorruptCommand(CLI::App& cmd, const CorruptArgs& a) {
  RunConfig config;
  if (!a.config_file.empty()) ApplyConfigFile(config, a.config_file);
  if (cmd.count("--input")) config.input_root = a.input;
  if (cmd.count("--output")) config.output_root = a.output;
  if (cmd.count("--corruptions")) {
    config.corruptions = ParseCorruptionList(a.corruptions).value_or(std::vector<CorruptionId>{});
  }
  if (cmd.count("--severities")) config.severities = ParseSeverityList(a.severities);
  if (cmd.count("--seed")) config.master_seed = a.seed;
  if (cmd.count("--jobs")) config.jobs = a.jobs;
  if (cmd.count("--dataset")) {
    auto kind = ParseDatasetKind(a.dataset);
    if (!kind) throw ConfigError("unknown dataset kind '" + a.dataset + "'");
    config.kind = *kind;
  }
  if (cmd.count("--force")) config.force = a.force;
  if (cmd.count("--allow-incomplete")) config.allow_incomplete = a.allow_incomplete;

  const CorruptSummary summary = RunCorrupt(config);
  std::cout << summary.entries.size() << " files written for " << summary.units
            << " work units\n";
  for (const std::string& f : summary.failures) std::cerr << "failed: " << f << "\n";
  return summary.failures.empty() ? kExitOk : kExitPartial;
}

struct EvalArgs {
  std::string gt, det, object_class = "Car", difficulty = "moderate", metric = "3d",
                       corruptions, out_dir = ".";
  double iou = -1;
};

int RunEvalCommand(const EvalArgs& a) {
  EvalConfig config;
  config.gt_root = a.gt;
  config.det_root = a.det;
  const ObjectClass cls = ObjectClass::FromName(a.object_class);
  if (cls.kind == ObjectClass::Kind::kOther) {
    throw ConfigError("class must be Car, Pedestrian or Cyclist");
  }
  auto difficulty = ParseDifficulty(a.difficulty);
  if (!difficulty || *difficulty == Difficulty::kUnknown) {
    throw ConfigError("difficulty must be easy, moderate or hard");
  }
  if (a.metric != "3d" && a.metric != "bev") throw ConfigError("metric must be 3d or bev");
  config.query.object_class = cls.kind;
  config.query.difficulty = *difficulty;
  config.query.iou = a.metric == "3d" ? IouKind::k3d : IouKind::kBev;
  config.query.iou_threshold = a.iou >= 0 ? a.iou : DefaultIouThreshold(cls.kind);
  if (!a.corruptions.empty()) {
    for (CorruptionId id :
         ParseCorruptionList(a.corruptions).value_or(ApplicableCorruptions(DatasetKind::kKitti))) {
      config.corruptions.emplace_back(Name(id));
    }
  }
  const EvalResult result = RunEval(config);
  const std::string json = ReportToJson(result.report);
  const std::string csv = ReportToCsv(result.report);
  const fs::path out(a.out_dir);
  WriteFileAtomic(out / "metrics.json", json);
  WriteFileAtomic(out / "metrics.csv", csv);
  std::cout << ReportToTable(result.report);
  return kExitOk;
}

int RunReportCommand(const std::string& metrics, const std::string& format) {
  const auto bytes = ReadFileBytes(metrics);
  const MetricsReport report =
      ReportFromJson(std::string(bytes.begin(), bytes.end()));
  if (format == "csv") {
    std::cout << ReportToCsv(report);
  } else if (format == "json") {
    std::cout << ReportToJson(report);
  } else {
    std::cout << ReportToTable(report);
  }
  return kExitOk;
}

struct InspectArgs {
  std::string input, frame, corruption, out, dataset = "kitti";
  int severity = 1;
  std::uint64_t seed = 0;
};

int RunInspectCommand(const InspectArgs& a) {
  auto id = ParseCorruption(a.corruption);
  if (!id) throw ConfigError("unknown corruption '" + a.corruption + "'");
  CheckSeverity(a.severity);
  auto kind = ParseDatasetKind(a.dataset);
  if (!kind) throw ConfigError("unknown dataset kind '" + a.dataset + "'");
  const DatasetLayout layout{a.input, *kind};

  std::vector<std::string> ids = EnumerateFrames(layout, true, true).frames;
  const auto it = std::find(ids.begin(), ids.end(), a.frame);
  if (it == ids.end()) throw ConfigError("frame " + a.frame + " not found in " + a.input);
  const auto index = static_cast<std::size_t>(it - ids.begin());

  std::optional<Pose> pose;
  const fs::path poses_path = layout.root / DatasetLayout::kPosesFile;
  if (*kind == DatasetKind::kKittiSequence && fs::exists(poses_path)) {
    const auto poses = ReadPoses(poses_path);
    if (index < poses.size()) pose = poses[index];
  }
  const FrameBundle clean = LoadFrame(layout, a.frame, pose);
  std::optional<FrameBundle> stale;
  if (*id == CorruptionId::kTemporalMisalignment) {
    const auto lag = static_cast<std::size_t>(StuckFrameLag(a.severity));
    stale = LoadFrame(layout, ids[index >= lag ? index - lag : 0]);
  }
  RngStream rng(DeriveSeed(a.seed, Name(*id), a.severity, a.frame));
  const FrameBundle corrupted =
      CorruptFrame(clean, *id, a.severity, rng, {}, stale ? &*stale : nullptr);
  WriteImage(InspectRender(clean, corrupted), a.out);
  std::cout << "wrote " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corruption generator and robustness evaluator for LiDAR-camera 3D detection"};
  app.require_subcommand(1);

  CorruptArgs ca;
  auto* corrupt = app.add_subcommand("corrupt", "Write corrupted copies of a dataset");
  corrupt->add_option("--config", ca.config_file, "Key-value config file (flags override)");
  corrupt->add_option("--input", ca.input, "Input dataset root (KITTI layout)");
  corrupt->add_option("--output", ca.output, "Output root");
  corrupt->add_option("--corruptions", ca.corruptions, "Comma separated names or 'all'");
  corrupt->add_option("--severities", ca.severities, "Comma separated levels, e.g. 1,3-5");
  corrupt->add_option("--seed", ca.seed, "Master seed");
  corrupt->add_option("--jobs", ca.jobs,
                      std::string("Worker threads (default $") + kJobsEnvVar +
                          " or hardware concurrency)");
  corrupt->add_option("--dataset", ca.dataset, "kitti or kitti_sequence");
  corrupt->add_flag("--force", ca.force, "Allow a non-empty output directory");
  corrupt->add_flag("--allow-incomplete", ca.allow_incomplete,
                    "Skip frames with missing files instead of failing");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Compute AP_clean, AP_cor and RCE");
  eval->add_option("--gt", ea.gt, "Ground-truth root (label_2/, calib/)")->required();
  eval->add_option("--det", ea.det, "Detections root (clean/, <corruption>/<severity>/)")
      ->required();
  eval->add_option("--class", ea.object_class, "Car, Pedestrian or Cyclist");
  eval->add_option("--difficulty", ea.difficulty, "easy, moderate or hard");
  eval->add_option("--iou", ea.iou, "IoU threshold (default 0.7 Car, 0.5 otherwise)");
  eval->add_option("--metric", ea.metric, "3d or bev");
  eval->add_option("--corruptions", ea.corruptions, "Restrict to these corruptions");
  eval->add_option("--out", ea.out_dir, "Directory for metrics.json and metrics.csv");

  std::string metrics_file, format = "table";
  auto* report = app.add_subcommand("report", "Format a metrics.json file");
  report->add_option("--metrics", metrics_file, "metrics.json")->required();
  report->add_option("--format", format, "csv, json or table")
      ->check(CLI::IsMember({"csv", "json", "table"}));

  InspectArgs ia;
  auto* inspect = app.add_subcommand("inspect", "Render clean vs corrupted side by side");
  inspect->add_option("--input", ia.input, "Input dataset root")->required();
  inspect->add_option("--frame", ia.frame, "Frame id")->required();
  inspect->add_option("--corruption", ia.corruption, "Corruption name")->required();
  inspect->add_option("--severity", ia.severity, "1..5")->required();
  inspect->add_option("--out", ia.out, "Output PNG")->required();
  inspect->add_option("--seed", ia.seed, "Master seed");
  inspect->add_option("--dataset", ia.dataset, "kitti or kitti_sequence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*corrupt) return RunCorruptCommand(*corrupt, ca);
    if (*eval) return RunEvalCommand(ea);
    if (*report) return RunReportCommand(metrics_file, format);
    if (*inspect) return RunInspectCommand(ia);
  } catch (const std::exception& e) {
    return Fail(e);
  }
  return kExitConfig;
}
