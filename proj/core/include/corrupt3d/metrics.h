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

#ifndef CORRUPT3D_METRICS_H_
#define CORRUPT3D_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corrupt3d/geometry.h"

namespace corrupt3d {

// Footprint of a box on the ground plane, counter-clockwise.
std::array<Vec2, 4> BevFootprint(const Box3D& box);

// Convex polygon clipping (Sutherland-Hodgman); both inputs counter-clockwise.
std::vector<Vec2> ClipConvex(std::span<const Vec2> subject, std::span<const Vec2> clip);
double PolygonArea(std::span<const Vec2> polygon);

double IouBev(const Box3D& a, const Box3D& b);
double Iou3d(const Box3D& a, const Box3D& b);

enum class IouKind { kBev, k3d };

struct Detection {
  std::string frame_id;
  Box3D box;  // class carried by box.object_class()
  double score = 0;
};

// Ground-truth boxes keyed by frame id.
using GroundTruth = std::map<std::string, std::vector<Box3D>>;

struct EvalQuery {
  ObjectClass::Kind object_class = ObjectClass::Kind::kCar;
  Difficulty difficulty = Difficulty::kModerate;
  double iou_threshold = 0.7;
  IouKind iou = IouKind::k3d;
};

// KITTI IoU thresholds: 0.7 for cars, 0.5 for pedestrians and cyclists.
double DefaultIouThreshold(ObjectClass::Kind kind);

struct ApResult {
  // nullopt when the query has no ground truth: AP is undefined, not zero.
  std::optional<double> ap;  // percent
  std::size_t num_gt = 0;
  std::size_t num_tp = 0;
  std::size_t num_fp = 0;
};

// Average precision over 40 recall positions. Detections are ranked by
// descending score (stable on input order), each matched greedily to the
// unmatched ground truth of its frame with the highest IoU >= threshold.
// Ground truth that is harder than the query, or of a neighboring class
// (Van for Car, Person_sitting for Pedestrian), is ignored: a detection
// matched to it counts neither as TP nor FP. Precision is evaluated once per
// distinct score, and the interpolated precision at recall r is the maximum
// precision at any recall >= r.
ApResult ApR40(std::span<const Detection> detections, const GroundTruth& gt,
               const EvalQuery& query);

// (corruption, severity) -> AP percent.
using ApTable = std::map<std::pair<std::string, int>, double>;

struct CorruptionRow {
  std::string corruption;
  std::array<double, 5> ap{};   // per severity
  double mean = 0;
  std::array<double, 5> rce{};  // fractions
};

struct MetricsReport {
  double ap_clean = 0;
  std::vector<CorruptionRow> rows;  // sorted by corruption name
  double ap_cor = 0;
  double rce = 0;  // fraction; multiply by 100 for percent
};

// AP_cor = mean over corruptions of the mean over 5 severities;
// RCE_{c,s} = (AP_clean - AP_{c,s}) / AP_clean; RCE = (AP_clean - AP_cor) / AP_clean.
// Throws MissingCell naming every absent (c, s), ZeroCleanAP for AP_clean == 0.
MetricsReport Aggregate(const ApTable& table, double ap_clean,
                        std::span<const std::string> corruptions);

std::string ReportToJson(const MetricsReport& report);
MetricsReport ReportFromJson(const std::string& json);
// Rows = corruptions; columns = severities 1..5 and mean.
std::string ReportToCsv(const MetricsReport& report);
// Fixed-width table: clean row, one row per corruption, AP_cor and RCE rows.
std::string ReportToTable(const MetricsReport& report);

}  // namespace corrupt3d

#endif  // CORRUPT3D_METRICS_H_
