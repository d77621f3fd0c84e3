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

#include "corrupt3d/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "corrupt3d/errors.h"
#include "json.hpp"

namespace corrupt3d {
namespace {

double Cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

Vec2 LineIntersection(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const double a1 = Cross(a, b, p);
  const double a2 = Cross(a, b, q);
  const double t = a1 / (a1 - a2);
  return {p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)};
}

double ZOverlap(const Box3D& a, const Box3D& b) {
  const double top = std::min(a.center().z + a.dims().height / 2,
                              b.center().z + b.dims().height / 2);
  const double bottom = std::max(a.center().z - a.dims().height / 2,
                                 b.center().z - b.dims().height / 2);
  return std::max(0.0, top - bottom);
}

double BevIntersection(const Box3D& a, const Box3D& b) {
  const auto pa = BevFootprint(a);
  const auto pb = BevFootprint(b);
  const double ra = 0.5 * std::hypot(a.dims().length, a.dims().width);
  const double rb = 0.5 * std::hypot(b.dims().length, b.dims().width);
  if (std::hypot(a.center().x - b.center().x, a.center().y - b.center().y) > ra + rb) {
    return 0.0;
  }
  return PolygonArea(ClipConvex(pa, pb));
}

enum class GtRole { kValid, kIgnored, kIrrelevant };

GtRole RoleOf(const Box3D& gt, const EvalQuery& q) {
  const ObjectClass& c = gt.object_class();
  if (c.kind == q.object_class) {
    return gt.difficulty() <= q.difficulty ? GtRole::kValid : GtRole::kIgnored;
  }
  const bool neighbor =
      c.kind == ObjectClass::Kind::kOther &&
      ((q.object_class == ObjectClass::Kind::kCar && c.tag == "Van") ||
       (q.object_class == ObjectClass::Kind::kPedestrian && c.tag == "Person_sitting"));
  return neighbor ? GtRole::kIgnored : GtRole::kIrrelevant;
}

}  // namespace

std::array<Vec2, 4> BevFootprint(const Box3D& box) {
  const auto corners = BoxCorners(box);
  return {{{corners[0].x, corners[0].y},
           {corners[1].x, corners[1].y},
           {corners[2].x, corners[2].y},
           {corners[3].x, corners[3].y}}};
}

std::vector<Vec2> ClipConvex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  std::vector<Vec2> output(subject.begin(), subject.end());
  for (std::size_t i = 0; i < clip.size() && !output.empty(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % clip.size()];
    std::vector<Vec2> input;
    input.swap(output);
    for (std::size_t j = 0; j < input.size(); ++j) {
      const Vec2& cur = input[j];
      const Vec2& prev = input[(j + input.size() - 1) % input.size()];
      const bool cur_in = Cross(a, b, cur) >= 0;
      const bool prev_in = Cross(a, b, prev) >= 0;
      if (cur_in) {
        if (!prev_in) output.push_back(LineIntersection(prev, cur, a, b));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(LineIntersection(prev, cur, a, b));
      }
    }
  }
  return output;
}

double PolygonArea(std::span<const Vec2> polygon) {
  double twice = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % polygon.size()];
    twice += p.u * q.v - q.u * p.v;
  }
  return std::abs(twice) / 2;
}

double IouBev(const Box3D& a, const Box3D& b) {
  const double inter = BevIntersection(a, b);
  const double area_a = a.dims().length * a.dims().width;
  const double area_b = b.dims().length * b.dims().width;
  return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
}

double Iou3d(const Box3D& a, const Box3D& b) {
  const double dz = ZOverlap(a, b);
  if (dz <= 0) return 0.0;
  const double inter = BevIntersection(a, b) * dz;
  return std::clamp(inter / (a.Volume() + b.Volume() - inter), 0.0, 1.0);
}

double DefaultIouThreshold(ObjectClass::Kind kind) {
  return kind == ObjectClass::Kind::kCar ? 0.7 : 0.5;
}

ApResult ApR40(std::span<const Detection> detections, const GroundTruth& gt,
               const EvalQuery& query) {
  struct FrameGt {
    std::vector<const Box3D*> boxes;
    std::vector<GtRole> roles;
    std::vector<bool> matched;
  };
  std::map<std::string, FrameGt> frames;
  ApResult result;
  for (const auto& [frame, boxes] : gt) {
    FrameGt& f = frames[frame];
    for (const Box3D& b : boxes) {
      const GtRole role = RoleOf(b, query);
      if (role == GtRole::kIrrelevant) continue;
      f.boxes.push_back(&b);
      f.roles.push_back(role);
      f.matched.push_back(false);
      if (role == GtRole::kValid) ++result.num_gt;
    }
  }
  if (result.num_gt == 0) return result;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].box.object_class().kind == query.object_class) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  // (tp, fp) after each block of equal scores.
  std::vector<std::pair<std::size_t, std::size_t>> cutoffs;
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Detection& det = detections[order[k]];
    auto it = frames.find(det.frame_id);
    bool is_tp = false, is_ignored = false;
    if (it != frames.end()) {
      FrameGt& f = it->second;
      for (GtRole wanted : {GtRole::kValid, GtRole::kIgnored}) {
        double best = -1;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < f.boxes.size(); ++j) {
          if (f.matched[j] || f.roles[j] != wanted) continue;
          const double iou = query.iou == IouKind::k3d ? Iou3d(det.box, *f.boxes[j])
                                                       : IouBev(det.box, *f.boxes[j]);
          if (iou >= query.iou_threshold && iou > best) {
            best = iou;
            best_j = j;
          }
        }
        if (best >= 0) {
          f.matched[best_j] = true;
          (wanted == GtRole::kValid ? is_tp : is_ignored) = true;
          break;
        }
      }
    }
    if (is_tp) {
      ++tp;
    } else if (!is_ignored) {
      ++fp;
    }
    const bool block_ends = k + 1 == order.size() ||
                            detections[order[k + 1]].score != det.score;
    if (block_ends) cutoffs.emplace_back(tp, fp);
  }
  result.num_tp = tp;
  result.num_fp = fp;

  double sum = 0;
  for (std::size_t i = 1; i <= 40; ++i) {
    double best = 0;
    for (const auto& [c_tp, c_fp] : cutoffs) {
      if (c_tp * 40 < i * result.num_gt) continue;
      best = std::max(best, static_cast<double>(c_tp) / static_cast<double>(c_tp + c_fp));
    }
    sum += best;
  }
  result.ap = sum / 40.0 * 100.0;
  return result;
}

MetricsReport Aggregate(const ApTable& table, double ap_clean,
                        std::span<const std::string> corruptions) {
  const std::set<std::string> names(corruptions.begin(), corruptions.end());
  std::vector<std::string> missing;
  for (const std::string& c : names) {
    for (int s = 1; s <= 5; ++s) {
      if (!table.contains({c, s})) missing.push_back(c + "/" + std::to_string(s));
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing AP cells:";
    for (const auto& m : missing) msg += " " + m;
    throw MissingCell(msg);
  }
  if (ap_clean == 0) throw ZeroCleanAP("AP_clean is zero; RCE is undefined");

  MetricsReport report;
  report.ap_clean = ap_clean;
  double total = 0;
  for (const std::string& c : names) {
    CorruptionRow row;
    row.corruption = c;
    double sum = 0;
    for (int s = 1; s <= 5; ++s) {
      const double ap = table.at({c, s});
      row.ap[s - 1] = ap;
      row.rce[s - 1] = (ap_clean - ap) / ap_clean;
      sum += ap;
    }
    row.mean = sum / 5.0;
    total += row.mean;
    report.rows.push_back(std::move(row));
  }
  report.ap_cor = names.empty() ? 0.0 : total / static_cast<double>(names.size());
  report.rce = (ap_clean - report.ap_cor) / ap_clean;
  return report;
}

std::string ReportToJson(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["ap_clean"] = report.ap_clean;
  j["ap_cor"] = report.ap_cor;
  j["rce"] = report.rce;
  j["rows"] = nlohmann::ordered_json::array();
  for (const CorruptionRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["corruption"] = row.corruption;
    r["ap"] = row.ap;
    r["mean"] = row.mean;
    r["rce"] = row.rce;
    j["rows"].push_back(r);
  }
  return j.dump(2) + "\n";
}

MetricsReport ReportFromJson(const std::string& json) {
  try {
    const auto j = nlohmann::json::parse(json);
    MetricsReport report;
    report.ap_clean = j.at("ap_clean").get<double>();
    report.ap_cor = j.at("ap_cor").get<double>();
    report.rce = j.at("rce").get<double>();
    for (const auto& r : j.at("rows")) {
      CorruptionRow row;
      row.corruption = r.at("corruption").get<std::string>();
      row.ap = r.at("ap").get<std::array<double, 5>>();
      row.mean = r.at("mean").get<double>();
      row.rce = r.at("rce").get<std::array<double, 5>>();
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad metrics JSON: ") + e.what());
  }
}

std::string ReportToCsv(const MetricsReport& report) {
  std::ostringstream out;
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  out << "corruption,s1,s2,s3,s4,s5,mean\n";
  out << "clean,,,,,," << num(report.ap_clean) << "\n";
  for (const CorruptionRow& row : report.rows) {
    out << row.corruption;
    for (double ap : row.ap) out << "," << num(ap);
    out << "," << num(row.mean) << "\n";
  }
  out << "ap_cor,,,,,," << num(report.ap_cor) << "\n";
  out << "rce_percent,,,,,," << num(100.0 * report.rce) << "\n";
  return out.str();
}

std::string ReportToTable(const MetricsReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-24s %7s %7s %7s %7s %7s %8s\n", "Corruption", "s1",
                "s2", "s3", "s4", "s5", "mean");
  out << buf;
  out << std::string(79, '-') << "\n";
  std::snprintf(buf, sizeof(buf), "%-24s %7s %7s %7s %7s %7s %8.2f\n", "None (AP_clean)",
                "", "", "", "", "", report.ap_clean);
  out << buf;
  for (const CorruptionRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-24s %7.2f %7.2f %7.2f %7.2f %7.2f %8.2f\n",
                  r.corruption.c_str(), r.ap[0], r.ap[1], r.ap[2], r.ap[3], r.ap[4], r.mean);
    out << buf;
  }
  out << std::string(79, '-') << "\n";
  std::snprintf(buf, sizeof(buf), "%-24s %48s %8.2f\n", "Average (AP_cor)", "",
                report.ap_cor);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-24s %48s %8.2f\n", "RCE (%)", "", 100.0 * report.rce);
  out << buf;
  return out.str();
}

}  // namespace corrupt3d
