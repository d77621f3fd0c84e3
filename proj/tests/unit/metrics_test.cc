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

#include "corrupt3d/errors.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "testing/oracles.h"

namespace corrupt3d {
namespace {

Box3D Car(double x, double y, double yaw = 0, Difficulty d = Difficulty::kEasy) {
  return Box3D({x, y, 0}, {4, 2, 1.5}, yaw, ObjectClass::Car(), d);
}

TEST(IouTest, HandCases) {
  const Box3D a({0, 0, 0}, {2, 2, 2}, 0);
  EXPECT_DOUBLE_EQ(Iou3d(a, a), 1.0);
  // Half overlap along x: intersection 2, union 6.
  const Box3D b({1, 0, 0}, {2, 2, 2}, 0);
  EXPECT_NEAR(Iou3d(a, b), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(IouBev(a, b), 1.0 / 3.0, 1e-12);
  // Vertical offset affects 3D only.
  const Box3D c({0, 0, 1}, {2, 2, 2}, 0);
  EXPECT_NEAR(IouBev(a, c), 1.0, 1e-12);
  EXPECT_NEAR(Iou3d(a, c), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(Iou3d(a, Box3D({10, 0, 0}, {2, 2, 2}, 0)), 0.0);
  // A square rotated by a quarter turn is the same footprint.
  EXPECT_NEAR(Iou3d(a, Box3D({0, 0, 0}, {2, 2, 2}, kPi / 2)), 1.0, 1e-12);
  // Square rotated 45 degrees: octagon area 8 (sqrt 2 - 1).
  const double oct = 8 * (std::sqrt(2.0) - 1);
  EXPECT_NEAR(IouBev(a, Box3D({0, 0, 0}, {2, 2, 2}, kPi / 4)), oct / (8 - oct), 1e-12);
}

TEST(IouTest, SymmetryAndInvariance) {
  RngStream rng(1);
  for (int i = 0; i < 500; ++i) {
    const Box3D a({rng.Uniform(-2, 2), rng.Uniform(-2, 2), rng.Uniform(-1, 1)},
                  {rng.Uniform(0.5, 5), rng.Uniform(0.5, 3), rng.Uniform(0.5, 2)},
                  rng.Uniform(-kPi, kPi));
    const Box3D b({rng.Uniform(-2, 2), rng.Uniform(-2, 2), rng.Uniform(-1, 1)},
                  {rng.Uniform(0.5, 5), rng.Uniform(0.5, 3), rng.Uniform(0.5, 2)},
                  rng.Uniform(-kPi, kPi));
    const double iou = Iou3d(a, b);
    EXPECT_GE(iou, 0);
    EXPECT_LE(iou, 1);
    EXPECT_NEAR(iou, Iou3d(b, a), 1e-12);
    EXPECT_LE(iou, IouBev(a, b) + 1e-12);
    const Vec3 t{rng.Uniform(-50, 50), rng.Uniform(-50, 50), rng.Uniform(-5, 5)};
    const Box3D at(a.center() + t, a.dims(), a.yaw());
    const Box3D bt(b.center() + t, b.dims(), b.yaw());
    EXPECT_NEAR(Iou3d(at, bt), iou, 1e-9);
    // Rotating both about the origin.
    const double r = rng.Uniform(-kPi, kPi);
    const Mat3 rz = Mat3::RotationZ(r);
    const Box3D ar(rz * a.center(), a.dims(), NormalizeAngle(a.yaw() + r));
    const Box3D br(rz * b.center(), b.dims(), NormalizeAngle(b.yaw() + r));
    EXPECT_NEAR(Iou3d(ar, br), iou, 1e-9);
  }
}

TEST(IouTest, MatchesMonteCarlo) {
  RngStream rng(2);
  for (int i = 0; i < 20; ++i) {
    const Box3D a({0, 0, 0}, {4, 2, 1.5}, rng.Uniform(-kPi, kPi));
    const Box3D b({rng.Uniform(-2, 2), rng.Uniform(-1, 1), rng.Uniform(-0.5, 0.5)},
                  {rng.Uniform(2, 5), rng.Uniform(1, 3), rng.Uniform(1, 2)},
                  rng.Uniform(-kPi, kPi));
    EXPECT_NEAR(Iou3d(a, b), testing::MonteCarloIou3d(a, b, 200000, rng), 0.01);
  }
}

TEST(ClipTest, PolygonAreaAndClip) {
  const std::vector<Vec2> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  EXPECT_DOUBLE_EQ(PolygonArea(sq), 4);
  const std::vector<Vec2> shifted{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
  EXPECT_NEAR(PolygonArea(ClipConvex(sq, shifted)), 1, 1e-12);
  const std::vector<Vec2> far{{10, 10}, {11, 10}, {11, 11}, {10, 11}};
  EXPECT_EQ(PolygonArea(ClipConvex(sq, far)), 0);
}

GroundTruth OneFrame(std::vector<Box3D> boxes) { return {{"f0", std::move(boxes)}}; }

TEST(ApR40Test, PerfectDetectionsGive100) {
  const GroundTruth gt = OneFrame({Car(10, 0), Car(20, 5), Car(30, -5)});
  std::vector<Detection> dets;
  for (const Box3D& b : gt.at("f0")) dets.push_back({"f0", b, 0.9});
  const ApResult r = ApR40(dets, gt, {});
  ASSERT_TRUE(r.ap);
  EXPECT_DOUBLE_EQ(*r.ap, 100.0);
  EXPECT_EQ(r.num_gt, 3u);
  EXPECT_EQ(r.num_tp, 3u);
  EXPECT_EQ(r.num_fp, 0u);
}

TEST(ApR40Test, HandComputedCurve) {
  // Two ground truths; rank: TP (0.9), FP (0.8), TP (0.7).
  const GroundTruth gt = OneFrame({Car(10, 0), Car(20, 0)});
  const std::vector<Detection> dets{
      {"f0", Car(10, 0), 0.9}, {"f0", Car(50, 0), 0.8}, {"f0", Car(20, 0), 0.7}};
  const ApResult r = ApR40(dets, gt, {});
  // Recall 0.5 at precision 1; recall 1 at precision 2/3. Positions 1..20
  // are <= 0.5, 21..40 need recall 1.
  EXPECT_NEAR(*r.ap, (20 * 1.0 + 20 * (2.0 / 3.0)) / 40 * 100, 1e-9);
  EXPECT_NEAR(*r.ap, *testing::BruteForceApR40(dets, gt, {}), 1e-9);
}

TEST(ApR40Test, NoGroundTruthIsUndefined) {
  const std::vector<Detection> dets{{"f0", Car(10, 0), 0.9}};
  EXPECT_FALSE(ApR40(dets, {}, {}).ap);
  EXPECT_FALSE(ApR40({}, {}, {}).ap);
  const ApResult none = ApR40({}, OneFrame({Car(10, 0)}), {});
  ASSERT_TRUE(none.ap);
  EXPECT_EQ(*none.ap, 0.0);
}

TEST(ApR40Test, IgnoredGroundTruthNeitherTpNorFp) {
  Box3D van({10, 0, 0}, {4, 2, 1.5}, 0, ObjectClass::FromName("Van"), Difficulty::kEasy);
  const GroundTruth gt = OneFrame({Car(20, 0), van, Car(30, 0, 0, Difficulty::kHard)});
  const std::vector<Detection> dets{{"f0", Car(10, 0), 0.95},
                                    {"f0", Car(30, 0), 0.9},
                                    {"f0", Car(20, 0), 0.8}};
  const ApResult r = ApR40(dets, gt, {});
  EXPECT_EQ(r.num_gt, 1u);
  EXPECT_EQ(r.num_tp, 1u);
  EXPECT_EQ(r.num_fp, 0u);
  EXPECT_DOUBLE_EQ(*r.ap, 100);
  EXPECT_NEAR(*r.ap, *testing::BruteForceApR40(dets, gt, {}), 1e-9);
  EvalQuery hard;
  hard.difficulty = Difficulty::kHard;
  EXPECT_EQ(ApR40(dets, gt, hard).num_gt, 2u);
}

TEST(ApR40Test, OtherClassesAreNotCounted) {
  const Box3D ped({10, 0, 0}, {0.8, 0.6, 1.7}, 0, ObjectClass::Pedestrian(), Difficulty::kEasy);
  const GroundTruth gt = OneFrame({Car(20, 0), ped});
  const std::vector<Detection> dets{{"f0", ped, 0.99}, {"f0", Car(20, 0), 0.5}};
  EXPECT_DOUBLE_EQ(*ApR40(dets, gt, {}).ap, 100);
  EvalQuery q;
  q.object_class = ObjectClass::Kind::kPedestrian;
  q.iou_threshold = DefaultIouThreshold(q.object_class);
  EXPECT_DOUBLE_EQ(*ApR40(dets, gt, q).ap, 100);
  EXPECT_EQ(DefaultIouThreshold(ObjectClass::Kind::kCar), 0.7);
  EXPECT_EQ(DefaultIouThreshold(ObjectClass::Kind::kCyclist), 0.5);
}

std::pair<std::vector<Detection>, GroundTruth> RandomInstance(RngStream& rng) {
  GroundTruth gt;
  std::vector<Detection> dets;
  const int frames = 1 + static_cast<int>(rng.UniformIndex(5));
  for (int f = 0; f < frames; ++f) {
    const std::string id = "f" + std::to_string(f);
    auto& boxes = gt[id];
    const int n = static_cast<int>(rng.UniformIndex(5));
    for (int i = 0; i < n; ++i) {
      boxes.push_back(Car(rng.Uniform(5, 40), rng.Uniform(-10, 10), rng.Uniform(-kPi, kPi),
                          static_cast<Difficulty>(rng.UniformIndex(3))));
    }
  }
  const int n_det = static_cast<int>(rng.UniformIndex(21));
  for (int i = 0; i < n_det; ++i) {
    const std::string id = "f" + std::to_string(rng.UniformIndex(frames));
    const auto& boxes = gt[id];
    Box3D box = Car(rng.Uniform(5, 40), rng.Uniform(-10, 10));
    if (!boxes.empty() && rng.Bernoulli(0.7)) {
      const Box3D& g = boxes[rng.UniformIndex(boxes.size())];
      box = Car(g.center().x + rng.Normal(0.3), g.center().y + rng.Normal(0.3),
                g.yaw() + rng.Normal(0.1));
    }
    // Coarse scores produce ties.
    dets.push_back({id, box, std::round(rng.Uniform() * 8) / 8});
  }
  return {dets, gt};
}

TEST(ApR40Test, MatchesBruteForceOracle) {
  RngStream rng(3);
  int defined = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto [dets, gt] = RandomInstance(rng);
    for (auto kind : {IouKind::k3d, IouKind::kBev}) {
      EvalQuery q;
      q.iou = kind;
      q.iou_threshold = 0.5;
      const auto got = ApR40(dets, gt, q).ap;
      const auto want = testing::BruteForceApR40(dets, gt, q);
      ASSERT_EQ(got.has_value(), want.has_value());
      if (got) {
        ++defined;
        EXPECT_NEAR(*got, *want, 1e-9) << trial;
      }
    }
  }
  EXPECT_GT(defined, 300);
}

TEST(ApR40Test, MonotoneInThreshold) {
  RngStream rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto [dets, gt] = RandomInstance(rng);
    double prev = 101;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      EvalQuery q;
      q.iou_threshold = t;
      const auto ap = ApR40(dets, gt, q).ap;
      if (!ap) break;
      EXPECT_LE(*ap, prev + 1e-9);
      prev = *ap;
    }
  }
}

TEST(AggregateTest, MeansAndRce) {
  ApTable table;
  const std::vector<std::string> names{"snow", "fog"};
  for (int s = 1; s <= 5; ++s) {
    table[{"snow", s}] = 80 - 2 * s;
    table[{"fog", s}] = 60;
  }
  const MetricsReport r = Aggregate(table, 80, names);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].corruption, "fog");
  EXPECT_DOUBLE_EQ(r.rows[1].mean, 74);
  EXPECT_DOUBLE_EQ(r.ap_cor, 67);
  EXPECT_DOUBLE_EQ(r.rce, 13.0 / 80);
  EXPECT_DOUBLE_EQ(r.rows[0].rce[2], 0.25);
  std::vector<std::string> reversed(names.rbegin(), names.rend());
  const MetricsReport again = Aggregate(table, 80, reversed);
  EXPECT_EQ(again.ap_cor, r.ap_cor);
  EXPECT_EQ(again.rce, r.rce);
}

TEST(AggregateTest, MissingCellsAndZeroClean) {
  ApTable table;
  for (int s = 1; s <= 4; ++s) table[{"snow", s}] = 50;
  const std::vector<std::string> names{"snow", "rain"};
  try {
    Aggregate(table, 80, names);
    FAIL();
  } catch (const MissingCell& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("snow/5"), std::string::npos) << what;
    EXPECT_NE(what.find("rain/1"), std::string::npos) << what;
  }
  table[{"snow", 5}] = 50;
  const std::vector<std::string> snow{"snow"};
  EXPECT_THROW(Aggregate(table, 0, snow), ZeroCleanAP);
}

TEST(ReportTest, JsonCsvTableRoundTrip) {
  ApTable table;
  for (int s = 1; s <= 5; ++s) table[{"cutout", s}] = 70 + s;
  const std::vector<std::string> names{"cutout"};
  const MetricsReport r = Aggregate(table, 80, names);
  const MetricsReport back = ReportFromJson(ReportToJson(r));
  EXPECT_EQ(back.ap_clean, r.ap_clean);
  EXPECT_EQ(back.ap_cor, r.ap_cor);
  EXPECT_EQ(back.rows[0].ap, r.rows[0].ap);
  const auto j = nlohmann::json::parse(ReportToJson(r));
  EXPECT_DOUBLE_EQ(j.at("ap_cor").get<double>(), 73);
  const std::string csv = ReportToCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "corruption,s1,s2,s3,s4,s5,mean");
  EXPECT_NE(csv.find("cutout,71.0000,72.0000,73.0000,74.0000,75.0000,73.0000"),
            std::string::npos)
      << csv;
  const std::string tab = ReportToTable(r);
  EXPECT_NE(tab.find("cutout"), std::string::npos);
  EXPECT_NE(tab.find("RCE"), std::string::npos);
  EXPECT_THROW(ReportFromJson("not json"), IoError);
}

}  // namespace
}  // namespace corrupt3d
