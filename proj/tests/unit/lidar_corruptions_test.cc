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

#include "corrupt3d/lidar_corruptions.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "corrupt3d/errors.h"
#include "gtest/gtest.h"
#include "testing/synthetic.h"

namespace corrupt3d {
namespace {

PointCloud Zeros(std::size_t n) { return PointCloud(std::vector<PointXYZI>(n, {0, 0, 0, 0.5f})); }

std::size_t CountMoved(const PointCloud& a, const PointCloud& b) {
  std::size_t moved = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    moved += a[i].x != b[i].x || a[i].y != b[i].y || a[i].z != b[i].z;
  }
  return moved;
}

// Points outside every box, in order.
std::vector<PointXYZI> Outside(const PointCloud& cloud, std::span<const Box3D> boxes) {
  std::vector<PointXYZI> out;
  for (const PointXYZI& p : cloud.points()) {
    bool in = false;
    for (const Box3D& b : boxes) in |= BoxContains(b, p.position());
    if (!in) out.push_back(p);
  }
  return out;
}

bool IsSubsequence(const PointCloud& sub, const PointCloud& full) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < full.size() && j < sub.size(); ++i) {
    if (full[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

TEST(DensityDecreaseTest, ExactCounts) {
  RngStream rng(1);
  const PointCloud cloud = testing::RandomCloud(1000, rng);
  EXPECT_EQ(DensityDecrease(cloud, 3, rng).size(), 820u);
  EXPECT_EQ(DensityDecrease(PointCloud(), 4, rng).size(), 0u);
  EXPECT_EQ(DensityDecrease(testing::RandomCloud(10, rng), 1, rng).size(), 10u);
  const std::array<std::size_t, 5> removed{60, 120, 180, 240, 300};
  for (int s = 1; s <= 5; ++s) {
    const PointCloud out = DensityDecrease(cloud, s, rng);
    EXPECT_EQ(cloud.size() - out.size(), removed[s - 1]);
    EXPECT_TRUE(IsSubsequence(out, cloud));
  }
}

TEST(DensityDecreaseTest, KeptSubsetIsUniform) {
  // Each index survives with probability 0.7 at severity 5.
  const std::size_t n = 50;
  std::vector<PointXYZI> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<float>(i), 0, 0, 0});
  const PointCloud cloud(pts);
  std::vector<int> kept(n, 0);
  RngStream rng(2);
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const PointCloud out = DensityDecrease(cloud, 5, rng);
    for (const PointXYZI& p : out.points()) ++kept[static_cast<int>(p.x)];
  }
  for (int k : kept) EXPECT_NEAR(k / static_cast<double>(trials), 0.7, 0.04);
}

TEST(CutoutTest, DisjointClustersRemoveWholeGroups) {
  // 50 clusters of 100 points, 1 km apart: each nearest-neighbor ball of
  // N/50 = 100 points is exactly one cluster.
  std::vector<PointXYZI> pts;
  RngStream gen(3);
  for (int c = 0; c < 50; ++c) {
    for (int i = 0; i < 100; ++i) {
      pts.push_back({static_cast<float>(1000 * c + gen.Uniform(0, 1)),
                     static_cast<float>(gen.Uniform(0, 1)), 0, 0.5f});
    }
  }
  const PointCloud cloud(pts);
  RngStream rng(4);
  const PointCloud out = Cutout(cloud, 1, rng);
  EXPECT_EQ(out.size(), 4800u);
  std::map<int, int> per_cluster;
  for (const PointXYZI& p : out.points()) per_cluster[static_cast<int>(p.x) / 1000]++;
  for (const auto& [c, n] : per_cluster) EXPECT_EQ(n, 100) << c;
  EXPECT_EQ(per_cluster.size(), 48u);
}

TEST(CutoutTest, BoundsAndEdgeCases) {
  RngStream rng(5);
  EXPECT_EQ(Cutout(PointCloud(), 3, rng).size(), 0u);
  // Coincident points: every group is the two lowest indices.
  EXPECT_EQ(Cutout(Zeros(100), 5, rng).size(), 98u);
  const PointCloud cloud = testing::RandomCloud(5000, rng);
  const std::array<int, 5> groups{2, 3, 5, 7, 10};
  for (int s = 1; s <= 5; ++s) {
    const PointCloud out = Cutout(cloud, s, rng);
    EXPECT_GE(out.size(), 5000u - groups[s - 1] * 100u);
    EXPECT_LT(out.size(), 5000u);
    EXPECT_TRUE(IsSubsequence(out, cloud));
  }
}

TEST(CrosstalkTest, CountsAndSigma) {
  RngStream rng(6);
  EXPECT_EQ(CountMoved(Zeros(10000), Crosstalk(Zeros(10000), 5, rng)), 200u);
  EXPECT_EQ(CountMoved(Zeros(100), Crosstalk(Zeros(100), 1, rng)), 0u);
  const std::array<std::size_t, 5> counts{40, 80, 120, 160, 200};
  for (int s = 1; s <= 5; ++s) {
    EXPECT_EQ(CountMoved(Zeros(10000), Crosstalk(Zeros(10000), s, rng)), counts[s - 1]);
  }
  double sq = 0;
  std::size_t n = 0;
  const PointCloud base = Zeros(100000);
  for (int run = 0; run < 50; ++run) {
    const PointCloud out = Crosstalk(base, 5, rng);
    for (const PointXYZI& p : out.points()) {
      EXPECT_EQ(p.intensity, 0.5f);
      if (p.x == 0 && p.y == 0 && p.z == 0) continue;
      sq += double(p.x) * p.x + double(p.y) * p.y + double(p.z) * p.z;
      n += 3;
    }
  }
  EXPECT_EQ(n, 3u * 100000u);
  EXPECT_NEAR(std::sqrt(sq / n), 3.0, 0.15);
}

TEST(FovLostTest, AngleTable) {
  const PointCloud cloud({{1, 0, 0, 0.5f}, {0, 1, 0, 0.5f}});
  for (int s = 1; s <= 5; ++s) {
    const PointCloud out = FovLost(cloud, s);
    EXPECT_EQ(out[0], cloud[0]);
    EXPECT_EQ(out.size(), s <= 2 ? 2u : 1u) << s;
  }
}

TEST(FovLostTest, RingCountsInclusiveAndMonotone) {
  std::vector<PointXYZI> ring;
  for (int deg = -179; deg <= 180; ++deg) {
    const double a = deg * kPi / 180.0;
    ring.push_back({static_cast<float>(10 * std::cos(a)), static_cast<float>(10 * std::sin(a)), 0,
                    0.5f});
  }
  const PointCloud cloud(ring);
  EXPECT_EQ(FovLost(cloud, 5).size(), 91u);
  std::size_t prev = cloud.size() + 1;
  for (int s = 1; s <= 5; ++s) {
    const std::size_t kept = FovLost(cloud, s).size();
    EXPECT_LE(kept, prev);
    EXPECT_NEAR(static_cast<double>(kept), 2 * tables::kFovHalfAngleDeg[s - 1] + 1, 2.0);
    prev = kept;
  }
}

TEST(CoordinateNoiseTest, GaussianSigma) {
  RngStream rng(7);
  const PointCloud out = CoordinateNoise(Zeros(100000), NoiseKind::kGaussian, 3, rng);
  std::array<double, 3> sq{};
  for (const PointXYZI& p : out.points()) {
    sq[0] += double(p.x) * p.x;
    sq[1] += double(p.y) * p.y;
    sq[2] += double(p.z) * p.z;
  }
  for (double s : sq) EXPECT_NEAR(std::sqrt(s / 100000), 0.06, 0.06 * 0.05);
}

TEST(CoordinateNoiseTest, UniformBoundAndSpread) {
  RngStream rng(8);
  for (int s = 1; s <= 5; ++s) {
    const float bound = static_cast<float>(tables::kLidarNoiseScale[s - 1]);
    const PointCloud out = CoordinateNoise(Zeros(100000), NoiseKind::kUniform, s, rng);
    float max_abs = 0;
    double sq = 0;
    for (const PointXYZI& p : out.points()) {
      max_abs = std::max({max_abs, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
      sq += double(p.x) * p.x;
    }
    EXPECT_LE(max_abs, bound);
    EXPECT_GT(max_abs, 0.99f * bound);
    // Variance of U(-b, b) is b^2 / 3.
    EXPECT_NEAR(std::sqrt(sq / 100000), bound / std::sqrt(3.0), 0.05 * bound / std::sqrt(3.0));
  }
}

TEST(CoordinateNoiseTest, ImpulseCountsAndMagnitude) {
  RngStream rng(9);
  const PointCloud out = CoordinateNoise(Zeros(100), NoiseKind::kImpulse, 5, rng);
  EXPECT_EQ(CountMoved(Zeros(100), out), 10u);
  for (const PointXYZI& p : out.points()) {
    if (p.x == 0 && p.y == 0 && p.z == 0) continue;
    for (float v : {p.x, p.y, p.z}) EXPECT_EQ(std::abs(v), 0.1f);
  }
  const std::array<int, 5> divisor{30, 25, 20, 15, 10};
  std::size_t prev = 0;
  for (int s = 1; s <= 5; ++s) {
    const std::size_t moved =
        CountMoved(Zeros(3000), CoordinateNoise(Zeros(3000), NoiseKind::kImpulse, s, rng));
    EXPECT_EQ(moved, 3000u / divisor[s - 1]);
    EXPECT_GE(moved, prev);
    prev = moved;
  }
}

TEST(SunlightTest, CountsSigmaAndSeverityDomain) {
  RngStream rng(10);
  EXPECT_EQ(CountMoved(Zeros(10000), SunlightLidar(Zeros(10000), 1, rng)), 100u);
  double sq = 0;
  std::size_t n = 0;
  for (int run = 0; run < 20; ++run) {
    const PointCloud out = SunlightLidar(Zeros(100000), 5, rng);
    for (const PointXYZI& p : out.points()) {
      if (p.x == 0 && p.y == 0 && p.z == 0) continue;
      sq += double(p.x) * p.x + double(p.y) * p.y + double(p.z) * p.z;
      n += 3;
    }
  }
  EXPECT_NEAR(std::sqrt(sq / n), 2.0, 0.1);
  EXPECT_THROW(SunlightLidar(Zeros(10), 0, rng), InvalidArgument);
  EXPECT_THROW(SunlightLidar(Zeros(10), 6, rng), InvalidArgument);
}

std::size_t CountSamePosition(const PointCloud& in, const PointCloud& out) {
  // Outputs preserve ray order; dropped points leave gaps.
  std::size_t same = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < in.size() && j < out.size(); ++i) {
    const Vec3 a = in[i].position(), b = out[j].position();
    // A survivor or a scattered return of ray i lies on ray i.
    const double cos = a.Dot(b) / (a.Norm() * b.Norm());
    if (cos > 1 - 1e-6) {
      same += a == b;
      ++j;
    }
  }
  return same;
}

TEST(PrecipitationTest, ZeroRateIsIdentity) {
  RngStream rng(11);
  const PointCloud cloud = testing::RandomCloud(2000, rng);
  for (auto kind : {Precipitation::kRain, Precipitation::kSnow}) {
    EXPECT_EQ(PrecipitationScatterAtRate(cloud, kind, 0.0, rng), cloud);
  }
  const PointCloud origin({{0, 0, 0, 0.7f}});
  for (int s = 1; s <= 5; ++s) {
    EXPECT_EQ(PrecipitationScatter(origin, Precipitation::kSnow, s, rng), origin);
  }
}

TEST(PrecipitationTest, SurvivorFractionMatchesClosedForm) {
  RngStream rng(12);
  const PointCloud cloud = testing::ShellCloud(100000, 50.0, rng);
  for (auto [kind, kappa] : {std::pair{Precipitation::kRain, 0.01},
                             std::pair{Precipitation::kSnow, 0.02}}) {
    const double beta = kappa * std::pow(7.29, 0.6);
    const PointCloud out = PrecipitationScatter(cloud, kind, 5, rng);
    const double survived = static_cast<double>(CountSamePosition(cloud, out)) / cloud.size();
    EXPECT_NEAR(survived, std::exp(-2 * beta * 50), 0.02);
    // Half of the attenuated returns are dropped.
    const double dropped = 1.0 - static_cast<double>(out.size()) / cloud.size();
    EXPECT_NEAR(dropped, 0.5 * (1 - std::exp(-2 * beta * 50)), 0.02);
  }
}

TEST(PrecipitationTest, SurvivorFractionMonotoneInSeverity) {
  RngStream rng(13);
  const PointCloud cloud = testing::ShellCloud(20000, 30.0, rng);
  double prev = 2;
  for (int s = 1; s <= 5; ++s) {
    const PointCloud out = PrecipitationScatter(cloud, Precipitation::kRain, s, rng);
    const double survived = static_cast<double>(CountSamePosition(cloud, out)) / cloud.size();
    EXPECT_LT(survived, prev);
    prev = survived;
  }
}

TEST(FogTest, TransmissionScalesIntensity) {
  const PointCloud cloud({{10, 0, 0, 1.0f}});
  int unscattered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const PointCloud out = FogLidar(cloud, 1, rng);
    ASSERT_EQ(out.size(), 1u);
    if (out[0].x == 10.0f) {
      EXPECT_NEAR(out[0].intensity, std::exp(-0.1), 1e-6);
      ++unscattered;
    } else {
      EXPECT_EQ(out[0].intensity, 0.2f);
      EXPECT_GE(out[0].x, 1.0f);
      EXPECT_LE(out[0].x, 10.0f);
    }
  }
  EXPECT_GT(unscattered, 40);
  RngStream rng(1);
  const PointCloud origin({{0, 0, 0, 0.3f}});
  EXPECT_EQ(FogLidar(origin, 5, rng), origin);
}

TEST(FogTest, ScatterFractionMatchesClosedForm) {
  RngStream rng(14);
  const PointCloud cloud = testing::ShellCloud(100000, 30.0, rng);
  const PointCloud out = FogLidar(cloud, 5, rng);
  ASSERT_EQ(out.size(), cloud.size());
  std::size_t scattered = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!(out[i].position() == cloud[i].position())) {
      ++scattered;
      EXPECT_LE(out[i].position().Norm(), 25.0 + 1e-4);
    }
  }
  EXPECT_NEAR(static_cast<double>(scattered) / cloud.size(), (1 - std::exp(-3.6)) * 0.8, 0.02);
}

struct Scene {
  PointCloud cloud;
  std::vector<Box3D> boxes;
};

Scene BoxScene(std::size_t per_box, std::uint64_t seed, std::size_t n_boxes = 2) {
  RngStream rng(seed);
  Scene s;
  s.boxes = testing::RandomBoxes(n_boxes, rng);
  std::vector<PointXYZI> pts;
  const PointCloud background = testing::RandomCloud(3000, rng);
  for (const PointXYZI& p : background.points()) {
    bool in = false;
    for (const Box3D& b : s.boxes) in |= BoxContains(b, p.position());
    if (!in) pts.push_back(p);
  }
  for (const Box3D& b : s.boxes) {
    auto in = testing::PointsInside(b, per_box, rng);
    pts.insert(pts.end(), in.begin(), in.end());
  }
  s.cloud = PointCloud(pts);
  return s;
}

TEST(LocalNoiseTest, NoBoxesIsIdentity) {
  RngStream rng(15);
  const PointCloud cloud = testing::RandomCloud(500, rng);
  for (auto kind : {NoiseKind::kGaussian, NoiseKind::kUniform, NoiseKind::kImpulse}) {
    EXPECT_EQ(LocalNoise(cloud, {}, kind, 5, rng), cloud);
  }
}

TEST(LocalNoiseTest, ImpulseCountPerBoxAndLocality) {
  const Scene scene = BoxScene(30, 16, 1);
  RngStream rng(17);
  const PointCloud out = LocalNoise(scene.cloud, scene.boxes, NoiseKind::kImpulse, 1, rng);
  EXPECT_EQ(CountMoved(scene.cloud, out), 1u);
  const Scene big = BoxScene(300, 18, 3);
  for (auto kind : {NoiseKind::kGaussian, NoiseKind::kUniform, NoiseKind::kImpulse}) {
    const PointCloud o = LocalNoise(big.cloud, big.boxes, kind, 4, rng);
    ASSERT_EQ(o.size(), big.cloud.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
      bool in = false;
      for (const Box3D& b : big.boxes) in |= BoxContains(b, big.cloud[i].position());
      if (!in) EXPECT_EQ(o[i], big.cloud[i]);
    }
  }
  const PointCloud imp = LocalNoise(big.cloud, big.boxes, NoiseKind::kImpulse, 5, rng);
  EXPECT_EQ(CountMoved(big.cloud, imp), 3u * 30u);
}

TEST(LocalDensityDecreaseTest, GroupArithmetic) {
  const Scene scene = BoxScene(100, 19, 1);
  RngStream rng(20);
  const PointCloud out = LocalDensityDecrease(scene.cloud, scene.boxes, 1, rng);
  EXPECT_EQ(scene.cloud.size() - out.size(), 7u);
  EXPECT_EQ(Outside(out, scene.boxes), Outside(scene.cloud, scene.boxes));
  EXPECT_EQ(LocalDensityDecrease(scene.cloud, {}, 5, rng), scene.cloud);
  for (int s = 1; s <= 5; ++s) {
    const PointCloud o = LocalDensityDecrease(scene.cloud, scene.boxes, s, rng);
    const std::size_t removed = scene.cloud.size() - o.size();
    EXPECT_LE(removed, 7u * static_cast<std::size_t>(s));
    EXPECT_GE(removed, 7u);
    EXPECT_TRUE(IsSubsequence(o, scene.cloud));
  }
}

TEST(LocalCutoutTest, RemovalFractions) {
  const Scene scene = BoxScene(100, 21, 1);
  RngStream rng(22);
  for (int s = 1; s <= 5; ++s) {
    const PointCloud out = LocalCutout(scene.cloud, scene.boxes, s, rng);
    EXPECT_EQ(scene.cloud.size() - out.size(), static_cast<std::size_t>(20 + 10 * s));
    EXPECT_EQ(Outside(out, scene.boxes), Outside(scene.cloud, scene.boxes));
  }
  const Scene one = BoxScene(1, 23, 1);
  EXPECT_EQ(LocalCutout(one.cloud, one.boxes, 1, rng).size(), one.cloud.size());
}

TEST(LocalCutoutTest, RemovesNearestNeighborsOfAnchor) {
  const Scene scene = BoxScene(100, 24, 1);
  RngStream rng(25);
  const PointCloud out = LocalCutout(scene.cloud, scene.boxes, 3, rng);
  // The removed 50 points are a ball: every removed point is at least as
  // close to some removed point (the anchor) as every kept in-box point.
  std::vector<PointXYZI> removed, kept_in;
  std::size_t j = 0;
  for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
    if (j < out.size() && out[j] == scene.cloud[i]) {
      if (BoxContains(scene.boxes[0], scene.cloud[i].position())) kept_in.push_back(out[j]);
      ++j;
    } else {
      removed.push_back(scene.cloud[i]);
    }
  }
  ASSERT_EQ(removed.size(), 50u);
  bool some_anchor = false;
  for (const PointXYZI& a : removed) {
    double r_in = 0, r_out = 1e18;
    for (const PointXYZI& p : removed) r_in = std::max(r_in, (p.position() - a.position()).Norm());
    for (const PointXYZI& p : kept_in) r_out = std::min(r_out, (p.position() - a.position()).Norm());
    some_anchor |= r_in <= r_out;
  }
  EXPECT_TRUE(some_anchor);
}

TEST(MovingObjectTest, ThirdsShiftAlongHeading) {
  const Box3D box({10, 2, 0}, {6, 2, 2}, 0.7);
  std::vector<PointXYZI> pts;
  for (double lx : {-3.0, -1.5, 0.0, 0.9, 2.0, 3.0}) {
    const Vec3 g = FromBoxLocal({lx, 0.2, 0.1}, box);
    pts.push_back({static_cast<float>(g.x), static_cast<float>(g.y), static_cast<float>(g.z), 0.4f});
  }
  pts.push_back({50, 50, 0, 0.1f});
  const PointCloud cloud(pts);
  const std::vector<Box3D> boxes{box};
  const PointCloud out = MovingObjectLidar(cloud, boxes, 5);
  ASSERT_EQ(out.size(), cloud.size());
  const std::array<double, 6> shift{0, 0, 0.3, 0.3, 0.6, 0.6};
  for (int i = 0; i < 6; ++i) {
    const Vec3 d = ToBoxLocal(out[i].position(), box) - ToBoxLocal(cloud[i].position(), box);
    EXPECT_NEAR(d.x, shift[i], 1e-5) << i;
    EXPECT_NEAR(d.y, 0, 1e-5);
    EXPECT_NEAR(d.z, 0, 1e-5);
    EXPECT_EQ(out[i].intensity, cloud[i].intensity);
  }
  EXPECT_EQ(out[6], cloud[6]);
  for (int s = 1; s <= 5; ++s) {
    const PointCloud o = MovingObjectLidar(cloud, boxes, s);
    const Vec3 d = ToBoxLocal(o[5].position(), box) - ToBoxLocal(cloud[5].position(), box);
    EXPECT_NEAR(d.x, tables::kMovingObjectOffset[s - 1], 1e-5);
  }
}

TEST(MotionCompensationTest, ZeroSigmaIsIdentity) {
  RngStream rng(26);
  const Pose p = SamplePosePerturbation(0, 0, rng);
  const PointCloud cloud = testing::RandomCloud(100, rng);
  EXPECT_EQ(ApplyPose(cloud, p), cloud);
}

TEST(MotionCompensationTest, AngleSigmaAndIsometry) {
  RngStream rng(27);
  double sq = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = SamplePosePerturbation(0.10, 0.010, rng).rotation().RotationAngle();
    sq += a * a;
  }
  EXPECT_NEAR(std::sqrt(sq / 10000), 0.10, 0.005);

  const PointCloud cloud = testing::RandomCloud(200, rng, 1.0);
  const PointCloud out = MotionCompensation(cloud, Pose(), 5, rng);
  for (std::size_t i = 0; i < cloud.size(); i += 7) {
    for (std::size_t j = i + 1; j < cloud.size(); j += 13) {
      const double before = (cloud[i].position() - cloud[j].position()).Norm();
      const double after = (out[i].position() - out[j].position()).Norm();
      EXPECT_NEAR(before, after, 1e-6);
    }
  }
  EXPECT_THROW(MotionCompensation(cloud, std::nullopt, 1, rng), MissingEgoPose);
}

TEST(LidarDeterminismTest, SameSeedSameBytes) {
  const Scene scene = BoxScene(80, 28, 2);
  auto run = [&](std::uint64_t seed) {
    std::vector<PointCloud> outs;
    RngStream rng(seed);
    for (int s = 1; s <= 5; ++s) {
      outs.push_back(DensityDecrease(scene.cloud, s, rng));
      outs.push_back(Cutout(scene.cloud, s, rng));
      outs.push_back(Crosstalk(scene.cloud, s, rng));
      outs.push_back(CoordinateNoise(scene.cloud, NoiseKind::kUniform, s, rng));
      outs.push_back(SunlightLidar(scene.cloud, s, rng));
      outs.push_back(PrecipitationScatter(scene.cloud, Precipitation::kSnow, s, rng));
      outs.push_back(FogLidar(scene.cloud, s, rng));
      outs.push_back(LocalDensityDecrease(scene.cloud, scene.boxes, s, rng));
      outs.push_back(LocalCutout(scene.cloud, scene.boxes, s, rng));
      outs.push_back(LocalNoise(scene.cloud, scene.boxes, NoiseKind::kGaussian, s, rng));
      outs.push_back(MotionCompensation(scene.cloud, Pose(), s, rng));
    }
    return outs;
  };
  EXPECT_EQ(run(99), run(99));
  EXPECT_NE(run(99), run(100));
}

}  // namespace
}  // namespace corrupt3d
