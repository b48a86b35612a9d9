#include <gtest/gtest.h>

#include <cmath>

#include "vcz/oracles.hpp"
#include "vcz/scenario.hpp"

using namespace vcz;

TEST(Validate, BenchmarkPasses) {
  const auto rep = validate(benchmark_scenario(), 1001);
  EXPECT_TRUE(rep.all_mandatory_passed());
  for (const char* id : {"V0", "V1", "V2", "V3", "V4", "V5"}) {
    ASSERT_NE(rep.find(id), nullptr) << id;
    EXPECT_TRUE(rep.find(id)->passed) << id;
  }
  EXPECT_NEAR(rep.find("V2")->worst_margin, std::sqrt(82.0) - 2.6, 1e-12);
  EXPECT_DOUBLE_EQ(rep.find("V2")->worst_time, 10.0);
  EXPECT_NEAR(rep.find("V3")->worst_margin, 1.5, 1e-12);
}

TEST(Validate, SeparationBoundaryPassesWithZeroMargin) {
  Scenario s = benchmark_scenario();
  // distance 2 r_c + r1 + r2 = 1 + 0.5 + 1.5 = 3
  s.obstacles = {Obstacle::fixed(Eigen::Vector2d(4.0, 2.0), 0.5), Obstacle::fixed(Eigen::Vector2d(7.0, 2.0), 1.5)};
  const auto rep = validate(s);
  EXPECT_TRUE(rep.find("V1")->passed);
  EXPECT_NEAR(rep.find("V1")->worst_margin, 0.0, 1e-12);
}

TEST(Validate, MovingObstaclesTooClose) {
  Scenario s = benchmark_scenario();
  s.obstacles = {Obstacle::fixed(Eigen::Vector2d(8.0, 2.0), 0.5),
                 Obstacle::moving(Eigen::Vector2d(3.0, 2.0), Eigen::Vector2d(0.5, 0.0), 0.5)};
  const auto rep = validate(s);
  EXPECT_FALSE(rep.find("V1")->passed);
  EXPECT_NEAR(rep.find("V1")->worst_time, 10.0, 1e-12);
  EXPECT_FALSE(rep.all_mandatory_passed());
}

TEST(Validate, StartInsideObstacleFailsV3) {
  Scenario s = benchmark_scenario();
  s.x0 = Eigen::Vector2d(1.5, 1.8);
  const auto rep = validate(s);
  EXPECT_FALSE(rep.find("V3")->passed);
  EXPECT_LT(rep.find("V3")->worst_margin, 0.0);
}

TEST(Validate, ObstacleOnTargetFailsV2) {
  Scenario s = benchmark_scenario();
  s.obstacles.push_back(Obstacle::fixed(Eigen::Vector2d(10.0, 11.5), 0.5));
  EXPECT_FALSE(validate(s).find("V2")->passed);
}

TEST(Validate, RadiusOrderings) {
  Scenario s = benchmark_scenario();
  s.r_c = 1.2;  // r_c >= r_R
  EXPECT_FALSE(validate(s).find("V4")->passed);
  s = benchmark_scenario();
  s.shrink.r_end = 0.7;  // r_end > r_R - r_c
  EXPECT_FALSE(validate(s).find("V4")->passed);
  s = benchmark_scenario();
  s.shrink.r_start = 14.0;  // < |x0 - b_R| = sqrt(200)
  EXPECT_FALSE(validate(s).find("V4")->passed);
}

TEST(Validate, SignClassMismatch) {
  Scenario s = benchmark_scenario();
  s.k = -10.0;
  EXPECT_FALSE(validate(s).find("V5")->passed);
  s = benchmark_scenario();
  s.plant.sign_class = SignClass::NegativeDefinite;
  EXPECT_FALSE(validate(s).find("V5")->passed);
}

TEST(Validate, StructuralProblemsFailV0) {
  Scenario s = benchmark_scenario();
  s.x0 = Eigen::Vector3d(0, 0, 0);
  const auto rep = validate(s);
  EXPECT_FALSE(rep.find("V0")->passed);
  EXPECT_FALSE(rep.all_mandatory_passed());
  s = benchmark_scenario();
  s.qp_H = Eigen::Matrix2d::Zero();
  EXPECT_FALSE(validate(s).find("V0")->passed);
}

TEST(Validate, Deterministic) {
  const auto a = validate(benchmark_scenario(), 501);
  const auto b = validate(benchmark_scenario(), 501);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].passed, b.checks[i].passed);
    EXPECT_EQ(a.checks[i].worst_margin, b.checks[i].worst_margin);
    EXPECT_EQ(a.checks[i].worst_time, b.checks[i].worst_time);
  }
}

TEST(TightenedUnsafeDistance, Examples) {
  const Scenario s = benchmark_scenario();
  EXPECT_NEAR(tightened_unsafe_distance(Eigen::Vector2d(0, 0), 0.0, s), 1.5, 1e-12);
  EXPECT_NEAR(tightened_unsafe_distance(Eigen::Vector2d(2.5, 2.0), 0.0, s), 0.0, 1e-12);
  Scenario empty = s;
  empty.obstacles.clear();
  EXPECT_TRUE(std::isinf(tightened_unsafe_distance(Eigen::Vector2d(0, 0), 0.0, empty)));
}

TEST(TightenedUnsafeDistance, ImpliesTrueClearanceOnSphere) {
  const Scenario s = benchmark_scenario();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-2.0, 12.0), time(0.0, 10.0);
  int tested = 0;
  for (int k = 0; k < 2000 && tested < 300; ++k) {
    const Eigen::Vector2d c(pos(rng), pos(rng));
    const double t = time(rng);
    if (tightened_unsafe_distance(c, t, s) < 0) continue;
    ++tested;
    for (const auto& p : sphere_sample(c, s.r_c * (1 - 1e-9), 64, k)) {
      for (const auto& o : s.obstacles) EXPECT_GE((p - o.center(t)).norm(), o.radius);
    }
  }
  EXPECT_EQ(tested, 300);
}
