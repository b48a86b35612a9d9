#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vcz/confinement.hpp"
#include "vcz/oracles.hpp"

using namespace vcz;

TEST(Zeta, Values) {
  EXPECT_EQ(zeta(0.0, 1e-9), 0.0);
  EXPECT_NEAR(zeta(0.5, 1e-9), std::log(3.0), 1e-15);
  EXPECT_NEAR(zeta(1.0 - 1e-9, 1e-9), std::log(2e9 - 1.0), 1e-6);
  EXPECT_NEAR(zeta(1.0 - 1e-9, 1e-9), 21.416, 1e-3);
  EXPECT_THROW(zeta(-0.1, 1e-9), InvalidInput);
}

TEST(Zeta, StrictlyIncreasingThenClamped) {
  double prev = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = zeta(i / 1000.0, 1e-9);
    EXPECT_GT(z, prev);
    prev = z;
  }
  EXPECT_EQ(zeta(2.0, 1e-3), zeta(1.0 - 1e-3, 1e-3));
}

TEST(ConfinementControl, ZeroAtCenter) {
  const ConfinementLaw law{10.0, 0.5, 1e-9};
  const Eigen::Vector2d x(3.0, -1.0);
  const auto u = confinement_control(x, x, law);
  EXPECT_EQ(u[0], 0.0);
  EXPECT_EQ(u[1], 0.0);
}

TEST(ConfinementControl, HandExamples) {
  const Eigen::Vector2d c(1.0, 1.0);
  auto u = confinement_control(c + Eigen::Vector2d(0.25, 0.0), c, {1.0, 0.5, 1e-9});
  EXPECT_NEAR(u[0], -std::log(3.0), 1e-14);
  EXPECT_NEAR(u[1], 0.0, 1e-15);
  u = confinement_control(c + Eigen::Vector2d(0.0, -0.25), c, {-2.0, 0.5, 1e-9});
  EXPECT_NEAR(u[0], 0.0, 1e-15);
  EXPECT_NEAR(u[1], -2.0 * std::log(3.0), 1e-14);
}

TEST(ConfinementControl, BreachThrows) {
  const ConfinementLaw law{10.0, 0.5, 1e-9};
  EXPECT_THROW(confinement_control(Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(0, 0), law), ConfinementBreach);
  try {
    confinement_control(Eigen::Vector2d(0.0, 0.75), Eigen::Vector2d(0, 0), law);
  } catch (const ConfinementBreach& e) {
    EXPECT_DOUBLE_EQ(e.e_hat(), 1.5);
  }
}

TEST(ConfinementControl, Direction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double k : {10.0, -4.0}) {
    const ConfinementLaw law{k, 0.5, 1e-9};
    for (int i = 0; i < 100; ++i) {
      Eigen::Vector2d e(unit(rng), unit(rng));
      e *= 0.49 * std::abs(unit(rng)) / e.norm();
      const auto u = confinement_control(e, Eigen::Vector2d::Zero(), law);
      const double expected = -k * zeta(e.norm() / 0.5, 1e-9) * e.norm();
      EXPECT_NEAR(u.dot(e), expected, 1e-12 * std::abs(expected) + 1e-15);
      EXPECT_NEAR(u.norm(), std::abs(k) * zeta(e.norm() / 0.5, 1e-9), 1e-12);
    }
  }
}

TEST(SmallErrorSlope, Values) {
  EXPECT_DOUBLE_EQ(small_error_slope({1.0, 0.5, 1e-9}), 4.0);
  const ConfinementLaw law{10.0, 0.5, 1e-9};
  const auto u = confinement_control(Eigen::Vector2d(1e-5, 0.0), Eigen::Vector2d::Zero(), law);
  EXPECT_NEAR(u.norm(), 4e-4, 1e-12);
  EXPECT_LE(u.norm(), 1.01 * small_error_slope(law) * 1e-5);
}

TEST(ConfinementControl, ContinuousAtOrigin) {
  const ConfinementLaw law{10.0, 0.5, 1e-9};
  const auto dirs = sphere_sample(Eigen::Vector2d::Zero(), 1.0, 16, 17);
  for (const auto& d : dirs) {
    double ratio = 0.0;
    for (double scale : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const Eigen::VectorXd e = scale * law.r_c * d;
      ratio = confinement_control(e, Eigen::Vector2d::Zero(), law).norm() / e.norm();
      EXPECT_LE(ratio, 1.01 * small_error_slope(law));
    }
    EXPECT_NEAR(ratio / small_error_slope(law), 1.0, 0.01);
  }
}

TEST(ConfinementControl, BarrierGrowthAndClampBound) {
  const ConfinementLaw law{10.0, 0.5, 1e-9};
  double prev = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-5, 1e-7, 1e-8}) {
    const double mag = confinement_control(Eigen::Vector2d((1 - gap) * 0.5, 0), Eigen::Vector2d::Zero(), law).norm();
    EXPECT_GT(mag, prev);
    prev = mag;
  }
  const double cap = 10.0 * zeta(1.0 - 1e-9, 1e-9);
  const double mag = confinement_control(Eigen::Vector2d((1 - 1e-12) * 0.5, 0), Eigen::Vector2d::Zero(), law).norm();
  EXPECT_LE(mag, cap * (1 + 1e-15));
}

TEST(ConfinementLaw, Check) {
  EXPECT_THROW((ConfinementLaw{0.0, 0.5, 1e-9}.check()), InvalidInput);
  EXPECT_THROW((ConfinementLaw{1.0, -0.5, 1e-9}.check()), InvalidInput);
  EXPECT_THROW((ConfinementLaw{1.0, 0.5, 1.5}.check()), InvalidInput);
  EXPECT_NO_THROW((ConfinementLaw{-1.0, 0.5, 1e-9}.check()));
}
